use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::fincat::{FinCategory, MorId, ObjId};

/// Element of a carrier, by index.
pub type Elem = usize;

/// A functor `C^op → FinSet` over a finite base. Carriers are `0..card(c)`;
/// for `f: c' → c`, `restrict(f)` maps `X(c)` to `X(c')`.
#[derive(Debug, Clone)]
pub struct Presheaf {
    base: Arc<FinCategory>,
    card: Vec<usize>,
    restrict: Vec<Vec<Elem>>,
}

impl PartialEq for Presheaf {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.base, &other.base) || *self.base == *other.base)
            && self.card == other.card
            && self.restrict == other.restrict
    }
}

impl Eq for Presheaf {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PresheafError {
    BadLength,
    /// `restrict(mor)` sends `elem` outside the target carrier.
    BadValue {
        mor: MorId,
        elem: Elem,
    },
    Identity(ObjId),
    /// `X(g∘f) != X(f)∘X(g)`.
    Functoriality {
        g: MorId,
        f: MorId,
    },
}

impl fmt::Display for PresheafError {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresheafError::BadLength => write!(fm, "table length mismatch"),
            PresheafError::BadValue { mor, elem } => write!(fm, "restriction along {mor} of {elem} out of range"),
            PresheafError::Identity(o) => write!(fm, "restriction along identity of {o} is not the identity"),
            PresheafError::Functoriality { g, f } => write!(fm, "restriction not functorial on {g}∘{f}"),
        }
    }
}

impl core::error::Error for PresheafError {}

impl Presheaf {
    pub fn new(base: Arc<FinCategory>, card: Vec<usize>, restrict: Vec<Vec<Elem>>) -> Result<Self, PresheafError> {
        if card.len() != base.n_objects() || restrict.len() != base.n_morphisms() {
            return Err(PresheafError::BadLength);
        }
        for f in base.morphisms() {
            let t = &restrict[f];
            if t.len() != card[base.dst(f)] {
                return Err(PresheafError::BadLength);
            }
            if let Some(x) = t.iter().position(|&y| y >= card[base.src(f)]) {
                return Err(PresheafError::BadValue { mor: f, elem: x });
            }
        }
        for c in base.objects() {
            if restrict[base.id(c)].iter().enumerate().any(|(x, &y)| x != y) {
                return Err(PresheafError::Identity(c));
            }
        }
        for f in base.morphisms() {
            for g in base.morphisms() {
                if let Some(gf) = base.try_comp(g, f) {
                    // X(g∘f)(x) = X(f)(X(g)(x))
                    let ok = (0..card[base.dst(g)]).all(|x| restrict[gf][x] == restrict[f][restrict[g][x]]);
                    if !ok {
                        return Err(PresheafError::Functoriality { g, f });
                    }
                }
            }
        }
        Ok(Presheaf { base, card, restrict })
    }

    pub(crate) fn new_unchecked(base: Arc<FinCategory>, card: Vec<usize>, restrict: Vec<Vec<Elem>>) -> Self {
        debug_assert_eq!(Presheaf::new(base.clone(), card.clone(), restrict.clone()).err(), None);
        Presheaf { base, card, restrict }
    }

    /// Builds the restriction tables from `res(f, x)`.
    pub fn from_fn(
        base: Arc<FinCategory>,
        card: Vec<usize>,
        mut res: impl FnMut(MorId, Elem) -> Elem,
    ) -> Result<Self, PresheafError> {
        if card.len() != base.n_objects() {
            return Err(PresheafError::BadLength);
        }
        let restrict = base.morphisms().map(|f| (0..card[base.dst(f)]).map(|x| res(f, x)).collect()).collect();
        Presheaf::new(base, card, restrict)
    }

    pub fn terminal(base: Arc<FinCategory>) -> Self {
        let card = vec![1; base.n_objects()];
        let restrict = vec![vec![0]; base.n_morphisms()];
        Presheaf { base, card, restrict }
    }

    pub fn empty(base: Arc<FinCategory>) -> Self {
        let card = vec![0; base.n_objects()];
        let restrict = vec![Vec::new(); base.n_morphisms()];
        Presheaf { base, card, restrict }
    }

    /// `y(c) = hom(-, c)`; the element at `d` with index `i` is `hom(d, c)[i]`.
    pub fn representable(base: Arc<FinCategory>, c: ObjId) -> Self {
        let card: Vec<usize> = base.objects().map(|d| base.hom(d, c).len()).collect();
        let restrict = base
            .morphisms()
            .map(|u| {
                let d = base.dst(u);
                base.hom(d, c).iter().map(|&f| base.hom_pos(base.comp(f, u))).collect()
            })
            .collect();
        Presheaf { base, card, restrict }
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        &self.base
    }

    #[inline]
    pub fn card(&self, c: ObjId) -> usize {
        self.card[c]
    }

    pub fn cards(&self) -> &[usize] {
        &self.card
    }

    pub fn total(&self) -> usize {
        self.card.iter().sum()
    }

    pub fn max_card(&self) -> usize {
        self.card.iter().copied().max().unwrap_or(0)
    }

    /// `X(f)(x)` for `f: c' → c`, `x ∈ X(c)`.
    #[inline]
    pub fn res(&self, f: MorId, x: Elem) -> Elem {
        self.restrict[f][x]
    }

    pub fn table(&self, f: MorId) -> &[Elem] {
        &self.restrict[f]
    }

    pub fn tables(&self) -> &[Vec<Elem>] {
        &self.restrict
    }

    pub fn is_empty(&self) -> bool {
        self.total() == 0
    }

    /// Same carriers and restrictions (ignoring how the bases are shared).
    pub fn same_shape(&self, other: &Presheaf) -> bool {
        self.card == other.card && self.restrict == other.restrict
    }
}

/// Natural transformation between presheaves; endpoints are supplied by the
/// caller. `comp[c][x]` is the image of `x ∈ X(c)`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PresheafMap {
    pub comp: Vec<Vec<Elem>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapError {
    BadLength,
    BadValue {
        obj: ObjId,
        elem: Elem,
    },
    /// Square for `mor` fails at `elem` of the codomain object of `mor`.
    NotNatural {
        mor: MorId,
        elem: Elem,
    },
}

impl fmt::Display for MapError {
    fn fmt(&self, fm: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MapError::BadLength => write!(fm, "component length mismatch"),
            MapError::BadValue { obj, elem } => write!(fm, "component at {obj} sends {elem} out of range"),
            MapError::NotNatural { mor, elem } => write!(fm, "naturality fails for morphism {mor} at element {elem}"),
        }
    }
}

impl core::error::Error for MapError {}

impl PresheafMap {
    pub fn identity(x: &Presheaf) -> Self {
        PresheafMap { comp: x.card.iter().map(|&n| (0..n).collect()).collect() }
    }

    pub fn from_fn(x: &Presheaf, mut f: impl FnMut(ObjId, Elem) -> Elem) -> Self {
        PresheafMap { comp: x.base.objects().map(|c| (0..x.card[c]).map(|e| f(c, e)).collect()).collect() }
    }

    /// Validates that `self` is a natural transformation `x → y`.
    pub fn check(&self, x: &Presheaf, y: &Presheaf) -> Result<(), MapError> {
        let base = &x.base;
        if self.comp.len() != base.n_objects() {
            return Err(MapError::BadLength);
        }
        for c in base.objects() {
            if self.comp[c].len() != x.card[c] {
                return Err(MapError::BadLength);
            }
            if let Some(e) = self.comp[c].iter().position(|&v| v >= y.card[c]) {
                return Err(MapError::BadValue { obj: c, elem: e });
            }
        }
        for f in base.morphisms() {
            let (s, d) = (base.src(f), base.dst(f));
            for e in 0..x.card[d] {
                if self.comp[s][x.res(f, e)] != y.res(f, self.comp[d][e]) {
                    return Err(MapError::NotNatural { mor: f, elem: e });
                }
            }
        }
        Ok(())
    }

    #[inline]
    pub fn at(&self, c: ObjId, x: Elem) -> Elem {
        self.comp[c][x]
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &PresheafMap) -> PresheafMap {
        PresheafMap {
            comp: self.comp.iter().zip(&other.comp).map(|(a, b)| a.iter().map(|&v| b[v]).collect()).collect(),
        }
    }

    /// Pointwise injective.
    pub fn is_mono(&self, y: &Presheaf) -> bool {
        self.comp.iter().enumerate().all(|(c, col)| {
            let mut seen = vec![false; y.card(c)];
            col.iter().all(|&v| !core::mem::replace(&mut seen[v], true))
        })
    }

    /// Pointwise surjective.
    pub fn is_epi(&self, y: &Presheaf) -> bool {
        self.comp.iter().enumerate().all(|(c, col)| {
            let mut seen = vec![false; y.card(c)];
            for &v in col {
                seen[v] = true;
            }
            seen.iter().all(|&b| b)
        })
    }

    pub fn is_iso(&self, y: &Presheaf) -> bool {
        self.is_mono(y) && self.is_epi(y)
    }

    /// Inverse of an isomorphism.
    pub fn inverse(&self, y: &Presheaf) -> Option<PresheafMap> {
        if !self.is_iso(y) {
            return None;
        }
        let mut comp: Vec<Vec<Elem>> = y.card.iter().map(|&n| vec![0; n]).collect();
        for (c, col) in self.comp.iter().enumerate() {
            for (e, &v) in col.iter().enumerate() {
                comp[c][v] = e;
            }
        }
        Some(PresheafMap { comp })
    }
}

/// A subpresheaf, stored as its literal member subsets.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Subpresheaf {
    pub members: Vec<Vec<bool>>,
}

impl Subpresheaf {
    pub fn full(x: &Presheaf) -> Self {
        Subpresheaf { members: x.card.iter().map(|&n| vec![true; n]).collect() }
    }

    pub fn empty(x: &Presheaf) -> Self {
        Subpresheaf { members: x.card.iter().map(|&n| vec![false; n]).collect() }
    }

    /// Closed under every restriction map.
    pub fn is_closed(&self, x: &Presheaf) -> bool {
        let base = x.base();
        base.morphisms().all(|f| {
            let (s, d) = (base.src(f), base.dst(f));
            (0..x.card(d)).all(|e| !self.members[d][e] || self.members[s][x.res(f, e)])
        })
    }

    /// Smallest subpresheaf containing the given elements.
    pub fn generated_by(x: &Presheaf, elems: &[(ObjId, Elem)]) -> Self {
        let mut s = Subpresheaf::empty(x);
        let base = x.base();
        for &(c, e) in elems {
            for f in base.arrows_into(c) {
                s.members[base.src(f)][x.res(f, e)] = true;
            }
        }
        s
    }

    #[inline]
    pub fn contains(&self, c: ObjId, e: Elem) -> bool {
        self.members[c][e]
    }

    pub fn le(&self, other: &Subpresheaf) -> bool {
        self.members.iter().zip(&other.members).all(|(a, b)| a.iter().zip(b).all(|(&p, &q)| !p || q))
    }

    pub fn meet(&self, other: &Subpresheaf) -> Subpresheaf {
        Subpresheaf {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| a.iter().zip(b).map(|(&p, &q)| p && q).collect())
                .collect(),
        }
    }

    pub fn join(&self, other: &Subpresheaf) -> Subpresheaf {
        Subpresheaf {
            members: self
                .members
                .iter()
                .zip(&other.members)
                .map(|(a, b)| a.iter().zip(b).map(|(&p, &q)| p || q).collect())
                .collect(),
        }
    }

    pub fn is_full(&self) -> bool {
        self.members.iter().all(|m| m.iter().all(|&b| b))
    }

    pub fn count(&self) -> usize {
        self.members.iter().map(|m| m.iter().filter(|&&b| b).count()).sum()
    }

    /// Members at `c` in ascending order.
    pub fn elements(&self, c: ObjId) -> Vec<Elem> {
        self.members[c].iter().enumerate().filter(|(_, &b)| b).map(|(e, _)| e).collect()
    }

    /// The subpresheaf as a presheaf on its own (members renumbered in
    /// ascending order) together with its inclusion into `x`.
    pub fn to_presheaf(&self, x: &Presheaf) -> (Presheaf, PresheafMap) {
        let base = x.base().clone();
        let incl: Vec<Vec<Elem>> = base.objects().map(|c| self.elements(c)).collect();
        let mut index: Vec<Vec<Elem>> = x.card.iter().map(|&n| vec![usize::MAX; n]).collect();
        for (c, col) in incl.iter().enumerate() {
            for (i, &e) in col.iter().enumerate() {
                index[c][e] = i;
            }
        }
        let card: Vec<usize> = incl.iter().map(Vec::len).collect();
        let restrict = base
            .morphisms()
            .map(|f| incl[base.dst(f)].iter().map(|&e| index[base.src(f)][x.res(f, e)]).collect())
            .collect();
        (Presheaf::new_unchecked(base, card, restrict), PresheafMap { comp: incl })
    }
}

/// `f(m)` for `f: x → y`.
pub fn image(f: &PresheafMap, m: &Subpresheaf, y: &Presheaf) -> Subpresheaf {
    let mut out = Subpresheaf::empty(y);
    for (c, col) in f.comp.iter().enumerate() {
        for (e, &v) in col.iter().enumerate() {
            if m.members[c][e] {
                out.members[c][v] = true;
            }
        }
    }
    out
}

/// `f⁻¹(n)` for `f: x → y`.
pub fn preimage(f: &PresheafMap, n: &Subpresheaf) -> Subpresheaf {
    Subpresheaf {
        members: f.comp.iter().enumerate().map(|(c, col)| col.iter().map(|&v| n.members[c][v]).collect()).collect(),
    }
}

/// Image factorization `f = mono ∘ epi` through the literal image subset.
#[derive(Debug, Clone)]
pub struct ImageFactorization {
    pub image: Subpresheaf,
    pub object: Presheaf,
    pub epi: PresheafMap,
    pub mono: PresheafMap,
}

pub fn epi_mono_factorize(x: &Presheaf, y: &Presheaf, f: &PresheafMap) -> ImageFactorization {
    let image = image(f, &Subpresheaf::full(x), y);
    let (object, mono) = image.to_presheaf(y);
    let epi = corestrict(f, &mono, y);
    ImageFactorization { image, object, epi, mono }
}

/// Factors `f` through a mono `m: s → y` whose image contains that of `f`.
pub fn corestrict(f: &PresheafMap, m: &PresheafMap, y: &Presheaf) -> PresheafMap {
    let mut index: Vec<Vec<Elem>> = y.card.iter().map(|&n| vec![usize::MAX; n]).collect();
    for (c, col) in m.comp.iter().enumerate() {
        for (i, &e) in col.iter().enumerate() {
            index[c][e] = i;
        }
    }
    PresheafMap { comp: f.comp.iter().enumerate().map(|(c, col)| col.iter().map(|&v| index[c][v]).collect()).collect() }
}

/// Binary product; the pair `(a, b)` at `c` has index `a * |Y(c)| + b`.
#[derive(Debug, Clone)]
pub struct Product {
    pub object: Presheaf,
    pub first: PresheafMap,
    pub second: PresheafMap,
}

pub fn product(x: &Presheaf, y: &Presheaf) -> Product {
    let base = x.base().clone();
    let card: Vec<usize> = base.objects().map(|c| x.card(c) * y.card(c)).collect();
    let restrict = base
        .morphisms()
        .map(|f| {
            let (s, d) = (base.src(f), base.dst(f));
            let ny = y.card(d);
            (0..card[d]).map(|p| x.res(f, p / ny) * y.card(s) + y.res(f, p % ny)).collect()
        })
        .collect();
    let object = Presheaf::new_unchecked(base.clone(), card.clone(), restrict);
    let first = PresheafMap { comp: base.objects().map(|c| (0..card[c]).map(|p| p / y.card(c)).collect()).collect() };
    let second = PresheafMap { comp: base.objects().map(|c| (0..card[c]).map(|p| p % y.card(c)).collect()).collect() };
    Product { object, first, second }
}

/// `⟨f, g⟩: z → x × y`.
pub fn pairing(f: &PresheafMap, g: &PresheafMap, y: &Presheaf) -> PresheafMap {
    PresheafMap {
        comp: f
            .comp
            .iter()
            .zip(&g.comp)
            .enumerate()
            .map(|(c, (a, b))| a.iter().zip(b).map(|(&p, &q)| p * y.card(c) + q).collect())
            .collect(),
    }
}

/// `f × g: x × y → x' × y'`.
pub fn product_map(f: &PresheafMap, g: &PresheafMap, y: &Presheaf, y2: &Presheaf) -> PresheafMap {
    PresheafMap {
        comp: f
            .comp
            .iter()
            .zip(&g.comp)
            .enumerate()
            .map(|(c, (a, b))| {
                let ny = y.card(c);
                (0..a.len() * ny).map(|p| a[p / ny] * y2.card(c) + b[p % ny]).collect()
            })
            .collect(),
    }
}

/// Pullback of `f: x → z` and `g: y → z` as a subpresheaf of `x × y`,
/// realized as a presheaf with its two projections.
#[derive(Debug, Clone)]
pub struct Pullback {
    pub object: Presheaf,
    pub first: PresheafMap,
    pub second: PresheafMap,
    /// The pullback as a subobject of the product.
    pub inside_product: Subpresheaf,
}

pub fn pullback(x: &Presheaf, y: &Presheaf, f: &PresheafMap, g: &PresheafMap) -> Pullback {
    let prod = product(x, y);
    let base = x.base();
    let members = base
        .objects()
        .map(|c| (0..prod.object.card(c)).map(|p| f.at(c, p / y.card(c)) == g.at(c, p % y.card(c))).collect())
        .collect();
    let inside_product = Subpresheaf { members };
    let (object, incl) = inside_product.to_presheaf(&prod.object);
    let first = incl.then(&prod.first);
    let second = incl.then(&prod.second);
    Pullback { object, first, second, inside_product }
}

/// `{x | f x = g x}`.
pub fn equalizer(x: &Presheaf, f: &PresheafMap, g: &PresheafMap) -> Subpresheaf {
    Subpresheaf {
        members: x.base().objects().map(|c| (0..x.card(c)).map(|e| f.at(c, e) == g.at(c, e)).collect()).collect(),
    }
}

/// Binary coproduct; `Y(c)` is placed after `X(c)`.
pub fn coproduct(x: &Presheaf, y: &Presheaf) -> (Presheaf, PresheafMap, PresheafMap) {
    let base = x.base().clone();
    let card: Vec<usize> = base.objects().map(|c| x.card(c) + y.card(c)).collect();
    let restrict = base
        .morphisms()
        .map(|f| {
            let (s, d) = (base.src(f), base.dst(f));
            (0..card[d])
                .map(|e| if e < x.card(d) { x.res(f, e) } else { x.card(s) + y.res(f, e - x.card(d)) })
                .collect()
        })
        .collect();
    let first = PresheafMap::identity(x);
    let second =
        PresheafMap { comp: base.objects().map(|c| (0..y.card(c)).map(|e| x.card(c) + e).collect()).collect() };
    (Presheaf::new_unchecked(base, card, restrict), first, second)
}

/// The unique map to the terminal presheaf.
pub fn to_terminal(x: &Presheaf) -> PresheafMap {
    PresheafMap { comp: x.cards().iter().map(|&n| vec![0; n]).collect() }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;

    fn two_point_poset2() -> Presheaf {
        // X(1) = {0, 1}, X(0) = {0}, restriction collapses
        let base = Arc::new(presets::poset2());
        Presheaf::from_fn(base.clone(), vec![1, 2], |f, x| if base.is_identity(f) { x } else { 0 }).unwrap()
    }

    #[test]
    fn representable_of_top_in_poset2() {
        let base = Arc::new(presets::poset2());
        let y1 = Presheaf::representable(base.clone(), 1);
        assert_eq!(y1.cards(), &[1, 1]);
        let y0 = Presheaf::representable(base, 0);
        assert_eq!(y0.cards(), &[1, 0]);
    }

    #[test]
    fn functoriality_enforced() {
        let base = Arc::new(presets::chain(3));
        // only 0<2 swaps, but it is the composite of two identities
        let err =
            Presheaf::from_fn(base.clone(), vec![2, 2, 2], |f, x| if base.mor_name(f) == "0<2" { 1 - x } else { x })
                .unwrap_err();
        assert!(matches!(err, PresheafError::Functoriality { .. }));
    }

    #[test]
    fn product_with_terminal_is_iso() {
        let x = two_point_poset2();
        let one = Presheaf::terminal(x.base().clone());
        let p = product(&x, &one);
        assert!(p.first.is_iso(&x));
        assert_eq!(p.first.check(&p.object, &x), Ok(()));
    }

    #[test]
    fn pullback_is_pointwise_fibre_product() {
        let x = two_point_poset2();
        let bang = to_terminal(&x);
        let pb = pullback(&x, &x, &bang, &bang);
        assert_eq!(pb.object.cards(), &[1, 4]);
        assert_eq!(pb.first.check(&pb.object, &x), Ok(()));
    }

    #[test]
    fn image_factorization_of_collapse() {
        let x = two_point_poset2();
        let one = Presheaf::terminal(x.base().clone());
        let bang = to_terminal(&x);
        let fz = epi_mono_factorize(&x, &one, &bang);
        assert!(fz.image.is_full());
        assert!(fz.epi.is_epi(&fz.object));
        assert_eq!(fz.epi.then(&fz.mono), bang);
    }
}
