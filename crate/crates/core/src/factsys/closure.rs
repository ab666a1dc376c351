//! Idempotent closure operators, in a finite category and on presheaf
//! subobject lattices.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::class::{describe, orth_right, MorphismClass};
use super::system::{pullback, FactorizationSystem};
use crate::fincat::{FinCategory, MorId};
use crate::presheaf::{image, preimage, Presheaf, Subpresheaf, Universe};
use crate::report::{Report, Scope};

/// `m ≤ n` in `Sub(B)`: `m` factors through `n`.
pub fn sub_le(c: &FinCategory, m: MorId, n: MorId) -> bool {
    c.dst(m) == c.dst(n) && c.hom(c.src(m), c.src(n)).iter().any(|&k| c.comp(n, k) == m)
}

pub fn sub_iso(c: &FinCategory, m: MorId, n: MorId) -> bool {
    sub_le(c, m, n) && sub_le(c, n, m)
}

/// A closure operator on the `M`-subobjects of a finite category, given by
/// its value on every member of `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteClosure {
    pub m_class: MorphismClass,
    /// `closure[m]` for `m ∈ M`, `None` elsewhere.
    pub closure: Vec<Option<MorId>>,
}

impl FiniteClosure {
    /// `m̄` is the second factor of the `(D, C)`-factorization of `m`.
    /// Fails with a member of `C` outside `M`.
    pub fn from_factsys(m_class: &MorphismClass, fs: &FactorizationSystem) -> Result<Self, MorId> {
        if let Some(f) = fs.right.first_outside(m_class) {
            return Err(f);
        }
        let closure = (0..fs.factorizer.len()).map(|f| m_class.contains(f).then(|| fs.factor(f).1)).collect();
        Ok(FiniteClosure { m_class: m_class.clone(), closure })
    }

    /// The closure sending every subobject to itself.
    pub fn identity(c: &FinCategory, m_class: &MorphismClass) -> Self {
        FiniteClosure {
            m_class: m_class.clone(),
            closure: c.morphisms().map(|f| m_class.contains(f).then_some(f)).collect(),
        }
    }

    /// The closure sending every subobject to the top one.
    pub fn full(c: &FinCategory, m_class: &MorphismClass) -> Self {
        FiniteClosure {
            m_class: m_class.clone(),
            closure: c.morphisms().map(|f| m_class.contains(f).then(|| c.id(c.dst(f)))).collect(),
        }
    }

    pub fn close(&self, m: MorId) -> MorId {
        self.closure[m].expect("closure of an M-morphism")
    }

    pub fn is_closed(&self, c: &FinCategory, m: MorId) -> bool {
        self.m_class.contains(m) && sub_iso(c, self.close(m), m)
    }

    pub fn is_dense_embedding(&self, c: &FinCategory, m: MorId) -> bool {
        self.m_class.contains(m) && c.is_iso(self.close(m))
    }

    pub fn closed_class(&self, c: &FinCategory) -> MorphismClass {
        MorphismClass::from_fn(c, |m| self.is_closed(c, m))
    }

    pub fn dense_embeddings(&self, c: &FinCategory) -> MorphismClass {
        MorphismClass::from_fn(c, |m| self.is_dense_embedding(c, m))
    }

    /// Morphisms whose `(E, M)`-image is dense.
    pub fn dense_class(&self, c: &FinCategory, ambient: &FactorizationSystem) -> MorphismClass {
        MorphismClass::from_fn(c, |f| self.is_dense_embedding(c, ambient.factor(f).1))
    }

    /// `d_m` with `m = m̄∘d_m`.
    pub fn comparison(&self, c: &FinCategory, m: MorId) -> Option<MorId> {
        let mb = self.close(m);
        c.hom(c.src(m), c.src(mb)).iter().copied().find(|&k| c.comp(mb, k) == m)
    }
}

/// Conditions 1 and 2 and monotonicity. Condition 2 is checked for every
/// pair whose pullback exists; with an ambient `(E, M)` factorization
/// system the image form `f(m̄) ≤ f(m)‾` is checked as well.
pub fn check_closure_axioms(c: &FinCategory, cl: &FiniteClosure, ambient: Option<&FactorizationSystem>) -> Report {
    let mut r = Report::new();
    let ms = cl.m_class.ids();
    let mut range = None;
    let mut ext = None;
    let mut idem = None;
    for &m in &ms {
        let mb = cl.close(m);
        if range.is_none() && (!cl.m_class.contains(mb) || c.dst(mb) != c.dst(m)) {
            range = Some(describe(c, m));
            continue;
        }
        if ext.is_none() && !sub_le(c, m, mb) {
            ext = Some(describe(c, m));
        }
        if idem.is_none() && !sub_le(c, cl.close(mb), mb) {
            idem = Some(describe(c, m));
        }
    }
    r.record_witness("closure of an M-subobject is an M-subobject", Scope::Exact, range.clone());
    if range.is_some() {
        return r;
    }
    r.record_witness("m ≤ m̄", Scope::Exact, ext);
    r.record_witness("m̄̄ ≤ m̄", Scope::Exact, idem);
    let mut mono = None;
    for &m in &ms {
        for &n in &ms {
            if mono.is_none() && sub_le(c, m, n) && !sub_le(c, cl.close(m), cl.close(n)) {
                mono = Some(format!("{} ≤ {}", describe(c, m), describe(c, n)));
            }
        }
    }
    r.record_witness("closure is monotone", Scope::Exact, mono);
    let mut cond2 = None;
    for f in c.morphisms() {
        for &n in ms.iter().filter(|&&n| c.dst(n) == c.dst(f)) {
            let (Some(p), Some(q)) = (pullback(c, n, f), pullback(c, cl.close(n), f)) else { continue };
            if !cl.m_class.contains(p.p2) || !cl.m_class.contains(q.p2) {
                continue;
            }
            if !sub_le(c, cl.close(p.p2), q.p2) && cond2.is_none() {
                cond2 = Some(format!("f = {}, n = {}", describe(c, f), describe(c, n)));
            }
        }
    }
    r.record_witness("condition 2: closure of f⁻¹(n) ≤ f⁻¹(n̄)", Scope::Exact, cond2);
    if let Some(fs) = ambient {
        let mut cond2p = None;
        for f in c.morphisms() {
            for &m in ms.iter().filter(|&&m| c.dst(m) == c.src(f)) {
                let img = |k: MorId| fs.factor(c.comp(f, k)).1;
                if !sub_le(c, img(cl.close(m)), cl.close(img(m))) && cond2p.is_none() {
                    cond2p = Some(format!("f = {}, m = {}", describe(c, f), describe(c, m)));
                }
            }
        }
        r.record_witness("condition 2': f(m̄) ≤ closure of f(m)", Scope::Exact, cond2p);
    }
    r
}

/// Every comparison `d_m` exists, lies in `M` and is dense.
pub fn check_weakly_hereditary(c: &FinCategory, cl: &FiniteClosure) -> Option<String> {
    for m in cl.m_class.ids() {
        match cl.comparison(c, m) {
            Some(d) if cl.is_dense_embedding(c, d) => {}
            Some(d) => {
                return Some(format!("d_m = {} for m = {} is not a dense M-morphism", describe(c, d), describe(c, m)))
            }
            None => return Some(format!("m = {} does not factor through its closure", describe(c, m))),
        }
    }
    None
}

/// `ClEmb = DenseEmb^↓ ∩ M`.
pub fn clemb_densemb_identity(c: &FinCategory, cl: &FiniteClosure) -> Option<String> {
    let clemb = cl.closed_class(c);
    let rhs = orth_right(c, &cl.dense_embeddings(c)).intersection(&cl.m_class);
    clemb
        .first_difference(&rhs)
        .map(|f| format!("{}: closed = {}, in DenseEmb^↓ ∩ M = {}", describe(c, f), clemb.contains(f), rhs.contains(f)))
}

/// The closed and dense classes of the closure induced by `fs` are `fs`'s
/// own classes.
pub fn closure_round_trip(
    c: &FinCategory,
    cl: &FiniteClosure,
    fs: &FactorizationSystem,
    ambient: &FactorizationSystem,
) -> Option<String> {
    if let Some(f) = cl.closed_class(c).first_difference(&fs.right) {
        return Some(format!("closed class differs from C at {}", describe(c, f)));
    }
    cl.dense_class(c, ambient)
        .first_difference(&fs.left)
        .map(|f| format!("dense class differs from D at {}", describe(c, f)))
}

/// All closure checks on one finite instance.
pub fn finite_closure_suite(c: &FinCategory, cl: &FiniteClosure, ambient: Option<&FactorizationSystem>) -> Report {
    let mut r = check_closure_axioms(c, cl, ambient);
    r.record_witness("weakly hereditary", Scope::Exact, check_weakly_hereditary(c, cl));
    r.record_witness("ClEmb = DenseEmb^↓ ∩ M", Scope::Exact, clemb_densemb_identity(c, cl));
    r
}

/// Closure suite for a closure operator on presheaf subobjects, over every
/// object, subobject and map of a bounded universe. Monos of the universe
/// are represented by their image subobjects.
pub fn presheaf_closure_suite(u: &Universe, close: &dyn Fn(&Presheaf, &Subpresheaf) -> Subpresheaf) -> Report {
    let mut r = Report::new();
    let closures: Vec<Vec<Subpresheaf>> =
        u.objects.iter().zip(&u.subs).map(|(x, subs)| subs.iter().map(|m| close(x, m)).collect()).collect();
    let mut ext = None;
    let mut idem = None;
    let mut mono = None;
    let mut wh = None;
    for (a, x) in u.objects.iter().enumerate() {
        for (i, m) in u.subs[a].iter().enumerate() {
            let mb = &closures[a][i];
            if ext.is_none() && !m.le(mb) {
                ext = Some(format!("object {a}, subobject {i}"));
            }
            if idem.is_none() && !close(x, mb).le(mb) {
                idem = Some(format!("object {a}, subobject {i}"));
            }
            if mono.is_none() {
                if let Some(k) = (0..u.subs[a].len()).find(|&k| m.le(&u.subs[a][k]) && !mb.le(&closures[a][k])) {
                    mono = Some(format!("object {a}, subobjects {i} ≤ {k}"));
                }
            }
            if wh.is_none() {
                // m inside its closure, as a subobject of the closure
                let (cx, incl) = mb.to_presheaf(x);
                let inner = preimage(&incl, m);
                if !close(&cx, &inner).is_full() {
                    wh = Some(format!("object {a}, subobject {i}"));
                }
            }
        }
    }
    r.record_witness("m ≤ m̄", Scope::Bounded, ext);
    r.record_witness("m̄̄ ≤ m̄", Scope::Bounded, idem);
    r.record_witness("closure is monotone", Scope::Bounded, mono);
    // preimages and images of universe subobjects are universe subobjects,
    // so their closures are looked up
    let idx = |o: usize, m: &Subpresheaf| u.subs[o].binary_search(m).expect("a subobject of a universe object");
    let mut cond2 = None;
    let mut cond2p = None;
    'maps: for (a, b, k) in u.maps() {
        let f = u.map(a, b, k);
        for (j, n) in u.subs[b].iter().enumerate() {
            let lhs = &closures[a][idx(a, &preimage(f, n))];
            if !lhs.le(&preimage(f, &closures[b][j])) {
                cond2 = Some(format!("map {a}->{b} #{k}, subobject {j}"));
                break 'maps;
            }
        }
        for (i, m) in u.subs[a].iter().enumerate() {
            let y = &u.objects[b];
            let fm = &closures[b][idx(b, &image(f, m, y))];
            if !image(f, &closures[a][i], y).le(fm) {
                cond2p = Some(format!("map {a}->{b} #{k}, subobject {i}"));
                break 'maps;
            }
        }
    }
    r.record_witness("condition 2: closure of f⁻¹(n) ≤ f⁻¹(n̄)", Scope::Bounded, cond2);
    r.record_witness("condition 2': f(m̄) ≤ closure of f(m)", Scope::Bounded, cond2p);
    r.record_witness("weakly hereditary", Scope::Bounded, wh);
    r.record_witness("ClEmb = DenseEmb^↓ ∩ Mono", Scope::Bounded, presheaf_clemb_identity(u, &closures));
    r
}

/// Closed monos are exactly the monos orthogonal to every dense mono of the
/// universe. For a mono `S ↪ D` and a mono `R ↪ B`, orthogonality says that
/// every `v: B → D` with `R ⊆ v⁻¹(S)` has `v⁻¹(S) = B`.
fn presheaf_clemb_identity(u: &Universe, closures: &[Vec<Subpresheaf>]) -> Option<String> {
    // covers[b][p]: some dense subobject of B lies below subobject p
    let covers: Vec<Vec<Option<usize>>> = (0..u.len())
        .map(|b| {
            let dense: Vec<usize> = (0..u.subs[b].len()).filter(|&i| closures[b][i].is_full()).collect();
            u.subs[b].iter().map(|p| dense.iter().copied().find(|&i| u.subs[b][i].le(p))).collect()
        })
        .collect();
    for (d, subs) in u.subs.iter().enumerate() {
        for (s, sub) in subs.iter().enumerate() {
            let closed = closures[d][s] == *sub;
            let mut orth_witness = None;
            'b: for (b, homs) in u.homs.iter().enumerate() {
                for v in &homs[d] {
                    let p = preimage(v, sub);
                    if p.is_full() {
                        continue;
                    }
                    let pi = u.subs[b].binary_search(&p).expect("preimage is a subobject");
                    if let Some(ri) = covers[b][pi] {
                        orth_witness = Some((b, ri));
                        break 'b;
                    }
                }
            }
            if closed != orth_witness.is_none() {
                return Some(match orth_witness {
                    Some((b, ri)) => format!(
                        "closed subobject {s} of object {d} not orthogonal to dense subobject {ri} of object {b}"
                    ),
                    None => format!("subobject {s} of object {d} is not closed but orthogonal to every dense mono"),
                });
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factsys::system::check_factorization_system;
    use crate::fincat::presets;

    #[test]
    fn identity_and_full_closures_pass() {
        let c = presets::finset(&[0, 1, 2]);
        let m = MorphismClass::monos(&c);
        let ambient = check_factorization_system(&c, &MorphismClass::epis(&c), &m).unwrap();
        for cl in [FiniteClosure::identity(&c, &m), FiniteClosure::full(&c, &m)] {
            let r = finite_closure_suite(&c, &cl, Some(&ambient));
            assert!(r.all_passed(), "{:?}", r.failures().collect::<Vec<_>>());
        }
    }

    #[test]
    fn closure_from_all_iso_is_full() {
        let c = presets::diamond();
        let all = MorphismClass::all(&c);
        let fs = check_factorization_system(&c, &all, &MorphismClass::isos(&c)).unwrap();
        let cl = FiniteClosure::from_factsys(&all, &fs).unwrap();
        assert!(c.morphisms().all(|m| c.is_iso(cl.close(m))));
        let ambient = check_factorization_system(&c, &MorphismClass::isos(&c), &all).unwrap();
        assert_eq!(closure_round_trip(&c, &cl, &fs, &ambient), None);
    }
}
