//! The subobject classifier: sieves, `true`, characteristic maps.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::core::{Elem, Presheaf, PresheafMap, Subpresheaf};
use crate::budget::BudgetExceeded;
use crate::fincat::{FinCategory, MorId, ObjId};
use alloc::sync::Arc;

/// A sieve, as a bitmask over morphism ids.
pub type Sieve = u64;

/// Most morphisms into one object for which sieves are enumerated.
pub const MAX_ARROWS_INTO: usize = 20;

/// `Ω` together with the sieve behind every element.
#[derive(Debug, Clone)]
pub struct Omega {
    pub presheaf: Presheaf,
    /// `sieves[c]`, ascending by mask.
    pub sieves: Vec<Vec<Sieve>>,
    top: Vec<Elem>,
}

/// `f*(S) = {g | f∘g ∈ S}` for `f: d → c`.
pub fn pullback_sieve(base: &FinCategory, f: MorId, s: Sieve) -> Sieve {
    base.arrows_into(base.src(f)).filter(|&g| s >> base.comp(f, g) & 1 == 1).fold(0, |acc, g| acc | 1 << g)
}

/// Mask of all morphisms into `c`.
pub fn maximal_sieve(base: &FinCategory, c: ObjId) -> Sieve {
    base.arrows_into(c).fold(0, |acc, g| acc | 1 << g)
}

/// Names the arrows of a sieve, e.g. `{id_1, 0<1}`.
pub fn describe_sieve(base: &FinCategory, s: Sieve) -> String {
    let names: Vec<&str> = base.morphisms().filter(|&f| s >> f & 1 == 1).map(|f| base.mor_name(f)).collect();
    format!("{{{}}}", names.join(", "))
}

/// Closed under precomposition.
pub fn is_sieve(base: &FinCategory, c: ObjId, s: Sieve) -> bool {
    if s & !maximal_sieve(base, c) != 0 {
        return false;
    }
    base.arrows_into(c)
        .filter(|&f| s >> f & 1 == 1)
        .all(|f| base.arrows_into(base.src(f)).all(|g| s >> base.comp(f, g) & 1 == 1))
}

/// All sieves on `c`, ascending by mask.
pub fn sieves_on(base: &FinCategory, c: ObjId) -> Result<Vec<Sieve>, BudgetExceeded> {
    let arrows: Vec<MorId> = base.arrows_into(c).collect();
    if arrows.len() > MAX_ARROWS_INTO || base.n_morphisms() > 64 {
        return Err(BudgetExceeded::new("morphisms into one object", MAX_ARROWS_INTO, arrows.len()));
    }
    let mut out = Vec::new();
    for bits in 0u64..(1u64 << arrows.len()) {
        let s = arrows.iter().enumerate().filter(|(i, _)| bits >> i & 1 == 1).fold(0, |acc, (_, &f)| acc | 1 << f);
        if is_sieve(base, c, s) {
            out.push(s);
        }
    }
    out.sort_unstable();
    Ok(out)
}

impl Omega {
    pub fn new(base: Arc<FinCategory>) -> Result<Self, BudgetExceeded> {
        let sieves: Vec<Vec<Sieve>> = base.objects().map(|c| sieves_on(&base, c)).collect::<Result<_, _>>()?;
        let card: Vec<usize> = sieves.iter().map(Vec::len).collect();
        let restrict = base
            .morphisms()
            .map(|f| {
                let (s, d) = (base.src(f), base.dst(f));
                sieves[d]
                    .iter()
                    .map(|&sv| sieves[s].binary_search(&pullback_sieve(&base, f, sv)).expect("pullback of a sieve"))
                    .collect()
            })
            .collect();
        let top =
            base.objects().map(|c| sieves[c].binary_search(&maximal_sieve(&base, c)).expect("maximal sieve")).collect();
        let presheaf = Presheaf::new_unchecked(base, card, restrict);
        Ok(Omega { presheaf, sieves, top })
    }

    pub fn base(&self) -> &Arc<FinCategory> {
        self.presheaf.base()
    }

    #[inline]
    pub fn sieve(&self, c: ObjId, e: Elem) -> Sieve {
        self.sieves[c][e]
    }

    pub fn index(&self, c: ObjId, s: Sieve) -> Option<Elem> {
        self.sieves[c].binary_search(&s).ok()
    }

    /// The maximal sieve on `c`.
    #[inline]
    pub fn top(&self, c: ObjId) -> Elem {
        self.top[c]
    }

    /// The empty sieve on `c`.
    pub fn bottom(&self, _c: ObjId) -> Elem {
        0
    }

    pub fn meet(&self, c: ObjId, a: Elem, b: Elem) -> Elem {
        self.index(c, self.sieves[c][a] & self.sieves[c][b]).expect("sieves are closed under intersection")
    }

    /// `true: 1 → Ω`.
    pub fn true_map(&self) -> PresheafMap {
        PresheafMap { comp: self.base().objects().map(|c| alloc::vec![self.top[c]]).collect() }
    }

    /// `χ_m(x) = {f | X(f)x ∈ m}`.
    pub fn characteristic_map(&self, x: &Presheaf, m: &Subpresheaf) -> PresheafMap {
        let base = self.base();
        PresheafMap::from_fn(x, |c, e| {
            let s =
                base.arrows_into(c).filter(|&f| m.contains(base.src(f), x.res(f, e))).fold(0, |acc, f| acc | 1 << f);
            self.index(c, s).expect("characteristic sieve")
        })
    }

    /// Preimage of `true`.
    pub fn subobject_of(&self, chi: &PresheafMap) -> Subpresheaf {
        Subpresheaf {
            members: chi
                .comp
                .iter()
                .enumerate()
                .map(|(c, col)| col.iter().map(|&v| v == self.top[c]).collect())
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use crate::presheaf::core::to_terminal;

    #[test]
    fn omega_sizes() {
        assert_eq!(Omega::new(Arc::new(presets::terminal())).unwrap().presheaf.cards(), &[2]);
        assert_eq!(Omega::new(Arc::new(presets::poset2())).unwrap().presheaf.cards(), &[2, 3]);
        assert_eq!(Omega::new(Arc::new(presets::parallel_pair())).unwrap().presheaf.cards(), &[2, 5]);
    }

    #[test]
    fn restriction_preserves_top() {
        let om = Omega::new(Arc::new(presets::poset2())).unwrap();
        assert_eq!(om.presheaf.res(2, om.top(1)), om.top(0));
    }

    #[test]
    fn full_subobject_classified_by_true() {
        let base = Arc::new(presets::chain(3));
        let om = Omega::new(base.clone()).unwrap();
        let y = Presheaf::representable(base, 2);
        let chi = om.characteristic_map(&y, &Subpresheaf::full(&y));
        assert_eq!(chi, to_terminal(&y).then(&om.true_map()));
        let e = Subpresheaf::empty(&y);
        assert_eq!(om.subobject_of(&om.characteristic_map(&y, &e)), e);
    }
}
