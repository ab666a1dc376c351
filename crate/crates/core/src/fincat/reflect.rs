//! Brute-force reflective subcategories.

use alloc::sync::Arc;
use alloc::vec::Vec;

use super::category::{FinCategory, MorId, ObjId};
use super::functor::{FinFunctor, FinNatTrans};
use super::monad::MonadData;
use crate::budget::{Budget, BudgetExceeded};

/// A full replete reflective subcategory with a chosen reflection arrow for
/// every object of the ambient category, and the idempotent monad it induces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reflection {
    /// Ascending object ids of the subcategory.
    pub objects: Vec<ObjId>,
    /// `arrows[b]`: reflection `b → R b`.
    pub arrows: Vec<MorId>,
    pub monad: MonadData,
}

/// Closes an object set under isomorphism.
pub fn replete_closure(c: &FinCategory, objects: &[ObjId]) -> Vec<ObjId> {
    c.objects().filter(|&b| objects.iter().any(|&a| c.isomorphic(a, b))).collect()
}

/// `rho: b → r` with `r` in `members` has the unique-factorization property
/// against every morphism from `b` into `members`.
pub fn is_reflection_arrow(c: &FinCategory, members: &[bool], rho: MorId) -> bool {
    let (b, r) = (c.src(rho), c.dst(rho));
    if !members[r] {
        return false;
    }
    c.objects()
        .filter(|&x| members[x])
        .all(|x| c.hom(b, x).iter().all(|&g| c.hom(r, x).iter().filter(|&&h| c.comp(h, rho) == g).count() == 1))
}

/// Least reflection arrow out of `b` (by target, then morphism id).
pub fn reflection_arrow(c: &FinCategory, members: &[bool], b: ObjId) -> Option<MorId> {
    c.objects()
        .filter(|&r| members[r])
        .flat_map(|r| c.hom(b, r).iter().copied())
        .find(|&rho| is_reflection_arrow(c, members, rho))
}

/// Reflection arrows for every object, if `objects` is reflective.
pub fn reflect_onto(c: &FinCategory, objects: &[ObjId]) -> Option<Vec<MorId>> {
    let mut members = alloc::vec![false; c.n_objects()];
    for &o in objects {
        members[o] = true;
    }
    c.objects().map(|b| reflection_arrow(c, &members, b)).collect()
}

/// The idempotent monad `(J K, ρ, μ)` of a family of reflection arrows.
pub fn monad_of_reflection(c: &Arc<FinCategory>, arrows: &[MorId]) -> MonadData {
    let obj: Vec<ObjId> = arrows.iter().map(|&r| c.dst(r)).collect();
    let unique_extension = |rho: MorId, g: MorId| -> MorId {
        let (r, x) = (c.dst(rho), c.dst(g));
        let hs: Vec<MorId> = c.hom(r, x).iter().copied().filter(|&h| c.comp(h, rho) == g).collect();
        assert_eq!(hs.len(), 1, "reflection arrows factor uniquely");
        hs[0]
    };
    let mor: Vec<MorId> =
        c.morphisms().map(|f| unique_extension(arrows[c.src(f)], c.comp(arrows[c.dst(f)], f))).collect();
    let t = FinFunctor::new(c.clone(), c.clone(), obj, mor).expect("reflector is a functor");
    let eta = FinNatTrans::new(FinFunctor::identity(c.clone()), t.clone(), arrows.to_vec()).expect("unit");
    let mu: Vec<MorId> = c.objects().map(|b| unique_extension(arrows[t.on_obj(b)], c.id(t.on_obj(b)))).collect();
    let mu = FinNatTrans::new(t.then(&t).expect("endo"), t.clone(), mu).expect("multiplication");
    MonadData::new(t, eta, mu).expect("reflections induce monads")
}

/// Every full replete reflective subcategory, ordered by object bitmask.
pub fn enumerate_reflective_subcategories(
    c: &Arc<FinCategory>,
    budget: &Budget,
) -> Result<Vec<Reflection>, BudgetExceeded> {
    if c.n_objects() > budget.max_objects {
        return Err(BudgetExceeded::new("objects", budget.max_objects, c.n_objects()));
    }
    if c.n_morphisms() > budget.max_morphisms {
        return Err(BudgetExceeded::new("morphisms", budget.max_morphisms, c.n_morphisms()));
    }
    let n = c.n_objects();
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << n) {
        let objects: Vec<ObjId> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        if replete_closure(c, &objects) != objects {
            continue;
        }
        if let Some(arrows) = reflect_onto(c, &objects) {
            let monad = monad_of_reflection(c, &arrows);
            out.push(Reflection { objects, arrows, monad });
        }
    }
    Ok(out)
}

/// The least reflective subcategory containing `seed`, when the enumerated
/// family has one.
pub fn smallest_containing<'a>(reflections: &'a [Reflection], seed: &[ObjId]) -> Option<&'a Reflection> {
    let containing: Vec<&Reflection> =
        reflections.iter().filter(|r| seed.iter().all(|s| r.objects.contains(s))).collect();
    containing.iter().copied().find(|r| containing.iter().all(|o| r.objects.iter().all(|x| o.objects.contains(x))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use alloc::vec;

    #[test]
    fn terminal_has_one_reflective_subcategory() {
        let c = Arc::new(presets::terminal());
        let rs = enumerate_reflective_subcategories(&c, &Budget::default()).unwrap();
        assert_eq!(rs.len(), 1);
        assert_eq!(rs[0].objects, vec![0]);
    }

    #[test]
    fn poset2_reflective_subcategories() {
        // {1} reflects via 0 ≤ 1; {0} would need a map 1 → 0
        let c = Arc::new(presets::poset2());
        let rs = enumerate_reflective_subcategories(&c, &Budget::default()).unwrap();
        let sets: Vec<Vec<ObjId>> = rs.iter().map(|r| r.objects.clone()).collect();
        assert_eq!(sets, vec![vec![1], vec![0, 1]]);
    }

    #[test]
    fn reflection_monads_fix_exactly_the_subcategory() {
        let c = Arc::new(presets::diamond());
        for r in enumerate_reflective_subcategories(&c, &Budget::default()).unwrap() {
            assert!(r.monad.is_idempotent());
            assert_eq!(r.monad.fixed_objects(), r.objects);
        }
    }
}
