//! The universal closure operator of a topology and its dense and closed
//! classes.

use super::topology::LtTopology;
use crate::factsys::presheaf_closure_suite;
use crate::presheaf::{image, Presheaf, PresheafMap, Subpresheaf, Universe};
use crate::report::Report;

/// `m̄`, classified by `j∘χ_m`.
pub fn j_closure(j: &LtTopology, x: &Presheaf, m: &Subpresheaf) -> Subpresheaf {
    let chi = j.omega.characteristic_map(x, m);
    j.omega.subobject_of(&chi.then(&j.j))
}

pub fn is_j_closed(j: &LtTopology, x: &Presheaf, m: &Subpresheaf) -> bool {
    j_closure(j, x, m) == *m
}

/// A subobject whose closure is everything.
pub fn is_j_dense_sub(j: &LtTopology, x: &Presheaf, m: &Subpresheaf) -> bool {
    j_closure(j, x, m).is_full()
}

/// `f: x → y` is dense when the closure of its image is all of `y`.
pub fn is_j_dense(j: &LtTopology, x: &Presheaf, y: &Presheaf, f: &PresheafMap) -> bool {
    is_j_dense_sub(j, y, &image(f, &Subpresheaf::full(x), y))
}

/// Closure-operator axioms for `j`-closure over a bounded universe.
pub fn lt_closure_suite(j: &LtTopology, u: &Universe) -> Report {
    presheaf_closure_suite(u, &|x, m| j_closure(j, x, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::budget::Budget;
    use crate::fincat::presets;
    use crate::lttop::enumerate_lt_topologies;
    use crate::presheaf::{subpresheaves, Omega};
    use alloc::sync::Arc;

    #[test]
    fn identity_closure_is_identity() {
        let base = Arc::new(presets::chain(3));
        let j = LtTopology::identity(Arc::new(Omega::new(base.clone()).unwrap()));
        let x = Presheaf::representable(base, 2);
        for m in subpresheaves(&x, &Budget::default()).unwrap() {
            assert_eq!(j_closure(&j, &x, &m), m);
        }
    }

    #[test]
    fn everything_covers_closes_to_full() {
        let base = Arc::new(presets::parallel_pair());
        let j = LtTopology::everything(Arc::new(Omega::new(base.clone()).unwrap()));
        let x = Presheaf::representable(base, 1);
        for m in subpresheaves(&x, &Budget::default()).unwrap() {
            assert!(j_closure(&j, &x, &m).is_full());
        }
    }

    #[test]
    fn closure_is_extensive_idempotent_and_monotone() {
        let base = Arc::new(presets::chain(3));
        let om = Arc::new(Omega::new(base.clone()).unwrap());
        let x = Presheaf::representable(base, 2);
        let subs = subpresheaves(&x, &Budget::default()).unwrap();
        for j in enumerate_lt_topologies(&om, &Budget::default()).unwrap() {
            for m in &subs {
                let mb = j_closure(&j, &x, m);
                assert!(m.le(&mb));
                assert_eq!(j_closure(&j, &x, &mb), mb);
                for n in &subs {
                    if m.le(n) {
                        assert!(mb.le(&j_closure(&j, &x, n)));
                    }
                }
            }
        }
    }

    #[test]
    fn closure_suite_passes_for_every_topology() {
        let b = Budget::default();
        let base = Arc::new(presets::parallel_pair());
        let om = Arc::new(Omega::new(base.clone()).unwrap());
        let u = Universe::new(&base, 2, &b).unwrap();
        for j in enumerate_lt_topologies(&om, &b).unwrap() {
            let r = lt_closure_suite(&j, &u);
            assert!(r.all_passed(), "{:?}", r.failures().collect::<alloc::vec::Vec<_>>());
        }
    }
}
