//! Grothendieck topologies and their correspondence with Lawvere–Tierney
//! topologies.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use super::topology::{check_lt_axioms, LtTopology};
use crate::budget::{Budget, BudgetExceeded, NodeCounter};
use crate::fincat::FinCategory;
use crate::presheaf::omega::{describe_sieve, maximal_sieve, pullback_sieve};
use crate::presheaf::{Omega, PresheafMap, Sieve};

/// Covering sieves per object, each list ascending.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct GrothendieckTopology {
    pub covers: Vec<Vec<Sieve>>,
}

impl GrothendieckTopology {
    pub fn covers(&self, c: usize, s: Sieve) -> bool {
        self.covers[c].binary_search(&s).is_ok()
    }

    /// `J ⊆ K` objectwise.
    pub fn is_finer_than(&self, other: &GrothendieckTopology) -> bool {
        self.covers.iter().enumerate().all(|(c, ss)| ss.iter().all(|&s| other.covers(c, s)))
    }
}

/// Maximality, stability and transitivity; returns the first failure.
pub fn check_grothendieck(omega: &Omega, top: &GrothendieckTopology) -> Result<(), String> {
    let base = omega.base();
    for c in base.objects() {
        if !top.covers(c, maximal_sieve(base, c)) {
            return Err(format!("maximal sieve on object {} does not cover", base.obj_name(c)));
        }
        for &s in &top.covers[c] {
            for f in base.arrows_into(c) {
                let d = base.src(f);
                if !top.covers(d, pullback_sieve(base, f, s)) {
                    return Err(format!(
                        "pullback of covering sieve {} on {} along {} does not cover",
                        describe_sieve(base, s),
                        base.obj_name(c),
                        base.mor_name(f)
                    ));
                }
            }
        }
        for &r in &omega.sieves[c] {
            if top.covers(c, r) {
                continue;
            }
            for &s in &top.covers[c] {
                let local = base
                    .arrows_into(c)
                    .filter(|&f| s >> f & 1 == 1)
                    .all(|f| top.covers(base.src(f), pullback_sieve(base, f, r)));
                if local {
                    return Err(format!(
                        "sieve {} on {} is locally covering along {} but does not cover",
                        describe_sieve(base, r),
                        base.obj_name(c),
                        describe_sieve(base, s)
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Every Grothendieck topology, by direct search over sets of sieves.
pub fn enumerate_grothendieck_topologies(
    omega: &Omega,
    budget: &Budget,
) -> Result<Vec<GrothendieckTopology>, BudgetExceeded> {
    let base: &FinCategory = omega.base();
    let mut counter = NodeCounter::new("topology candidates", budget.max_search_nodes);
    // candidates per object: subsets of the non-maximal sieves
    let choices: Vec<Vec<Sieve>> = base
        .objects()
        .map(|c| omega.sieves[c].iter().copied().filter(|&s| s != maximal_sieve(base, c)).collect())
        .collect();
    let total: usize = choices.iter().map(Vec::len).sum();
    if total >= 40 {
        return Err(BudgetExceeded::new("non-maximal sieves", 39, total));
    }
    let mut out = Vec::new();
    for mask in 0u64..(1u64 << total) {
        counter.tick()?;
        let mut bit = 0;
        let covers: Vec<Vec<Sieve>> = base
            .objects()
            .map(|c| {
                let mut v: Vec<Sieve> = choices[c]
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| mask >> (bit + i) & 1 == 1)
                    .map(|(_, &s)| s)
                    .collect();
                bit += choices[c].len();
                v.push(maximal_sieve(base, c));
                v.sort_unstable();
                v
            })
            .collect();
        let t = GrothendieckTopology { covers };
        if check_grothendieck(omega, &t).is_ok() {
            out.push(t);
        }
    }
    out.sort();
    Ok(out)
}

/// `J(c) = {S | j_c(S) = top}`.
pub fn covering_sieves(j: &LtTopology) -> GrothendieckTopology {
    GrothendieckTopology { covers: j.base().objects().map(|c| j.covering_sieves(c)).collect() }
}

/// The dense topology: `S` covers `c` when every `f: d → c` can be
/// extended by some `g` with `f∘g ∈ S`.
pub fn dense_topology(omega: &Omega) -> GrothendieckTopology {
    let base = omega.base();
    let covers = base
        .objects()
        .map(|c| {
            omega.sieves[c]
                .iter()
                .copied()
                .filter(|&s| base.arrows_into(c).all(|f| pullback_sieve(base, f, s) != 0))
                .collect()
        })
        .collect();
    GrothendieckTopology { covers }
}

/// `j_c(S) = {f: d → c | f*S ∈ J(d)}`, validated.
pub fn topology_of(omega: &Arc<Omega>, top: &GrothendieckTopology) -> Result<LtTopology, String> {
    let base = omega.base();
    let j = PresheafMap::from_fn(&omega.presheaf, |c, e| {
        let s = omega.sieve(c, e);
        let closed = base
            .arrows_into(c)
            .filter(|&f| top.covers(base.src(f), pullback_sieve(base, f, s)))
            .fold(0, |acc, f| acc | 1 << f);
        omega.index(c, closed).expect("closure of a sieve is a sieve")
    });
    check_lt_axioms(omega, j).map_err(|v| format!("{v}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use crate::lttop::topology::enumerate_lt_topologies;

    #[test]
    fn bijection_on_fixture_bases() {
        for c in [presets::terminal(), presets::poset2(), presets::chain(3), presets::parallel_pair()] {
            let om = Arc::new(Omega::new(Arc::new(c)).unwrap());
            let b = Budget::default();
            let lts = enumerate_lt_topologies(&om, &b).unwrap();
            let gts = enumerate_grothendieck_topologies(&om, &b).unwrap();
            assert_eq!(lts.len(), gts.len());
            for j in &lts {
                let g = covering_sieves(j);
                assert!(gts.contains(&g));
                assert_eq!(&topology_of(&om, &g).unwrap(), j);
            }
            for g in &gts {
                assert_eq!(&covering_sieves(&topology_of(&om, g).unwrap()), g);
            }
        }
    }

    #[test]
    fn identity_topology_covers_only_maximal() {
        let om = Arc::new(Omega::new(Arc::new(presets::chain(3))).unwrap());
        let g = covering_sieves(&LtTopology::identity(om.clone()));
        for c in 0..3 {
            assert_eq!(g.covers[c], alloc::vec![maximal_sieve(om.base(), c)]);
        }
    }

    #[test]
    fn dense_topology_is_a_topology() {
        for c in [presets::poset2(), presets::chain(3), presets::parallel_pair(), presets::diamond()] {
            let om = Arc::new(Omega::new(Arc::new(c)).unwrap());
            let d = dense_topology(&om);
            assert_eq!(check_grothendieck(&om, &d), Ok(()));
            assert!(topology_of(&om, &d).is_ok());
        }
        // on 0 → 1 the sieve generated by 0 → 1 covers 1
        let om = Omega::new(Arc::new(presets::poset2())).unwrap();
        let f = om.base().find_morphism("0<1").unwrap();
        assert!(dense_topology(&om).covers(1, 1 << f));
    }

    #[test]
    fn terminal_counts() {
        let om = Omega::new(Arc::new(presets::terminal())).unwrap();
        assert_eq!(enumerate_grothendieck_topologies(&om, &Budget::default()).unwrap().len(), 2);
    }
}
