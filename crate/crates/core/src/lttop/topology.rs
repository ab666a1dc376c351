//! Lawvere–Tierney topologies on a presheaf topos and the retract `Ω_j`.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::budget::{Budget, BudgetExceeded};
use crate::fincat::{FinCategory, ObjId};
use crate::presheaf::{Elem, HomSearch, Omega, Presheaf, PresheafMap, Sieve};

/// First failed axiom of a candidate topology `j: Ω → Ω`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LtViolation {
    /// `j` is not a natural transformation `Ω → Ω`.
    NotNatural,
    /// `j_c(top) ≠ top`.
    TruePreservation { object: ObjId },
    /// `j_c(j_c(S)) ≠ j_c(S)`.
    Idempotence { object: ObjId, sieve: Sieve },
    /// `j_c(S ∩ R) ≠ j_c(S) ∩ j_c(R)`.
    Meet { object: ObjId, left: Sieve, right: Sieve },
}

impl fmt::Display for LtViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            LtViolation::NotNatural => write!(f, "j is not natural"),
            LtViolation::TruePreservation { object } => write!(f, "j does not preserve true at object {object}"),
            LtViolation::Idempotence { object, sieve } => {
                write!(f, "j is not idempotent at object {object} on sieve {sieve:#b}")
            }
            LtViolation::Meet { object, left, right } => {
                write!(f, "j does not preserve the meet at object {object} of sieves {left:#b} and {right:#b}")
            }
        }
    }
}

/// A validated Lawvere–Tierney topology.
#[derive(Debug, Clone)]
pub struct LtTopology {
    pub omega: Arc<Omega>,
    pub j: PresheafMap,
}

impl PartialEq for LtTopology {
    fn eq(&self, other: &Self) -> bool {
        self.j == other.j
    }
}

impl Eq for LtTopology {}

impl LtTopology {
    pub fn base(&self) -> &Arc<FinCategory> {
        self.omega.base()
    }

    /// `j_c` on the element `e` of `Ω(c)`.
    #[inline]
    pub fn apply(&self, c: ObjId, e: Elem) -> Elem {
        self.j.at(c, e)
    }

    /// `j_c` on a sieve.
    pub fn close_sieve(&self, c: ObjId, s: Sieve) -> Sieve {
        let e = self.omega.index(c, s).expect("a sieve on c");
        self.omega.sieve(c, self.apply(c, e))
    }

    /// `S` covers `c`: `j_c(S)` is maximal.
    pub fn covers(&self, c: ObjId, s: Sieve) -> bool {
        let e = self.omega.index(c, s).expect("a sieve on c");
        self.apply(c, e) == self.omega.top(c)
    }

    /// Sieve masks covering `c`, ascending.
    pub fn covering_sieves(&self, c: ObjId) -> Vec<Sieve> {
        self.omega.sieves[c].iter().copied().filter(|&s| self.covers(c, s)).collect()
    }

    /// The least topology: `j = id`.
    pub fn identity(omega: Arc<Omega>) -> Self {
        let j = PresheafMap::identity(&omega.presheaf);
        LtTopology { omega, j }
    }

    /// The greatest topology: every sieve covers.
    pub fn everything(omega: Arc<Omega>) -> Self {
        let j = PresheafMap::from_fn(&omega.presheaf, |c, _| omega.top(c));
        LtTopology { omega, j }
    }
}

/// Checks naturality, `j∘true = true`, `j∘j = j` and `j∘∧ = ∧∘(j×j)`.
pub fn check_lt_axioms(omega: &Arc<Omega>, j: PresheafMap) -> Result<LtTopology, LtViolation> {
    let om = &omega.presheaf;
    if j.check(om, om).is_err() {
        return Err(LtViolation::NotNatural);
    }
    for c in omega.base().objects() {
        if j.at(c, omega.top(c)) != omega.top(c) {
            return Err(LtViolation::TruePreservation { object: c });
        }
        let n = om.card(c);
        for a in 0..n {
            if j.at(c, j.at(c, a)) != j.at(c, a) {
                return Err(LtViolation::Idempotence { object: c, sieve: omega.sieve(c, a) });
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if j.at(c, omega.meet(c, a, b)) != omega.meet(c, j.at(c, a), j.at(c, b)) {
                    return Err(LtViolation::Meet { object: c, left: omega.sieve(c, a), right: omega.sieve(c, b) });
                }
            }
        }
    }
    Ok(LtTopology { omega: omega.clone(), j })
}

/// Every topology, ordered by the table of `j`. The scan covers all
/// inflationary endomorphisms of `Ω`, since every topology satisfies
/// `S ⊆ j(S)`.
pub fn enumerate_lt_topologies(omega: &Arc<Omega>, budget: &Budget) -> Result<Vec<LtTopology>, BudgetExceeded> {
    let base = omega.base();
    if base.n_objects() > budget.max_base_objects {
        return Err(BudgetExceeded::new("base objects", budget.max_base_objects, base.n_objects()));
    }
    let om = &omega.presheaf;
    let mut search = HomSearch::new(om, om).budget(budget);
    for c in base.objects() {
        for e in 0..om.card(c) {
            let s = omega.sieve(c, e);
            let above: Vec<Elem> = (0..om.card(c)).filter(|&t| omega.sieve(c, t) & s == s).collect();
            search = search.restrict(c, e, above);
        }
    }
    let mut out = Vec::new();
    search.run(&mut |j| {
        if let Ok(t) = check_lt_axioms(omega, j.clone()) {
            out.push(t);
        }
        true
    })?;
    out.sort_by(|a, b| a.j.cmp(&b.j));
    Ok(out)
}

/// All endomorphisms of `Ω` that fail the axioms, with their first failure.
pub fn rejected_endomorphisms(
    omega: &Arc<Omega>,
    budget: &Budget,
) -> Result<Vec<(PresheafMap, LtViolation)>, BudgetExceeded> {
    let om = &omega.presheaf;
    let mut out = Vec::new();
    HomSearch::new(om, om).budget(budget).run(&mut |j| {
        if let Err(v) = check_lt_axioms(omega, j.clone()) {
            out.push((j.clone(), v));
        }
        true
    })?;
    Ok(out)
}

/// `Ω_j`: the fixed points of `j`, split as `r∘s = id`, `s∘r = j`.
#[derive(Debug, Clone)]
pub struct OmegaJ {
    pub presheaf: Presheaf,
    /// `s: Ω_j → Ω`.
    pub section: PresheafMap,
    /// `r: Ω → Ω_j`.
    pub retraction: PresheafMap,
}

impl OmegaJ {
    pub fn new(top: &LtTopology) -> Self {
        let omega = &top.omega;
        let base = omega.base().clone();
        let fixed: Vec<Vec<Elem>> =
            base.objects().map(|c| (0..omega.presheaf.card(c)).filter(|&e| top.apply(c, e) == e).collect()).collect();
        let mut index: Vec<Vec<Elem>> = base.objects().map(|c| vec![usize::MAX; omega.presheaf.card(c)]).collect();
        for (c, col) in fixed.iter().enumerate() {
            for (i, &e) in col.iter().enumerate() {
                index[c][e] = i;
            }
        }
        let card: Vec<usize> = fixed.iter().map(Vec::len).collect();
        let restrict: Vec<Vec<Elem>> = base
            .morphisms()
            .map(|f| fixed[base.dst(f)].iter().map(|&e| index[base.src(f)][omega.presheaf.res(f, e)]).collect())
            .collect();
        let presheaf = Presheaf::new(base, card, restrict).expect("fixed points of j form a subpresheaf");
        let retraction = PresheafMap::from_fn(&omega.presheaf, |c, e| index[c][top.apply(c, e)]);
        OmegaJ { presheaf, section: PresheafMap { comp: fixed }, retraction }
    }

    /// The sieve behind an element.
    pub fn sieve(&self, omega: &Omega, c: ObjId, e: Elem) -> Sieve {
        omega.sieve(c, self.section.at(c, e))
    }

    /// The maximal sieve as an element of `Ω_j(c)`.
    pub fn top(&self, omega: &Omega, c: ObjId) -> Elem {
        self.retraction.at(c, omega.top(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;

    fn omega(c: FinCategory) -> Arc<Omega> {
        Arc::new(Omega::new(Arc::new(c)).unwrap())
    }

    #[test]
    fn terminal_has_two_topologies() {
        let om = omega(presets::terminal());
        let ts = enumerate_lt_topologies(&om, &Budget::default()).unwrap();
        assert_eq!(ts.len(), 2);
        assert!(ts.contains(&LtTopology::identity(om.clone())));
        assert!(ts.contains(&LtTopology::everything(om.clone())));
        // the four endomorphisms of 2: two are rejected
        assert_eq!(rejected_endomorphisms(&om, &Budget::default()).unwrap().len(), 2);
    }

    #[test]
    fn enumerated_topologies_are_idempotent() {
        for c in [presets::poset2(), presets::chain(3), presets::parallel_pair()] {
            let om = omega(c);
            for t in enumerate_lt_topologies(&om, &Budget::default()).unwrap() {
                assert_eq!(t.j.then(&t.j), t.j);
            }
        }
    }

    #[test]
    fn non_meet_preserving_map_rejected() {
        // the sieves {f} and {g} on the parallel pair are incomparable
        let om = omega(presets::parallel_pair());
        let rejected = rejected_endomorphisms(&om, &Budget::default()).unwrap();
        let (j, _) = rejected.iter().find(|(_, v)| matches!(v, LtViolation::Meet { .. })).unwrap();
        assert!(matches!(check_lt_axioms(&om, j.clone()), Err(LtViolation::Meet { object: 1, .. })));
    }

    #[test]
    fn omega_j_splits_j() {
        for c in [presets::terminal(), presets::poset2(), presets::chain(3), presets::parallel_pair()] {
            let om = omega(c);
            for t in enumerate_lt_topologies(&om, &Budget::default()).unwrap() {
                let oj = OmegaJ::new(&t);
                assert_eq!(oj.section.then(&oj.retraction), PresheafMap::identity(&oj.presheaf));
                assert_eq!(oj.retraction.then(&oj.section), t.j);
            }
        }
    }

    #[test]
    fn omega_j_extremes() {
        let om = omega(presets::chain(3));
        let id = OmegaJ::new(&LtTopology::identity(om.clone()));
        assert_eq!(id.presheaf, om.presheaf);
        let all = OmegaJ::new(&LtTopology::everything(om.clone()));
        assert_eq!(all.presheaf.cards(), &[1, 1, 1]);
    }
}
