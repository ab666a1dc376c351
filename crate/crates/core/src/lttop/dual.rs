//! Dualization into `Ω_j` and the double-dualization monad
//! `T X = Ω_j^(Ω_j^X)`.
//!
//! Elements of `T X (c)` are maps `y(c) × Ω_j^X → Ω_j`. The unit is
//! `η(x)(g, φ) = φ(id, X(g) x)`, which can be evaluated without
//! enumerating `T X`; [`eta_vector`] does exactly that, and the lazy
//! constructions in the sheafification module work with such vectors.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;

use super::topology::OmegaJ;
use crate::budget::{Budget, BudgetExceeded};
use crate::fincat::{FinCategory, MorId, ObjId};
use crate::presheaf::{exponential, precompose, Elem, Exponential, Presheaf, PresheafMap};
use crate::report::{Report, Scope};

/// `Ω_j^X`.
pub fn dualize(oj: &OmegaJ, x: &Presheaf, budget: &Budget) -> Result<Exponential, BudgetExceeded> {
    exponential(x, &oj.presheaf, budget)
}

/// `Ω_j^h: Ω_j^B → Ω_j^A` is an isomorphism, for `h: A → B`.
pub fn inverted_by_dual(
    dual_a: &Exponential,
    dual_b: &Exponential,
    a: &Presheaf,
    b: &Presheaf,
    h: &PresheafMap,
) -> bool {
    dual_a.object.cards() == dual_b.object.cards() && precompose(dual_b, dual_a, a, b, h).is_iso(&dual_a.object)
}

/// `η_X(x)` at `c`, as a map `y(c) × Ω_j^X → Ω_j` given by its table. The
/// pair `(g, φ)` at `d` sits at `hom_pos(g) * |Ω_j^X(d)| + φ`.
pub fn eta_vector(x: &Presheaf, dual: &Exponential, c: ObjId, e: Elem) -> PresheafMap {
    let base = x.base();
    let comp = base
        .objects()
        .map(|d| {
            let n = dual.object.card(d);
            base.hom(d, c)
                .iter()
                .flat_map(|&g| {
                    let xe = x.res(g, e);
                    (0..n).map(move |phi| dual.eval(x, d, phi, xe))
                })
                .collect()
        })
        .collect();
    PresheafMap { comp }
}

/// Restriction of a vector at `c` along `g: c' → c`:
/// `(t·g)(h, φ) = t(g∘h, φ)`.
pub fn restrict_vector(base: &FinCategory, dual_cards: &[usize], t: &PresheafMap, g: MorId) -> PresheafMap {
    let c2 = base.src(g);
    let comp = base
        .objects()
        .map(|d| {
            let n = dual_cards[d];
            base.hom(d, c2)
                .iter()
                .flat_map(|&h| {
                    let at = base.hom_pos(base.comp(g, h)) * n;
                    t.comp[d][at..at + n].iter().copied()
                })
                .collect()
        })
        .collect();
    PresheafMap { comp }
}

/// `η_X` is pointwise injective.
pub fn eta_is_mono(x: &Presheaf, dual: &Exponential) -> bool {
    x.base().objects().all(|c| {
        let vs: BTreeSet<PresheafMap> = (0..x.card(c)).map(|e| eta_vector(x, dual, c, e)).collect();
        vs.len() == x.card(c)
    })
}

/// `Ω_j^X`, `T X` and `η_X` for one object.
#[derive(Debug, Clone)]
pub struct DoubleDual {
    pub object: Presheaf,
    pub dual: Exponential,
    pub double: Exponential,
    pub eta: PresheafMap,
}

impl DoubleDual {
    pub fn new(oj: &OmegaJ, x: &Presheaf, budget: &Budget) -> Result<Self, BudgetExceeded> {
        let dual = dualize(oj, x, budget)?;
        let double = dualize(oj, &dual.object, budget)?;
        let eta =
            PresheafMap::from_fn(x, |c, e| double.index_of(c, &eta_vector(x, &dual, c, e)).expect("η(x) is natural"));
        Ok(DoubleDual { object: x.clone(), dual, double, eta })
    }

    pub fn t_object(&self) -> &Presheaf {
        &self.double.object
    }
}

/// `T f = Ω_j^(Ω_j^f)`.
pub fn t_map(a: &DoubleDual, b: &DoubleDual, f: &PresheafMap) -> PresheafMap {
    let dual_f = precompose(&b.dual, &a.dual, &a.object, &b.object, f);
    precompose(&a.double, &b.double, &b.dual.object, &a.dual.object, &dual_f)
}

/// `μ_X = Ω_j^(η at Ω_j^X)`, from `T X` data, the data of `Ω_j^X` and the
/// data of `T X`.
pub fn multiplication(x: &DoubleDual, of_dual: &DoubleDual, of_t: &DoubleDual) -> PresheafMap {
    // of_dual.double and of_t.dual are both Ω_j^(T X)
    precompose(&of_t.double, &x.double, &x.dual.object, &of_t.dual.object, &of_dual.eta)
}

/// Monad laws of the double dualization at `x`, as far as the budget
/// allows. Laws whose objects do not fit are reported as skipped.
pub fn monad_law_report(oj: &OmegaJ, x: &Presheaf, budget: &Budget) -> Report {
    let mut r = Report::new();
    let skip_rest = |r: &mut Report, from: usize, e: &BudgetExceeded| {
        let names = ["η natural", "triangle Ω^η ∘ η_Ω^X = id", "μ ∘ η_T = id", "μ ∘ Tη = id", "μ ∘ Tμ = μ ∘ μ_T"];
        for n in &names[from..] {
            r.skip(*n, Scope::Exact, format!("{e}"));
        }
    };
    let dx = match DoubleDual::new(oj, x, budget) {
        Ok(d) => d,
        Err(e) => {
            skip_rest(&mut r, 0, &e);
            return r;
        }
    };
    r.record("η natural", Scope::Exact, dx.eta.check(x, dx.t_object()).is_ok(), || String::from("η is not natural"));
    let dd = match DoubleDual::new(oj, &dx.dual.object, budget) {
        Ok(d) => d,
        Err(e) => {
            skip_rest(&mut r, 1, &e);
            return r;
        }
    };
    // Ω_j^(η_X): Ω_j^(TX) → Ω_j^X
    let dual_eta = precompose(&dd.double, &dx.dual, x, dx.t_object(), &dx.eta);
    r.record(
        "triangle Ω^η ∘ η_Ω^X = id",
        Scope::Exact,
        dd.eta.then(&dual_eta) == PresheafMap::identity(&dx.dual.object),
        || String::from("Ω_j^η ∘ η_(Ω_j^X) differs from the identity"),
    );
    let dt = match DoubleDual::new(oj, dx.t_object(), budget) {
        Ok(d) => d,
        Err(e) => {
            skip_rest(&mut r, 2, &e);
            return r;
        }
    };
    let mu = multiplication(&dx, &dd, &dt);
    let id_t = PresheafMap::identity(dx.t_object());
    r.record("μ ∘ η_T = id", Scope::Exact, dt.eta.then(&mu) == id_t, || String::from("μ ∘ η_(TX) ≠ id"));
    r.record("μ ∘ Tη = id", Scope::Exact, t_map(&dx, &dt, &dx.eta).then(&mu) == id_t, || {
        String::from("μ ∘ T η_X ≠ id")
    });
    let assoc = (|| {
        let de = DoubleDual::new(oj, &dt.dual.object, budget)?;
        let dtt = DoubleDual::new(oj, dt.t_object(), budget)?;
        let mu_t = multiplication(&dt, &de, &dtt);
        let t_mu = t_map(&dtt, &dt, &mu);
        Ok::<_, BudgetExceeded>(t_mu.then(&mu) == mu_t.then(&mu))
    })();
    match assoc {
        Ok(ok) => {
            r.record("μ ∘ Tμ = μ ∘ μ_T", Scope::Exact, ok, || String::from("associativity fails"));
        }
        Err(e) => skip_rest(&mut r, 4, &e),
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fincat::presets;
    use crate::lttop::{enumerate_lt_topologies, is_separated, LtTopology};
    use crate::presheaf::{enumerate_presheaves, Omega};
    use crate::report::Status;
    use alloc::sync::Arc;
    use alloc::vec;
    use alloc::vec::Vec;

    fn terminal_identity() -> (Arc<FinCategory>, OmegaJ) {
        let base = Arc::new(presets::terminal());
        let j = LtTopology::identity(Arc::new(Omega::new(base.clone()).unwrap()));
        (base, OmegaJ::new(&j))
    }

    #[test]
    fn double_powerset_of_two_has_sixteen_elements() {
        let (base, oj) = terminal_identity();
        let two = Presheaf::new(base, vec![2], vec![vec![0, 1]]).unwrap();
        let dd = DoubleDual::new(&oj, &two, &Budget::default()).unwrap();
        assert_eq!(dd.t_object().cards(), &[16]);
        assert!(dd.eta.is_mono(dd.t_object()));
    }

    #[test]
    fn empty_set_double_dual_is_not_idempotent() {
        let (base, oj) = terminal_identity();
        let empty = Presheaf::empty(base);
        let b = Budget::default();
        let dx = DoubleDual::new(&oj, &empty, &b).unwrap();
        let dt = DoubleDual::new(&oj, dx.t_object(), &b).unwrap();
        assert_eq!(dx.t_object().cards(), &[2]);
        assert_eq!(dt.t_object().cards(), &[16]);
    }

    #[test]
    fn unit_laws_hold_where_they_fit() {
        let (base, oj) = terminal_identity();
        let r = monad_law_report(&oj, &Presheaf::empty(base), &Budget::default());
        assert!(r.all_passed());
        let statuses: Vec<Status> = r.checks.iter().map(|c| c.status).collect();
        assert_eq!(statuses[..4], [Status::Pass; 4]);
    }

    #[test]
    fn everything_covers_gives_trivial_monad() {
        let base = Arc::new(presets::poset2());
        let j = LtTopology::everything(Arc::new(Omega::new(base.clone()).unwrap()));
        let oj = OmegaJ::new(&j);
        for x in enumerate_presheaves(&base, 2, &Budget::default()).unwrap() {
            let r = monad_law_report(&oj, &x, &Budget::default());
            assert!(r.checks.iter().all(|c| c.status == Status::Pass));
        }
    }

    #[test]
    fn eta_mono_iff_separated() {
        let b = Budget::default();
        for c in [presets::poset2(), presets::parallel_pair()] {
            let base = Arc::new(c);
            let om = Arc::new(Omega::new(base.clone()).unwrap());
            let xs = enumerate_presheaves(&base, 2, &b).unwrap();
            for j in enumerate_lt_topologies(&om, &b).unwrap() {
                let oj = OmegaJ::new(&j);
                for x in &xs {
                    let d = dualize(&oj, x, &b).unwrap();
                    assert_eq!(eta_is_mono(x, &d), is_separated(&j, x));
                }
            }
        }
    }

    #[test]
    fn lazy_restriction_matches_exponential() {
        let b = Budget::default();
        let base = Arc::new(presets::chain(3));
        let om = Arc::new(Omega::new(base.clone()).unwrap());
        let j = LtTopology::identity(om);
        let oj = OmegaJ::new(&j);
        let x = Presheaf::representable(base.clone(), 1);
        let dd = DoubleDual::new(&oj, &x, &b).unwrap();
        for g in base.morphisms() {
            for e in 0..x.card(base.dst(g)) {
                let v = eta_vector(&x, &dd.dual, base.dst(g), e);
                let w = restrict_vector(&base, dd.dual.object.cards(), &v, g);
                let k = dd.double.index_of(base.dst(g), &v).unwrap();
                assert_eq!(dd.double.index_of(base.src(g), &w), Some(dd.t_object().res(g, k)));
            }
        }
    }
}
