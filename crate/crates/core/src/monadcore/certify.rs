//! The idempotent core and the checks that certify it.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::input::{is_sigma_complete, is_t_separated, sigma_kleisli_mismatch, sigma_t, CoreError, CoreInput};
use super::reflection::{build_reflection, CoreResult};
use crate::budget::{Budget, BudgetExceeded};
use crate::factsys::class::describe;
use crate::factsys::closure::closure_round_trip;
use crate::factsys::{
    check_factorization_system, finite_closure_suite, pullback, sigma_perp_objects, FiniteClosure, MorphismClass,
};
use crate::fincat::enumerate::{monad_morphisms, monads};
use crate::fincat::reflect::{enumerate_reflective_subcategories, smallest_containing};
use crate::fincat::{build_kleisli, FinCategory, Kleisli, MonadData, MorId, ObjId};
use crate::report::{Report, Scope};

/// The idempotent core `T̃` of `T`: the reflection with `Σ = Σ_T`, with its
/// six certificates appended to the diagnostics.
pub fn idempotent_core(
    monad: MonadData,
    e_class: MorphismClass,
    m_class: MorphismClass,
) -> Result<CoreResult, CoreError> {
    let c = monad.category().clone();
    check_factorization_system(&c, &e_class, &m_class).map_err(CoreError::NotFactorizationSystem)?;
    let input = CoreInput::with_sigma_t(monad, e_class, m_class)?;
    let mut result = build_reflection(&input)?;
    let certs = certificates(&result);
    result.diagnostics.absorb("certificate", certs);
    Ok(result)
}

fn first_object(objs: impl IntoIterator<Item = ObjId>) -> Option<String> {
    objs.into_iter().next().map(|b| format!("object {b}"))
}

fn object_set_mismatch(left: &[ObjId], right: &[ObjId]) -> Option<String> {
    (left != right).then(|| format!("{left:?} vs {right:?}"))
}

fn certificates(r: &CoreResult) -> Report {
    let input = &r.input;
    let c = input.category();
    let mut rep = Report::new();
    rep.record_witness(
        "Σ of T̃ equals Σ_T",
        Scope::Exact,
        sigma_t(&r.ttilde).first_difference(&input.sigma).map(|f| describe(c, f)),
    );
    let complete = sigma_perp_objects(c, &input.sigma);
    rep.record_witness("reflective subcategory is Σ_T^⊥", Scope::Exact, object_set_mismatch(&r.subcategory, &complete));
    rep.record_witness(
        "T-complete objects are T-separated",
        Scope::Exact,
        first_object(complete.iter().copied().filter(|&b| !is_t_separated(input, b))),
    );
    rep.record_witness(
        "ι components T-closed",
        Scope::Exact,
        first_object(c.objects().filter(|&b| !r.closed.contains(r.iota.at(b)))),
    );
    rep.record_witness(
        "ρ components T-dense",
        Scope::Exact,
        first_object(c.objects().filter(|&b| !r.dense.contains(r.rho(b)))),
    );
    let kl = build_kleisli(&input.monad);
    rep.record_witness("Kleisli factorization with conservative F′", Scope::Exact, kleisli_factorization(r, &kl));
    rep
}

/// `F_T` inverts every `ρ_B`, and `F_T` restricted to the subcategory
/// reflects isomorphisms, so `F_T ≅ F′∘K` with `F′` conservative.
fn kleisli_factorization(r: &CoreResult, kl: &Kleisli) -> Option<String> {
    let c = r.input.category();
    let left = kl.adjunction.left();
    if let Some(b) = c.objects().find(|&b| !kl.category.is_iso(left.on_mor(r.rho(b)))) {
        return Some(format!("F_T ρ_{b} is not iso"));
    }
    for &a in &r.subcategory {
        for &b in &r.subcategory {
            if let Some(&f) = c.hom(a, b).iter().find(|&&f| kl.category.is_iso(left.on_mor(f)) && !c.is_iso(f)) {
                return Some(format!("F′ inverts non-iso {}", describe(c, f)));
            }
        }
    }
    // naturality of the comparison F_T ρ: F_T ⇒ F_T K
    for f in c.morphisms() {
        let (a, b) = (c.src(f), c.dst(f));
        let lhs = kl.category.comp(left.on_mor(r.ttilde.on_mor(f)), left.on_mor(r.rho(a)));
        let rhs = kl.category.comp(left.on_mor(r.rho(b)), left.on_mor(f));
        if lhs != rhs {
            return Some(format!("comparison not natural at {}", describe(c, f)));
        }
    }
    None
}

/// The equivalent characterizations of the idempotent core, verified
/// exhaustively where the budget allows.
pub fn verify_core_characterizations(r: &CoreResult, budget: &Budget) -> Report {
    let input = &r.input;
    let c = input.category();
    let t = &input.monad;
    let mut rep = Report::new();
    match terminality(r, budget) {
        Ok(w) => {
            rep.record_witness("terminal among idempotent monads over T", Scope::Exact, w);
        }
        Err(e) => rep.skip("terminal among idempotent monads over T", Scope::Exact, e.to_string()),
    }
    let sigma = sigma_t(t);
    let perp = sigma_perp_objects(c, &sigma);
    rep.record_witness("B′ equals B_{Σ_T}", Scope::Exact, object_set_mismatch(&r.subcategory, &perp));
    rep.record_witness(
        "Σ_T equals Σ of the Kleisli left adjoint",
        Scope::Exact,
        sigma_kleisli_mismatch(t).map(|f| describe(c, f)),
    );
    let kl = build_kleisli(t);
    rep.record_witness("Kleisli adjunction factors conservatively", Scope::Exact, kleisli_factorization(r, &kl));
    match enumerate_reflective_subcategories(c, budget) {
        Ok(refl) => {
            let images: Vec<ObjId> = c.objects().map(|b| t.on_obj(b)).collect();
            let right = kl.adjunction.right();
            let free: Vec<ObjId> = kl.category.objects().map(|k| right.on_obj(k)).collect();
            for (name, seed) in
                [("reflective hull of T(Ob B) is B′", images), ("reflective hull of G(Ob Kl) is B′", free)]
            {
                let hull = smallest_containing(&refl, &seed).map(|h| h.objects.clone());
                let w = match hull {
                    Some(h) => object_set_mismatch(&h, &r.subcategory),
                    None => Some("no reflective hull".to_string()),
                };
                rep.record_witness(name, Scope::Exact, w);
            }
        }
        Err(e) => {
            rep.skip("reflective hull of T(Ob B) is B′", Scope::Exact, e.to_string());
            rep.skip("reflective hull of G(Ob Kl) is B′", Scope::Exact, e.to_string());
        }
    }
    rep.record_witness(
        "Σ_T^⊥ equals the objects fixed by T̃",
        Scope::Exact,
        object_set_mismatch(&perp, &r.ttilde.fixed_objects()),
    );
    rep
}

/// Every idempotent `S` with a monad morphism `θ: S → T` has exactly one
/// `φ: S → T̃` with `ι·φ = θ`.
fn terminality(r: &CoreResult, budget: &Budget) -> Result<Option<String>, BudgetExceeded> {
    let c = r.input.category();
    let t = &r.input.monad;
    for s in monads(c, budget)?.iter().filter(|s| s.is_idempotent()) {
        let into_t = monad_morphisms(s, t, budget)?;
        if into_t.is_empty() {
            continue;
        }
        let into_core = monad_morphisms(s, &r.ttilde, budget)?;
        for theta in &into_t {
            let n = into_core
                .iter()
                .filter(|phi| c.objects().all(|b| c.comp(r.iota.at(b), phi.at(b)) == theta.at(b)))
                .count();
            if n != 1 {
                return Ok(Some(format!(
                    "monad with functor {:?} has {n} factorizations through ι",
                    s.functor().object_table()
                )));
            }
        }
    }
    Ok(None)
}

/// Stability of the dense and closed classes.
pub fn stability_suite(r: &CoreResult) -> Report {
    let input = &r.input;
    let c: &FinCategory = input.category();
    let (dense, closed) = (&r.dense, &r.closed);
    let mut rep = Report::new();
    let outside = |a: &MorphismClass, b: &MorphismClass| a.first_outside(b).map(|f| describe(c, f));
    rep.record_witness("E ⊆ Dense", Scope::Exact, outside(&input.e_class, dense));
    rep.record_witness("Σ ⊆ Dense", Scope::Exact, outside(&input.sigma, dense));
    rep.record_witness(
        "Dense ∩ ClEmb ⊆ Iso",
        Scope::Exact,
        outside(&dense.intersection(closed), &MorphismClass::isos(c)),
    );
    let pairs = |pred: &dyn Fn(MorId, MorId, MorId) -> bool| -> Option<String> {
        for f in c.morphisms() {
            for g in c.morphisms() {
                if let Some(h) = c.try_comp(g, f) {
                    if !pred(f, g, h) {
                        return Some(format!("{} ∘ {}", describe(c, g), describe(c, f)));
                    }
                }
            }
        }
        None
    };
    rep.record_witness(
        "second factor of a dense composite is dense",
        Scope::Exact,
        pairs(&|_, g, h| !dense.contains(h) || dense.contains(g)),
    );
    rep.record_witness(
        "first factor of closed embeddings is a closed embedding",
        Scope::Exact,
        pairs(&|f, g, h| !(closed.contains(h) && closed.contains(g)) || closed.contains(f)),
    );
    rep.record_witness(
        "ClEmb closed under composition",
        Scope::Exact,
        pairs(&|f, g, h| !(closed.contains(f) && closed.contains(g)) || closed.contains(h)),
    );
    rep.record_witness(
        "Dense closed under composition",
        Scope::Exact,
        pairs(&|f, g, h| !(dense.contains(f) && dense.contains(g)) || dense.contains(h)),
    );
    let mut pb = None;
    'outer: for m in closed.ids() {
        for f in c.morphisms().filter(|&f| c.dst(f) == c.dst(m)) {
            if let Some(p) = pullback(c, m, f) {
                if !closed.contains(p.p2) {
                    pb = Some(format!("pullback of {} along {}", describe(c, m), describe(c, f)));
                    break 'outer;
                }
            }
        }
    }
    rep.record_witness("ClEmb stable under pullback", Scope::Exact, pb);
    rep
}

/// Propositions relating completeness, separation and embeddings into free
/// algebras, checked on every object and embedding.
pub fn core_propositions(r: &CoreResult) -> Report {
    let input = &r.input;
    let c = input.category();
    let t = &input.monad;
    let kl = build_kleisli(t);
    let left = kl.adjunction.left();
    let mut rep = Report::new();

    rep.record_witness(
        "TB is Σ-complete and T-separated",
        Scope::Exact,
        first_object(c.objects().filter(|&b| {
            let tb = t.on_obj(b);
            !(is_sigma_complete(input, tb) && is_t_separated(input, tb))
        })),
    );
    let mut sub = None;
    for m in input.m_class.ids() {
        let (b1, b2) = (c.src(m), c.dst(m));
        if is_sigma_complete(input, b2) && is_sigma_complete(input, b1) != r.closed.contains(m) {
            sub = Some(describe(c, m));
            break;
        }
    }
    rep.record_witness("embedding into a complete object: complete iff closed", Scope::Exact, sub);
    let free: Vec<ObjId> = c.objects().map(|b| t.on_obj(b)).collect();
    let embeds = |b: ObjId, cls: &MorphismClass| free.iter().any(|&tc| c.hom(b, tc).iter().any(|&m| cls.contains(m)));
    rep.record_witness(
        "T-separated iff M-embedding into a free algebra",
        Scope::Exact,
        first_object(c.objects().filter(|&b| is_t_separated(input, b) != embeds(b, &input.m_class))),
    );
    rep.record_witness(
        "complete and separated iff closed embedding into a free algebra",
        Scope::Exact,
        first_object(
            c.objects().filter(|&b| (is_sigma_complete(input, b) && is_t_separated(input, b)) != embeds(b, &r.closed)),
        ),
    );
    rep.record_witness(
        "F_T inverts each ρ_B",
        Scope::Exact,
        first_object(c.objects().filter(|&b| !kl.category.is_iso(left.on_mor(r.rho(b))))),
    );
    let kc = &kl.category;
    let section = |g: MorId| kc.hom(kc.dst(g), kc.src(g)).iter().any(|&s| kc.comp(s, g) == kc.id(kc.src(g)));
    rep.record_witness(
        "dense f with F_T f a section has F_T f iso",
        Scope::Exact,
        r.dense
            .ids()
            .into_iter()
            .find(|&f| section(left.on_mor(f)) && !kc.is_iso(left.on_mor(f)))
            .map(|f| describe(c, f)),
    );
    rep
}

/// Closure operator of `(Dense, ClEmb)`, its axioms and its round trip.
pub fn closure_suite(r: &CoreResult) -> Report {
    let input = &r.input;
    let c = input.category();
    let mut rep = Report::new();
    let cl = match FiniteClosure::from_factsys(&input.m_class, &r.factorization) {
        Ok(cl) => cl,
        Err(f) => {
            rep.record_witness("ClEmb ⊆ M", Scope::Exact, Some(describe(c, f)));
            return rep;
        }
    };
    let ambient = check_factorization_system(c, &input.e_class, &input.m_class).ok();
    rep.absorb("", finite_closure_suite(c, &cl, ambient.as_ref()));
    match &ambient {
        Some(amb) => {
            rep.record_witness("closure round trip", Scope::Exact, closure_round_trip(c, &cl, &r.factorization, amb));
        }
        None => rep.skip("closure round trip", Scope::Exact, "(E, M) has no factorizations"),
    }
    rep
}

/// Every check above in one report.
pub fn full_report(r: &CoreResult, budget: &Budget) -> Report {
    let mut rep = Report::new();
    rep.absorb("diagnostics", r.diagnostics.clone());
    rep.absorb("characterization", verify_core_characterizations(r, budget));
    rep.absorb("stability", stability_suite(r));
    rep.absorb("proposition", core_propositions(r));
    rep.absorb("closure", closure_suite(r));
    rep
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factsys::orthogonality_witness;
    use crate::fincat::{monad_isomorphism, presets};
    use crate::monadcore::{
        check_factorization_assumption, closed_embeddings, dense_morphisms, separated_reflection, CoreInput,
    };
    use alloc::sync::Arc;
    use alloc::vec;

    fn iso_all(c: &FinCategory) -> (MorphismClass, MorphismClass) {
        (MorphismClass::isos(c), MorphismClass::all(c))
    }

    #[test]
    fn identity_monad_core_is_identity() {
        let c = Arc::new(presets::chain(3));
        let t = MonadData::identity(c.clone());
        let (e, m) = iso_all(&c);
        assert_eq!(sigma_t(&t), MorphismClass::isos(&c));
        let r = idempotent_core(t.clone(), e, m).unwrap();
        assert_eq!(r.ttilde, t);
        assert!(r.diagnostics.all_passed(), "{:?}", r.diagnostics);
        assert!(full_report(&r, &Budget::default()).all_passed());
    }

    #[test]
    fn const_top_inverts_everything() {
        let c = Arc::new(presets::poset2());
        let ms = monads(&c, &Budget::default()).unwrap();
        let top = ms.iter().find(|m| m.on_obj(0) == 1).unwrap();
        assert_eq!(sigma_t(top), MorphismClass::all(&c));
        assert_eq!(sigma_kleisli_mismatch(top), None);
        let (e, m) = iso_all(&c);
        let r = idempotent_core(top.clone(), e, m).unwrap();
        assert_eq!(r.subcategory, vec![1]);
        assert!(full_report(&r, &Budget::default()).all_passed());
    }

    #[test]
    fn cores_of_idempotent_monads_on_posets_are_the_monads() {
        for c in [presets::chain(4), presets::diamond(), presets::parallel_pair()] {
            let c = Arc::new(c);
            let (e, m) = iso_all(&c);
            for t in monads(&c, &Budget::default()).unwrap() {
                let r = idempotent_core(t.clone(), e.clone(), m.clone()).unwrap();
                assert!(monad_isomorphism(&r.ttilde, &t).is_some());
                let rep = full_report(&r, &Budget::default());
                assert!(rep.all_passed(), "{:?}", rep.failures().collect::<Vec<_>>());
            }
        }
    }

    #[test]
    fn separated_reflection_of_constant_point() {
        // T collapses FinSet{0,1,2} onto 1; separated objects are 0 and 1
        let c = Arc::new(presets::finset(&[0, 1, 2]));
        let one = c.find_object("1").unwrap();
        let arrows: Vec<MorId> = c.objects().map(|b| c.hom(b, one)[0]).collect();
        let t = crate::fincat::reflect::monad_of_reflection(&c, &arrows);
        let (e, m) = (MorphismClass::epis(&c), MorphismClass::monos(&c));
        let r = separated_reflection(t.clone(), e.clone(), m.clone()).unwrap();
        assert_eq!(r.subcategory, vec![0, 1]);
        assert_eq!(r.closed, m);
        assert_eq!(r.dense, e);
        assert!(r.diagnostics.all_passed());
        assert!(closure_suite(&r).all_passed());
        let core = idempotent_core(t, e, m).unwrap();
        assert_eq!(core.subcategory, vec![one]);
    }

    #[test]
    fn improper_input_is_definitions_only() {
        let c = Arc::new(presets::finset(&[1, 2]));
        let t = MonadData::identity(c.clone());
        let (e, m) = iso_all(&c);
        let sigma = MorphismClass::isos(&c);
        assert!(matches!(CoreInput::new(t.clone(), e.clone(), m.clone(), sigma.clone()), Err(CoreError::NotProper(_))));
        let input = CoreInput::definitions_only(t, e, m.clone(), sigma).unwrap();
        assert_eq!(closed_embeddings(&input), m);
        assert!(matches!(build_reflection(&input), Err(CoreError::DefinitionsOnly(_))));
    }

    #[test]
    fn sigma_outside_sigma_t_rejected() {
        let c = Arc::new(presets::chain(2));
        let t = MonadData::identity(c.clone());
        let (e, m) = iso_all(&c);
        let f = c.find_morphism("0<1").unwrap();
        let sigma = MorphismClass::from_ids(&c, &[f]);
        assert!(matches!(CoreInput::new(t, e, m, sigma), Err(CoreError::SigmaNotInverted(g)) if g == f));
    }

    fn brute_orth_right(c: &FinCategory, sigma: &MorphismClass) -> MorphismClass {
        MorphismClass::from_fn(c, |m| sigma.ids().iter().all(|&e| orthogonality_witness(c, e, m).is_none()))
    }

    #[test]
    fn classes_for_every_sub_sigma_match_direct_sweep() {
        let c = Arc::new(presets::finset(&[0, 1, 2]));
        let (e, m) = (MorphismClass::epis(&c), MorphismClass::monos(&c));
        for t in monads(&c, &Budget::default()).unwrap() {
            let full = sigma_t(&t);
            let ids = full.ids();
            for mask in 0u32..(1 << ids.len().min(10)) {
                let picked: Vec<MorId> =
                    ids.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &f)| f).collect();
                let sigma = MorphismClass::from_ids(&c, &picked);
                let input = CoreInput::new(t.clone(), e.clone(), m.clone(), sigma.clone()).unwrap();
                let closed = closed_embeddings(&input);
                assert_eq!(closed, brute_orth_right(&c, &sigma).intersection(&m));
                assert_eq!(crate::monadcore::dense_closed_prefactorization(&input), None);
                let dense = dense_morphisms(&input);
                assert!(input.e_class.is_subset(&dense));
                if let Ok(fs) = check_factorization_assumption(&input) {
                    let r = build_reflection(&input).unwrap();
                    assert!(r.diagnostics.all_passed());
                    assert!(stability_suite(&r).all_passed());
                    assert!(core_propositions(&r).all_passed());
                    assert_eq!(fs.right, r.closed);
                }
            }
        }
    }

    #[test]
    fn sigma_empty_and_sigma_iso_agree() {
        let c = Arc::new(presets::finset(&[0, 1, 2]));
        let t = MonadData::identity(c.clone());
        let (e, m) = (MorphismClass::epis(&c), MorphismClass::monos(&c));
        let a = CoreInput::new(t.clone(), e.clone(), m.clone(), MorphismClass::empty(&c)).unwrap();
        let b = CoreInput::new(t, e.clone(), m.clone(), MorphismClass::isos(&c)).unwrap();
        assert_eq!(closed_embeddings(&a), m);
        assert_eq!(dense_morphisms(&a), e);
        assert_eq!(closed_embeddings(&b), m);
        assert_eq!(dense_morphisms(&b), e);
    }

    #[test]
    fn degenerate_category() {
        let c = Arc::new(presets::discrete(0));
        let t = MonadData::identity(c.clone());
        let r = idempotent_core(t, MorphismClass::empty(&c), MorphismClass::empty(&c)).unwrap();
        assert!(r.subcategory.is_empty());
        assert!(full_report(&r, &Budget::default()).all_passed());
    }

    #[test]
    fn missing_image_breaks_the_assumption() {
        // FinSet{1,3} has no object through which a rank-2 map could factor
        let c = Arc::new(presets::finset(&[1, 3]));
        let (e, m) = (MorphismClass::epis(&c), MorphismClass::monos(&c));
        let input = CoreInput::new(MonadData::identity(c.clone()), e, m, MorphismClass::isos(&c)).unwrap();
        let f = c.find_morphism("3>3:[0,0,1]").unwrap();
        assert_eq!(check_factorization_assumption(&input).err(), Some(f));
        assert_eq!(build_reflection(&input).err(), Some(CoreError::AssumptionUnavailable(f)));
    }
}
