//! Randomized laws over small generated categories, presheaves and topologies.

use std::sync::{Arc, OnceLock};

use idemcore::factsys::{objects_top, orth_left, orth_right, sigma_perp_objects, MorphismClass};
use idemcore::fincat::enumerate::monads;
use idemcore::fincat::monad::build_kleisli;
use idemcore::fincat::reflect::replete_closure;
use idemcore::fincat::{enumerate_reflective_subcategories, presets, FinCategory};
use idemcore::lttop::{
    check_grothendieck, covering_sieves, enumerate_lt_topologies, is_sheaf, iso_under, sheafify_oracle,
    sheafify_via_core, topology_of, LtTopology,
};
use idemcore::presheaf::{
    enumerate_presheaves, exponential, hom_set, image, preimage, product, subpresheaves, Omega, Presheaf,
};
use idemcore::Budget;
use proptest::prelude::*;
use proptest::sample::select;

/// Preorders on up to four objects from arbitrary generating pairs.
fn preorders() -> impl Strategy<Value = FinCategory> {
    (1usize..=4).prop_flat_map(|n| {
        proptest::collection::vec((0..n, 0..n), 0..6).prop_map(move |pairs| {
            let names: Vec<String> = (0..n).map(|i| format!("p{i}")).collect();
            let names: Vec<&str> = names.iter().map(String::as_str).collect();
            presets::preorder(&names, &pairs).expect("preorder")
        })
    })
}

/// Small categories that are not thin.
fn finsets() -> impl Strategy<Value = FinCategory> {
    select(vec![vec![1, 2], vec![0, 1, 2], vec![0, 2], vec![2], vec![1, 3]]).prop_map(|s| presets::finset(&s))
}

fn class_on(c: &FinCategory, bits: u64) -> MorphismClass {
    MorphismClass::from_fn(c, |f| bits >> (f % 64) & 1 == 1)
}

struct Site {
    omega: Arc<Omega>,
    topologies: Vec<LtTopology>,
    presheaves: Vec<Presheaf>,
}

fn sites() -> &'static [Site] {
    static SITES: OnceLock<Vec<Site>> = OnceLock::new();
    SITES.get_or_init(|| {
        let budget = Budget::default();
        [presets::terminal(), presets::poset2(), presets::chain(3), presets::parallel_pair()]
            .into_iter()
            .map(|c| {
                let base = Arc::new(c);
                let omega = Arc::new(Omega::new(base.clone()).expect("omega"));
                let topologies = enumerate_lt_topologies(&omega, &budget).expect("topologies");
                let presheaves = enumerate_presheaves(&base, 2, &budget).expect("presheaves");
                Site { omega, topologies, presheaves }
            })
            .collect()
    })
}

/// A site, one of its topologies and two presheaves on it.
fn site_data() -> impl Strategy<Value = (usize, usize, usize, usize)> {
    (0..sites().len()).prop_flat_map(|s| {
        let site = &sites()[s];
        (Just(s), 0..site.topologies.len(), 0..site.presheaves.len(), 0..site.presheaves.len())
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 64, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn composition_is_associative(c in prop_oneof![preorders(), finsets()]) {
        for f in c.morphisms() {
            for g in c.morphisms().filter(|&g| c.src(g) == c.dst(f)) {
                for h in c.morphisms().filter(|&h| c.src(h) == c.dst(g)) {
                    prop_assert_eq!(c.comp(c.comp(h, g), f), c.comp(h, c.comp(g, f)));
                }
            }
        }
    }

    #[test]
    fn monads_on_preorders_are_idempotent_with_inverse_law(c in preorders()) {
        let c = Arc::new(c);
        for m in monads(&c, &Budget::default()).unwrap() {
            let all_mu_iso = c.objects().all(|b| c.is_iso(m.mu(b)));
            prop_assert_eq!(m.is_idempotent(), all_mu_iso);
            if all_mu_iso {
                prop_assert!(m.idempotent_inverse_law().is_ok());
            }
        }
    }

    #[test]
    fn kleisli_adjunction_induces_its_monad(c in prop_oneof![preorders(), finsets()]) {
        let c = Arc::new(c);
        for m in monads(&c, &Budget::default()).unwrap() {
            prop_assert_eq!(build_kleisli(&m).adjunction.induced_monad(), m);
        }
    }

    #[test]
    fn reflections_and_idempotent_monads_correspond(c in preorders()) {
        let c = Arc::new(c);
        let budget = Budget::default();
        let refl = enumerate_reflective_subcategories(&c, &budget).unwrap();
        let ms = monads(&c, &budget).unwrap();
        for r in &refl {
            prop_assert!(ms.contains(&r.monad));
        }
        // up to isomorphism: monads with the same replete image give the same subcategory
        let mut images: Vec<Vec<usize>> = ms
            .iter()
            .filter(|m| m.is_idempotent())
            .map(|m| replete_closure(&c, &m.fixed_objects()))
            .collect();
        images.sort();
        images.dedup();
        let mut objects: Vec<Vec<usize>> = refl.iter().map(|r| r.objects.clone()).collect();
        objects.sort();
        prop_assert_eq!(images, objects);
    }

    #[test]
    fn orthogonality_closure_laws(c in prop_oneof![preorders(), finsets()], bits in any::<u64>()) {
        let sigma = class_on(&c, bits);
        let right = orth_right(&c, &sigma);
        let left = orth_left(&c, &right);
        prop_assert!(sigma.is_subset(&left));
        prop_assert_eq!(&orth_right(&c, &left), &right);
        let perp = sigma_perp_objects(&c, &sigma);
        let top = objects_top(&c, &perp);
        prop_assert!(sigma.is_subset(&top));
        prop_assert_eq!(sigma_perp_objects(&c, &top), perp);
    }

    #[test]
    fn image_is_left_adjoint_to_preimage((s, _, a, b) in site_data(), pick in any::<prop::sample::Index>()) {
        let site = &sites()[s];
        let (x, y) = (&site.presheaves[a], &site.presheaves[b]);
        let budget = Budget::default();
        let maps = hom_set(x, y, &budget).unwrap();
        prop_assume!(!maps.is_empty());
        let f = &maps[pick.index(maps.len())];
        let subs_x = subpresheaves(x, &budget).unwrap();
        let subs_y = subpresheaves(y, &budget).unwrap();
        for m in &subs_x {
            for n in &subs_y {
                prop_assert_eq!(image(f, m, y).le(n), m.le(&preimage(f, n)));
            }
        }
    }

    #[test]
    fn exponential_law_counts((s, _, a, b) in site_data(), z in any::<prop::sample::Index>()) {
        let site = &sites()[s];
        let (x, y) = (&site.presheaves[a], &site.presheaves[b]);
        let z = &site.presheaves[z.index(site.presheaves.len())];
        let budget = Budget::default();
        let zx = product(z, x);
        let yx = exponential(x, y, &budget).unwrap();
        prop_assert_eq!(
            hom_set(&zx.object, y, &budget).unwrap().len(),
            hom_set(z, &yx.object, &budget).unwrap().len()
        );
    }

    #[test]
    fn topologies_round_trip_through_covering_sieves((s, t, _, _) in site_data()) {
        let site = &sites()[s];
        let j = &site.topologies[t];
        let g = covering_sieves(j);
        prop_assert!(check_grothendieck(&site.omega, &g).is_ok());
        let back = topology_of(&site.omega, &g).unwrap();
        prop_assert_eq!(covering_sieves(&back), g);
    }

    #[test]
    fn sheafification_is_idempotent_and_agrees((s, t, a, _) in site_data()) {
        let site = &sites()[s];
        let (j, x) = (&site.topologies[t], &site.presheaves[a]);
        let budget = Budget::default();
        let plus = sheafify_oracle(j, x, &budget).unwrap();
        prop_assert!(is_sheaf(j, &plus.object));
        let again = sheafify_oracle(j, &plus.object, &budget).unwrap();
        prop_assert!(again.unit.is_iso(&again.object));
        let core = sheafify_via_core(j, x, &budget).unwrap();
        let iso = iso_under(x, &core.object, &core.unit, &plus.object, &plus.unit, &budget).unwrap();
        prop_assert!(iso.is_some());
    }
}
