//! Validator agreement with a direct associativity check, and report stability.

use idemcore_cli::commands::validate_model;
use idemcore_cli::model::Model;
use idemcore_cli::report::CommandReport;
use idemcore_cli::schema::parse;
use proptest::prelude::*;

/// A one-object category on `id, m1, ..` with the given products of
/// non-identity elements; element 0 is the identity.
fn monoid_file(n: usize, table: &[usize]) -> String {
    let name = |i: usize| if i == 0 { String::from("id_*") } else { format!("m{i}") };
    let morphisms: Vec<String> = (1..n).map(|i| format!(r#"{{"name": "m{i}", "src": "*", "dst": "*"}}"#)).collect();
    let mut composites = Vec::new();
    for g in 1..n {
        for f in 1..n {
            let h = table[(g - 1) * (n - 1) + (f - 1)];
            composites.push(format!(r#"["{}", "{}", "{}"]"#, name(g), name(f), name(h)));
        }
    }
    format!(
        r#"{{"version": 1, "categories": [{{"id": "M", "objects": ["*"], "morphisms": [{}], "composites": [{}]}}]}}"#,
        morphisms.join(", "),
        composites.join(", ")
    )
}

fn associative(n: usize, table: &[usize]) -> bool {
    let mul = |g: usize, f: usize| match (g, f) {
        (0, x) | (x, 0) => x,
        _ => table[(g - 1) * (n - 1) + (f - 1)],
    };
    (0..n).all(|a| (0..n).all(|b| (0..n).all(|c| mul(mul(a, b), c) == mul(a, mul(b, c)))))
}

fn monoids() -> impl Strategy<Value = (usize, Vec<usize>)> {
    (2usize..=4).prop_flat_map(|n| (Just(n), proptest::collection::vec(0..n, (n - 1) * (n - 1))))
}

fn report(text: &str) -> String {
    let model = Model::build(&parse(text).expect("parses"));
    let mut rep = CommandReport::new("validate");
    validate_model(&model, &mut rep);
    rep.render_json()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 128, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn validator_accepts_exactly_the_associative_tables((n, table) in monoids()) {
        let text = monoid_file(n, &table);
        let model = Model::build(&parse(&text).unwrap());
        prop_assert_eq!(model.problems().next().is_none(), associative(n, &table));
    }

    #[test]
    fn reports_are_byte_identical((n, table) in monoids()) {
        let text = monoid_file(n, &table);
        prop_assert_eq!(report(&text), report(&text));
    }

    #[test]
    fn only_version_one_parses(v in 0u64..1000) {
        let ok = parse(&format!(r#"{{"version": {v}}}"#)).is_ok();
        prop_assert_eq!(ok, v == 1);
    }
}
