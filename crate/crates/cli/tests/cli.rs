use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idemcore")).args(args).output().expect("spawn idemcore")
}

fn run_with_threads(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_idemcore"))
        .args(args)
        .env("IDEMCORE_THREADS", threads)
        .output()
        .expect("spawn idemcore")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn write_temp(text: &str) -> tempfile::NamedTempFile {
    let f = tempfile::Builder::new().suffix(".json").tempfile().expect("temp file");
    std::fs::write(f.path(), text).expect("write");
    f
}

const POSET2: &str = r#"{
  "version": 1,
  "categories": [{"id": "P", "preset": "poset2"}],
  "functors": [{"id": "Id", "source": "P", "target": "P", "objects": {"0": "0", "1": "1"}, "morphisms": {"0<1": "0<1"}}],
  "monads": [{"id": "identity", "functor": "Id", "unit": {"0": "id_0", "1": "id_1"}, "multiplication": {"0": "id_0", "1": "id_1"}}],
  "sites": [
    {"id": "dense", "base": "P", "topology": "dense"},
    {"id": "identity", "base": "P", "topology": "identity"}
  ],
  "presheaves": [{"id": "two", "base": "P", "cards": {"0": 2, "1": 2}, "restrictions": {"0<1": [0, 1]}}]
}"#;

#[test]
fn dense_sheafification_of_two_point_presheaf_agrees() {
    let f = write_temp(POSET2);
    let p = f.path().to_str().unwrap();
    let o = run(&["sheafify", p, "--presheaf", "two", "--topology", "dense", "--method", "both"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("PASS [exact] core and plus-plus isomorphic under X"), "{out}");
}

#[test]
fn core_of_identity_monad_passes() {
    let f = write_temp(POSET2);
    let o = run(&["core", f.path().to_str().unwrap(), "--monad", "identity"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn identity_topology_sweep_at_bound_three_passes() {
    let f = write_temp(POSET2);
    let o = run(&["verify-lt", f.path().to_str().unwrap(), "--topology", "identity", "--bound", "3"]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(!out.contains("FAIL") && !out.contains("SKIP"), "{out}");
}

#[test]
fn broken_file_exits_with_failure() {
    let o = run(&["validate", fixture("broken/missing_composite.json").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL [exact] category E: composite e ∘ e missing"));
}

#[test]
fn usage_errors_exit_64_and_help_exits_0() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&["core", "x.json"]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn budget_exceedance_exits_2() {
    let f = write_temp(
        r#"{"version": 1, "budget": {"max_base_objects": 1},
            "categories": [{"id": "P", "preset": "poset2"}],
            "presheaves": [{"id": "x", "base": "P", "cards": {"0": 1, "1": 1}, "restrictions": {"0<1": [0]}}]}"#,
    );
    let o = run(&["validate", f.path().to_str().unwrap()]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(2), "{out}");
    assert!(out.contains("SKIP"), "{out}");
}

#[test]
fn json_reports_are_identical_across_runs_and_thread_counts() {
    let p = fixture("valid/campaigns.json");
    let args = ["suite", p.to_str().unwrap(), "--format", "json"];
    let one = run_with_threads(&args, "1");
    let three = run_with_threads(&args, "3");
    assert_eq!(one.status.code(), Some(0), "{}", stdout(&one));
    assert_eq!(one.stdout, three.stdout);
    assert_eq!(one.stdout, run(&args).stdout);
}

#[test]
fn timings_go_to_their_own_file() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("timings.json");
    let p = fixture("valid/monad_reflector.json");
    let o = run(&["core", p.to_str().unwrap(), "--monad", "top", "--format", "json", "--timings", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let timings: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert!(timings["total_ms"].is_number());
    assert!(!stdout(&o).contains("_ms"));
}

#[test]
fn every_valid_fixture_validates() {
    for entry in std::fs::read_dir(fixture("valid")).unwrap() {
        let p = entry.unwrap().path();
        let o = run(&["validate", p.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(0), "{}: {}", p.display(), stdout(&o));
    }
}

#[test]
fn campaign_files_run_their_campaigns() {
    let p = fixture("valid/sigma_class.json");
    let o = run(&["suite", p.to_str().unwrap()]);
    let out = stdout(&o);
    assert_eq!(o.status.code(), Some(0), "{out}");
    assert!(out.contains("core/"), "{out}");
}

#[test]
fn unknown_version_is_rejected() {
    let f = write_temp(r#"{"version": 7}"#);
    let o = run(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("unsupported version 7"));
}

#[test]
fn orthogonality_of_classes_and_maps() {
    let fs = fixture("valid/factorization_system.json");
    let o = run(&["orth", fs.to_str().unwrap(), "--pair", "epis", "monos", "--category", "F"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["orth", fs.to_str().unwrap(), "--pair", "all", "all", "--category", "F"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("is not orthogonal to"));
    let maps = fixture("valid/map.json");
    let o = run(&["orth", maps.to_str().unwrap(), "--pair", "swap", "bang", "--enriched"]);
    assert!(stdout(&o).contains("PASS [exact] enriched agrees with representable tensoring"));
}
