use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use structura::cli::run;
use structura::exactla::FgAbGroup;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name).display().to_string()
}

fn structura(args: &[&str]) -> structura::cli::Outcome {
    run(std::iter::once("structura").chain(args.iter().copied()))
}

fn json_of(args: &[&str]) -> Value {
    let mut all = vec!["--output", "json"];
    all.extend_from_slice(args);
    let out = structura(&all);
    assert_eq!(out.code, 0, "{}", out.stderr);
    serde_json::from_str(&out.stdout).unwrap()
}

#[test]
fn derived_cohomology_of_the_pseudocircle() {
    let out = structura(&["cohomology", "--mode", "derived", &data("pseudocircle.json"), &data("constZ.json"), "--max-degree", "2"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout, "H^0 = Z\nH^1 = Z\nH^2 = 0\n");
}

#[test]
fn cech_cohomology_with_a_cover_and_a_chain() {
    for covers in ["pseudocircle_covers.json", "pseudocircle_chain.json"] {
        let out = structura(&["cohomology", "--mode", "cech", "--covers", &data(covers), &data("pseudocircle.json"), &data("constZ.json"), "--max-degree", "1"]);
        assert_eq!(out.stdout, "H^0 = Z\nH^1 = Z\n", "{covers}");
    }
}

#[test]
fn spec_of_z12() {
    let out = structura(&["spec", &data("zmod12.json")]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("points: 2\ntopology: discrete\n"));
    assert!(out.stdout.contains("(2): stalk Z/4 (local)"));
    assert!(out.stdout.contains("(3): stalk Z/3 (local)"));
    let j = json_of(&["spec", &data("zmod12.json")]);
    assert_eq!(j["points"].as_array().unwrap().len(), 2);
}

#[test]
fn check_rejects_with_a_witness() {
    let out = structura(&["check", &data("notasheaf.json")]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("gluing fails"), "{}", out.stdout);
    assert!(out.stdout.contains("witness"));
    let derived = structura(&["cohomology", &data("notasheaf.json")]);
    assert_eq!(derived.code, 1);
}

#[test]
fn check_accepts_sheaves_and_flags_non_local_rings() {
    assert_eq!(structura(&["check", &data("pseudocircle.json"), &data("constZ.json")]).code, 0);
    assert_eq!(structura(&["check", &data("sierpinski_skyscraper.json")]).code, 0);
    let ring = structura(&["check", &data("ring_z6_point.json")]);
    assert_eq!(ring.code, 1);
    assert!(ring.stdout.contains("locally ringed: no"));
}

#[test]
fn structured_assemblies() {
    let rows = json_of(&["cohomology", "--mode", "structured", "--assembly", "rows", &data("structured_z_z2.json")]);
    assert_eq!(rows["rows"].as_array().unwrap().len(), 2);
    let total = json_of(&["cohomology", "--mode", "structured", &data("structured_z_z2.json")]);
    let h: Vec<FgAbGroup> = serde_json::from_value(total["cohomology"].clone()).unwrap();
    assert_eq!(h[1], FgAbGroup::from_parts(1, &[2]).unwrap());
    let hpq = json_of(&["cohomology", "--mode", "structured", "--assembly", "hpq", &data("structured_z_z2.json")]);
    assert_eq!(hpq["hpq"][1][1], serde_json::json!({"rank": 0, "torsion": [2]}));
}

#[test]
fn grids_and_rejected_grids() {
    assert_eq!(structura(&["cohomology", "--mode", "grid", &data("grid_two_rows.json")]).stdout, "H^0 = 0\nH^1 = 0\nH^2 = 0\n");
    assert_eq!(structura(&["cohomology", "--mode", "grid", &data("not_a_complex.json")]).code, 1);
}

#[test]
fn hochschild_commands() {
    let total = json_of(&["hochschild", &data("f2_pair.json"), "--max-degree", "3"]);
    assert_eq!(total["dimensions"], serde_json::json!([1, 1, 0, 0]));
    assert_eq!(total["union_rows"], serde_json::json!([[1, 0, 0, 0], [1, 0, 0, 0]]));
    let dual = json_of(&["hochschild", &data("dual_numbers_q.json")]);
    assert_eq!(dual["dimensions"], serde_json::json!([2, 1, 1]));
    assert_eq!(structura(&["hochschild", &data("algebra_f2.json"), "--max-degree", "9"]).code, 2);
}

#[test]
fn k0_and_completion() {
    assert_eq!(json_of(&["k0", "--m", "2", &data("pseudocircle.json")])["group"], serde_json::json!({"rank": 2, "torsion": []}));
    assert_eq!(json_of(&["k0", "--m", "2", &data("two_points_discrete.json")])["group"], serde_json::json!({"rank": 4, "torsion": []}));
    assert_eq!(json_of(&["k0", "--m", "2", &data("bundle_pseudocircle.json")])["group"]["rank"], 2);
    assert_eq!(json_of(&["complete", &data("monoid_bounded_n.json")])["group"], serde_json::json!({"rank": 1, "torsion": []}));
    assert_eq!(json_of(&["complete", &data("monoid_idempotent.json")])["group"], serde_json::json!({"rank": 0, "torsion": []}));
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(structura(&["cohomology", &data("missing.json")]).code, 2);
    assert_eq!(structura(&["cohomology", "--mode", "cech", &data("pseudocircle.json"), &data("constZ.json")]).code, 2);
    assert_eq!(structura(&["cohomology", "--covers", &data("pseudocircle_covers.json"), &data("pseudocircle.json"), &data("constZ.json")]).code, 2);
    assert_eq!(structura(&["frobnicate"]).code, 2);
    assert_eq!(structura(&["cohomology", "--mode", "sideways", &data("constZ.json")]).code, 2);

    let dir = tempfile::tempdir().unwrap();
    let broken = dir.path().join("broken.json");
    std::fs::write(&broken, "{\n  \"points\": [\"a\",\n  \"opens\": []\n}\n").unwrap();
    let out = structura(&["check", &broken.display().to_string()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
    let unknown = dir.path().join("unknown.json");
    std::fs::write(&unknown, r#"{"space": {"named": "pseudocircle"}, "values": {"a": {"rank": 1}}}"#).unwrap();
    let out = structura(&["check", &unknown.display().to_string()]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("/values"), "{}", out.stderr);
}

#[test]
fn json_output_is_deterministic_and_round_trips() {
    let args = ["--output", "json", "cohomology", "--mode", "structured", &data("structured_z_z2.json")];
    let first = structura(&args).stdout;
    assert_eq!(first, structura(&args).stdout);
    let v: Value = serde_json::from_str(&first).unwrap();
    for g in v["cohomology"].as_array().unwrap() {
        let parsed: FgAbGroup = serde_json::from_value(g.clone()).unwrap();
        assert_eq!(serde_json::to_value(&parsed).unwrap(), *g);
    }
}

#[test]
fn binary_exit_codes_and_element_bound() {
    let bin = env!("CARGO_BIN_EXE_structura");
    let ok = Command::new(bin).args(["spec", &data("zmod12.json")]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let bounded = Command::new(bin).env("STRUCTURA_MAX_ELEMENTS", "8").args(["spec", &data("zmod12.json")]).output().unwrap();
    assert_eq!(bounded.status.code(), Some(2));
    let garbage = Command::new(bin).env("STRUCTURA_MAX_ELEMENTS", "lots").args(["spec", &data("zmod12.json")]).output().unwrap();
    assert_eq!(garbage.status.code(), Some(2));
    let rejected = Command::new(bin).args(["check", &data("notasheaf.json")]).output().unwrap();
    assert_eq!(rejected.status.code(), Some(1));
}
