//! End-to-end tests of the command-line interface: exit codes, output
//! shapes, and the determinism and round-trip guarantees of the file
//! formats.

use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};
use vatc::schema::{from_json, to_json_pretty, EndoFile, GenSetFile, GroupFile};

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn fixture_str(name: &str) -> String {
    fixture(name).to_str().unwrap().to_string()
}

fn vatc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vatc")).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

fn temp_json(contents: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".json").tempfile().unwrap();
    f.write_all(contents.as_bytes()).unwrap();
    f.flush().unwrap();
    f
}

#[test]
fn every_fixture_parses_validates_and_reserializes_byte_identically() {
    let groups = ["z2_by_c2.json", "z2.json", "z1.json", "z2xc2.json"];
    for name in groups {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let file: GroupFile = from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        let group = file.to_group().unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(group.validate().is_valid(), "{name} must validate");
        assert_eq!(to_json_pretty(&GroupFile::from_group(&group)), text, "{name} round trip");
    }
    let endos = [
        ("z2_by_c2.json", "z2_by_c2_phi1.json"),
        ("z2_by_c2.json", "z2_by_c2_id.json"),
        ("z2_by_c2.json", "z2_by_c2_phi3.json"),
        ("z2.json", "z2_rot90.json"),
        ("z1.json", "z1_neg.json"),
        ("z2xc2.json", "z2xc2_rot.json"),
        ("z2xc2.json", "z2xc2_collapse.json"),
    ];
    for (gname, ename) in endos {
        let gtext = std::fs::read_to_string(fixture(gname)).unwrap();
        let group = from_json::<GroupFile>(&gtext).unwrap().to_group().unwrap();
        let etext = std::fs::read_to_string(fixture(ename)).unwrap();
        let file: EndoFile = from_json(&etext).unwrap_or_else(|e| panic!("{ename}: {e}"));
        let endo = file.to_endo(&group).unwrap_or_else(|e| panic!("{ename}: {e}"));
        assert!(endo.validate(&group).is_valid(), "{ename} must validate against {gname}");
        assert_eq!(to_json_pretty(&EndoFile::from_endo(&endo)), etext, "{ename} round trip");
    }
    for name in ["gens_std.json", "gens_alt.json"] {
        let text = std::fs::read_to_string(fixture(name)).unwrap();
        let file: GenSetFile = from_json(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(to_json_pretty(&file), text, "{name} round trip");
    }
}

#[test]
fn validate_accepts_the_fixtures() {
    let out = vatc(&["validate", &fixture_str("z2_by_c2.json")]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    assert_eq!(stdout(&out), "valid\n");

    let out = vatc(&[
        "validate",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "valid\n");
}

#[test]
fn validate_diagnoses_broken_tables_with_exit_one() {
    // coset multiplication row [1, 1] is not a permutation
    let bad = temp_json(
        r#"{"n": 2, "cosets": ["e", "t"], "mult": [[0, 1], [1, 1]],
            "cocycle": [[[0,0],[0,0]],[[0,0],[0,0]]],
            "action": [[[1,0],[0,1]],[[-1,0],[0,-1]]]}"#,
    );
    let out = vatc(&["validate", bad.path().to_str().unwrap()]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("permutation"), "got: {}", stdout(&out));

    // not multiplicative on the direct product: ((1,0), t) squares to
    // ((2,0), e), not to phi(t^2) = e
    let bad_endo = temp_json(
        r#"{"matrix": [[1, 0], [0, 1]],
            "rep_image": [{"vector": [0, 0], "coset": 0}, {"vector": [1, 0], "coset": 1}]}"#,
    );
    let out = vatc(&[
        "validate",
        &fixture_str("z2xc2.json"),
        "--endo",
        bad_endo.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
}

#[test]
fn malformed_json_is_a_parse_error_with_exit_two() {
    let truncated = temp_json(r#"{"n": 2, "cosets": ["e""#);
    let out = vatc(&["validate", truncated.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    let missing = temp_json(r#"{"n": 2}"#);
    let out = vatc(&["validate", missing.path().to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("cosets"), "names the missing field: {}", stderr(&out));

    let out = vatc(&["validate", "/nonexistent/nope.json"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn compute_commands_reject_invalid_groups_with_exit_two() {
    let bad = temp_json(
        r#"{"n": 2, "cosets": ["e", "t"], "mult": [[0, 1], [1, 1]],
            "cocycle": [[[0,0],[0,0]],[[0,0],[0,0]]],
            "action": [[[1,0],[0,1]],[[-1,0],[0,-1]]]}"#,
    );
    let out = vatc(&[
        "predict",
        bad.path().to_str().unwrap(),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("invalid group data"));
}

#[test]
fn predict_prints_ranks_and_degrees() {
    let out = vatc(&[
        "predict",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
    ]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    assert!(text.contains("e: 2"), "got: {text}");
    assert!(text.contains("t: 0"), "got: {text}");
    assert!(text.contains("fr_degree: 2"));

    let out = vatc(&[
        "predict",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi3.json"),
        "--format",
        "json",
    ]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["cosets"], serde_json::json!(["e", "t"]));
    assert_eq!(v["coset_ranks"], serde_json::json!([1, 1]));
    assert_eq!(v["fr_degree"], 1);
    assert_eq!(v["fq_degree"], 1);
    assert_eq!(v["ball_degree"], 2);
}

#[test]
fn canon_prints_the_canonical_representative() {
    let group = fixture_str("z2_by_c2.json");
    let endo = fixture_str("z2_by_c2_phi1.json");
    let out = vatc(&["canon", &group, "--endo", &endo, "--element", "5,3;e"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "1,1;e\n");

    let out = vatc(&["canon", &group, "--endo", &endo, "--element", "5,3;e", "--modulus", "4"]);
    assert_eq!(stdout(&out), "1,1;e\n");

    // bad literals are usage errors
    let out = vatc(&["canon", &group, "--endo", &endo, "--element", "5,3;nope"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn conjtest_answers_true_and_false() {
    let group = fixture_str("z2_by_c2.json");
    let endo = fixture_str("z2_by_c2_phi1.json");
    let out = vatc(&["conjtest", &group, "--endo", &endo, "--g", "1,0;e", "--h", "-1,0;e"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "true\n");
    let out = vatc(&["conjtest", &group, "--endo", &endo, "--g", "1,0;e", "--h", "0,1;e"]);
    assert_eq!(stdout(&out), "false\n");
}

#[test]
fn reidemeister_reports_finite_and_infinite() {
    let out =
        vatc(&["reidemeister", &fixture_str("z2.json"), "--endo", &fixture_str("z2_rot90.json")]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "2\n");

    let out = vatc(&[
        "reidemeister",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
    ]);
    assert_eq!(stdout(&out), "infinite\n");
}

#[test]
fn growth_emits_plain_csv_with_slope_on_stderr() {
    let out = vatc(&["growth", &fixture_str("z2_by_c2.json"), "--series", "beta", "--rmax", "3"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "r,count\n0,1\n1,6\n2,18\n3,38\n");
    assert!(stderr(&out).contains("# ball slope:"), "got: {}", stderr(&out));

    let out = vatc(&[
        "growth",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
        "--series",
        "fr",
        "--rmax",
        "4",
    ]);
    assert_eq!(stdout(&out), "r,count\n0,1\n1,4\n2,7\n3,11\n4,17\n");
}

#[test]
fn growth_json_includes_the_slope_report() {
    let out = vatc(&[
        "growth",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
        "--series",
        "fr",
        "--rmax",
        "30",
        "--window",
        "10:30",
        "--format",
        "json",
    ]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["series"]["kind"], "twisted_classes");
    assert_eq!(v["series"]["points"][1], serde_json::json!([1, 4]));
    let slope = v["slope"]["fitted_slope"].as_f64().unwrap();
    assert!((slope - 2.0).abs() < 0.2, "slope {slope}");
    assert_eq!(v["slope"]["verdict"], true);
    assert_eq!(v["slope_error"], serde_json::Value::Null);
}

#[test]
fn growth_class_series_needs_a_base_element() {
    let out = vatc(&[
        "growth",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
        "--series",
        "class",
        "--rmax",
        "5",
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--g0"));

    let out = vatc(&[
        "growth",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
        "--series",
        "class",
        "--g0",
        "0,0;t",
        "--rmax",
        "5",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "r,count\n0,0\n1,1\n2,1\n3,1\n4,1\n5,1\n");
}

#[test]
fn growth_fr_without_endo_is_an_error() {
    let out = vatc(&["growth", &fixture_str("z2_by_c2.json"), "--series", "fr", "--rmax", "5"]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("--endo"));
}

#[test]
fn quotient_csv_and_oracle_agreement() {
    let out = vatc(&[
        "quotient",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
        "--kmax",
        "6",
        "--brute",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "k,count\n1,2\n2,8\n3,6\n4,14\n5,14\n6,24\n");
    let errs = stderr(&out);
    assert_eq!(errs.matches("agree").count(), 6, "got: {errs}");
    assert!(!errs.contains("DISAGREE"));
}

#[test]
fn quotient_guard_exits_three() {
    let out = vatc(&[
        "quotient",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
        "--kmax",
        "5000",
    ]);
    assert_eq!(code(&out), 3);
    assert!(stderr(&out).contains("refusing"));
}

#[test]
fn growth_budget_guard_exits_three() {
    let out = vatc(&[
        "growth",
        &fixture_str("z2_by_c2.json"),
        "--series",
        "beta",
        "--rmax",
        "40",
        "--budget",
        "50",
    ]);
    assert_eq!(code(&out), 3);
}

#[test]
fn mismatched_generator_arity_is_rejected() {
    let bad = temp_json(r#"{"elements": [{"vector": [1, 0, 0], "coset": 0}]}"#);
    let out = vatc(&[
        "growth",
        &fixture_str("z2_by_c2.json"),
        "--series",
        "beta",
        "--rmax",
        "3",
        "--gens",
        bad.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 2);
    assert!(stderr(&out).contains("does not fit"));
}

fn strip_timing(report: &str) -> String {
    report
        .lines()
        .filter(|line| !line.trim_start().starts_with("\"timing_ms\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn verify_passes_on_the_reflection_example_and_is_deterministic() {
    let args = [
        "verify",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
        "--gens",
        &fixture_str("gens_std.json"),
    ];
    let first = vatc(&args);
    assert_eq!(code(&first), 0, "stderr: {}", stderr(&first));
    let report: serde_json::Value = serde_json::from_str(&stdout(&first)).unwrap();
    assert_eq!(report["all_passed"], true);
    assert_eq!(report["generation"], "verified");
    assert_eq!(report["reidemeister"], "infinite");
    assert_eq!(report["predictions"]["coset_ranks"], serde_json::json!([2, 0]));
    let labels: Vec<&str> =
        report["slopes"].as_array().unwrap().iter().map(|s| s["label"].as_str().unwrap()).collect();
    assert_eq!(labels, ["ball", "twisted_classes", "class:0,0;e", "class:0,0;t", "quotient"]);
    for slope in report["slopes"].as_array().unwrap() {
        assert_eq!(slope["error"], serde_json::Value::Null, "label {}", slope["label"]);
        assert_eq!(slope["report"]["verdict"], true, "label {}", slope["label"]);
    }
    assert_eq!(report["quotient_oracle"].as_array().unwrap().len(), 6);

    let second = vatc(&args);
    assert_eq!(code(&second), 0);
    assert_eq!(
        strip_timing(&stdout(&first)),
        strip_timing(&stdout(&second)),
        "verify output must be deterministic modulo timing"
    );
}

#[test]
fn verify_fails_honestly_on_a_window_too_short_for_the_asymptotics() {
    // over k in [4, 12] the quotient series has not reached its quadratic
    // regime, so the fitted slope misses degree 2 by more than the tolerance
    let out = vatc(&[
        "verify",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
        "--rmax",
        "30",
        "--kmax",
        "12",
    ]);
    assert_eq!(code(&out), 1);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["all_passed"], false);
    let quotient =
        report["slopes"].as_array().unwrap().iter().find(|s| s["label"] == "quotient").unwrap();
    assert_eq!(quotient["report"]["verdict"], false);
}

#[test]
fn verify_accepts_an_alternative_generating_set() {
    let out = vatc(&[
        "verify",
        &fixture_str("z2_by_c2.json"),
        "--endo",
        &fixture_str("z2_by_c2_phi1.json"),
        "--gens",
        &fixture_str("gens_alt.json"),
    ]);
    assert_eq!(code(&out), 0, "stderr: {}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["generation"], "verified");
    assert_eq!(report["all_passed"], true);
}
