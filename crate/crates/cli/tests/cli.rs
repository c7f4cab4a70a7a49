//! End-to-end tests driving the compiled binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn quatlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatlab"))
        .args(args)
        .env_remove("QUATLAB_FIXTURES")
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "bad JSON ({e}): {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn classify_q28() {
    let out = quatlab(&["classify", "--group", "q28"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"]["type"], "I");
    assert_eq!(v["results"]["mH"], 3);
}

#[test]
fn classify_accepts_the_mini_language_and_json() {
    let out = quatlab(&["classify", "--group", "typeI:m=15,n=4,r=14"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"]["type"], "I");

    let out = quatlab(&[
        "classify",
        "--group",
        r#"{"variant":"SL2","p":7}"#,
    ]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["results"]["type"], "Vb");
}

#[test]
fn sfc_verdicts() {
    let out = quatlab(&["sfc", "10,30"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"]["verdict"], false);
    assert!(v["results"]["trace"].as_array().unwrap().len() >= 1);

    let out = quatlab(&["sfc", "2,6"]);
    assert_eq!(stdout_json(&out)["results"]["verdict"], true);
}

#[test]
fn mass_and_zeta_values() {
    let out = quatlab(&["mass", "--m", "16"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"]["ei"], "5/48");
    assert_eq!(v["results"]["mass"], "5/48");

    let out = quatlab(&["zeta", "-1", "--m", "16"]);
    assert!(out.status.success());
    assert_eq!(stdout_json(&out)["results"]["value"], "5/6");

    let out = quatlab(&["zeta", "-2", "--m", "16"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn obstruction_verdicts() {
    let out = quatlab(&["obstruction", "--m", "28"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"]["numerator_power_of_two"], false);
    assert_eq!(v["results"]["sfc_excluded"], true);
}

#[test]
fn witness_for_q28() {
    let out = quatlab(&["witness", "--q4n", "28"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"]["indices"], serde_json::json!([2, 14]));
    assert_eq!(v["results"]["verdict"], false);
}

#[test]
fn swan_product_cli() {
    let out = quatlab(&["swan", "--N", "28", "--mul", "3,5"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"]["product_r"], 15);
    assert_eq!(v["results"]["is_free"], false);
}

#[test]
fn cancel_q28() {
    let out = quatlab(&["cancel", "--group", "q28"]);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["cancellation"], false);
    assert_eq!(v["results"]["mH"], 3);
}

#[test]
fn validation_errors_exit_2() {
    let out = quatlab(&["classify", "--group", "frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cannot parse"));

    let out = quatlab(&["sfc", "4,6"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("2-adic"));

    let out = quatlab(&["nonsense-command"]);
    assert!(!out.status.success());
}

#[test]
fn identical_runs_are_byte_identical() {
    let a = quatlab(&["milnor", "q28"]);
    let b = quatlab(&["milnor", "q28"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn text_mode_renders_flat() {
    let out = quatlab(&["--text", "classify", "--group", "q28"]);
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("type: \"I\""));
    assert!(serde_json::from_slice::<serde_json::Value>(&out.stdout).is_err());
}

#[test]
fn bpq_and_mh_commands() {
    let out = quatlab(&["bpq", "--group", "typeII:t=15,s=1,r=1,n=3,a=11,b=4"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(
        v["results"]["maximal_quotients"],
        serde_json::json!(["Q24", "Q40"])
    );

    let out = quatlab(&["mh", "--group", "q28"]);
    assert_eq!(stdout_json(&out)["results"]["mH"], 3);
}

#[test]
fn bound_reports_certified_integer_and_trace() {
    let out = quatlab(&["bound", "--mh", "50"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"]["n0"], 34);
    assert_eq!(v["results"]["certified_minimum"], "1");
    assert!(v["results"]["interval_trace"]["coefficient"].is_string());

    let out = quatlab(&["bound", "--mh", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn milnor_l1030_reports_distinct_classes() {
    let out = quatlab(&["milnor", "l1030"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"]["report"]["classes_distinct"], true);
    assert_eq!(v["results"]["report"]["unit_count"], 5760);

    let out = quatlab(&["milnor", "bogus"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn approx_adds_float_companions() {
    let out = quatlab(&["--approx", "mass", "--m", "16"]);
    let v = stdout_json(&out);
    assert_eq!(v["results"]["ei"], "5/48");
    let x = v["results"]["ei_approx"].as_f64().unwrap();
    assert!((x - 5.0 / 48.0).abs() < 1e-12);
}

#[test]
fn mass_without_fixture_reports_note() {
    let out = quatlab(&["mass", "--m", "34"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["results"]["mass"].is_null());
    assert!(v["results"]["mass_note"]
        .as_str()
        .unwrap()
        .contains("fixture"));
}

#[test]
fn fixtures_env_var_is_honoured() {
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let out = Command::new(env!("CARGO_BIN_EXE_quatlab"))
        .args(["verify-paper", "--only", "ei"])
        .env("QUATLAB_FIXTURES", &src)
        .output()
        .unwrap();
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["results"]["fixture_dir"]
        .as_str()
        .unwrap()
        .contains("fixtures"));

    let out = Command::new(env!("CARGO_BIN_EXE_quatlab"))
        .args(["verify-paper", "--only", "ei"])
        .env("QUATLAB_FIXTURES", "/nonexistent-quatlab-dir")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_paper_filtered() {
    let out = quatlab(&["verify-paper", "--only", "milnor"]);
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["results"]["all_passed"], true);
    assert_eq!(v["results"]["checks"].as_array().unwrap().len(), 3);
    assert!(v["results"]["fixture_hashes"].is_object());
}

#[test]
fn corrupted_fixture_fails_only_that_anchor() {
    // Copy the repo fixtures, corrupt the m=16 Eichler constant, and point
    // the binary at the copy.
    let src = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    let dir = std::env::temp_dir().join(format!("quatlab-fixtures-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for file in ["fields.json", "milnor_fixtures.json", "reference_values.json"] {
        std::fs::copy(src.join(file), dir.join(file)).unwrap();
    }
    let reference = std::fs::read_to_string(dir.join("reference_values.json")).unwrap();
    assert!(reference.contains("5/48"));
    std::fs::write(
        dir.join("reference_values.json"),
        reference.replace("5/48", "5/49"),
    )
    .unwrap();

    let out = quatlab(&[
        "verify-paper",
        "--fixtures",
        dir.to_str().unwrap(),
        "--only",
        "ei",
    ]);
    assert_eq!(out.status.code(), Some(3));
    let v = stdout_json(&out);
    assert_eq!(v["results"]["all_passed"], false);
    assert_eq!(v["results"]["first_failure"]["id"], "ei-constants");
    // The companion check on the same fixtures still passes.
    let failing: Vec<&str> = v["results"]["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["id"].as_str().unwrap())
        .collect();
    assert_eq!(failing, vec!["ei-constants"]);

    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_paper_full_suite_passes() {
    let out = quatlab(&["verify-paper"]);
    assert!(
        out.status.success(),
        "verify-paper failed: {}",
        String::from_utf8_lossy(&out.stdout)
    );
    let v = stdout_json(&out);
    assert_eq!(v["results"]["all_passed"], true);
    assert_eq!(v["results"]["failed"], 0);
}
