use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn lagcat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lagcat"))
        .args(args)
        .env_remove("LAGCAT_TOL")
        .output()
        .expect("spawn lagcat")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

#[test]
fn rotation_t_passes_check() {
    let out = lagcat(&["check", "--input", &data("rotation_t.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["passed"], true);
    assert_eq!(v["data"]["kind"], "Lagrangian");
}

#[test]
fn printed_rotation_matrix_fails_check() {
    let out = lagcat(&["check", "--input", &data("rotation_printed_t.json")]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    let failed: Vec<&str> = v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"isotropy"), "{failed:?}");
    assert!(failed.contains(&"graph_T_residual"), "{failed:?}");
}

#[test]
fn malformed_input_exits_2() {
    let out = lagcat(&["check", "--input", &data("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(json(&out)["error"].as_str().unwrap().contains("malformed"));

    let out = lagcat(&["check", "--input", &data("does_not_exist.json")]);
    assert_eq!(out.status.code(), Some(2));

    let out = lagcat(&["check"]);
    assert_eq!(out.status.code(), Some(2));
    let out = lagcat(&["sweep", "compose", "--field", "H"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn help_and_version_exit_0() {
    assert_eq!(lagcat(&["--help"]).status.code(), Some(0));
    let out = lagcat(&["--version"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains(env!("CARGO_PKG_VERSION")));
}

#[test]
fn convert_output_file_roundtrips() {
    let dir = tempfile::tempdir().unwrap();
    let t_path = dir.path().join("t.json");
    let u_path = dir.path().join("u.json");
    let t_str = t_path.to_str().unwrap();
    let u_str = u_path.to_str().unwrap();

    let out = lagcat(&["convert", "u-to-t", "--input", &data("rotation_u.json"), "-o", t_str]);
    assert_eq!(out.status.code(), Some(0));
    let produced: Value = serde_json::from_str(&std::fs::read_to_string(&t_path).unwrap()).unwrap();
    let golden: Value = serde_json::from_str(&std::fs::read_to_string(data("rotation_t.json")).unwrap()).unwrap();
    assert_eq!(produced["repr"], "graph_T");
    let entries = |v: &Value| -> Vec<f64> {
        v["matrix"]["entries"].as_array().unwrap().iter().map(|z| z[0].as_f64().unwrap()).collect()
    };
    for (a, b) in entries(&produced).iter().zip(entries(&golden)) {
        assert!((a - b).abs() < 1e-12);
    }

    assert_eq!(lagcat(&["check", "--input", t_str]).status.code(), Some(0));
    let out = lagcat(&["convert", "t-to-u", "--input", t_str, "-o", u_str]);
    assert_eq!(out.status.code(), Some(0));
    let back: Value = serde_json::from_str(&std::fs::read_to_string(&u_path).unwrap()).unwrap();
    let original: Value = serde_json::from_str(&std::fs::read_to_string(data("rotation_u.json")).unwrap()).unwrap();
    for (a, b) in entries(&back).iter().zip(entries(&original)) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn compose_methods_agree() {
    let u = data("rotation_u.json");
    let out = lagcat(&["compose", "--left", &u, "--right", &u, "--method", "both"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let v = json(&out);
    let check = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "formula_vs_bruteforce").unwrap();
    assert!(check["value"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn index_of_odd_defect_is_one() {
    let out = lagcat(&["index", "--input", &data("polarized_2_1.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["data"]["value"], 1);
    assert_eq!(v["data"]["class"], "1 in Z");

    let out = lagcat(&["index", "--input", &data("polarized_1_1.json")]);
    assert_eq!(json(&out)["data"]["value"], 0);
}

#[test]
fn identity_classifies_as_both_types() {
    let p = data("polarized_1_1.json");
    let out = lagcat(&["classify", "--p0", &p, "--p1", &p, "--input", &data("identity_t.json")]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["data"]["type"], "both");
}

#[test]
fn counterexample_reports_not_closed() {
    let out = lagcat(&["demo", "counterexample", "--alpha1", "0.25", "--alpha2", "-0.25"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["data"]["verdict"], "not_closed");
    assert_eq!(v["data"]["ladder_decays"], true);

    let out = lagcat(&["demo", "counterexample", "--alpha1", "1", "--alpha2", "2"]);
    assert_eq!(json(&out)["data"]["verdict"], "closed_lagrangian");
}

#[test]
fn cylinder_demo_passes() {
    let out = lagcat(&["demo", "cylinder", "--l1", "0.3", "--l2", "0.6", "--modes", "8"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let args = ["sweep", "roundtrip", "--seed", "7", "--cases", "12", "--dims", "4"];
    let a = lagcat(&args);
    let b = lagcat(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let c = lagcat(&["sweep", "roundtrip", "--seed", "8", "--cases", "12", "--dims", "4"]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn tolerance_from_env_and_flag() {
    let input = data("rotation_t.json");
    let strict = Command::new(env!("CARGO_BIN_EXE_lagcat"))
        .args(["check", "--input", &input])
        .env("LAGCAT_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(strict.status.code(), Some(1));

    let overridden = Command::new(env!("CARGO_BIN_EXE_lagcat"))
        .args(["--tol", "1e-8", "check", "--input", &input])
        .env("LAGCAT_TOL", "1e-30")
        .output()
        .unwrap();
    assert_eq!(overridden.status.code(), Some(0));
}

#[test]
fn text_format_has_verdict_line() {
    let out = lagcat(&["--format", "text", "check", "--input", &data("rotation_t.json")]);
    let s = String::from_utf8_lossy(&out.stdout);
    assert!(s.starts_with("check: PASS"), "{s}");
}
