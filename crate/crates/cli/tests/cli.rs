use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn torsion(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_torsion"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

const SEC3EX2: &str = "\
dim 6
# nilmanifold with an interval product that is calibrated
d e3 = e25
d e6 = -e24
omega = e12 + e34 + e56
psi+ = e135 - e146 - e236 - e245
";

#[test]
fn su3_report_flags_only_w2_minus() {
    let o = torsion(&["su3-report", "nil-sec3ex2", "--json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["classes"], serde_json::json!(["W2-"]));
    let flags = v["flags"].as_object().unwrap();
    for k in ["W1+", "W1-", "W2+", "W3", "W4", "W5"] {
        assert_eq!(flags[k], false, "{k}");
    }
    assert_eq!(flags["W2-"], true);
}

#[test]
fn structured_output_is_deterministic() {
    for args in [
        &["su3-report", "iwasawa-variant", "--json"][..],
        &["g2-report", "nil2step", "--json"],
        &["correspondence", "torus-circle-primitive", "--json"],
        &["list-examples", "--json"],
    ] {
        let a = torsion(args);
        let b = torsion(args);
        assert_eq!(a.status.code(), Some(0), "{args:?}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn file_input_matches_the_catalog_entry() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sec3ex2.txt", SEC3EX2);
    let o = torsion(&["validate", &f]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("valid"));
    let from_file = json(&torsion(&["su3-report", &f, "--json"]));
    let from_name = json(&torsion(&["su3-report", "nil-sec3ex2", "--json"]));
    assert_eq!(from_file["fingerprint"], from_name["fingerprint"]);
    let g = json(&torsion(&["g2-report", &f, "--json"]));
    assert_eq!(g["flags"]["calibrated"], true);
    assert_eq!(g["flags"]["cocalibrated"], false);
}

#[test]
fn invalid_structures_fail_validation() {
    let dir = tempfile::tempdir().unwrap();
    let jacobi = write(
        dir.path(),
        "bad.txt",
        "dim 6\nd e1 = e23\nd e2 = e13\nd e3 = e12\nd e4 = e15\n",
    );
    let o = torsion(&["validate", &jacobi]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("Jacobi"), "{}", stderr(&o));
    let unstable = write(dir.path(), "unstable.txt", "dim 6\npsi+ = e123\n");
    let o = torsion(&["validate", &unstable]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn correspondence_with_a_curvature_file() {
    let dir = tempfile::tempdir().unwrap();
    let rho = write(dir.path(), "rho.txt", "rho = e12 - e34\n");
    let o = torsion(&["correspondence", "torus6", "--rho", &rho, "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["passed"], true);
    let bare = write(dir.path(), "bare.txt", "# curvature\ne12 + e34 + e56\n");
    let o = torsion(&["correspondence", "torus6", "--rho", &bare]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
}

#[test]
fn non_closed_curvature_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let rho = write(dir.path(), "rho.txt", "e56\n");
    let o = torsion(&["correspondence", "iwasawa6", "--rho", &rho]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("not closed"), "{}", stderr(&o));
}

#[test]
fn flow_against_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("out.csv");
    let o = torsion(&[
        "flow",
        "iwasawa-variant",
        "--t0",
        "1",
        "--t1",
        "1.2",
        "--dt",
        "1e-3",
        "--csv",
        csv.to_str().unwrap(),
        "--json",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert!(v["closed_form"]["terminal_error"].as_f64().unwrap() <= 1e-6);
    assert!(v["compat_residual"].as_f64().unwrap() <= 1e-8);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 202);
    assert!(text.starts_with("t,omega:e12"));
}

#[test]
fn report_is_written_to_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let o = torsion(&["g2-report", "torus-circle", "--report", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["kind"], "g2");
    assert_eq!(v["flags"]["cocalibrated"], true);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(torsion(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(
        torsion(&["su3-report", "nil-sec3ex2", "--bogus"]).status.code(),
        Some(2)
    );
    assert_eq!(torsion(&["flow", "iwasawa6", "--t0", "0"]).status.code(), Some(2));
    assert_eq!(
        torsion(&["flow", "iwasawa6", "--t0", "0", "--t1", "1", "--dt", "-1"])
            .status
            .code(),
        Some(2)
    );
    let o = torsion(&["su3-report", "no-such-example"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("nil-sec3ex2"));
    assert_eq!(torsion(&["su3-report", "missing/file.txt"]).status.code(), Some(2));
}

#[test]
fn list_examples_names_every_entry() {
    let o = torsion(&["list-examples"]);
    let out = stdout(&o);
    for name in [
        "torus6",
        "nil-sec3ex2",
        "iwasawa-variant",
        "nil2step",
        "nil3step",
        "solvable-e1",
    ] {
        assert!(out.contains(name), "{name}");
    }
}

#[test]
fn acceptance_command_passes() {
    let o = torsion(&["verify-paper", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["criteria"].as_array().unwrap().len(), 12);
    assert_eq!(v["passed"], true);
}
