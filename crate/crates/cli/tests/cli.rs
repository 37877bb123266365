use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn geowb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_geowb"))
        .args(args)
        .env_remove("GEOWB_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn eta_beta_5_validates() {
    let o = geowb(&["validate", "--catalog", "eta-beta-5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("PASS"));
}

#[test]
fn every_catalog_entry_validates() {
    let o = geowb(&["catalog", "list", "--json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let keys: Vec<String> = v
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["key"].as_str().unwrap().to_string())
        .collect();
    assert!(keys.len() >= 30);
    for k in keys {
        let o = geowb(&["validate", "--catalog", &k]);
        assert_eq!(code(&o), 0, "{k}: {}", stdout(&o));
    }
}

#[test]
fn broken_structure_reports_residual() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(
        &dir,
        "bad.json",
        r#"{"name":"bad","n":4,"dphi":[{"n":4,"terms":[]},{"n":4,"terms":[]},
            {"n":4,"terms":[{"holo":[1,2],"anti":[],"re":"1","im":"0"}]},
            {"n":4,"terms":[{"holo":[3],"anti":[1],"re":"1","im":"0"}]}]}"#,
    );
    let o = geowb(&["validate", "--structure", s(&f)]);
    assert_eq!(code(&o), 1);
    let out = stdout(&o);
    assert!(out.contains("FAIL"));
    assert!(out.contains("d²φ^4 = φ^{12}∧φ̄^{1}"), "{out}");
}

#[test]
fn input_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(&dir, "m.json", "{oops");
    assert_eq!(code(&geowb(&["validate", "--structure", s(&f)])), 2);
    assert_eq!(code(&geowb(&["validate", "--structure", "/definitely/missing.json"])), 2);
    assert_eq!(code(&geowb(&["validate", "--catalog", "no-such-key"])), 2);
    assert_eq!(code(&geowb(&["validate"])), 2);
    assert_eq!(code(&geowb(&["--backend", "exact", "validate", "--catalog", "s1-pi2"])), 2);
    assert_eq!(code(&geowb(&["--samples", "0", "validate", "--catalog", "fps6"])), 2);
    assert_eq!(code(&geowb(&["frobnicate"])), 2);
}

#[test]
fn classify_fps_witness_and_torus() {
    let o = geowb(&["--json", "classify", "--catalog", "fps6:witness"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("skt"), "{text}");
    let o = geowb(&["classify", "--catalog", "fps6:witness"]);
    let out = stdout(&o);
    let flag = |name: &str| {
        out.lines()
            .find(|l| l.trim_start().starts_with(name))
            .unwrap_or_else(|| panic!("{name} missing"))
            .split_whitespace()
            .nth(1)
            .unwrap()
            .to_string()
    };
    assert_eq!(flag("skt"), "true");
    assert_eq!(flag("kahler"), "false");
    assert_eq!(flag("balanced"), "false");

    let o = geowb(&["classify", "--catalog", "nakamura-iv-1"]);
    let out = stdout(&o);
    assert!(out.lines().filter(|l| l.contains("true")).count() >= 6, "{out}");
}

#[test]
fn transverse_omega_a() {
    let o = geowb(&["transverse", "--omega-a", "5/2"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("not transverse"));
    assert_eq!(code(&geowb(&["transverse", "--omega-a", "2"])), 1);
    assert_eq!(code(&geowb(&["transverse", "--omega-a", "1"])), 0);
    assert_eq!(code(&geowb(&["--backend", "float", "transverse", "--omega-a", "3/2"])), 0);
}

#[test]
fn transverse_forms() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(&dir, "z.json", r#"{"n":3,"terms":[]}"#);
    let o = geowb(&["transverse", "--form", s(&zero), "--p", "1"]);
    assert_eq!(code(&o), 1);
    let omega = write(
        &dir,
        "w.json",
        r#"{"n":3,"terms":[{"holo":[1],"anti":[1],"re":"0","im":"1/2"},
            {"holo":[2],"anti":[2],"re":"0","im":"1/2"},
            {"holo":[3],"anti":[3],"re":"0","im":"1/2"}]}"#,
    );
    let o = geowb(&["transverse", "--form", s(&omega), "--p", "1"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("transverse"));
    // Not real: rejected as input.
    let bad = write(&dir, "b.json", r#"{"n":3,"terms":[{"holo":[1],"anti":[2],"re":"1","im":"0"}]}"#);
    assert_eq!(code(&geowb(&["transverse", "--form", s(&bad), "--p", "1"])), 2);
}

#[test]
fn psymplectic_witnesses() {
    let o = geowb(&["psymplectic", "--family", "fps6", "--preset", "witness"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).starts_with("fps6: 2-symplectic: YES (condition = 0"));
    let o = geowb(&["psymplectic", "--family", "ft8", "--preset", "witness"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("3-symplectic: YES"));
    let o = geowb(&["psymplectic", "--family", "st10", "--preset", "witness"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("4-symplectic: YES"));
}

#[test]
fn psymplectic_params_file() {
    let dir = tempfile::tempdir().unwrap();
    // Witness with N moved off the locus.
    let p = write(&dir, "p.json", r#"{"B": {"re": "0", "im": "-2"}, "C": {"re": "0", "im": "1"}, "E": {"re": "0", "im": "2"}, "N": "1"}"#);
    let o = geowb(&["psymplectic", "--family", "fps6", "--params", s(&p)]);
    assert_eq!(code(&o), 1, "{}", stdout(&o));
    let p = write(&dir, "q.json", r#"{"Zeta": "1"}"#);
    assert_eq!(code(&geowb(&["psymplectic", "--family", "fps6", "--params", s(&p)])), 2);
    assert_eq!(code(&geowb(&["psymplectic", "--family", "nope"])), 2);
}

#[test]
fn obstruct_library_certificates() {
    let o = geowb(&["obstruct", "--catalog", "nakamura-v-5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("no 3-symplectic form"));
    let o = geowb(&["obstruct", "--catalog", "nakamura-iv-6"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("no 2-symplectic form"));
    let o = geowb(&["obstruct", "--catalog", "s1-pi2"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("no 2-symplectic form"));
}

#[test]
fn certificate_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = geowb(&["--json", "obstruct", "--catalog", "nakamura-v-14"]);
    assert_eq!(code(&o), 0);
    let report: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(report["valid"], Value::Bool(true));

    let o = geowb(&["--json", "obstruct", "--catalog", "nakamura-iv-6", "--search", "--p", "2", "--budget", "50"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let cert = v["found"][0].clone();
    assert!(cert.is_object(), "{v}");
    let f = write(&dir, "c.json", &cert.to_string());
    let o = geowb(&["obstruct", "--catalog", "nakamura-iv-6", "--cert", s(&f)]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));

    // Same certificate against a structure it does not fit.
    let o = geowb(&["obstruct", "--catalog", "nakamura-iv-1", "--cert", s(&f)]);
    assert_eq!(code(&o), 1);
}

#[test]
fn structure_json_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = geowb(&["--json", "catalog", "show", "eta-beta-5"]);
    assert_eq!(code(&o), 0);
    let f = write(&dir, "s.json", &stdout(&o));
    let a = geowb(&["bc-dims", "--structure", s(&f)]);
    let b = geowb(&["bc-dims", "--catalog", "eta-beta-5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn ddbar_lemma_and_holomorphic() {
    let o = geowb(&["ddbar-lemma", "--catalog", "nakamura-iv-1"]);
    assert_eq!(code(&o), 0);
    let o = geowb(&["ddbar-lemma", "--catalog", "eta-beta-5", "--p", "2", "--q", "0"]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&geowb(&["ddbar-lemma", "--catalog", "eta-beta-5", "--p", "2"])), 2);
    let o = geowb(&["simple-holo", "--catalog", "eta-beta-5", "--q", "2"]);
    assert!(stdout(&o).contains("no_simple_element"));
}

#[test]
fn seeded_runs_are_reproducible() {
    let args = ["--seed", "7", "sweep", "--family", "fps6", "--count", "20"];
    let a = geowb(&args);
    let b = geowb(&args);
    assert_eq!(code(&a), 0);
    assert_eq!(stdout(&a), stdout(&b));
    let a = geowb(&["--seed", "3", "--samples", "500", "transverse", "--omega-a", "1"]);
    let b = geowb(&["--seed", "3", "--samples", "500", "transverse", "--omega-a", "1"]);
    assert_eq!(stdout(&a), stdout(&b));
}
