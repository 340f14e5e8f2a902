use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lieflow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lieflow"))
        .args(args)
        .env_remove("LIEFLOW_FORMAT")
        .output()
        .expect("run lieflow")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn classify_examples() {
    let out = lieflow(&["classify", "--catalog", "sl2", "--inner", "1,0,0"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["verdict"]["tag"], "PeriodicFlow");
    assert_eq!(doc["verdict"]["period_symbolic"], "pi");
    assert!((doc["verdict"]["period"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-15);

    let out = lieflow(&["classify", "--catalog", "aff2", "--matrix", "0,0,0,1"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["verdict"]["tag"], "NoPeriodicOrbits");
    assert_eq!(doc["verdict"]["reason"], "RealNonzeroEigenvalue");

    let out = lieflow(&["classify", "--catalog", "sl2", "--matrix", "1,0,0,0,0,0,0,0,0"]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"], "NotADerivation");
}

#[test]
fn classify_with_parameters_and_invariant_flows() {
    let out = lieflow(&["classify", "--catalog", "g35_a", "--param", "1/2", "--matrix", "0,2,-1,-2,0,-1,0,0,0"]);
    assert_eq!(code(&out), 0);
    assert_eq!(json(&out)["verdict"]["tag"], "PeriodicFlow");

    let out = lieflow(&["classify", "--catalog", "abelian3", "--inner", "1,2,3", "--invariant"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["flow"], "invariant");
    assert_eq!(doc["verdict"]["tag"], "SpectralPeriodicInconclusive");

    let out = lieflow(&["classify", "--catalog", "g34_a", "--matrix", "0,0,0,0,1,0,0,0,0"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn input_errors_use_their_own_status() {
    assert_eq!(code(&lieflow(&["classify", "--catalog", "nope", "--inner", "1,0,0"])), 64);
    assert_eq!(code(&lieflow(&["classify", "--catalog", "sl2", "--inner", "1,0"])), 64);
    assert_eq!(code(&lieflow(&["classify", "--catalog", "sl2"])), 64);
    assert_eq!(code(&lieflow(&["classify", "--catalog", "g34_a", "--param", "0", "--inner", "1,0,0"])), 64);
    assert_eq!(code(&lieflow(&["--tol-rank", "-1", "catalog", "list"])), 64);
    assert_eq!(code(&lieflow(&["--help"])), 0);
}

#[test]
fn decimals_are_converted_with_a_warning() {
    let out = lieflow(&["classify", "--catalog", "sl2", "--inner", "0.5,0,0"]);
    assert_eq!(code(&out), 0);
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("warning") && stderr.contains("1/2"), "{stderr}");
    assert_eq!(json(&out)["x"][0], "1/2");
}

#[test]
fn derivations() {
    let doc = json(&lieflow(&["derivations", "--catalog", "g31_heisenberg"]));
    assert_eq!(doc["dimension"], 6);
    assert_eq!(doc["basis"].as_array().unwrap().len(), 6);
    assert_eq!(doc["pattern"], "[x1, x2, x3; 0, y2, y3; 0, z2, x1 - y2]");
    assert_eq!(json(&lieflow(&["derivations", "--catalog", "abelian3"]))["dimension"], 9);
}

#[test]
fn jacobi_failures_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad_jacobi.json");
    // [E1,E2] = E3, [E2,E3] = E1, [E1,E3] = E1 violates Jacobi.
    std::fs::write(
        &path,
        r#"{"dim": 3, "basis": ["E1", "E2", "E3"], "brackets": [
            {"i": 1, "j": 2, "k": 3, "c": "1"},
            {"i": 2, "j": 3, "k": 1, "c": "1"},
            {"i": 1, "j": 3, "k": 1, "c": "1"}]}"#,
    )
    .unwrap();
    let out = lieflow(&["derivations", "--file", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert_eq!(json(&out)["error"], "JacobiFailure");
    let out = lieflow(&["classify", "--file", path.to_str().unwrap(), "--matrix", "0,0,0,0,0,0,0,0,0"]);
    assert_eq!(code(&out), 2);

    std::fs::write(&path, r#"{"dim": 2, "basis": ["A"]}"#).unwrap();
    assert_eq!(code(&lieflow(&["derivations", "--file", path.to_str().unwrap()])), 64);
}

fn export(name: &str, dir: &Path) -> String {
    let out = lieflow(&["catalog", "export", name]);
    assert_eq!(code(&out), 0);
    let path = dir.join(format!("{name}.json"));
    std::fs::write(&path, &out.stdout).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn exported_entries_classify_identically() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("sl2", "--inner", "1,0,0"),
        ("sl2", "--inner", "0,1,0"),
        ("g31_heisenberg", "--matrix", "0,0,0,0,0,1,0,-1,0"),
        ("g33", "--matrix", "0,0,0,0,0,1,0,-1,0"),
        ("aff2", "--matrix", "0,0,1,0"),
    ];
    for (name, flag, value) in cases {
        let file = export(name, dir.path());
        let a = json(&lieflow(&["classify", "--catalog", name, flag, value]));
        let b = json(&lieflow(&["classify", "--file", &file, flag, value]));
        assert_eq!(a["verdict"], b["verdict"], "{name}");
        assert_eq!(a["derivation"], b["derivation"], "{name}");
    }
}

#[test]
fn catalog_listing_and_reports() {
    let doc = json(&lieflow(&["catalog", "list"]));
    let entries = doc["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 11);
    assert_eq!(entries[0]["name"], "abelian2");

    let doc = json(&lieflow(&["catalog", "cross-check", "aff2"]));
    assert_eq!(doc["reports"][0]["discrepancies"].as_array().unwrap().len(), 0);
    let doc = json(&lieflow(&["catalog", "cross-check", "g33"]));
    assert_eq!(doc["reports"][0]["eigenvalue_formula_match"], false);
    let doc = json(&lieflow(&["catalog", "cross-check", "g34_a", "--param", "3"]));
    assert_eq!(doc["reports"][0]["param"], "3");
    assert_eq!(code(&lieflow(&["catalog", "cross-check", "g99"])), 64);
}

#[test]
fn verdict_table_agrees_with_exact_claims() {
    let out = lieflow(&["catalog", "verdict-table"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["exact_disagreements"], 0);
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), doc["row_count"].as_u64().unwrap() as usize);
    assert!(rows.iter().filter(|r| r["agrees_with_reading"] == false).all(|r| r["entry"] == "g35_a"));
}

#[test]
fn simulate_examples() {
    let out = lieflow(&["simulate", "--catalog", "sl2", "--inner", "1,0,0", "--check-period", "pi"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["check"]["residual"]["max_residual"].as_f64().unwrap() <= 1e-8);

    let out = lieflow(&["simulate", "--catalog", "sl2", "--inner", "1,0,0", "--check-period", "1.0"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["outcome"], "fail");

    let out = lieflow(&["simulate", "--catalog", "g31_heisenberg", "--inner", "0,0,1", "--horizon", "50"]);
    assert_eq!(code(&out), 0);
    let doc = json(&out);
    assert_eq!(doc["verdict"]["tag"], "NoPeriodicOrbits");
    assert!(doc["evidence"]["grid_minimum"]["residual"].as_f64().unwrap() >= 1e-3);
}

#[test]
fn simulate_group_orbits() {
    // Ad(exp(πY)) is the identity, but exp(πY) = −I is not.
    let base = ["simulate", "--catalog", "sl2", "--inner", "1,0,0"];
    let run = |extra: &[&str]| {
        let mut args: Vec<&str> = base.to_vec();
        args.extend_from_slice(extra);
        lieflow(&args)
    };
    assert_eq!(code(&run(&["--check-period", "pi", "--orbit", "conjugation"])), 0);
    let out = run(&["--check-period", "pi", "--orbit", "invariant"]);
    assert_eq!(code(&out), 1);
    assert_eq!(json(&out)["orbit"]["closes"], false);
    assert_eq!(code(&run(&["--check-period", "2pi", "--orbit", "invariant", "--g0", "1,2,0,1"])), 0);

    let dir = tempfile::tempdir().unwrap();
    let file = export("sl2", dir.path());
    let out = lieflow(&["simulate", "--file", &file, "--inner", "1,0,0", "--check-period", "pi", "--orbit", "invariant"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["notes"][0].as_str().unwrap().contains("no matrix representation"));
}

#[test]
fn simulate_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("orbit.csv");
    let out = lieflow(&[
        "simulate", "--catalog", "sl2", "--inner", "1,0,0", "--orbit", "conjugation", "--samples", "9", "--csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,m11,m12,m21,m22");
    assert_eq!(lines.len(), 10);

    let path = dir.path().join("flow.csv");
    let out = lieflow(&["simulate", "--catalog", "aff2", "--matrix", "0,0,1,0", "--csv", path.to_str().unwrap()]);
    assert_eq!(code(&out), 0);
    assert!(std::fs::read_to_string(&path).unwrap().starts_with("t,m11,m12,m21,m22\n"));
}

#[test]
fn text_format_carries_the_same_content() {
    let out = Command::new(env!("CARGO_BIN_EXE_lieflow"))
        .args(["classify", "--catalog", "aff2", "--matrix", "0,0,0,1"])
        .env("LIEFLOW_FORMAT", "text")
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("tag: NoPeriodicOrbits"), "{text}");
    assert!(text.contains("reason: RealNonzeroEigenvalue"), "{text}");
    let out = lieflow(&["--format", "text", "classify", "--catalog", "sl2", "--matrix", "1,0,0,0,0,0,0,0,0"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stdout).contains("error: NotADerivation"));
}

#[test]
fn seed_controls_sampled_checks() {
    let a = json(&lieflow(&["--seed", "7", "catalog", "cross-check", "all"]));
    let b = json(&lieflow(&["--seed", "7", "catalog", "cross-check", "all"]));
    assert_eq!(a, b);
    assert_eq!(a["flagged"], json(&lieflow(&["catalog", "cross-check", "all"]))["flagged"]);
}
