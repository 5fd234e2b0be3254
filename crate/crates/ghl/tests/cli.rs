//! End-to-end checks of the command-line surface: subcommands, file outputs,
//! manifests, and exit codes (0 pass, 1 verification failure, 2 usage error).

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_ghl"))
}

fn tmpdir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("ghl-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn hierarchy_print_matches_expanded_listing() {
    let out = bin()
        .args(["hierarchy", "print", "--n", "2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("u_t +u5x +10*mu^2*u3x"), "{text}");
    assert!(text.contains("= 0"));
    // mu = 0 member and JSON format
    let out = bin()
        .args(["hierarchy", "print", "--n", "2", "--mu0", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["order"], 5);
    assert!(!v["terms"].as_str().unwrap().contains("mu"));
}

#[test]
fn solution_sample_writes_csv_and_manifest() {
    let dir = tmpdir("sample");
    let csv = dir.join("field.csv");
    let out = bin()
        .args([
            "solution",
            "sample",
            "--kind",
            "soliton",
            "--params",
            r#"{"n":1,"c":1.2,"mu":0.3}"#,
            "--grid",
            "20,64",
            "--t",
            "0.1",
            "--out",
        ])
        .arg(&csv)
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 65); // header + N rows
    assert!(dir.join("field.manifest.json").exists());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn verify_ode_passes_and_writes_report() {
    let dir = tmpdir("ode");
    let rep = dir.join("ode.json");
    let out = bin()
        .args([
            "verify", "ode", "--n", "3", "--alpha", "1", "--beta", "1", "--mu", "0.3",
            "--grid", "40,1024", "--report",
        ])
        .arg(&rep)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&rep).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert!(v["residual_inf"].as_f64().unwrap() < v["tolerance"].as_f64().unwrap());
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn usage_errors_exit_with_code_2() {
    // out-of-domain elliptic parameter
    let out = bin()
        .args(["periodic", "--beta", "1", "--k", "0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // unknown solution kind
    let out = bin()
        .args([
            "solution", "sample", "--kind", "vortex", "--params", "{}", "--out", "/tmp/x.csv",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    // breather with mu < 0 is a domain error surfaced as usage failure
    let out = bin()
        .args([
            "verify", "ode", "--n", "1", "--alpha", "1", "--beta", "1", "--mu", "-0.2",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn periodic_solver_reports_commensurate_parameters() {
    let out = bin()
        .args(["periodic", "--beta", "1", "--k", "0.058823529411764705", "--order", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let alpha: f64 = text
        .split("alpha = ")
        .nth(1)
        .and_then(|s| s.split(',').next())
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((alpha - 2.0).abs() < 1e-12, "{text}");
    assert!(text.contains("pass"));
}

#[test]
fn identical_runs_produce_bit_identical_csv() {
    let dir = tmpdir("determinism");
    let run = |name: &str| {
        let csv = dir.join(name);
        let out = bin()
            .args([
                "solution",
                "sample",
                "--kind",
                "breather",
                "--params",
                r#"{"n":2,"alpha":0.9,"beta":1.1,"mu":0.25}"#,
                "--grid",
                "20,64",
                "--t",
                "0.37",
                "--out",
            ])
            .arg(&csv)
            .output()
            .unwrap();
        assert!(out.status.success());
        std::fs::read(&csv).unwrap()
    };
    assert_eq!(run("a.csv"), run("b.csv"));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn suite_single_criterion_runs() {
    let out = bin().args(["suite", "--criteria", "9"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("criterion  9 [PASS]"), "{text}");
}
