//! End-to-end tests of the command-line binary: exit codes, report schemas,
//! and byte-level reproducibility.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_obsgraph"))
}

fn run_ok(args: &[&str]) -> serde_json::Value {
    let out = bin().args(args).output().expect("binary runs");
    assert!(
        out.status.success(),
        "args {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is a JSON report")
}

fn temp_path(name: &str) -> PathBuf {
    std::env::temp_dir().join(format!("obsgraph-test-{}-{name}", std::process::id()))
}

#[test]
fn observability_cycle4_even_residues() {
    let v = run_ok(&[
        "observability",
        "--graph",
        "cycle:4",
        "--set",
        "0 mod 2",
        "--time",
        "1",
    ]);
    let rep = &v["outputs"]["report"];
    assert_eq!(rep["observable"], false);
    assert!(rep["witness"].is_array(), "witness must be printed");
    assert_eq!(rep["method"], "gramian");
    assert_eq!(rep["T"], 1.0);
}

#[test]
fn bohr_residues_mod_4() {
    let v = run_ok(&["bohr", "--p", "4", "--residues", "0,1", "--time", "1"]);
    let rep = &v["outputs"]["report"];
    assert_eq!(rep["observable"], true);
    assert_eq!(rep["g"], 1);
    assert!(rep["m_T"].as_f64().unwrap() > 0.0);
    assert!(rep["C_obs"].as_f64().unwrap().is_finite());
    assert_eq!(rep["failing_fiber"], serde_json::Value::Null);
}

#[test]
fn torus_product_8_2() {
    let v = run_ok(&["torus", "--N", "8", "--d", "2", "--construct", "product"]);
    let rep = &v["outputs"]["report"];
    assert_eq!(rep["E_size"], 48);
    assert_eq!(rep["ratio"], 0.75);
    assert_eq!(rep["verified_unobservable"], true);
}

#[test]
fn density_csv_projection() {
    let out = bin()
        .args([
            "density",
            "--set",
            "{0} mod 2",
            "--L",
            "1,2",
            "--R",
            "1e2",
            "--format",
            "csv",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("L_or_R,lower,upper"));
    assert!(text.contains("L=1,0.3333333333333333,0.6666666666666666"));
    assert!(text.contains("R=100,0.5,0.505"));
}

#[test]
fn density_accepts_range_syntax() {
    let v = run_ok(&["density", "--set", "{0,1} mod 4", "--L", "1..4"]);
    let rows = v["outputs"]["thickness"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(rows[0]["half_window"], 1);
    assert_eq!(rows[3]["half_window"], 4);
}

#[test]
fn counterexample_within_bound() {
    let v = run_ok(&[
        "counterexample",
        "--p",
        "2",
        "--delta",
        "pi/200",
        "--t",
        "1",
    ]);
    assert_eq!(v["outputs"]["within_bound"], true);
    let ratio = v["outputs"]["ratio"].as_f64().unwrap();
    let bound = v["outputs"]["bound"].as_f64().unwrap();
    assert!(ratio <= bound * (1.0 + 1e-6));
}

#[test]
fn hautus_agrees_with_restriction() {
    let v = run_ok(&["hautus", "--graph", "path:3", "--set", "{1}"]);
    assert_eq!(v["outputs"]["passes"], false);
    assert_eq!(v["outputs"]["restriction_observable"], false);
    assert!(v["outputs"]["q_min"].as_f64().unwrap() < 1e-8);
}

#[test]
fn invalid_input_exits_1() {
    let out = bin()
        .args([
            "observability",
            "--graph",
            "blob:4",
            "--set",
            "{0}",
            "--time",
            "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin()
        .args(["bohr", "--p", "4", "--residues", "7", "--time", "1"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    // Usage errors are invalid input too, never confused with the
    // disagreement status; help stays a success.
    let out = bin().args(["bohr", "--p", "4"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["no-such-command"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["--help"]).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn fault_injected_tolerance_exits_2() {
    let cfg = temp_path("fault.json");
    std::fs::write(
        &cfg,
        r#"{
            "command": "observability",
            "graph": "path:2",
            "set": "{0}",
            "time": 1.0,
            "tolerances": {"tau_rank": 1e3, "tau_obs_scale": 1e-12, "tau_group_scale": 1e-8}
        }"#,
    )
    .unwrap();
    let out: Output = bin().arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(
        out.status.code(),
        Some(2),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::remove_file(&cfg).ok();
}

#[test]
fn reports_byte_identical_modulo_wall_time() {
    let strip = |text: &str| -> String {
        text.lines()
            .filter(|l| !l.contains("wall_time_s"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let mut texts = Vec::new();
    for i in 0..2 {
        let path = temp_path(&format!("rep{i}.json"));
        let out = bin()
            .args([
                "bohr",
                "--p",
                "6",
                "--residues",
                "0,2,4",
                "--time",
                "2",
                "--seed",
                "5",
            ])
            .arg("--out")
            .arg(&path)
            .output()
            .unwrap();
        assert!(out.status.success());
        texts.push(strip(&std::fs::read_to_string(&path).unwrap()));
        std::fs::remove_file(&path).ok();
    }
    assert_eq!(
        texts[0], texts[1],
        "identical config + seed must reproduce the report"
    );
}

#[test]
fn thread_cap_env_is_honored() {
    let out = bin()
        .env("OBSGRAPH_THREADS", "1")
        .args([
            "bohr",
            "--p",
            "4",
            "--residues",
            "0,1",
            "--time",
            "1",
            "--grid",
            "64",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
}

#[test]
fn oracle_suite_smoke() {
    let out = bin()
        .args(["oracle-suite", "--instances", "8", "--seed", "3"])
        .output()
        .unwrap();
    assert!(
        out.status.success(),
        "oracle-suite failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["outputs"]["bohr_exhaustive"]["disagreements"], 0);
    assert_eq!(v["outputs"]["bohr_exhaustive"]["cases"], 502);
    assert_eq!(v["outputs"]["random_instances"]["disagreements"], 0);
}

#[test]
fn hautus_reports_threshold_time_form() {
    let v = run_ok(&["hautus", "--graph", "path:2", "--set", "{0}"]);
    assert_eq!(v["outputs"]["passes"], true);
    let form = v["outputs"]["threshold_time"]["form"].as_str().unwrap();
    assert!(form.contains("sqrt"));
    let inf = v["outputs"]["threshold_time"]["infimum"].as_f64().unwrap();
    assert!((inf - std::f64::consts::PI).abs() < 1e-12);
}

#[test]
fn observability_serializes_eigenvalues() {
    let v = run_ok(&[
        "observability",
        "--graph",
        "cycle:3",
        "--set",
        "{0}",
        "--time",
        "1",
    ]);
    let evs = v["outputs"]["eigenvalues"].as_array().unwrap();
    assert_eq!(evs.len(), 3);
    assert!((evs[0].as_f64().unwrap() + 3.0).abs() < 1e-9);
}

#[test]
fn report_envelope_records_inputs_seed_tolerances() {
    let v = run_ok(&[
        "bohr",
        "--p",
        "2",
        "--residues",
        "0",
        "--time",
        "1",
        "--seed",
        "42",
    ]);
    assert_eq!(v["seed"], 42);
    assert_eq!(v["command"], "bohr");
    assert_eq!(v["inputs"]["p"], 2);
    assert!(v["tolerances"]["tau_rank"].as_f64().unwrap() > 0.0);
    assert!(v["wall_time_s"].as_f64().unwrap() >= 0.0);
    // Unobservable version reports the failing fiber location.
    let ff = v["outputs"]["report"]["failing_fiber"].as_f64().unwrap();
    assert!((ff + std::f64::consts::PI).abs() < 1e-9);
}
