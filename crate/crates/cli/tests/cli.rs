use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spinlab"))
        .args(args)
        .env_remove("SPINLAB_SEED")
        .output()
        .expect("spinlab runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

const HEADER: &str = "param,exp_sx,err_sx,exp_sy,err_sy,exp_sz,err_sz,pro0,err_pro0,pro1,err_pro1,pro2,sum0,err_sum0,sum1,err_sum1,sum2,flags";

#[test]
fn verify_saturated_triple_sum() {
    let o = run(&[
        "verify",
        "--relation",
        "R5",
        "--bloch",
        "0.57735,0.57735,0.57735",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports[0]["relation"], "R5_TRIPLE_SUM");
    assert_eq!(reports[0]["saturated"], true);
}

#[test]
fn verify_all_on_a_family_point() {
    let o = run(&["verify", "--family", "r1", "--phi", "45", "--degrees"]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let list = reports.as_array().unwrap();
    assert!(list.len() >= 17);
    let r5 = list
        .iter()
        .find(|r| r["relation"] == "R5_TRIPLE_SUM")
        .unwrap();
    assert!(r5["gap"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn verify_generic_robertson_pair() {
    let o = run(&[
        "verify",
        "--relation",
        "R_ROBERTSON_GENERIC",
        "--pair",
        "x,y",
        "--bloch",
        "0,0,1",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((reports[0]["rhs"].as_f64().unwrap() - 0.25).abs() < 1e-15);
    assert_eq!(
        run(&[
            "verify",
            "--relation",
            "R_ROBERTSON_GENERIC",
            "--bloch",
            "0,0,1"
        ])
        .status
        .code(),
        Some(2)
    );
}

#[test]
fn spin_restricted_relation_is_a_usage_error() {
    let o = run(&["verify", "--relation", "R6", "--spin", "2"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("spin 1/2"), "{}", stderr(&o));
}

#[test]
fn unknown_inputs_exit_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--bogus"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--relation", "R2", "--bloch", "1,0,0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["verify", "--bloch", "1,1,1"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--bloch", "1,0"]).status.code(), Some(2));
    assert_eq!(
        run(&["verify", "--spin", "2", "--bloch", "1,0,0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(run(&["ops", "--spin", "0"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn analytic_sweep_schema() {
    let o = run(&["sweep", "--family", "r1", "--points", "8", "--analytic"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], HEADER);
    assert_eq!(lines.len(), 9);
    for line in &lines[1..] {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 18);
        for idx in [2, 4, 6, 8, 10, 13, 15] {
            assert_eq!(fields[idx], "0");
        }
    }
}

#[test]
fn analytic_output_ignores_the_seed() {
    let a = run(&["--seed", "1", "sweep", "--family", "r2", "--points", "5"]);
    let b = run(&[
        "--seed",
        "2",
        "simulate",
        "--family",
        "r2",
        "--points",
        "5",
        "--analytic",
    ]);
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn simulation_depends_on_seed_not_threads() {
    let args = [
        "simulate", "--family", "r1", "--points", "6", "--shots", "5000",
    ];
    let base = run(&[&["--seed", "9", "--threads", "1"][..], &args].concat());
    let many = run(&[&["--seed", "9", "--threads", "4"][..], &args].concat());
    let other = run(&[&["--seed", "10"][..], &args].concat());
    assert_eq!(base.status.code(), Some(0));
    assert_eq!(stdout(&base), stdout(&many));
    assert_ne!(stdout(&base), stdout(&other));
    assert_eq!(stdout(&base).lines().next(), Some(HEADER));
}

#[test]
fn seed_from_environment() {
    let args = [
        "simulate", "--family", "r1", "--points", "3", "--shots", "100",
    ];
    let env = Command::new(env!("CARGO_BIN_EXE_spinlab"))
        .args(args)
        .env("SPINLAB_SEED", "77")
        .output()
        .unwrap();
    let flag = run(&[&["--seed", "77"][..], &args].concat());
    assert_eq!(stdout(&env), stdout(&flag));
}

#[test]
fn ops_json_layout() {
    let o = run(&["ops", "--spin", "2", "--emit", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["dim"], 3);
    assert_eq!(v["sz"][0][0][0], 1.0);
    assert_eq!(v["sx"].as_array().unwrap().len(), 3);
    assert!(v["residuals"]["casimir"].as_f64().unwrap() <= 1e-12);
    assert!(stdout(&run(&["ops", "--spin", "3"])).contains("s = 3/2"));
}

#[test]
fn state_file_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("state.json");
    fs::write(
        &path,
        r#"{"dim":3,"entries":[[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}"#,
    )
    .unwrap();
    let o = run(&[
        "verify",
        "--relation",
        "R7",
        "--state-file",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let reports: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(reports[0]["saturated"], true);
    fs::write(&path, r#"{"dim":2,"entries":[[2,0],[0,0],[0,0],[0,0]]}"#).unwrap();
    assert_eq!(
        run(&["verify", "--state-file", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn emitted_files_carry_a_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("tri.json");
    let o = run(&[
        "--seed",
        "12",
        "triangle",
        "--samples",
        "500",
        "--emit",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let summary: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(summary["seed"], 12);
    assert_eq!(summary["minima"].as_array().unwrap().len(), 4);
    let manifest: Value = serde_json::from_str(
        &fs::read_to_string(dir.path().join("tri.json.manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest["command"], "triangle");
    assert_eq!(manifest["seed"], 12);
    assert_eq!(manifest["config"]["triangle"]["samples"], 500);
    assert_eq!(manifest["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(manifest["argv"][0], "--seed");
    assert!(manifest["timestamp"].as_str().unwrap().contains('T'));
}

#[test]
fn probe_outputs() {
    let o = run(&[
        "probe",
        "--relation",
        "R6",
        "--spin",
        "1",
        "--mixed",
        "--restarts",
        "4",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["manifold"], "mixed");
    assert!(v["min_gap"].as_f64().unwrap().abs() < 1e-9);

    let o = run(&[
        "probe",
        "--conjecture",
        "--spin",
        "2",
        "--samples",
        "2000",
        "--restarts",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["relation"], "R11_CONJECTURE_TRIPLE_PRODUCT");

    let o = run(&["probe", "--variance-sum", "--spin", "2", "--restarts", "8"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert!((v["min_lhs"].as_f64().unwrap() - 1.0).abs() < 1e-6);

    assert_eq!(
        run(&["probe", "--conjecture", "--spin", "1"]).status.code(),
        Some(2)
    );
    assert_eq!(run(&["probe", "--spin", "1"]).status.code(), Some(2));
}

#[test]
fn soak_table_and_json() {
    let o = run(&["soak", "--samples", "300"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.starts_with("relation"));
    assert!(text.contains("R10_ENTROPIC_TRIPLE"));
    let o = run(&["soak", "--samples", "300", "--emit", "-"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["config"]["samples"], 300);
}

#[test]
fn replay_reproduces_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let first = dir.path().join("a.csv");
    let second = dir.path().join("b.csv");
    let code = run(&[
        "--seed",
        "3",
        "simulate",
        "--family",
        "r1",
        "--points",
        "4",
        "--shots",
        "1000",
        "--per-draw",
        "--emit",
        first.to_str().unwrap(),
    ])
    .status
    .code();
    assert_eq!(code, Some(0));
    let manifest = format!("{}.manifest.json", first.display());
    assert_eq!(
        run(&[
            "replay",
            "--manifest",
            &manifest,
            "--emit",
            second.to_str().unwrap()
        ])
        .status
        .code(),
        Some(0)
    );
    assert_eq!(fs::read(&first).unwrap(), fs::read(&second).unwrap());
}
