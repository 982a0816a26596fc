use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn wreathlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_wreathlab"))
        .args(args)
        .env_remove("WREATHLAB_CAPS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout))
    })
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn spectrum_seven_three() {
    let out = wreathlab(&["--no-meta", "spectrum", "--n", "7", "--k", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["lambda1"], 504);
    assert_eq!(v["levels"][0]["value"], 120);
    assert_eq!(v["levels"][0]["mult"], 14);
    assert_eq!(v["levels"][1]["value"], 24);
    assert_eq!(v["zero_mult"], 331);
    assert_eq!(v["trace_ok"], true);
    assert_eq!(v["certified"], true);
    assert!(v.get("meta").is_none());
}

#[test]
fn spectrum_large_is_skipped() {
    let out = wreathlab(&["--no-meta", "spectrum", "--n", "11", "--k", "3"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["certified"], "skipped");
    assert_eq!(v["levels"][0]["value"], 207360);
}

#[test]
fn output_is_deterministic_without_meta() {
    let args = ["--no-meta", "enumerate", "--n", "7", "--k", "3"];
    let a = wreathlab(&args);
    let b = wreathlab(&args);
    assert_eq!(a.stdout, b.stdout);
    let with_meta = json(&wreathlab(&["enumerate", "--n", "6", "--k", "3", "--count-only"]));
    assert_eq!(with_meta["meta"]["tool"], "wreathlab");
    assert_eq!(with_meta["count"], 10);
    assert_eq!(with_meta["matches"], true);
}

#[test]
fn matrix_csv() {
    let out = wreathlab(&["--format", "csv", "matrix", "--n", "6", "--k", "3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[0], "0,1,2,3,4,5,6,7,8,9");
    assert_eq!(lines[1], "2,0,0,0,0,0,0,0,0,0");
}

#[test]
fn b_table_with_oracle() {
    let out = wreathlab(&["--format", "csv", "--heavy", "b-table", "--n", "10", "--k", "4"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("l,j,formula,oracle"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 3 + 4 + 5);
    assert!(rows.iter().all(|r| r[2] == r[3]));
    assert_eq!(rows[0], vec!["2", "0", "252", "252"]);
    let plain = wreathlab(&["--format", "csv", "b-table", "--n", "10", "--k", "4"]);
    assert!(String::from_utf8(plain.stdout).unwrap().starts_with("l,j,formula\n"));
}

#[test]
fn kernel_commands() {
    let dim = json(&wreathlab(&["--no-meta", "kernel-dim", "--n", "8", "--k", "3"]));
    assert_eq!(dim["kernel_dimension"], 2471);
    let exact = json(&wreathlab(&["--no-meta", "kernel-dim", "--n", "9", "--k", "3", "--exact"]));
    assert_eq!(exact["nullspace_size"], 204);
    let vectors = wreathlab(&["--no-meta", "kernel-vectors", "--n", "7", "--k", "3", "--span"]);
    assert_eq!(code(&vectors), 0);
    let v = json(&vectors);
    assert_eq!(v["x"].as_array().unwrap().len(), 1);
    assert_eq!(v["x"][0]["vector"].as_array().unwrap().len(), 4);
    assert_eq!(v["span"]["kernel_dimension"], 331);
    let null = json(&wreathlab(&["--no-meta", "nullspace", "--n", "7", "--k", "3"]));
    assert_eq!(null["dimension"], 331);
    assert!(null["basis"][0][0].as_str().unwrap().contains('/'));
}

#[test]
fn decompose_budget_resume_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cp = dir.path().join("cp.json");
    let cp_arg = cp.to_str().unwrap();
    let out = wreathlab(&["--no-meta", "decompose", "--n", "8", "--k", "3", "--node-budget", "3", "--checkpoint", cp_arg]);
    assert_eq!(code(&out), 4);
    assert_eq!(json(&out)["status"], "budget");
    assert!(cp.exists());

    let resumed = wreathlab(&["--no-meta", "decompose", "--n", "8", "--k", "3", "--resume", cp_arg]);
    let direct = wreathlab(&["--no-meta", "decompose", "--n", "8", "--k", "3"]);
    assert_eq!(code(&resumed), 0);
    assert_eq!(resumed.stdout, direct.stdout);

    let found = dir.path().join("found.json");
    fs::write(&found, &direct.stdout).unwrap();
    let ok = wreathlab(&["--no-meta", "verify", "--n", "8", "--k", "3", "--input", found.to_str().unwrap()]);
    assert_eq!(code(&ok), 0);
    let report = json(&ok);
    assert_eq!(report["valid"], true);
    assert_eq!(report["conditions"]["round_trip"], true);

    let mut tampered = json(&direct);
    let list = tampered["decomposition"].as_array_mut().unwrap();
    list[1] = list[0].clone();
    fs::write(&found, serde_json::to_vec(&tampered).unwrap()).unwrap();
    let bad = wreathlab(&["--no-meta", "verify", "--n", "8", "--k", "3", "--input", found.to_str().unwrap()]);
    assert_eq!(code(&bad), 1);
    assert_eq!(json(&bad)["valid"], false);
}

#[test]
fn dh_bound_scan_is_tight() {
    let v = json(&wreathlab(&["--no-meta", "dh-bound"]));
    let reports = v["reports"].as_array().unwrap();
    assert_eq!(reports.len(), 20);
    for r in reports {
        assert_eq!(r["bound"].as_str().unwrap(), format!("{}/1", r["c"]));
    }
    let one = json(&wreathlab(&["--no-meta", "dh-bound", "--n", "10", "--k", "4"]));
    assert_eq!(one["reports"][0]["c"], 42);
}

#[test]
fn scan_distinct_runs() {
    let v = json(&wreathlab(&["--no-meta", "scan-distinct", "--n-max", "14", "--k-max", "5"]));
    assert!(!v["entries"].as_array().unwrap().is_empty());
    assert!(v["any_collision"].is_boolean());
}

#[test]
fn usage_errors() {
    assert_eq!(code(&wreathlab(&["spectrum", "--n", "6", "--k", "3"])), 2);
    assert_eq!(code(&wreathlab(&["enumerate", "--n", "7", "--k", "0"])), 2);
    assert_eq!(code(&wreathlab(&["no-such-command"])), 2);
    assert_eq!(code(&wreathlab(&["--format", "csv", "spectrum", "--n", "7", "--k", "3"])), 2);
    assert_eq!(code(&wreathlab(&["--term-cap", "0", "dh-bound"])), 2);
}

#[test]
fn caps_from_env_and_config() {
    let env = Command::new(env!("CARGO_BIN_EXE_wreathlab"))
        .args(["enumerate", "--n", "7", "--k", "3"])
        .env("WREATHLAB_CAPS", "enumeration-cap=6")
        .output()
        .unwrap();
    assert_eq!(code(&env), 2);
    assert!(String::from_utf8_lossy(&env.stderr).contains("exceeds the configured cap"));

    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("caps.toml");
    fs::write(&cfg, "enumeration-cap = 6\n").unwrap();
    let from_file = wreathlab(&["--config", cfg.to_str().unwrap(), "enumerate", "--n", "7", "--k", "3"]);
    assert_eq!(code(&from_file), 2);
    let flag_wins = wreathlab(&[
        "--config",
        cfg.to_str().unwrap(),
        "--enumeration-cap",
        "7",
        "--no-meta",
        "enumerate",
        "--n",
        "7",
        "--k",
        "3",
        "--count-only",
    ]);
    assert_eq!(code(&flag_wins), 0);
}

#[test]
fn output_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = wreathlab(&["--no-meta", "-o", path.to_str().unwrap(), "kernel-dim", "--n", "7", "--k", "3"]);
    assert_eq!(code(&out), 0);
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_slice(&fs::read(&path).unwrap()).unwrap();
    assert_eq!(v["kernel_dimension"], 331);
}

#[test]
fn selftest_passes() {
    let out = wreathlab(&["--no-meta", "selftest"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["failed"], 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS (7,3) certified"));
}
