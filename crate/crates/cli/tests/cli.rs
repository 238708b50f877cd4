use std::process::{Command, Output};

use num_bigint::BigUint;
use powsum::arith::Modulus;
use powsum::powersum::eval;

fn powsum(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_powsum"))
        .args(args)
        .env_remove("POWSUM_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = powsum(args);
    assert!(
        out.status.success(),
        "{args:?} exited with {:?}: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn exit_code(args: &[&str]) -> i32 {
    powsum(args).status.code().expect("exited normally")
}

#[test]
fn eval_huge_m() {
    assert_eq!(stdout(&["eval", "-n", "2", "-m", "1000000000000000000", "-k", "9"]), "1\n");
}

#[test]
fn eval_matches_library_on_grid() {
    for k in (1..=120u64).step_by(7).chain([64, 81, 120]) {
        for n in [1u64, 2, 3, 4, 6, 12, 30, 59, 60] {
            for m in [0u64, 1, 7, 64, 999, 2000] {
                let want = eval(&BigUint::from(n), &BigUint::from(m), Modulus::new(k).unwrap())
                    .unwrap()
                    .to_string();
                let got = stdout(&["eval", "-n", &n.to_string(), "-m", &m.to_string(), "-k", &k.to_string()]);
                assert_eq!(got, format!("{want}\n"), "n={n} m={m} k={k}");
            }
        }
    }
}

#[test]
fn eval_check_and_explain() {
    let out = stdout(&["eval", "-n", "3", "-m", "4", "-k", "7", "--explain", "--check"]);
    assert_eq!(out.lines().next(), Some("2"));
    assert!(out.contains("mod 7"));
}

#[test]
fn eval_check_respects_oracle_limit() {
    assert_eq!(exit_code(&["eval", "-n", "3", "-m", "1000", "-k", "7", "--check", "--oracle-limit", "10"]), 2);
}

#[test]
fn eval_json() {
    let out = stdout(&["eval", "-n", "2", "-m", "10", "-k", "1000", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["value"], "385");
    assert_eq!(v["k"], "1000");
}

#[test]
fn period_with_branches() {
    let out = stdout(&["period", "-n", "2", "-k", "12"]);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("72"));
    assert!(out.contains("n even"));
    assert!(out.contains("q-1 | n"));
}

#[test]
fn congruence_case() {
    let out = stdout(&["congruence", "-n", "2", "-q", "3", "-a", "2"]);
    assert_eq!(out.lines().next(), Some("PhiCase 6"));
    let out = stdout(&["congruence", "-n", "3", "-q", "2", "-a", "3"]);
    assert_eq!(out.lines().next(), Some("ZeroCase 0"));
}

#[test]
fn table_rows() {
    assert_eq!(stdout(&["table", "-n", "1..1", "-m", "1..6", "-k", "3"]), "1 0 0 1 0 0\n");
    assert_eq!(
        stdout(&["table", "-n", "3..3", "-m", "1..6", "-k", "9", "--mark-period"]),
        "1 0 0 | 1 0 0 |\n"
    );
    assert_eq!(stdout(&["table", "-n", "1..1", "-m", "1..1", "-k", "1"]), "0\n");
}

#[test]
fn table_csv() {
    let out = stdout(&["table", "-n", "1..2", "-m", "0..3", "-k", "100", "--format", "csv"]);
    assert_eq!(out, "n,0,1,2,3\n1,0,1,3,6\n2,0,1,5,14\n");
}

#[test]
fn table_over_limit() {
    assert_eq!(exit_code(&["table", "-n", "1..10", "-m", "1..10", "-k", "5", "--oracle-limit", "50"]), 2);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(exit_code(&["eval", "-n", "0", "-m", "1", "-k", "5"]), 2);
    assert_eq!(exit_code(&["eval", "-n", "1", "-m", "1", "-k", "0"]), 2);
    assert_eq!(exit_code(&["eval", "-n", "1x", "-m", "1", "-k", "5"]), 2);
    assert_eq!(exit_code(&["congruence", "-n", "1", "-q", "4", "-a", "1"]), 2);
    assert_eq!(exit_code(&["verify", "--suite", "bogus"]), 2);
    assert_eq!(exit_code(&["eval", "-n", "1"]), 2);
    assert_eq!(exit_code(&["eval", "-n", "1", "-m", "1", "-k", "5", "--format", "xml"]), 2);
}

#[test]
fn verify_periods_json() {
    let out = stdout(&["verify", "--suite", "periods", "--k-max", "60", "--n-max", "30", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let records = v["records"].as_array().unwrap();
    assert_eq!(records.len(), 60 * 30);
    assert!(records.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn verify_text_summary() {
    let out = stdout(&["verify", "--suite", "lemma", "--q", "3", "--n-max", "20"]);
    assert!(out.contains("0 failures"));
}

#[test]
fn verify_budget_from_env() {
    let out = Command::new(env!("CARGO_BIN_EXE_powsum"))
        .args(["verify", "--suite", "row-period", "--k-max", "10"])
        .env("POWSUM_BUDGET", "10")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("budget"));
}

#[test]
fn out_file() {
    let path = std::env::temp_dir().join(format!("powsum-out-{}.txt", std::process::id()));
    let p = path.to_str().unwrap();
    assert_eq!(stdout(&["--out", p, "eval", "-n", "5", "-m", "100", "-k", "7"]), "");
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "5\n");
    std::fs::remove_file(&path).unwrap();
}
