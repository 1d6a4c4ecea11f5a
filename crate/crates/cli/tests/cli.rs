use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn latinlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latinlab")).args(args).output().expect("binary runs")
}

fn latinlab_env(args: &[&str], threads: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_latinlab")).args(args).env("LATINLAB_THREADS", threads).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn lines(p: &str) -> Vec<Value> {
    std::fs::read_to_string(p).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

const Z2Z2: &str = r#"{"n":4,"grid":[[1,2,3,4],[2,1,4,3],[3,4,1,2],[4,3,2,1]]}"#;

#[test]
fn gen_exact_is_reproducible() {
    let dir = TempDir::new().unwrap();
    let (a, b) = (path(&dir, "a.jsonl"), path(&dir, "b.jsonl"));
    let args = |out: &str| ["gen", "--model", "exact", "--n", "4", "--count", "10", "--seed", "7", "--out", out].map(str::to_string);
    assert_eq!(code(&latinlab_env(&args(&a).each_ref().map(String::as_str), "1")), 0);
    assert_eq!(code(&latinlab_env(&args(&b).each_ref().map(String::as_str), "4")), 0);
    let (ta, tb) = (std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    assert_eq!(ta, tb);
    let got = lines(&a);
    assert_eq!(got.len(), 10);
    assert!(got.iter().all(|l| l["n"] == 4 && l["grid"].as_array().unwrap().len() == 4));
}

#[test]
fn gen_trp_bottom_frequency() {
    let out = latinlab(&["gen", "--model", "trp", "--n", "2", "--m", "4", "--count", "1000", "--seed", "1"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let bottoms = text.lines().filter(|l| serde_json::from_str::<Value>(l).unwrap()["bottom"] == true).count() as f64;
    // exact bottom mass is 1/4
    let sigma = (1000.0f64 * 0.25 * 0.75).sqrt();
    assert!((bottoms - 250.0).abs() <= 3.0 * sigma, "{bottoms}");
}

#[test]
fn gen_binomial_with_zero_probability() {
    let out = latinlab(&["gen", "--model", "binomial", "--n", "8", "--p", "0", "--count", "3"]);
    assert_eq!(code(&out), 0);
    for l in String::from_utf8(out.stdout).unwrap().lines() {
        assert_eq!(serde_json::from_str::<Value>(l).unwrap()["hyperedges"], 0);
    }
}

#[test]
fn gen_rejects_invalid_parameters() {
    assert_eq!(code(&latinlab(&["gen", "--model", "exact", "--n", "9"])), 2);
    assert_eq!(code(&latinlab(&["gen", "--model", "binomial", "--n", "3", "--p", "1.5"])), 2);
    assert_eq!(code(&latinlab(&["gen", "--model", "trp", "--n", "2"])), 2);
    assert_eq!(code(&latinlab(&["gen", "--model", "trp", "--n", "2", "--m", "5"])), 2);
    assert_eq!(code(&latinlab(&["gen", "--model", "nope", "--n", "2"])), 2);
}

#[test]
fn parity_stats_on_all_order_four_squares() {
    let dir = TempDir::new().unwrap();
    let (samples, csv, table) = (path(&dir, "all.jsonl"), path(&dir, "s.csv"), path(&dir, "t.json"));
    assert_eq!(code(&latinlab(&["gen", "--model", "all", "--n", "4", "--out", &samples])), 0);
    assert_eq!(code(&latinlab(&["parity-stats", "--in", &samples, "--out", &csv, "--table", &table])), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("seed,n,n_row,n_col,n_sym"));
    let body: Vec<&str> = text.lines().skip(1).filter(|l| !l.starts_with('#')).collect();
    assert_eq!(body.len(), 576);
    for r in &body {
        let v: Vec<usize> = r.split(',').map(|x| x.parse().unwrap()).collect();
        assert_eq!((v[2] + v[3] + v[4]) % 2, 0);
    }
    let footer = text.lines().last().unwrap();
    assert!(footer.starts_with("# tv_nrow_binomial=0.5,tv_triple_mustar="), "{footer}");
    let t: Value = serde_json::from_str(&std::fs::read_to_string(&table).unwrap()).unwrap();
    assert_eq!(t["counts"]["000"], 576);
}

#[test]
fn parity_stats_single_square() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "one.jsonl");
    std::fs::write(&input, format!("{Z2Z2}\n")).unwrap();
    let out = latinlab(&["parity-stats", "--in", &input]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 2);
}

#[test]
fn parity_stats_flags_tampered_parities() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "bad.jsonl");
    std::fs::write(&input, r#"{"n":4,"grid":[[1,2,3,4],[2,1,4,3],[3,4,1,2],[4,3,2,1]],"parity":[1,0,0]}"#).unwrap();
    let out = latinlab(&["parity-stats", "--in", &input]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("invariant breach"));
}

#[test]
fn parity_stats_rejects_partial_input() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "trp.jsonl");
    assert_eq!(code(&latinlab(&["gen", "--model", "trp", "--n", "3", "--m", "2", "--out", &input])), 0);
    assert_eq!(code(&latinlab(&["parity-stats", "--in", &input])), 2);
    let broken = path(&dir, "broken.jsonl");
    std::fs::write(&broken, r#"{"n":2,"grid":[[1,2],[1,2]]}"#).unwrap();
    assert_eq!(code(&latinlab(&["parity-stats", "--in", &broken])), 2);
}

#[test]
fn verify_suites_pass() {
    for args in [
        vec!["verify", "jz", "--n", "4"],
        vec!["verify", "figures"],
        vec!["verify", "trp-prob", "--n", "2"],
        vec!["verify", "kernel", "--instances", "20"],
        vec!["verify", "canonicity", "--instances", "200"],
        vec!["verify", "uniformity", "--instances", "2"],
    ] {
        let out = latinlab(&args);
        assert_eq!(code(&out), 0, "{args:?}");
        let report = stdout_json(&out);
        assert_eq!(report["passed"], true);
        assert!(!report["checks"].as_array().unwrap().is_empty());
    }
}

#[test]
fn verify_reports_failure_and_bad_input() {
    // no instances means no stable switch was checked
    let out = latinlab(&["verify", "canonicity", "--instances", "0"]);
    assert_eq!(code(&out), 1);
    assert_eq!(stdout_json(&out)["passed"], false);
    assert_eq!(code(&latinlab(&["verify", "uniformity", "--n", "9"])), 2);
    assert_eq!(code(&latinlab(&["verify", "jz", "--n", "0"])), 2);
}

#[test]
fn audit_with_no_tuples_is_empty() {
    let out = latinlab(&["audit-expander", "--n", "6", "--tuples", "0", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let r = stdout_json(&out);
    assert_eq!(r["tuples_tested"], 0);
    assert_eq!(r["witness_tuples"].as_array().unwrap().len(), 0);
    for key in ["eps", "ell", "beta"] {
        assert!(r["header"][key].is_number(), "{key}");
    }
    assert_eq!(code(&latinlab(&["audit-expander", "--n", "6", "--ell", "7"])), 2);
}

#[test]
fn audit_from_file_with_exact_check() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "sq.json");
    std::fs::write(&input, r#"{"n":2,"entries":[[1,1,1],[1,2,2],[2,1,2],[2,2,1]]}"#).unwrap();
    let out = latinlab(&["audit-expander", "--in", &input, "--ell", "1", "--beta", "1", "--tuples", "4", "--exact"]);
    assert_eq!(code(&out), 0);
    let r = stdout_json(&out);
    assert_eq!(r["stable"], 1);
    assert_eq!(r["failures"], 0);
    assert_eq!(r["exact"]["expander"], true);
}

#[test]
fn dist_commands() {
    let dir = TempDir::new().unwrap();
    let b = path(&dir, "b.json");
    assert_eq!(code(&latinlab(&["dist", "binom", "--n", "5", "--out", &b])), 0);
    let out = latinlab(&["dist", "tv", "--p", &b, "--q", &b]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["tv"], 0.0);
    let c = path(&dir, "c.json");
    assert_eq!(code(&latinlab(&["dist", "binom", "--n", "4", "--out", &c])), 0);
    let d = stdout_json(&latinlab(&["dist", "tv", "--p", &b, "--q", &c]))["tv"].as_f64().unwrap();
    assert!(d > 0.0 && d <= 1.0);
    let bad = path(&dir, "bad.json");
    std::fs::write(&bad, r#"{"support":[0,1],"mass":[0.5,0.2]}"#).unwrap();
    assert_eq!(code(&latinlab(&["dist", "tv", "--p", &b, "--q", &bad])), 2);
    let csv = latinlab(&["dist", "mustar", "--n", "3", "--csv"]);
    assert_eq!(code(&csv), 0);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("value,mass\n"));
}

#[test]
fn count_intercalates_of_klein_square() {
    let dir = TempDir::new().unwrap();
    let input = path(&dir, "z.json");
    std::fs::write(&input, Z2Z2).unwrap();
    let out = latinlab(&["count", "intercalates", "--in", &input]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout_json(&out)["intercalates"], 12);
    let threats = stdout_json(&latinlab(&["count", "threats", "--in", &input, "--r-star", "1,2"]));
    assert!(threats["threatened_pairs"].is_number());
    assert_eq!(code(&latinlab(&["count", "bad-entries", "--in", &input, "--r-star", "5"])), 2);
    assert_eq!(code(&latinlab(&["count", "intercalates", "--in", &path(&dir, "missing.json")])), 2);
}

#[test]
fn thread_variable_is_validated() {
    assert_eq!(code(&latinlab_env(&["dist", "binom", "--n", "2"], "0")), 2);
    assert_eq!(code(&latinlab_env(&["dist", "binom", "--n", "2"], "2")), 0);
}
