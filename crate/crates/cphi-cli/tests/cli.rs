//! End-to-end tests of the cphi binary: exit codes, output formats, cache
//! behavior, and report determinism.

use std::path::Path;
use std::process::{Command, Output};

fn cphi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cphi"))
        .args(args)
        .env_remove("CPHI_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn search_m5_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("report.json");
    let out = cphi(&["search", "--m", "5", "--format", "json", "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(report["m"], 5);
    assert_eq!(report["total_eps"], 256);
    assert_eq!(report["expectation_met"], true);
    let survivors: Vec<&str> = report["survivor_summary"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["ell"].as_str().unwrap())
        .collect();
    assert_eq!(survivors, ["7", "11"]);
    assert_eq!(
        report["survivor_summary"][0]["eps"].as_str().unwrap(),
        "-+--0+"
    );
    assert_eq!(
        report["survivor_summary"][0]["classification"].as_str().unwrap(),
        "known-congruence"
    );
    assert!(report["profile_checksum"].as_str().unwrap().len() == 16);
    assert_eq!(report["config"]["command"], "search");
    assert_eq!(report["config"]["workers"], 1);
    assert!(report["runtime_ms"].is_u64());
    assert!(report["timestamp"].is_u64());
}

#[test]
fn search_reports_are_deterministic_apart_from_time_fields() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let run = || {
        let out = cphi(&["search", "--m", "5", "--format", "json", "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let map = v.as_object_mut().unwrap();
        map.remove("timestamp");
        map.remove("runtime_ms");
        serde_json::to_string(&v).unwrap()
    };
    assert_eq!(run(), run());
}

#[test]
fn search_workers_match_single_thread() {
    let dir = tempfile::tempdir().unwrap();
    let run = |args: &[&str], name: &str| {
        let path = dir.path().join(name);
        let mut full = vec!["search", "--m", "7", "--format", "json", "--out"];
        full.push(path.to_str().unwrap());
        full.extend_from_slice(args);
        let out = cphi(&full);
        assert_eq!(out.status.code(), Some(0));
        let mut v: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        let map = v.as_object_mut().unwrap();
        map.remove("timestamp");
        map.remove("runtime_ms");
        map.remove("config");
        serde_json::to_string(&v).unwrap()
    };
    let single = run(&[], "single.json");
    let multi = run(&["--workers", "4"], "multi.json");
    assert_eq!(single, multi);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(cphi(&["search", "--m", "6"]).status.code(), Some(2));
    assert_eq!(cphi(&["expand", "--m", "4"]).status.code(), Some(2));
    assert_eq!(cphi(&["basis", "--m", "5", "--k", "6"]).status.code(), Some(2));
    assert_eq!(cphi(&["verify", "--m", "5", "--ell", "4", "--suite", "congruence"]).status.code(), Some(2));
    // unknown flags and missing arguments are clap's domain, still 2
    assert_eq!(cphi(&["search"]).status.code(), Some(2));
    assert_eq!(cphi(&["nonsense"]).status.code(), Some(2));
}

#[test]
fn expand_m1_prints_partition_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let out = cphi(&["expand", "--m", "1", "--nmax", "10", "--cache-dir", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1\n1\n2\n3\n5\n7\n11\n15\n22\n30\n42\n");
}

#[test]
fn verify_congruence_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let ok = cphi(&["verify", "--m", "5", "--ell", "7", "--suite", "congruence", "--cache-dir", cache]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("PASS congruence m=5 l=7"));
    let bad = cphi(&["verify", "--m", "5", "--ell", "13", "--suite", "congruence", "--nmax", "20", "--cache-dir", cache]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL congruence m=5 l=13"));
    assert!(stdout(&bad).contains("counterexample at n=0"));
}

#[test]
fn verify_emits_machine_report_next_to_pass_lines() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verify.json");
    let out = cphi(&[
        "verify", "--m", "5", "--ell", "7", "--suite", "lowpoint",
        "--format", "json", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).starts_with("PASS lowpoint"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["pass"], true);
    assert_eq!(v["suite"], "lowpoint");
}

#[test]
fn basis_lists_level_11_index_gap() {
    let out = cphi(&["basis", "--m", "11", "--k", "12", "--prec", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("[1, 2, 3, 4, 5, 6, 7, 8, 9, 11]"));
}

#[test]
fn basis_window_reproduces_displayed_rows() {
    let out = cphi(&["basis", "--m", "5", "--k", "28", "--prec", "6", "--shift", "r-inf"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("(1, -10, 35, -30, -105, 192)"));
    assert!(text.contains("(0, 1, -4, 2, 8, -5)"));
}

#[test]
fn cache_write_extend_and_reuse() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let file = Path::new(cache).join("cphi_m5_v1.txt");

    let out = cphi(&["expand", "--m", "5", "--nmax", "12", "--cache-dir", cache]);
    assert_eq!(out.status.code(), Some(0));
    let body = std::fs::read_to_string(&file).unwrap();
    assert!(body.starts_with("cphi m=5 nmax=12 version=1\n"));
    assert_eq!(body.lines().count(), 14);
    assert_eq!(body.lines().nth(2).unwrap(), "25"); // cphi_5(1)

    // smaller request is served from the same file
    let out = cphi(&["expand", "--m", "5", "--nmax", "4", "--cache-dir", cache]);
    assert_eq!(stdout(&out), "1\n25\n150\n675\n2450\n");
    assert!(std::fs::read_to_string(&file).unwrap().starts_with("cphi m=5 nmax=12"));

    // larger request extends the cache
    let out = cphi(&["expand", "--m", "5", "--nmax", "20", "--cache-dir", cache]);
    assert_eq!(out.status.code(), Some(0));
    assert!(std::fs::read_to_string(&file).unwrap().starts_with("cphi m=5 nmax=20"));
}

#[test]
fn cache_env_variable_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_cphi"))
        .args(["expand", "--m", "5", "--nmax", "3"])
        .env("CPHI_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.path().join("cphi_m5_v1.txt").exists());
}

#[test]
fn search_csv_projection_has_table_header() {
    let out = cphi(&["search", "--m", "5", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("eps,gcd,candidates,outside_search_range,survivors\n"));
    assert!(text.contains("-+--0+,350,7,2|5,7"));
}
