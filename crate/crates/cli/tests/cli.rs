use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dipercolation")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn theory_prints_prediction_json() {
    let out = run(&["theory", "--dist", "poisson:2", "--pi", "0.8", "--mode", "bond"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stderr.is_empty());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!((v["c_bond"].as_f64().unwrap() - 0.41214001181578).abs() < 1e-8);
    assert!((v["pi_c"].as_f64().unwrap() - 0.5).abs() < 1e-9);
    assert_eq!(v["regime"], "supercritical");
}

#[test]
fn scc_on_two_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "g.txt", "0 1\n1 0\n");
    let labels = dir.path().join("labels.txt");
    let out = run(&["scc", "--graph", &g, "--labels", labels.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "1 component(s); largest = 2\n");
    assert_eq!(fs::read_to_string(labels).unwrap(), "0 0\n1 0\n");
}

#[test]
fn check_reports_invalid_sequence() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "2 0\n0 1\n");
    let out = run(&["check", "--seq", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["valid"], false);
    assert_eq!(String::from_utf8_lossy(&out.stderr).lines().count(), 1);

    let good = write(dir.path(), "good.txt", "1 1\n1 1\n1 1\n");
    let out = run(&["check", "--seq", &good]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["graphical"], true);
    assert_eq!(v["properness"]["d_max"], 1);
}

#[test]
fn usage_errors_exit_one() {
    for args in [&["frobnicate"][..], &["theory"], &["sample", "--n", "10"], &["theory", "--dist", "gauss:1"]]
    {
        let out = run(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn runtime_errors_exit_two_with_one_line() {
    let out = run(&["scc", "--graph", "/nonexistent/graph.txt"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("/nonexistent/graph.txt"));
    assert_eq!(run(&["theory", "--dist", "poisson:2", "--pi", "1.5"]).status.code(), Some(2));
}

#[test]
fn sample_then_percolate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.txt");
    let out = run(&["sample", "--dist", "poisson:2", "--n", "500", "--seed", "9", "-o", g.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(&g).unwrap();
    assert!(text.starts_with("# n=500 "));
    assert!(text.lines().next().unwrap().contains("seed=9"));

    let out =
        run(&["percolate", "--graph", g.to_str().unwrap(), "--pi", "0.5", "--mode", "site", "--seed", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let perc = stdout(&out);
    assert!(perc.lines().nth(1).unwrap().starts_with("# deleted"));
    let m_before = text.lines().filter(|l| !l.starts_with('#')).count();
    let m_after = perc.lines().filter(|l| !l.starts_with('#')).count();
    assert!(m_after < m_before);
}

#[test]
fn sample_from_sequence_file() {
    let dir = tempfile::tempdir().unwrap();
    let seq = write(dir.path(), "s.txt", "1 1\n1 1\n1 1\n");
    let out = run(&["sample", "--seq", &seq, "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().filter(|l| !l.starts_with('#')).count(), 3);
    let bad = write(dir.path(), "k.txt", "0 2\n2 0\n");
    assert_eq!(run(&["sample", "--seq", &bad, "--seed", "4"]).status.code(), Some(2));
}

#[test]
fn experiment_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let cfg =
        write(dir.path(), "e.cfg", "dist = poisson:2\nn = 400\nmode = site\npi = 0.5, 1.0\ntrials = 2\n");
    let csv = dir.path().join("t.csv");
    let summary = dir.path().join("s.json");
    let out = run(&[
        "experiment",
        "--config",
        &cfg,
        "--seed",
        "3",
        "--csv",
        csv.to_str().unwrap(),
        "--summary",
        summary.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let rows = fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 5);
    assert!(rows.starts_with("pi,trial,seed,"));
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    assert_eq!(v[1]["trials_ok"], 2);
}

#[test]
fn experiment_overrides_apply() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.cfg", "dist = const:1\nn = 10\npi = 1\n");
    let out = run(&["experiment", "--config", &cfg, "--set", "trials=3", "--set", "n = 20"]);
    assert_eq!(out.status.code(), Some(0));
    let csv = stdout(&out);
    assert_eq!(csv.lines().count(), 4);
    assert!(csv.lines().skip(1).all(|l| l.split(',').nth(3) == Some("20")));
    let out = run(&["experiment", "--config", &cfg, "--set", "colour=red"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn fixed_sequence_flag_shares_one_realization() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "e.cfg", "dist = poisson:2\nn = 300\npi = 1\ntrials = 4\n");
    let m_before = |extra: &[&str]| -> Vec<String> {
        let mut args = vec!["experiment", "--config", &cfg];
        args.extend_from_slice(extra);
        let out = run(&args);
        assert_eq!(out.status.code(), Some(0));
        stdout(&out).lines().skip(1).map(|l| l.split(',').nth(4).unwrap().to_string()).collect()
    };
    let shared = m_before(&["--fixed-sequence"]);
    assert!(shared.iter().all(|m| *m == shared[0]));
    let fresh = m_before(&[]);
    assert!(fresh.iter().any(|m| *m != fresh[0]));
}
