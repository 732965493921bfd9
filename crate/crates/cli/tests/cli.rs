use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn randcal(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randcal"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

#[test]
fn counterexample_identity_is_exact_in_both_modes() {
    for mode in ["schrodinger", "conductivity"] {
        let dir = tempfile::tempdir().unwrap();
        let o = randcal(&["verify", "counterexample", "--mode", mode, "--lmax", "50"], dir.path());
        assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
        let id = read_json(&dir.path().join("identity.json"));
        assert_eq!(id["max_deviation"], "0/1");
        assert_eq!(read_json(&dir.path().join("verdict.json"))["schema_version"], 1);
    }
}

#[test]
fn moments_report_positive_gap_at_zero() {
    let dir = tempfile::tempdir().unwrap();
    let o = randcal(&["moments", "--order", "3", "--lambda", "20"], dir.path());
    assert_eq!(o.status.code(), Some(0));
    let m = read_json(&dir.path().join("moments.json"));
    let gap = m["gap_at_zero"].as_str().unwrap();
    assert!(!gap.starts_with('-') && !gap.starts_with("0/"), "gap {gap}");
    assert!(dir.path().join("products.csv").exists());
}

#[test]
fn bad_input_exits_with_config_code() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(randcal(&["suite", "bogus"], dir.path()).status.code(), Some(2));
    assert_eq!(randcal(&["symbols", "--cutoff", "3"], dir.path()).status.code(), Some(2));
    assert_eq!(randcal(&["radial", "--no-such-flag"], dir.path()).status.code(), Some(2));
    assert_eq!(randcal(&["green", "jensen", "--grid", "20"], dir.path()).status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["radial", "--family", "1,5", "--lmax", "8"];
    assert_eq!(randcal(&args, dir.path()).status.code(), Some(0));
    let first = (std::fs::read(dir.path().join("verdict.json")).unwrap(), std::fs::read(dir.path().join("radial.csv")).unwrap());
    assert_eq!(randcal(&args, dir.path()).status.code(), Some(0));
    let second = (std::fs::read(dir.path().join("verdict.json")).unwrap(), std::fs::read(dir.path().join("radial.csv")).unwrap());
    assert_eq!(first, second);
}

#[test]
fn config_file_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    assert_eq!(randcal(&["verify", "counterexample", "--mode", "conductivity", "--lmax", "12"], &a).status.code(), Some(0));
    let b = dir.path().join("b");
    let cfg = a.join("config.json");
    let o = randcal(&["--config", cfg.to_str().unwrap()], &b);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(std::fs::read(a.join("identity.json")).unwrap(), std::fs::read(b.join("identity.json")).unwrap());
    let mismatch = randcal(&["--config", cfg.to_str().unwrap(), "moments"], &b);
    assert_eq!(mismatch.status.code(), Some(2));
}

#[test]
fn green_jensen_from_sampler_file() {
    let dir = tempfile::tempdir().unwrap();
    let n = 50;
    let bump: Vec<f64> = (0..n + 2)
        .map(|i| {
            let x = i as f64 / (n + 1) as f64;
            100.0 * (1.0 + 0.5 * (-((x - 0.5) / 0.1).powi(2)).exp())
        })
        .collect();
    let sampler = json!({"type": "atoms", "atoms": [
        {"weight": "1/3", "field": bump},
        {"weight": "2/3", "field": vec![60.0; n + 2]},
    ]});
    let path = dir.path().join("sampler.json");
    std::fs::write(&path, sampler.to_string()).unwrap();
    let o = randcal(&["green", "jensen", "--grid", "50", "--sampler", path.to_str().unwrap()], &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(read_json(&dir.path().join("out/verdict.json"))["pass"], true);
}

#[test]
fn quick_suite_passes_with_skips() {
    let dir = tempfile::tempdir().unwrap();
    let o = randcal(&["suite", "quick"], dir.path());
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(o.status.code(), Some(0), "{stdout}");
    assert_eq!(stdout.lines().filter(|l| l.starts_with("PASS ") || l.starts_with("SKIP ")).count(), 14);
    assert!(stdout.contains("SKIP 12 "));
}
