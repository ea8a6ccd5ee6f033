//! End-to-end tests of the `lgi` binary: flag parsing, file formats, exit
//! codes.

use std::process::Command;

fn lgi() -> Command {
    Command::new(env!("CARGO_BIN_EXE_lgi"))
}

#[test]
fn sweep_writes_the_documented_csv_schema() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("coherent.csv");
    let status = lgi()
        .args([
            "sweep", "--family", "coherent", "--min", "0", "--max", "5", "--steps", "21",
            "--gamma", "1.0", "--engine", "all", "--trials", "20000", "--seed", "5", "--strict",
            "--output",
        ])
        .arg(&path)
        .status()
        .unwrap();
    assert!(status.success());

    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "param,gamma,c12,c23,c13,k,violated,engine,stderr_k"
    );
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    // 21 points x 1 gamma x 3 engines.
    assert_eq!(rows.len(), 63);
    for row in &rows {
        assert_eq!(row.len(), 9);
        let engine = row[7];
        assert!(["analytic", "exact", "montecarlo"].contains(&engine));
        // stderr_k filled only for Monte-Carlo rows.
        assert_eq!(engine == "montecarlo", !row[8].is_empty());
    }
    // Peak region: the analytic K near x = 1.5 exceeds 1.49.
    let peak: f64 = rows
        .iter()
        .filter(|r| r[7] == "analytic")
        .map(|r| r[5].parse::<f64>().unwrap())
        .fold(f64::NEG_INFINITY, f64::max);
    assert!(peak > 1.49 && peak <= 1.5);
    // Analytic and exact K columns agree row-wise (strict mode passed).
    let k_of = |engine: &str| -> Vec<f64> {
        rows.iter()
            .filter(|r| r[7] == engine)
            .map(|r| r[5].parse().unwrap())
            .collect()
    };
    for (a, e) in k_of("analytic").iter().zip(k_of("exact")) {
        assert!((a - e).abs() < 1e-8);
    }
}

#[test]
fn sweep_emits_json_when_asked() {
    let out = lgi()
        .args([
            "sweep", "--family", "thermal", "--min", "0.1", "--max", "2.0", "--steps", "5",
            "--engine", "analytic", "--format", "json",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let rows: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["engine"], "analytic");
    assert!(rows[0]["k"].as_f64().unwrap() > 1.0);
    assert!(rows[0]["stderr_k"].is_null());
}

#[test]
fn gamma_zero_sweep_never_violates() {
    let out = lgi()
        .args([
            "sweep", "--family", "dephased", "--min", "0", "--max", "6", "--steps", "31",
            "--gamma", "0,0.3,1", "--engine", "exact",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut saw_gamma_zero = 0;
    for line in text.lines().skip(1).filter(|l| !l.is_empty()) {
        let cols: Vec<&str> = line.split(',').collect();
        let gamma: f64 = cols[1].parse().unwrap();
        let k: f64 = cols[5].parse().unwrap();
        if gamma == 0.0 {
            saw_gamma_zero += 1;
            assert!(k <= 1.0 + 1e-12, "γ=0 row with K = {k}");
            assert_eq!(cols[6], "false");
        }
    }
    assert_eq!(saw_gamma_zero, 31);
}

#[test]
fn sweep_rejects_bad_grids_with_exit_one() {
    for args in [
        vec![
            "sweep", "--family", "coherent", "--min", "2", "--max", "1", "--steps", "10",
        ],
        vec![
            "sweep", "--family", "coherent", "--min", "0", "--max", "1", "--steps", "1",
        ],
        vec![
            "sweep", "--family", "thermal", "--min", "0", "--max", "1", "--steps", "5",
        ],
        vec![
            "sweep", "--family", "coherent", "--min", "0", "--max", "1", "--steps", "5", "--gamma",
            "1.5",
        ],
    ] {
        let status = lgi().args(&args).output().unwrap();
        assert_eq!(status.status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn mc_reports_k_and_the_error_threshold() {
    let out = lgi()
        .args([
            "mc",
            "--input",
            "fock:1",
            "--trials",
            "200000",
            "--seed",
            "7",
            "--epsilon",
            "0.05",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!((report["threshold"].as_f64().unwrap() - 1.28525).abs() < 1e-12);
    assert!((report["eta"].as_f64().unwrap() - 0.142625).abs() < 1e-12);
    assert!(report["report"]["stats"]["stderr_k"].as_f64().unwrap() > 0.0);
    assert_eq!(report["n_trials"].as_u64().unwrap(), 200_000);
}

#[test]
fn mc_is_reproducible_for_a_seed_and_rejects_bad_input() {
    let run = || {
        let out = lgi()
            .args([
                "mc",
                "--input",
                "coherent:1.386",
                "--trials",
                "50000",
                "--seed",
                "99",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["report"]["k"].as_f64().unwrap()
    };
    assert_eq!(run().to_bits(), run().to_bits());

    let bad = lgi()
        .args(["mc", "--input", "squeezed:1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    let bad = lgi()
        .args(["mc", "--input", "thermal:-1"])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn seed_env_variable_is_used_unless_a_flag_overrides_it() {
    let base = |env: Option<(&str, &str)>, extra: &[&str]| {
        let mut cmd = lgi();
        cmd.args(["mc", "--input", "fock:1", "--trials", "20000"]);
        cmd.args(extra);
        if let Some((k, v)) = env {
            cmd.env(k, v);
        }
        let out = cmd.output().unwrap();
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
        v["report"]["c12"].as_f64().unwrap()
    };
    let from_env = base(Some(("LGI_SEED", "31")), &[]);
    let from_flag = base(None, &["--seed", "31"]);
    assert_eq!(from_env.to_bits(), from_flag.to_bits());
    let flag_wins = base(Some(("LGI_SEED", "31")), &["--seed", "77"]);
    let plain_77 = base(None, &["--seed", "77"]);
    assert_eq!(flag_wins.to_bits(), plain_77.to_bits());
}

/// `check` runs the full acceptance gate. Criterion 5 carries a known
/// internally inconsistent target (its stated per-γ maximum exceeds the
/// stated curve's actual maximum for 0 < γ < 1), so the gate currently
/// reports exactly that one failure and exit code 2.
#[test]
fn check_prints_every_criterion_and_flags_the_known_defect() {
    let out = lgi().arg("check").output().unwrap();
    let text = String::from_utf8_lossy(&out.stdout);
    let pass_lines = text.lines().filter(|l| l.contains("[PASS]")).count();
    let fail_lines: Vec<&str> = text.lines().filter(|l| l.contains("[FAIL]")).collect();
    assert_eq!(
        pass_lines + fail_lines.len(),
        10,
        "ten criterion lines:\n{text}"
    );
    assert_eq!(fail_lines.len(), 1, "only criterion 5 may fail:\n{text}");
    assert!(fail_lines[0].contains("criterion  5"));
    assert_eq!(out.status.code(), Some(2));
}
