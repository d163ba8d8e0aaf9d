use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_berryoptics"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("binary runs")
}

fn summary(out: &Path, command: &str) -> Value {
    let text = std::fs::read_to_string(out.join(format!("{command}.json"))).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn csv_rows(path: &Path) -> Vec<Vec<String>> {
    let mut r = csv::Reader::from_path(path).unwrap();
    r.records().map(|rec| rec.unwrap().iter().map(String::from).collect()).collect()
}

fn close(v: &Value, want: f64, tol: f64) -> bool {
    (v.as_f64().unwrap() - want).abs() < tol
}

#[test]
fn phases_example() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["phases", "--envelope", "eckart", "--a", "1", "--omega-alpha-tau", "1", "--delta-tau", "10"]);
    assert!(o.status.success());
    let s = summary(dir.path(), "phases");
    let r = &s["results"];
    assert!(close(&r["beta"], 4.388246, 5e-7));
    assert!(close(&r["gamma"], -0.346574, 5e-7));
    assert!(close(&r["phi_g"], 4.041672, 5e-7));
    assert_eq!(s["status"], "ok");
    assert_eq!(s["config"]["schema_version"], 1);
    assert_eq!(s["config_hash"].as_str().unwrap().len(), 64);
    assert!(s.get("timing").is_none());
}

#[test]
fn sweep_example_and_consistency_with_phases() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["sweep", "--sweep-a", "0,0.5,1", "--omega-alpha-tau", "1", "--methods", "quadrature,closed"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 3);
    let gammas: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    for (g, want) in gammas.iter().zip([0.0, -0.111572, -0.346574]) {
        assert!((g - want).abs() < 5e-7, "{g}");
    }
    for r in &rows {
        assert!(r[r.len() - 2].parse::<f64>().unwrap() < 1e-10);
        assert_eq!(r[r.len() - 1], "ok");
    }

    // One-point sweep and `phases` agree digit for digit.
    let one = tempfile::tempdir().unwrap();
    let args = ["--a", "0.7", "--omega-alpha-tau", "2", "--delta-tau", "25", "--methods", "quadrature"];
    assert!(run(one.path(), &[&["sweep"][..], &args].concat()).status.success());
    assert!(run(one.path(), &[&["phases"][..], &args].concat()).status.success());
    let sweep = csv_rows(&one.path().join("sweep.csv"));
    let phases = csv_rows(&one.path().join("phases.csv"));
    assert_eq!(sweep[0][3..6], phases[0][1..4]);
}

#[test]
fn sweep_order_is_lexicographic() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["sweep", "--sweep-a", "0.1,0.2", "--sweep-delta-tau", "10,20,30", "--sweep-k-dx0", "0.1,0.2"]);
    assert!(o.status.success());
    let rows = csv_rows(&dir.path().join("sweep.csv"));
    assert_eq!(rows.len(), 12);
    let keys: Vec<(f64, f64, f64)> = rows
        .iter()
        .map(|r| (r[0].parse().unwrap(), r[2].parse().unwrap(), r[3].parse().unwrap()))
        .collect();
    let mut sorted = keys.clone();
    sorted.sort_by(|a, b| a.partial_cmp(b).unwrap());
    assert_eq!(keys, sorted);
}

#[test]
fn config_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.json");
    std::fs::write(&empty, "").unwrap();
    let o = run(dir.path(), &["phases", "--config", empty.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));

    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"schema_version\": 1,\n \"zone\": {\"envelope\": \"square\"}}").unwrap();
    let o = run(dir.path(), &["phases", "--config", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    // 1001 × 1001 × 2 points exceeds the 10⁶ budget.
    let axis: Vec<f64> = (0..1001).map(|i| i as f64 / 1000.0).collect();
    let big = dir.path().join("big.json");
    let doc = serde_json::json!({
        "schema_version": 1,
        "sweep": { "a": axis, "omega_alpha_tau": axis, "delta_tau": [10.0, 20.0] },
    });
    std::fs::write(&big, doc.to_string()).unwrap();
    let o = run(dir.path(), &["sweep", "--config", big.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));

    let o = run(dir.path(), &["phases", "--envelope", "gaussian", "--methods", "closed"]);
    assert_eq!(o.status.code(), Some(2));

    let o = run(dir.path(), &["phases", "--tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numerical_failure_exits_three_with_partial_results() {
    let dir = tempfile::tempdir().unwrap();
    // Three output samples are far too coarse to unwrap the ODE phase.
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"schema_version": 1, "numerics": {"samples": 3}}"#).unwrap();
    let o = run(dir.path(), &["phases", "--config", cfg.to_str().unwrap(), "--methods", "closed,ode", "--a", "2"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let s = summary(dir.path(), "phases");
    assert_eq!(s["status"], "failed");
    assert!(s["results"]["beta"].is_number());
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(
        &cfg,
        r#"{"schema_version": 1, "command": "phases", "zone": {"a": 1, "omega_alpha_tau": 1, "delta_tau": 10}}"#,
    )
    .unwrap();
    assert!(run(dir.path(), &["phases", "--config", cfg.to_str().unwrap()]).status.success());
    let s = summary(dir.path(), "phases");
    assert!(close(&s["results"]["gamma"], -0.346574, 5e-7));
    assert!(run(dir.path(), &["phases", "--config", cfg.to_str().unwrap(), "--a", "0"]).status.success());
    let s = summary(dir.path(), "phases");
    assert_eq!(s["results"]["gamma"].as_f64().unwrap(), 0.0);
    assert_eq!(s["config"]["zone"]["a"], 0.0);
    // The echoed config reproduces the run.
    let echo = dir.path().join("echo.json");
    std::fs::write(&echo, s["config"].to_string()).unwrap();
    let again = dir.path().join("again");
    assert!(run(&again, &["phases", "--config", echo.to_str().unwrap()]).status.success());
    assert_eq!(
        std::fs::read(again.join("phases.csv")).unwrap(),
        std::fs::read(dir.path().join("phases.csv")).unwrap()
    );

    let o = run(dir.path(), &["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn widths_figure_data() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(dir.path(), &["packet", "--a", "0.5", "--b", "5", "--profile", "quadratic"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let rows = csv_rows(&dir.path().join("widths.csv"));
    let v = |r: &Vec<String>, i: usize| r[i].parse::<f64>().unwrap();
    assert_eq!((v(&rows[0], 1), v(&rows[0], 2), v(&rows[0], 3)), (1.0, 1.0, 1.0));
    assert_eq!(v(&rows[rows.len() - 1], 0), 1.0);
    let s = summary(dir.path(), "packet");
    let r = &s["results"];
    assert!(close(&r["min_width"], 0.19612, 5e-6));
    assert!(close(&r["t_min"], 0.19231, 5e-6));
    assert!(r["relative_deviation"].as_f64().unwrap().abs() < 1e-6);
    for row in &rows {
        assert!((v(row, 4) / v(row, 1) - 1.0).abs() < 1e-6);
    }
}

#[test]
fn packet_reports_both_b_values() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(
        dir.path(),
        &["packet", "--a", "1.8", "--omega-alpha-tau", "12.566370614359172", "--k-dx0", "0.25", "--profile", "quadratic"],
    );
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = &summary(dir.path(), "packet")["results"];
    assert!(close(&r["b_single_zone"], 2.545, 5e-4));
    assert!(close(&r["b_two_zones"], 5.09, 5e-3));
    assert_eq!(r["b"], r["b_two_zones"]);
}

#[test]
fn circuit_figure_data() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["circuit", "--a", "0", "--circuit-samples", "11"]).status.success());
    let rows = csv_rows(&dir.path().join("circuit.csv"));
    assert_eq!(rows.len(), 11);
    for r in &rows {
        for v in &r[3..5] {
            assert_eq!(v.parse::<f64>().unwrap(), 0.0);
        }
    }
    assert!(run(dir.path(), &["circuit", "--a", "1", "--omega-alpha-tau", "0.5"]).status.success());
    let s = summary(dir.path(), "circuit");
    assert!(close(&s["results"]["enclosed_flux"], -0.25 * 2f64.ln(), 1e-9));
}

#[test]
fn windings_table() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["windings", "--a", "1", "--omega-alpha-tau", "1"]).status.success());
    let rows = csv_rows(&dir.path().join("windings.csv"));
    assert_eq!(rows.len(), 30);
    let first: f64 = rows[0][1].parse().unwrap();
    assert!((first + 0.344_714_812_023_196_6).abs() < 1e-12);
    let s = summary(dir.path(), "windings");
    assert!(s["results"]["direct_minus_limit"].as_f64().unwrap().abs() < 1e-8);
    let o = run(dir.path(), &["windings", "--envelope", "gaussian"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn dynamics_outputs() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["dynamics", "--a", "0.5", "--delta-tau", "40", "--omega-alpha-tau", "0"]).status.success());
    let s = summary(dir.path(), "dynamics");
    assert!((s["results"]["phase"].as_f64().unwrap() - 4.8101).abs() < 5e-3);
    let rows = csv_rows(&dir.path().join("trajectory.csv"));
    assert!(rows.len() >= 401);

    assert!(run(dir.path(), &["dynamics", "--a", "0.5", "--delta-tau", "40", "--two-zone", "--gap", "10"]).status.success());
    let r = &summary(dir.path(), "dynamics")["results"];
    assert!(r["residual_over_beta"].as_f64().unwrap().abs() < 0.01);
    assert!(dir.path().join("trajectory_zone2.csv").exists());
}

#[test]
fn validate_reports_argon_ratio() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["validate"]).status.success());
    let r = &summary(dir.path(), "validate")["results"];
    assert!(close(&r["omega_alpha_over_delta"], 0.1806, 1e-4));
    assert!(r["adiabatic_margin"].as_f64().unwrap() > 0.0);
    assert!(r["raman_nath_margin"].is_null());
}

#[test]
fn thread_count_does_not_change_output() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let args = ["sweep", "--sweep-a", "0.1,0.2,0.3,0.4", "--sweep-delta-tau", "10,20,30"];
    let go = |dir: &Path, threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_berryoptics"))
            .args(args)
            .arg("--out")
            .arg(dir)
            .env("BERRYOPTICS_THREADS", threads)
            .output()
            .unwrap()
            .status
    };
    assert!(go(a.path(), "1").success());
    assert!(go(b.path(), "4").success());
    assert_eq!(std::fs::read(a.path().join("sweep.csv")).unwrap(), std::fs::read(b.path().join("sweep.csv")).unwrap());
    let o = Command::new(env!("CARGO_BIN_EXE_berryoptics"))
        .args(["phases", "--out"])
        .arg(a.path())
        .env("BERRYOPTICS_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn timing_is_opt_in() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(dir.path(), &["phases", "--timing"]).status.success());
    assert!(summary(dir.path(), "phases")["timing"]["elapsed_s"].is_number());
}
