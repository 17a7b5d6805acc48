//! End-to-end checks of the binary: emitted files, flag precedence,
//! determinism, and exit codes.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn windisc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_windisc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read_json(dir: &Path, name: &str) -> Value {
    let text = fs::read_to_string(dir.join(name)).unwrap();
    serde_json::from_str(&text).unwrap()
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

#[test]
fn asymptotic_emits_the_density_and_both_constants() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = windisc(&["asymptotic", "--R", "100", "--V", "1", "--D", "1", "--out", out]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));

    let csv = fs::read_to_string(dir.path().join("P.csv")).unwrap();
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("# windisc asymptotic"));
    assert!(lines.next().unwrap().starts_with("# config: {"));
    assert_eq!(lines.next().unwrap(), "rho,P");
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|c| c.parse().unwrap())
        .collect();
    assert_eq!(first, vec![100.0, 0.0], "the law vanishes at the disc edge");

    let constants = read_json(dir.path(), "constants.json");
    let mu = constants["mu"].as_f64().unwrap();
    assert!((mu - 5000.5).abs() < 1e-9, "mu = {mu}");
    assert_eq!(constants["winding"]["used"], constants["winding"]["leading"]);

    let winding = read_json(dir.path(), "winding.json");
    assert!(winding["root"].as_f64().unwrap() < winding["leading"].as_f64().unwrap());
}

#[test]
fn constant_flag_switches_the_winding_input() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = windisc(&[
        "asymptotic",
        "--constant",
        "self-consistent",
        "--out",
        out,
        "--format",
        "json",
    ]);
    assert_eq!(code(&run), 0);
    let constants = read_json(dir.path(), "constants.json");
    assert_eq!(constants["winding"]["used"], constants["winding"]["self_consistent_root"]);
    assert!(
        constants["winding"]["used"].as_f64().unwrap()
            < constants["winding"]["leading"].as_f64().unwrap()
    );
    let density = read_json(dir.path(), "P.json");
    assert_eq!(density["columns"][0], "rho");
    assert_eq!(density["rows"][0][1], 0.0);
}

#[test]
fn config_file_applies_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.json");
    fs::write(
        &config_path,
        r#"{"params": {"radius": 50.0, "speed": 2.0}, "grid": {"nodes": 700}}"#,
    )
    .unwrap();
    let out = dir.path().to_str().unwrap();
    let run = windisc(&[
        "asymptotic",
        "--config",
        config_path.to_str().unwrap(),
        "--R",
        "80",
        "--out",
        out,
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let constants = read_json(dir.path(), "constants.json");
    assert_eq!(constants["config"]["radius"], 80.0, "flag beats file");
    assert_eq!(constants["config"]["speed"], 2.0, "file beats default");
    assert_eq!(constants["config"]["nodes"], 700);
}

#[test]
fn unknown_config_keys_are_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("run.json");
    fs::write(&config_path, r#"{"grit": {"nodes": 700}}"#).unwrap();
    let run = windisc(&["asymptotic", "--config", config_path.to_str().unwrap()]);
    assert_eq!(code(&run), 2);
    let message = String::from_utf8_lossy(&run.stderr);
    assert!(message.contains("unknown field"), "{message}");
}

#[test]
fn zero_speed_has_no_bound_state() {
    let dir = tempfile::tempdir().unwrap();
    let run = windisc(&["solve", "--V", "0", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code(&run), 2);
    let message = String::from_utf8_lossy(&run.stderr);
    assert!(message.contains("no localized profile"), "{message}");
}

#[test]
fn exhausted_iteration_budget_is_a_numerics_error() {
    let dir = tempfile::tempdir().unwrap();
    let run = windisc(&[
        "solve",
        "--max-iterations",
        "1",
        "--nodes",
        "600",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(code(&run), 3);
    assert!(String::from_utf8_lossy(&run.stderr).contains("no convergence"));
}

#[test]
fn sweep_rows_shrink_toward_the_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = windisc(&[
        "solve",
        "--sweep-R",
        "50,100,200",
        "--nodes",
        "700",
        "--out",
        out,
        "--format",
        "json",
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let table = read_json(dir.path(), "comparison.json");
    let rows = table["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 3);
    let sup: Vec<f64> = rows.iter().map(|r| r[1].as_f64().unwrap()).collect();
    assert!(sup[0] > sup[1] && sup[1] > sup[2], "sup errors {sup:?}");
    for row in rows {
        let c = row[5].as_f64().unwrap();
        let c_root = row[6].as_f64().unwrap();
        let r = row[0].as_f64().unwrap();
        let leading = 1.0 / (std::f64::consts::TAU * r * r);
        assert!(c < leading && c_root < leading);
    }
}

#[test]
fn seeded_simulations_emit_identical_bytes() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    for dir in [&dir_a, &dir_b] {
        let run = windisc(&[
            "simulate",
            "--seed",
            "7",
            "--paths",
            "800",
            "--steps",
            "40",
            "--nodes",
            "900",
            "--out",
            dir.path().to_str().unwrap(),
        ]);
        assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    }
    for name in ["histogram.csv", "stats.json"] {
        let a = fs::read(dir_a.path().join(name)).unwrap();
        let b = fs::read(dir_b.path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between identically seeded runs");
    }
}

#[test]
fn histogram_accounts_for_every_recorded_sample() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = windisc(&[
        "simulate", "--paths", "600", "--steps", "30", "--burn-in", "5", "--nodes", "900",
        "--out", out,
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));

    let csv = fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    let mut total = 0u64;
    let mut rows = 0usize;
    for line in csv.lines().skip(3) {
        let cells: Vec<&str> = line.split(',').collect();
        total += cells[2].parse::<f64>().unwrap() as u64;
        rows += 1;
    }
    assert_eq!(rows, 201, "200 bins plus the overflow row");
    assert_eq!(total, 600 * 25);

    let stats = read_json(dir.path(), "stats.json");
    assert_eq!(stats["n_effective"].as_u64().unwrap(), 600 * 25);
    assert!(stats["winding"]["rate"].as_f64().unwrap() > 0.0);
    assert!(stats["comparison"]["ks"].as_f64().unwrap() < 0.05);
}

#[test]
fn action_lists_every_probe_delta() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = windisc(&[
        "action", "--source", "asymptotic", "--nodes", "900", "--perturbations", "12",
        "--out", out,
    ]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));

    let minimality = read_json(dir.path(), "minimality.json");
    let deltas = minimality["deltas"].as_array().unwrap();
    assert_eq!(deltas.len(), 12 * 4);
    for entry in deltas {
        let epsilon = entry["epsilon"].as_f64().unwrap();
        assert!([-1e-2, -1e-3, 1e-3, 1e-2].contains(&epsilon));
        assert!(entry["delta_action"].as_f64().unwrap() > 0.0);
    }
    assert!(minimality["violations"].as_array().unwrap().is_empty());

    let breakdown = read_json(dir.path(), "breakdown.json");
    let radial = breakdown["radial"].as_f64().unwrap();
    let angular = breakdown["angular"].as_f64().unwrap();
    let total = breakdown["total"].as_f64().unwrap();
    assert!((radial + angular - total).abs() <= 1e-15 * total.abs());
}

#[test]
fn verify_passes_clean_and_trips_on_the_injected_fault() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let run = windisc(&["verify", "--nodes", "900", "--perturbations", "20", "--out", out]);
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let report = read_json(dir.path(), "verify.json");
    assert_eq!(report["passed"], true);
    assert_eq!(report["gated_failures"], 0);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.iter().any(|c| c["informational"] == true));
    assert!(checks
        .iter()
        .filter(|c| c["informational"] == true)
        .all(|c| c["passed"] == true));

    let faulted = windisc(&[
        "verify", "--nodes", "900", "--perturbations", "20", "--inject-fault", "ai-scale",
        "--out", out,
    ]);
    assert_eq!(code(&faulted), 4);
    let report = read_json(dir.path(), "verify.json");
    assert_eq!(report["passed"], false);
    let failed: Vec<&str> = report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|c| c["passed"] == false)
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failed.contains(&"airy_normalization_identity"), "{failed:?}");
    assert!(failed.contains(&"airy_first_moment_identity"), "{failed:?}");
}
