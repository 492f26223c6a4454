use std::path::Path;
use std::process::{Command, Output};

fn dirac(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dirac"))
        .args(args)
        .arg("--out")
        .arg(dir)
        .arg("--quiet")
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, json: &str) -> String {
    let path = dir.join("run.json");
    std::fs::write(&path, json).unwrap();
    path.to_string_lossy().into_owned()
}

fn data_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

#[test]
fn default_verify_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dirac(&["verify"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("verify.csv")).unwrap();
    assert!(csv.starts_with("# dirac "));
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 12);
    assert!(rows.iter().all(|r| r[3] == "pass"));
}

#[test]
fn corrupted_conjugation_matrix_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"verify": {"corrupt_c": true, "random_momenta": 5}}"#,
    );
    let out = dirac(&["verify", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("charge_conjugation_identities"), "{stderr}");
}

#[test]
fn massless_verify_passes_with_skips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"constants": {"hbar": 1, "c": 1, "m": 0, "e": 1}}"#,
    );
    let out = dirac(&["verify", "--config", &cfg], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("verify.csv")).unwrap();
    let skipped = data_rows(&csv).iter().filter(|r| r[3] == "skipped").count();
    assert_eq!(skipped, 2);
}

#[test]
fn klein_without_step_transmits_everything() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"klein": {"cases": [[1.25, 0], [1.25, 3]], "run_grid": false}}"#,
    );
    let out = dirac(&["klein", "--config", &cfg], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("klein.csv")).unwrap();
    let rows = data_rows(&csv);
    assert_eq!(rows[0][2], "transmitting");
    assert_eq!(rows[0][4].parse::<f64>().unwrap(), 1.0);
    assert_eq!(rows[1][2], "klein_zone");
    assert_eq!((rows[1][5].as_str(), rows[1][6].as_str()), ("1", "0"));
    assert_eq!(rows[1][7], "");
    assert_eq!(rows[1][8], "group_velocity");
}

#[test]
fn klein_below_rest_energy_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"klein": {"cases": [[0.5, 0]], "run_grid": false}}"#,
    );
    let out = dirac(&["klein", "--config", &cfg], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for json in [
        "{ not json",
        r#"{"grid": {"n_points": 256, "lenght": 10}}"#,
        r#"{"constants": {"hbar": -1, "c": 1, "m": 1, "e": 1}}"#,
        r#"{"grid": {"n_points": 255, "length": 100}}"#,
    ] {
        let cfg = write_config(dir.path(), json);
        let out = dirac(&["evolve", "--config", &cfg], dir.path());
        assert_eq!(out.status.code(), Some(2), "{json}");
    }
}

#[test]
fn missing_config_and_unwritable_output_exit_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let out = dirac(&["modes", "--config", "/nonexistent/run.json"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let blocker = dir.path().join("file");
    std::fs::write(&blocker, "").unwrap();
    let out = dirac(&["modes"], &blocker.join("sub"));
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn free_evolution_keeps_the_norm() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"evolution": {"dt": 0.05, "steps": 400, "record_every": 20, "write_fields": true}}"#,
    );
    let out = dirac(&["evolve", "--config", &cfg], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = std::fs::read_to_string(dir.path().join("evolve.csv")).unwrap();
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 21);
    for r in &rows {
        assert!((r[1].parse::<f64>().unwrap() - 1.0).abs() < 1e-10);
    }
    let fields = std::fs::read_to_string(dir.path().join("fields.csv")).unwrap();
    assert_eq!(data_rows(&fields).len(), 21 * 256);
}

#[test]
fn driven_well_runs() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"potential": {"shape": {"smooth_well": {"depth": 0.3, "width": 2}},
                          "time_profile": {"amplitude": 0.1, "omega": 0.9, "switch_off": 5}},
            "evolution": {"steps": 200, "record_every": 50}}"#,
    );
    let out = dirac(&["evolve", "--config", &cfg], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn modes_lists_both_spins() {
    let dir = tempfile::tempdir().unwrap();
    let out = dirac(&["modes"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let csv = std::fs::read_to_string(dir.path().join("modes.csv")).unwrap();
    let rows = data_rows(&csv);
    assert_eq!(rows.len(), 16);
    // At rest only the upper components are populated.
    assert_eq!(rows[0][4].parse::<f64>().unwrap(), 1.0);
}

#[test]
fn default_zitter_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dirac(&["zitter"], dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let summary = std::fs::read_to_string(dir.path().join("zitter_summary.csv")).unwrap();
    let rows = data_rows(&summary);
    assert_eq!(rows[0][0], "mixed");
    assert_eq!(rows[1][0], "positive_only");
    assert!(rows.iter().all(|r| r[5] == "pass"));
}

#[test]
fn seed_flag_changes_the_samples() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"verify": {"random_momenta": 5, "random_bispinors": 10}}"#,
    );
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    dirac(&["verify", "--config", &cfg, "--seed", "1"], &a);
    dirac(&["verify", "--config", &cfg, "--seed", "2"], &b);
    let ta = std::fs::read_to_string(a.join("verify.csv")).unwrap();
    let tb = std::fs::read_to_string(b.join("verify.csv")).unwrap();
    assert_ne!(ta, tb);
}
