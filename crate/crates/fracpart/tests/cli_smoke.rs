//! End-to-end checks of the command-line surface: artifact shapes, header
//! hashes, exit-code mapping, and the small-problem fast path.

use fracpart::cli::{main_from_args, run, Cli, CliError, Command};
use std::fs;
use std::path::Path;

fn write_config(dir: &Path, body: &str) -> std::path::PathBuf {
    let path = dir.join("config.json");
    fs::write(&path, body).unwrap();
    path
}

/// A small, fast configuration shared by the smoke tests.
const SMALL: &str = r#"{
    "m": 2, "n": 2, "s": 0.75, "ell": 2,
    "K": 48, "Q": 256,
    "eta_schedule": [-1.0, -10.0, -100.0],
    "tol": 1e-7, "restarts": 2, "seed": 7,
    "a_exp_mode": "symmetric"
}"#;

fn args(parts: &[&str]) -> Vec<std::ffi::OsString> {
    std::iter::once("fracpart")
        .chain(parts.iter().copied())
        .map(Into::into)
        .collect()
}

#[test]
fn spectrum_artifact_shape() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"m": 2, "n": 2, "s": 0.5, "K": 16, "Q": 32}"#,
    );
    let code = main_from_args(args(&[
        "spectrum",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]));
    assert_eq!(code, 0);

    let text = fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("# config "), "missing config hash header");
    assert_eq!(header.len(), "# config ".len() + 64, "hash is not sha-256 hex");
    assert_eq!(lines.next().unwrap(), "i,lambda_i,b_i,phi_lambda_i,ratio_r_i");

    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 16);
    for row in &rows {
        assert_eq!(row.len(), 5, "spectrum.csv must have exactly 5 columns");
    }
    // N = 3, s = 1/2: row i = 1 has lambda = 2(2 + N - 1) = 8 and
    // phi = sqrt(8 + 1) = 3. The i = 0 ratio is undefined.
    assert_eq!(rows[0][0], "0");
    assert_eq!(rows[0][4], "NaN");
    let lam1: f64 = rows[1][1].parse().unwrap();
    let phi1: f64 = rows[1][3].parse().unwrap();
    assert!((lam1 - 8.0).abs() < 1e-12);
    assert!((phi1 - 3.0).abs() < 1e-12);
}

#[test]
fn segregate_artifacts_and_partition() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let cli = Cli {
        command: Command::Segregate,
        config: Some(cfg),
        out: dir.path().to_path_buf(),
        seed: None,
    };
    run(cli).unwrap();

    // One solution file per stage, rows in ascending angle.
    for stage in 0..3 {
        let text =
            fs::read_to_string(dir.path().join(format!("solution_{stage}.csv"))).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("# config "));
        assert_eq!(lines.next().unwrap(), "theta,t,u_1,u_2");
        let thetas: Vec<f64> = lines
            .map(|l| l.split(',').next().unwrap().parse().unwrap())
            .collect();
        assert_eq!(thetas.len(), 256, "one row per quadrature node");
        assert!(thetas.windows(2).all(|w| w[0] < w[1]), "theta not ascending");
    }

    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("partition.json")).unwrap())
            .unwrap();
    assert_eq!(doc["route"], "segregation");
    assert_eq!(doc["m"], 2);
    assert_eq!(doc["n"], 2);
    let angles = doc["angles"].as_array().unwrap();
    assert_eq!(angles.len(), 1, "two components yield one interface");
    let a = angles[0].as_f64().unwrap();
    assert!((a - std::f64::consts::FRAC_PI_2).abs() < 0.05);
    assert_eq!(doc["cell_energies"].as_array().unwrap().len(), 2);
    assert_eq!(doc["config"].as_str().unwrap().len(), 64);

    // No sweep artifact in the directory, so no comparison either.
    assert!(!dir.path().join("comparison.json").exists());
}

#[test]
fn three_components_give_two_ordered_interfaces() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{
            "m": 2, "n": 2, "s": 0.75, "ell": 3,
            "K": 48, "Q": 256,
            "eta_schedule": [-1.0, -10.0, -100.0],
            "tol": 1e-7, "restarts": 2, "seed": 11
        }"#,
    );
    let cli = Cli {
        command: Command::Segregate,
        config: Some(cfg),
        out: dir.path().to_path_buf(),
        seed: None,
    };
    run(cli).unwrap();
    let doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("partition.json")).unwrap())
            .unwrap();
    let angles: Vec<f64> = doc["angles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert_eq!(angles.len(), 2, "three components yield two interfaces");
    assert!(angles[0] < angles[1]);
    assert_eq!(doc["cell_energies"].as_array().unwrap().len(), 3);
}

#[test]
fn sweep_then_segregate_writes_comparison() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), SMALL);
    let cfg_arg = cfg.to_str().unwrap().to_owned();
    let out_arg = dir.path().to_str().unwrap().to_owned();

    assert_eq!(
        main_from_args(args(&["sweep", "--config", &cfg_arg, "--out", &out_arg])),
        0
    );
    let sweep_text = fs::read_to_string(dir.path().join("sweep.csv")).unwrap();
    let mut lines = sweep_text.lines();
    assert!(lines.next().unwrap().starts_with("# config "));
    assert_eq!(lines.next().unwrap(), "a,c_left,c_right,total");
    for line in lines {
        assert_eq!(line.split(',').count(), 4);
    }
    // The sweep leaves its own partition.json behind (route "sweep").
    let sweep_doc: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("partition.json")).unwrap())
            .unwrap();
    assert_eq!(sweep_doc["route"], "sweep");

    assert_eq!(
        main_from_args(args(&["segregate", "--config", &cfg_arg, "--out", &out_arg])),
        0
    );
    let cmp: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("comparison.json")).unwrap())
            .unwrap();
    assert_eq!(cmp["segregation"]["route"], "segregation");
    assert_eq!(cmp["sweep"]["route"], "sweep");
    let gap = cmp["max_angle_gap"].as_f64().unwrap();
    assert!(gap < 0.05, "angle gap {gap} too large for equal blocks");
    // The short demo schedule stops at eta = -100, so the segregated energy
    // still sits visibly below the disjoint-support reference; the comparison
    // only needs to be in the right neighborhood here.
    assert!(cmp["total_rel_gap"].as_f64().unwrap() < 0.2);

    // Re-running segregate must keep the comparison intact (the sweep side is
    // recovered from the comparison document itself).
    assert_eq!(
        main_from_args(args(&["segregate", "--config", &cfg_arg, "--out", &out_arg])),
        0
    );
    let cmp2: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("comparison.json")).unwrap())
            .unwrap();
    assert_eq!(cmp, cmp2);
}

#[test]
fn invalid_config_maps_to_exit_one() {
    let dir = tempfile::tempdir().unwrap();
    for bad in [
        r#"{"m": 2, "n": 2, "s": 1.5}"#,
        r#"{"m": 1, "n": 2, "s": 0.5}"#,
        r#"{"m": 2, "n": 2, "s": 0.5, "K": 64, "Q": 32}"#,
        r#"{"m": 2, "n": 2, "s": 0.5, "eta_schedule": [-10.0, -1.0]}"#,
        r#"{"m": 2, "n": 2, "s": 0.5, "eta_schedule": [-1.0, 1.0]}"#,
        "not json at all",
    ] {
        let cfg = write_config(dir.path(), bad);
        let code = main_from_args(args(&[
            "spectrum",
            "--config",
            cfg.to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
        ]));
        assert_eq!(code, 1, "config {bad:?} must exit 1");
    }

    // A missing file is a configuration failure too.
    let code = main_from_args(args(&[
        "spectrum",
        "--config",
        dir.path().join("nope.json").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]));
    assert_eq!(code, 1);
}

#[test]
fn resolution_guard_maps_to_exit_five() {
    // A sweep at Q = 48 puts too few quadrature nodes in the smallest sweep
    // cells; the run must stop with the resolution exit code rather than
    // report garbage energies.
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"m": 2, "n": 2, "s": 0.75, "K": 16, "Q": 48, "tol": 1e-6, "restarts": 1}"#,
    );
    let code = main_from_args(args(&[
        "sweep",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]));
    assert_eq!(code, 5);
}

#[test]
fn seed_override_changes_hash_only() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let cfg = write_config(dir_a.path(), SMALL);
    let cfg_arg = cfg.to_str().unwrap().to_owned();

    for (dir, seed) in [(&dir_a, "7"), (&dir_b, "8")] {
        assert_eq!(
            main_from_args(args(&[
                "spectrum",
                "--config",
                &cfg_arg,
                "--out",
                dir.path().to_str().unwrap(),
                "--seed",
                seed,
            ])),
            0
        );
    }
    let a = fs::read_to_string(dir_a.path().join("spectrum.csv")).unwrap();
    let b = fs::read_to_string(dir_b.path().join("spectrum.csv")).unwrap();
    let (ha, ta) = a.split_once('\n').unwrap();
    let (hb, tb) = b.split_once('\n').unwrap();
    assert_ne!(ha, hb, "seed participates in the config hash");
    assert_eq!(ta, tb, "spectrum data does not depend on the seed");
}

#[test]
fn verify_fast_tier_passes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        r#"{"m": 2, "n": 2, "s": 0.75, "K": 32, "Q": 64, "tol": 1e-7}"#,
    );
    let cli = Cli {
        command: Command::Verify { deep: false },
        config: Some(cfg),
        out: dir.path().to_path_buf(),
        seed: None,
    };
    run(cli).unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap())
            .unwrap();
    assert_eq!(report["all_pass"], true);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 20, "expected the full invariant roster");
    for c in checks {
        assert!(
            c["measured"].as_f64().is_some(),
            "check {} lacks a measured error",
            c["name"]
        );
    }
}

#[test]
fn error_variants_map_to_documented_codes() {
    use fracpart::solver::SolverError;
    assert_eq!(
        CliError::from(SolverError::ProjectionFailure { iters: 100 }).exit_code(),
        2
    );
    assert_eq!(
        CliError::from(SolverError::Collapse {
            component: 0,
            norm: 0.0,
            floor: 1e-3
        })
        .exit_code(),
        3
    );
    assert_eq!(
        CliError::from(SolverError::SegregationIncomplete {
            i: 0,
            j: 1,
            found: 3
        })
        .exit_code(),
        4
    );
    assert_eq!(
        CliError::from(SolverError::Resolution {
            a: 0.0,
            b: 0.1,
            nodes: 3,
            min: 8
        })
        .exit_code(),
        5
    );
}
