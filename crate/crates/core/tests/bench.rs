use std::path::Path;
use std::process::Command;

use rcmap::bench::config::RcPhysics;
use rcmap::bench::{
    run_and_write, run_custom_sweep, run_fig3, CustomSweepConfig, ExperimentConfig, Fig3Config, Fig4Config, Grid,
    SweepVariable,
};
use rcmap::Error;

fn read_all(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = std::fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(&p).unwrap()))
        .collect();
    files.sort();
    files
}

#[test]
fn bare_tag_is_a_complete_config() {
    for name in ["fig2", "fig3", "fig4", "custom-sweep"] {
        let c = ExperimentConfig::from_json(&format!(r#"{{"experiment": "{name}"}}"#)).unwrap();
        assert_eq!(c.name(), name);
        c.validate().unwrap();
        let back = ExperimentConfig::from_json(&c.resolved_json()).unwrap();
        assert_eq!(back, c);
    }
}

#[test]
fn unknown_fields_are_config_errors() {
    for text in [
        r#"{"experiment": "fig4", "bogus": 1}"#,
        r#"{"experiment": "fig2", "physics": {"omega_hot": 1.0}}"#,
        r#"{"experiment": "fig5"}"#,
        "not json",
    ] {
        let err = ExperimentConfig::from_json(text).unwrap_err();
        assert!(matches!(err, Error::Config(_)), "{text}: {err}");
        assert_eq!(err.exit_code(), 2);
    }
}

#[test]
fn zero_length_grid_is_a_config_error() {
    let c = ExperimentConfig::from_json(
        r#"{"experiment": "custom-sweep", "grid": {"min": 0.1, "max": 1.0, "points": 0, "spacing": "lin"}}"#,
    )
    .unwrap();
    let err = c.validate().unwrap_err();
    assert!(matches!(err, Error::Config(_)), "{err}");
    assert_eq!(err.exit_code(), 2);
    let cfg = CustomSweepConfig {
        grid: Grid::lin(0.1, 1.0, 0),
        ..CustomSweepConfig::default()
    };
    assert!(matches!(run_custom_sweep(&cfg), Err(Error::Config(_))));
}

#[test]
fn invalid_physics_is_rejected_before_running() {
    let mut cfg = CustomSweepConfig::default();
    cfg.physics.t_c = -1.0;
    assert!(matches!(run_custom_sweep(&cfg), Err(Error::Config(_))));
    // a sweep endpoint that makes the potential indefinite
    let cfg = CustomSweepConfig {
        variable: SweepVariable::OmegaC,
        grid: Grid::lin(0.0, 1.0, 3),
        ..CustomSweepConfig::default()
    };
    assert!(matches!(run_custom_sweep(&cfg), Err(Error::Config(_))));
}

#[test]
fn hot_temperature_sweep_reverses_currents_through_equilibrium() {
    let cfg = CustomSweepConfig {
        variable: SweepVariable::THot,
        grid: Grid::lin(0.7, 1.7, 6),
        physics: RcPhysics { t_c: 1.2, ..RcPhysics::default() },
        ..CustomSweepConfig::default()
    };
    let out = run_custom_sweep(&cfg).unwrap();
    assert_eq!(out.summary.failed_points, 0, "{:?}", out.rows);
    for signs in [&out.summary.q_h_me_signs, &out.summary.q_h_ex_signs] {
        assert_eq!(signs, &vec![-1, -1, -1, 1, 1, 1]);
    }
    for r in &out.rows {
        assert!(r.q_h_me * r.q_c_me < 0.0 && r.q_h_ex * r.q_c_ex < 0.0);
    }
}

#[test]
fn equilibrium_point_is_not_flagged() {
    let cfg = CustomSweepConfig {
        variable: SweepVariable::THot,
        grid: Grid::lin(1.2, 1.2, 1),
        physics: RcPhysics { t_c: 1.2, ..RcPhysics::default() },
        ..CustomSweepConfig::default()
    };
    let row = &run_custom_sweep(&cfg).unwrap().rows[0];
    assert!(row.q_h_me.abs() < 1e-15 && row.q_h_ex.abs() < 1e-15, "{row:?}");
    assert_eq!(row.flags, "");
}

#[test]
fn coupling_sweep_changes_currents_monotonically() {
    let out = run_custom_sweep(&CustomSweepConfig::default()).unwrap();
    assert_eq!(out.summary.variable, "k");
    assert_eq!(out.summary.failed_points, 0);
    assert!(out.summary.q_h_me_monotone && out.summary.q_h_ex_monotone, "{:?}", out.summary);
    assert!(out.rows.iter().all(|r| r.q_h_me > 0.0 && r.q_h_ex > 0.0));
}

#[test]
fn reruns_are_byte_identical() {
    let configs = [
        ExperimentConfig::from_json(r#"{"experiment": "fig2"}"#).unwrap(),
        ExperimentConfig::Fig4(Fig4Config::default()),
        ExperimentConfig::CustomSweep(CustomSweepConfig::default()),
    ];
    for c in &configs {
        let (a, b) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
        run_and_write(c, a.path()).unwrap();
        run_and_write(c, b.path()).unwrap();
        let (fa, fb) = (read_all(a.path()), read_all(b.path()));
        assert!(fa.len() >= 2, "{}: {:?}", c.name(), fa.iter().map(|f| &f.0).collect::<Vec<_>>());
        assert_eq!(fa, fb, "{}", c.name());
    }
}

#[test]
fn csv_carries_resolved_config_and_crlf_rows() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = ExperimentConfig::Fig4(Fig4Config::default());
    run_and_write(&cfg, dir.path()).unwrap();
    let text = std::fs::read_to_string(dir.path().join("fig4_trajectories.csv")).unwrap();
    let header: String = text
        .lines()
        .take_while(|l| l.starts_with('#'))
        .map(|l| l.trim_start_matches('#').trim_end_matches('\r').trim_start_matches(' '))
        .collect::<Vec<_>>()
        .join("\n");
    assert_eq!(ExperimentConfig::from_json(&header).unwrap(), cfg);
    let body: Vec<&str> = text.split("\r\n").filter(|l| !l.is_empty() && !l.starts_with('#')).collect();
    assert!(body[0].starts_with("gamma_h_t,t,x_h2_wire"));
    let cfg4 = Fig4Config::default();
    assert_eq!(body.len() - 1, cfg4.times().len());
    // 17 significant digits
    let first: Vec<&str> = body[1].split(',').collect();
    assert_eq!(first[2].split('e').next().unwrap().len(), 18);
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("fig4_summary.json")).unwrap()).unwrap();
    assert_eq!(summary["experiment"], "fig4");
}

#[test]
fn fig3_tables_start_at_zero_and_match_the_limit() {
    let cfg = Fig3Config {
        time_grid: Grid::log(1e-6, 1e-3, 13),
        ..Fig3Config::default()
    };
    let out = run_fig3(&cfg).unwrap();
    let t = out.correlation.column("t").unwrap();
    let re = out.correlation.column("re").unwrap();
    let im = out.correlation.column("im").unwrap();
    assert_eq!((t[0], re[0], im[0]), (0.0, 0.0, 0.0));
    assert!(t.windows(2).all(|w| w[0] < w[1]));
    assert!(out.summary.max_spectrum_deviation_below_10 < 5e-3, "{:?}", out.summary);
    let omega = out.spectrum.column("omega").unwrap();
    let dev = out.spectrum.column("relative_deviation").unwrap();
    for (w, d) in omega.iter().zip(&dev) {
        if *w <= 10.0 {
            assert!(*d < 5e-3, "ω = {w}: {d}");
        }
    }
}

// ---------------------------------------------------------------------------
// Command line

fn rcmap() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rcmap"))
}

fn write_config(dir: &Path, text: &str) -> std::path::PathBuf {
    let p = dir.join("config.json");
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn cli_validate_config_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_config(dir.path(), r#"{"experiment": "fig4"}"#);
    let out = rcmap().args(["validate-config", "--config"]).arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let printed: ExperimentConfig = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(printed, ExperimentConfig::Fig4(Fig4Config::default()));

    let bad = write_config(dir.path(), r#"{"experiment": "fig4", "k": -1.0}"#);
    let out = rcmap().args(["validate-config", "--config"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = rcmap().args(["validate-config"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = rcmap().args(["validate-config", "--config", "/nonexistent/config.json"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));

    let out = rcmap().args(["validate-config", "--points", "0"]).arg("--config").arg(&good).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cli_rejects_config_for_another_experiment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), r#"{"experiment": "fig2"}"#);
    let out = rcmap().args(["fig4", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("fig2"));
}

#[test]
fn cli_runs_fig4_into_output_dir() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("run");
    let out = rcmap().args(["fig4", "--points", "30", "--out"]).arg(&out_dir).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let names: Vec<String> = read_all(&out_dir).into_iter().map(|f| f.0).collect();
    assert_eq!(names, ["fig4_summary.json", "fig4_trajectories.csv"]);
    let text = std::fs::read_to_string(out_dir.join("fig4_trajectories.csv")).unwrap();
    let rows = text.split("\r\n").filter(|l| !l.is_empty() && !l.starts_with('#')).count();
    assert_eq!(rows, 1 + 41 + 30);
}

#[test]
fn cli_reports_numerical_failure_with_exit_code_3() {
    // a tolerance the quadrature cannot reach within its panel budget
    let dir = tempfile::tempdir().unwrap();
    let out = rcmap().args(["fig4", "--tol", "1e-300", "--out"]).arg(dir.path()).output().unwrap();
    assert_eq!(out.status.code(), Some(3), "{}", String::from_utf8_lossy(&out.stderr));
}

// ---------------------------------------------------------------------------
// Shipped JSON schema

fn schema() -> jsonschema::Validator {
    let text = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/../../docs/config.schema.json")).unwrap();
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

#[test]
fn schema_accepts_every_resolved_default() {
    let v = schema();
    for name in ["fig2", "fig3", "fig4", "custom-sweep"] {
        let bare: serde_json::Value = serde_json::from_str(&format!(r#"{{"experiment": "{name}"}}"#)).unwrap();
        assert!(v.is_valid(&bare), "{name}");
        let c = ExperimentConfig::from_json(&bare.to_string()).unwrap();
        let full: serde_json::Value = serde_json::from_str(&c.resolved_json()).unwrap();
        let errors: Vec<String> = v.iter_errors(&full).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{name}: {errors:?}");
    }
}

#[test]
fn schema_rejects_what_the_parser_rejects() {
    let v = schema();
    for text in [
        r#"{"experiment": "fig4", "bogus": 1}"#,
        r#"{"experiment": "fig2", "physics": {"omega_hot": 1.0}}"#,
        r#"{"experiment": "fig5"}"#,
        r#"{"experiment": "custom-sweep", "variable": "temperature"}"#,
        r#"{"experiment": "fig3", "time_grid": {"min": 1e-7, "max": 1e-1, "points": 10}}"#,
    ] {
        let value: serde_json::Value = serde_json::from_str(text).unwrap();
        assert!(!v.is_valid(&value), "{text}");
        assert!(ExperimentConfig::from_json(text).is_err(), "{text}");
    }
}
