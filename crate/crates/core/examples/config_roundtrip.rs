// Experiment configs: defaults from a bare tag, overrides, validation and
// the resolved JSON written into every output header.

use rcmap::bench::ExperimentConfig;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let mut cfg = ExperimentConfig::from_json(r#"{"experiment": "custom-sweep", "variable": "lambda"}"#)?;
    cfg.set_points(5);
    cfg.set_tolerance(1e-7);
    cfg.validate()?;
    let text = cfg.resolved_json();
    println!("{text}");
    assert_eq!(ExperimentConfig::from_json(&text)?, cfg);

    for bad in [r#"{"experiment": "fig2", "gamma_grid": {"min": 1, "max": 2, "points": 0, "spacing": "log"}}"#, r#"{"experiment": "fig4", "typo": 1}"#] {
        let err = ExperimentConfig::from_json(bad).and_then(|c| c.validate().map(|_| c)).unwrap_err();
        println!("exit {}: {err}", err.exit_code());
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
