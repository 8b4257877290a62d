//! Experiment harness: configurations, the residual-friction sweep, the
//! correlation-saturation and dynamics pipelines, and their CSV/JSON output.

pub mod config;
pub mod fig2;
pub mod fig3;
pub mod fig4;
pub mod output;
pub mod sweep;

use std::path::Path;

pub use config::{CustomSweepConfig, ExperimentConfig, Fig2Config, Fig3Config, Fig4Config, Grid, Spacing, SweepVariable};
pub use fig2::{crossing, run_fig2, Fig2Output, Fig2Summary};
pub use fig3::{run_fig3, saturation_time, Fig3Output, Fig3Summary};
pub use fig4::{run_fig4, Fig4Output, Fig4Summary};
pub use sweep::{evaluate_point, run_custom_sweep, CustomSweepOutput, SweepRow};

use crate::error::Result;

/// Runs `config` and writes its tables and summary into `dir`.
pub fn run_and_write(config: &ExperimentConfig, dir: &Path) -> Result<()> {
    match config {
        ExperimentConfig::Fig2(c) => run_fig2(c)?.write(c, dir),
        ExperimentConfig::Fig3(c) => run_fig3(c)?.write(c, dir),
        ExperimentConfig::Fig4(c) => run_fig4(c)?.write(c, dir),
        ExperimentConfig::CustomSweep(c) => run_custom_sweep(c)?.write(c, dir),
    }
}
