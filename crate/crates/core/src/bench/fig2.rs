//! Residual-friction sweep: fidelities and heat currents against `γ`.

use std::path::Path;

use serde::Serialize;

use super::config::{ExperimentConfig, Fig2Config, RcPhysics};
use super::output::write_summary;
use super::sweep::{evaluate_points, log_slope, rows_table, SweepRow};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub gamma: f64,
    pub fidelity_wire: f64,
    pub fidelity_augmented: f64,
    pub fidelity_rc_identity: f64,
    pub fidelity_rc_identity_x10: f64,
    /// `|F(Λ_res) − F(10Λ_res)|` for the RC identity.
    pub cutoff_sensitivity: f64,
    pub q_h_me: f64,
    pub q_h_ex: f64,
    /// `Q̇_h,me / Q̇_h,ex`.
    pub current_ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrendWindow {
    pub gamma_from: f64,
    pub gamma_to: f64,
    /// `d ln Q̇_h / d ln γ` by secant over the window.
    pub slope_me: f64,
    pub slope_ex: f64,
    pub opposite: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig2Summary {
    pub experiment: &'static str,
    pub fidelity_level: f64,
    /// `γ` where the wire fidelity first drops below the level.
    pub crossing_wire: Option<f64>,
    /// `γ` where the augmented fidelity first drops below the level.
    pub crossing_augmented: Option<f64>,
    pub crossing_augmented_x10: Option<f64>,
    pub probes: Vec<Probe>,
    /// At least the last decade of the grid.
    pub trend: Option<TrendWindow>,
    pub min_fidelity_rc_identity: f64,
    pub max_cutoff_sensitivity_rc_identity: f64,
    pub max_cutoff_sensitivity_augmented: f64,
    pub max_dual_form_gap: f64,
    pub failed_points: usize,
    pub secular_flagged_from: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig2Output {
    pub rows: Vec<SweepRow>,
    pub probes: Vec<SweepRow>,
    pub summary: Fig2Summary,
}

/// First downward crossing of `level`, interpolated linearly in `ln x`
/// between the bracketing points. `None` if `y` never drops below.
pub fn crossing(x: &[f64], y: &[f64], level: f64) -> Option<f64> {
    let pts: Vec<(f64, f64)> = x.iter().zip(y).map(|(&a, &b)| (a, b)).filter(|(_, b)| !b.is_nan()).collect();
    if let Some(&(x0, y0)) = pts.first() {
        if y0 < level {
            return Some(x0);
        }
    }
    pts.windows(2).find(|w| w[0].1 >= level && w[1].1 < level).map(|w| {
        let (x0, y0) = w[0];
        let (x1, y1) = w[1];
        let s = (y0 - level) / (y0 - y1);
        (x0.ln() + s * (x1.ln() - x0.ln())).exp()
    })
}

fn probe(r: &SweepRow) -> Probe {
    Probe {
        gamma: r.gamma,
        fidelity_wire: r.fidelity_wire,
        fidelity_augmented: r.fidelity_augmented,
        fidelity_rc_identity: r.fidelity_rc_identity,
        fidelity_rc_identity_x10: r.fidelity_rc_identity_x10,
        cutoff_sensitivity: (r.fidelity_rc_identity - r.fidelity_rc_identity_x10).abs(),
        q_h_me: r.q_h_me,
        q_h_ex: r.q_h_ex,
        current_ratio: r.q_h_me / r.q_h_ex,
    }
}

/// Secant slopes between the last grid point at or below `γ_max/10` and
/// `γ_max`, so the window spans at least a decade.
fn trend(rows: &[SweepRow]) -> Option<TrendWindow> {
    let ok: Vec<&SweepRow> = rows.iter().filter(|r| r.is_ok()).collect();
    let last = *ok.last()?;
    let first = *ok.iter().rev().find(|r| r.gamma <= last.gamma / 10.0)?;
    if first.gamma >= last.gamma {
        return None;
    }
    let slope_me = log_slope(first.gamma, first.q_h_me, last.gamma, last.q_h_me);
    let slope_ex = log_slope(first.gamma, first.q_h_ex, last.gamma, last.q_h_ex);
    Some(TrendWindow {
        gamma_from: first.gamma,
        gamma_to: last.gamma,
        slope_me,
        slope_ex,
        opposite: slope_me * slope_ex < 0.0,
    })
}

fn max_finite(v: impl Iterator<Item = f64>) -> f64 {
    v.filter(|x| !x.is_nan()).fold(0.0, f64::max)
}

pub fn run_fig2(config: &Fig2Config) -> Result<Fig2Output> {
    ExperimentConfig::Fig2(config.clone()).validate()?;
    let tol = config.tolerances;
    let grid: Vec<(RcPhysics, f64)> =
        config.gamma_grid.values().into_iter().map(|g| (config.physics.with_gamma(g), g)).collect();
    let rows = evaluate_points(&grid, &tol);
    let probe_points: Vec<(RcPhysics, f64)> =
        config.probe_gammas.iter().map(|&g| (config.physics.with_gamma(g), g)).collect();
    let probes = evaluate_points(&probe_points, &tol);

    let gammas: Vec<f64> = rows.iter().map(|r| r.gamma).collect();
    let column = |f: fn(&SweepRow) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    let level = tol.fidelity_level;
    let summary = Fig2Summary {
        experiment: "fig2",
        fidelity_level: level,
        crossing_wire: crossing(&gammas, &column(|r| r.fidelity_wire), level),
        crossing_augmented: crossing(&gammas, &column(|r| r.fidelity_augmented), level),
        crossing_augmented_x10: crossing(&gammas, &column(|r| r.fidelity_augmented_x10), level),
        probes: probes.iter().filter(|r| r.is_ok()).map(probe).collect(),
        trend: trend(&rows),
        min_fidelity_rc_identity: rows
            .iter()
            .chain(&probes)
            .map(|r| r.fidelity_rc_identity)
            .filter(|x| !x.is_nan())
            .fold(f64::INFINITY, f64::min),
        max_cutoff_sensitivity_rc_identity: max_finite(
            rows.iter().chain(&probes).map(|r| (r.fidelity_rc_identity - r.fidelity_rc_identity_x10).abs()),
        ),
        max_cutoff_sensitivity_augmented: max_finite(
            rows.iter().chain(&probes).map(|r| (r.fidelity_augmented - r.fidelity_augmented_x10).abs()),
        ),
        max_dual_form_gap: max_finite(rows.iter().chain(&probes).map(|r| r.dual_form_gap)),
        failed_points: rows.iter().chain(&probes).filter(|r| !r.is_ok()).count(),
        secular_flagged_from: rows.iter().find(|r| r.flags.contains("secular")).map(|r| r.gamma),
    };
    Ok(Fig2Output { rows, probes, summary })
}

impl Fig2Output {
    pub fn write(&self, config: &Fig2Config, dir: &Path) -> Result<()> {
        let header = ExperimentConfig::Fig2(config.clone()).resolved_json();
        rows_table("fig2_sweep", &self.rows).write(dir, &header)?;
        rows_table("fig2_probes", &self.probes).write(dir, &header)?;
        write_summary(dir, "fig2_summary", &self.summary)
    }
}
