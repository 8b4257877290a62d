//! Dynamics of `⟨X_h²⟩` in the wire with the overdamped cold bath against the
//! augmented system with and without the cold counter-term.

use std::path::Path;

use nalgebra::DMatrix;
use serde::Serialize;

use super::config::{ExperimentConfig, Fig4Config, InitialState};
use super::output::{write_summary, Table};
use crate::error::{Error, Result};
use crate::gaussian::{product_thermal, reduce, CovarianceMatrix};
use crate::gkls::{propagate, steady_state, validity_diagnostics, ValidityReport};
use crate::network::{build_augmented_with_shift, build_wire, normal_modes, HarmonicNetwork, COLD, HOT, RC};
use crate::qle::{exact_steady_covariance, LangevinModel};
use crate::spectral::{overdamped_limit, SpectralDensity};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Deviation {
    /// `sup_t |x(t) − x_wire(t)| / |x_wire(t)|` over the whole run.
    pub sup_full: f64,
    /// The same supremum restricted to the intermediate window.
    pub sup_intermediate: f64,
    /// `γ_h t` where the full supremum is attained.
    pub at_gamma_h_t: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Stationary {
    pub x_rc2_gkls: f64,
    pub x_rc2_gkls_unshifted: f64,
    pub x_rc2_exact: f64,
    pub x_rc2_exact_x10: f64,
    /// `|GKLS − exact| / exact`.
    pub relative_gap: f64,
    pub relative_gap_unshifted: f64,
    pub cutoff_sensitivity: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig4Summary {
    pub experiment: &'static str,
    /// Shared grid extents in `γ_h t`.
    pub time_extent: [f64; 2],
    pub time_points: usize,
    pub intermediate_window: [f64; 2],
    pub shifted: Deviation,
    pub unshifted: Deviation,
    /// Unshifted over shifted peak deviation in the intermediate window.
    pub deviation_ratio: f64,
    pub stationary: Stationary,
    pub validity_wire: ValidityReport,
    pub validity_augmented: ValidityReport,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig4Output {
    pub trajectories: Table,
    pub summary: Fig4Summary,
}

fn initial_state(config: &Fig4Config) -> Result<CovarianceMatrix> {
    match &config.initial_state {
        InitialState::ProductThermal { t_hot_node, t_cold_node, t_rc } => {
            let v = config.wire().potential();
            let omega0 = match config.cold_spectrum()? {
                SpectralDensity::Underdamped { omega0, .. } => omega0,
                _ => unreachable!("scaled spectrum is underdamped"),
            };
            product_thermal(&[v[(0, 0)].sqrt(), v[(1, 1)].sqrt(), omega0], &[*t_hot_node, *t_cold_node, *t_rc])
        }
        InitialState::Explicit { covariance } => {
            let m = DMatrix::from_fn(6, 6, |i, j| covariance[i][j]);
            CovarianceMatrix::new(m).map_err(|e| Error::Config(format!("initial covariance: {e}")))
        }
    }
}

fn deviation(times: &[f64], reference: &[f64], other: &[f64], window: [f64; 2]) -> Deviation {
    let mut d = Deviation {
        sup_full: 0.0,
        sup_intermediate: 0.0,
        at_gamma_h_t: times.first().copied().unwrap_or(0.0),
    };
    for ((&s, &a), &b) in times.iter().zip(reference).zip(other) {
        let r = (b - a).abs() / a.abs();
        if r > d.sup_full {
            d.sup_full = r;
            d.at_gamma_h_t = s;
        }
        if s >= window[0] && s <= window[1] {
            d.sup_intermediate = d.sup_intermediate.max(r);
        }
    }
    d
}

fn x_h2(net: &HarmonicNetwork, c0: &CovarianceMatrix, times: &[f64]) -> Result<Vec<f64>> {
    let basis = normal_modes(net)?;
    Ok(propagate(net, &basis, c0, times)?.states.iter().map(|c| c.x2(HOT)).collect())
}

pub fn run_fig4(config: &Fig4Config) -> Result<Fig4Output> {
    ExperimentConfig::Fig4(config.clone()).validate()?;
    let wire = config.wire();
    let hot = config.hot_spectrum()?;
    let cold = config.cold_spectrum()?;
    let residual = SpectralDensity::ohmic_linear(config.gamma)?;

    // the wire treated directly by the master equation carries no counter-terms
    let wire_net = build_wire(config.omega_h, config.omega_c, config.k, false, 0.0)?
        .with_bath(HOT, hot, config.t_h)?
        .with_bath(COLD, overdamped_limit(config.alpha1, config.alpha2)?, config.t_c)?;
    let aug = build_augmented_with_shift(wire, cold, hot, residual, config.t_h, config.t_c, true)?;
    let unshifted = build_augmented_with_shift(wire, cold, hot, residual, config.t_h, config.t_c, false)?;

    let c0 = initial_state(config)?;
    let c0_wire = reduce(&c0, &[HOT, COLD])?;
    let times = config.times();
    let scaled: Vec<f64> = times.iter().map(|t| t * config.gamma_h).collect();

    let x_wire = x_h2(&wire_net, &c0_wire, &times)?;
    let aug_basis = normal_modes(&aug)?;
    let aug_traj = propagate(&aug, &aug_basis, &c0, &times)?;
    let un_basis = normal_modes(&unshifted)?;
    let un_traj = propagate(&unshifted, &un_basis, &c0, &times)?;
    let x_aug: Vec<f64> = aug_traj.states.iter().map(|c| c.x2(HOT)).collect();
    let x_un: Vec<f64> = un_traj.states.iter().map(|c| c.x2(HOT)).collect();

    let window = config.intermediate_window;
    let shifted_dev = deviation(&scaled, &x_wire, &x_aug, window);
    let unshifted_dev = deviation(&scaled, &x_wire, &x_un, window);

    let mut trajectories = Table::new(
        "fig4_trajectories",
        vec![
            "gamma_h_t",
            "t",
            "x_h2_wire",
            "x_h2_augmented",
            "x_h2_unshifted",
            "x_rc2_augmented",
            "x_rc2_unshifted",
            "deviation_augmented",
            "deviation_unshifted",
        ],
    );
    for i in 0..times.len() {
        trajectories.push(vec![
            scaled[i].into(),
            times[i].into(),
            x_wire[i].into(),
            x_aug[i].into(),
            x_un[i].into(),
            aug_traj.states[i].x2(RC).into(),
            un_traj.states[i].x2(RC).into(),
            ((x_aug[i] - x_wire[i]).abs() / x_wire[i].abs()).into(),
            ((x_un[i] - x_wire[i]).abs() / x_wire[i].abs()).into(),
        ]);
    }

    let gkls = steady_state(&aug, &aug_basis)?.x2(RC);
    let gkls_un = steady_state(&unshifted, &un_basis)?.x2(RC);
    let tol = config.tolerances.quadrature_rel;
    let exact_model = LangevinModel::augmented(wire, hot, cold, config.residual_cutoff, config.t_h, config.t_c)?;
    let exact = exact_steady_covariance(&exact_model, tol)?.x2(RC);
    let exact_model_x10 = LangevinModel::augmented(
        wire,
        hot,
        cold,
        config.residual_cutoff * config.cutoff_check_factor,
        config.t_h,
        config.t_c,
    )?;
    let exact_x10 = exact_steady_covariance(&exact_model_x10, tol)?.x2(RC);

    let summary = Fig4Summary {
        experiment: "fig4",
        time_extent: [scaled[0], *scaled.last().expect("grids are non-empty")],
        time_points: times.len(),
        intermediate_window: window,
        deviation_ratio: unshifted_dev.sup_intermediate / shifted_dev.sup_intermediate,
        shifted: shifted_dev,
        unshifted: unshifted_dev,
        stationary: Stationary {
            x_rc2_gkls: gkls,
            x_rc2_gkls_unshifted: gkls_un,
            x_rc2_exact: exact,
            x_rc2_exact_x10: exact_x10,
            relative_gap: (gkls - exact).abs() / exact,
            relative_gap_unshifted: (gkls_un - exact).abs() / exact,
            cutoff_sensitivity: (exact_x10 - exact).abs() / exact,
        },
        validity_wire: validity_diagnostics(&wire_net, &normal_modes(&wire_net)?),
        validity_augmented: validity_diagnostics(&aug, &aug_basis),
    };
    Ok(Fig4Output { trajectories, summary })
}

impl Fig4Output {
    pub fn write(&self, config: &Fig4Config, dir: &Path) -> Result<()> {
        let header = ExperimentConfig::Fig4(config.clone()).resolved_json();
        self.trajectories.write(dir, &header)?;
        write_summary(dir, "fig4_summary", &self.summary)
    }
}
