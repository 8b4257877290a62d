//! One row per parameter point: GKLS steady state of the augmented system
//! against the exact wire and augmented steady states.

use rayon::prelude::*;
use serde::Serialize;

use super::config::{CustomSweepConfig, ExperimentConfig, RcPhysics, Tolerances};
use super::output::{write_summary, Cell, Table};
use crate::currents::HeatCurrentReport;
use crate::error::Result;
use crate::gaussian::{is_physical_with, reduce, symplectic_eigenvalues, uhlmann_fidelity, CovarianceMatrix, PHYSICAL_TOL};
use crate::gkls::{heat_currents, steady_state, validity_diagnostics};
use crate::network::{build_augmented, normal_modes, COLD, HOT, RC};
use crate::qle::{exact_solution, heat_currents_from, LangevinModel, EXACT_PHYSICAL_TOL};
use crate::spectral::SpectralDensity;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    /// Value of the swept variable.
    pub value: f64,
    pub gamma: f64,
    /// Reduced GKLS state against the exact wire state.
    pub fidelity_wire: f64,
    /// GKLS against exact augmented state.
    pub fidelity_augmented: f64,
    pub fidelity_augmented_x10: f64,
    /// Reduced exact augmented state against the exact wire state.
    pub fidelity_rc_identity: f64,
    pub fidelity_rc_identity_x10: f64,
    pub q_h_me: f64,
    pub q_c_me: f64,
    /// Exact wire currents; `q_h_ex_alt` is the second current form.
    pub q_h_ex: f64,
    pub q_c_ex: f64,
    pub q_h_ex_alt: f64,
    pub q_h_ex_augmented: f64,
    pub conservation_me: f64,
    pub conservation_ex: f64,
    /// Largest relative disagreement of the two exact current forms.
    pub dual_form_gap: f64,
    pub min_symplectic_me: f64,
    pub min_symplectic_ex: f64,
    pub secular_ratio: f64,
    pub weak_coupling_ratio: f64,
    /// `;`-separated diagnostics, empty when nothing is flagged.
    pub flags: String,
    pub error: String,
}

pub const ROW_HEADERS: [&str; 24] = [
    "value",
    "gamma",
    "fidelity_wire",
    "fidelity_augmented",
    "fidelity_augmented_x10",
    "fidelity_rc_identity",
    "fidelity_rc_identity_x10",
    "q_h_me",
    "q_c_me",
    "q_h_ex",
    "q_c_ex",
    "q_h_ex_alt",
    "q_h_ex_augmented",
    "conservation_me",
    "conservation_ex",
    "dual_form_gap",
    "min_symplectic_me",
    "min_symplectic_ex",
    "secular_ratio",
    "weak_coupling_ratio",
    "secular_ok",
    "weak_coupling_ok",
    "flags",
    "error",
];

impl SweepRow {
    fn failed(value: f64, gamma: f64, error: String) -> Self {
        let nan = f64::NAN;
        Self {
            value,
            gamma,
            fidelity_wire: nan,
            fidelity_augmented: nan,
            fidelity_augmented_x10: nan,
            fidelity_rc_identity: nan,
            fidelity_rc_identity_x10: nan,
            q_h_me: nan,
            q_c_me: nan,
            q_h_ex: nan,
            q_c_ex: nan,
            q_h_ex_alt: nan,
            q_h_ex_augmented: nan,
            conservation_me: nan,
            conservation_ex: nan,
            dual_form_gap: nan,
            min_symplectic_me: nan,
            min_symplectic_ex: nan,
            secular_ratio: nan,
            weak_coupling_ratio: nan,
            flags: "failed".into(),
            error,
        }
    }

    pub fn is_ok(&self) -> bool {
        self.error.is_empty()
    }

    fn cells(&self) -> Vec<Cell> {
        let ok = |ratio: f64, pass: bool| -> Cell {
            if ratio.is_nan() {
                "".into()
            } else {
                pass.to_string().into()
            }
        };
        vec![
            self.value.into(),
            self.gamma.into(),
            self.fidelity_wire.into(),
            self.fidelity_augmented.into(),
            self.fidelity_augmented_x10.into(),
            self.fidelity_rc_identity.into(),
            self.fidelity_rc_identity_x10.into(),
            self.q_h_me.into(),
            self.q_c_me.into(),
            self.q_h_ex.into(),
            self.q_c_ex.into(),
            self.q_h_ex_alt.into(),
            self.q_h_ex_augmented.into(),
            self.conservation_me.into(),
            self.conservation_ex.into(),
            self.dual_form_gap.into(),
            self.min_symplectic_me.into(),
            self.min_symplectic_ex.into(),
            self.secular_ratio.into(),
            self.weak_coupling_ratio.into(),
            ok(self.secular_ratio, self.secular_ratio >= crate::gkls::SECULAR_THRESHOLD),
            ok(self.weak_coupling_ratio, self.weak_coupling_ratio <= crate::gkls::WEAK_COUPLING_THRESHOLD),
            self.flags.clone().into(),
            self.error.clone().into(),
        ]
    }
}

pub fn rows_table(name: &str, rows: &[SweepRow]) -> Table {
    let mut t = Table::new(name, ROW_HEADERS.to_vec());
    for r in rows {
        t.push(r.cells());
    }
    t
}

fn min_symplectic(c: &CovarianceMatrix) -> f64 {
    symplectic_eigenvalues(c).into_iter().fold(f64::INFINITY, f64::min)
}

fn dual_gap(report: &HeatCurrentReport) -> f64 {
    report
        .currents
        .iter()
        .filter_map(|c| c.alternative.map(|alt| (c.value - alt).abs() / c.value.abs().max(alt.abs()).max(f64::MIN_POSITIVE)))
        .fold(0.0, f64::max)
}

/// Evaluates one parameter point. Numerical failures end up in `error`.
pub fn evaluate_point(physics: &RcPhysics, value: f64, tol: &Tolerances) -> SweepRow {
    match try_point(physics, value, tol) {
        Ok(row) => row,
        Err(e) => SweepRow::failed(value, physics.gamma, e.to_string()),
    }
}

fn try_point(p: &RcPhysics, value: f64, tol: &Tolerances) -> Result<SweepRow> {
    let wire = p.wire();
    let hot = p.hot_spectrum()?;
    let cold = p.cold_spectrum()?;
    let mut flags = Vec::new();

    let net = build_augmented(wire, cold, hot, SpectralDensity::ohmic_linear(p.gamma)?, p.t_h, p.t_c)?;
    let basis = normal_modes(&net)?;
    let c_me = steady_state(&net, &basis)?;
    let q_me = heat_currents(&net, &basis, &c_me)?;
    let validity = validity_diagnostics(&net, &basis);
    if !validity.secular_ok {
        flags.push("secular");
    }
    if !validity.weak_coupling_ok {
        flags.push("weak-coupling");
    }

    let wire_model = LangevinModel::wire(wire, hot, cold, p.t_h, p.t_c)?;
    let ex2 = exact_solution(&wire_model, tol.quadrature_rel)?;
    let q_ex = heat_currents_from(&wire_model, &ex2)?;
    let aug = LangevinModel::augmented(wire, hot, cold, p.residual_cutoff, p.t_h, p.t_c)?;
    let ex3 = exact_solution(&aug, tol.quadrature_rel)?;
    let q_ex3 = heat_currents_from(&aug, &ex3)?;
    let aug_x10 = LangevinModel::augmented(wire, hot, cold, p.residual_cutoff * p.cutoff_check_factor, p.t_h, p.t_c)?;
    let ex3_x10 = exact_solution(&aug_x10, tol.quadrature_rel)?;

    let me_wire = reduce(&c_me, &[HOT, COLD])?;
    let ex3_wire = reduce(&ex3.covariance, &[HOT, COLD])?;
    let ex3_x10_wire = reduce(&ex3_x10.covariance, &[HOT, COLD])?;

    let min_symplectic_me = min_symplectic(&c_me);
    let min_symplectic_ex = [&ex2.covariance, &ex3.covariance, &ex3_x10.covariance]
        .into_iter()
        .map(min_symplectic)
        .fold(f64::INFINITY, f64::min);
    if !is_physical_with(&c_me, PHYSICAL_TOL).0 {
        flags.push("unphysical-me");
    }
    if min_symplectic_ex < 0.5 - EXACT_PHYSICAL_TOL {
        flags.push("unphysical-exact");
    }
    let conservation_me = q_me.conservation_residual;
    let conservation_ex = q_ex.residual_against(q_me.scale).max(q_ex3.residual_against(q_me.scale));
    if conservation_me > 1e-9 {
        flags.push("conservation-me");
    }
    if conservation_ex > 1e3 * tol.quadrature_rel {
        flags.push("conservation-exact");
    }

    let missing = || crate::error::Error::ContractViolation("missing bath current".into());
    Ok(SweepRow {
        value,
        gamma: p.gamma,
        fidelity_wire: uhlmann_fidelity(&me_wire, &ex2.covariance)?,
        fidelity_augmented: uhlmann_fidelity(&c_me, &ex3.covariance)?,
        fidelity_augmented_x10: uhlmann_fidelity(&c_me, &ex3_x10.covariance)?,
        fidelity_rc_identity: uhlmann_fidelity(&ex3_wire, &ex2.covariance)?,
        fidelity_rc_identity_x10: uhlmann_fidelity(&ex3_x10_wire, &ex2.covariance)?,
        q_h_me: q_me.at(HOT).ok_or_else(missing)?,
        q_c_me: q_me.at(RC).ok_or_else(missing)?,
        q_h_ex: q_ex.at(HOT).ok_or_else(missing)?,
        q_c_ex: q_ex.at(COLD).ok_or_else(missing)?,
        q_h_ex_alt: q_ex.currents.iter().find(|c| c.node == HOT).and_then(|c| c.alternative).ok_or_else(missing)?,
        q_h_ex_augmented: q_ex3.at(HOT).ok_or_else(missing)?,
        conservation_me,
        conservation_ex,
        dual_form_gap: dual_gap(&q_ex).max(dual_gap(&q_ex3)),
        min_symplectic_me,
        min_symplectic_ex,
        secular_ratio: validity.secular_ratio,
        weak_coupling_ratio: validity.weak_coupling_ratio,
        flags: flags.join(";"),
        error: String::new(),
    })
}

/// Evaluates every point concurrently; rows come back in input order.
pub fn evaluate_points(points: &[(RcPhysics, f64)], tol: &Tolerances) -> Vec<SweepRow> {
    points.par_iter().map(|(p, v)| evaluate_point(p, *v, tol)).collect()
}

/// `d ln y / d ln x` between the first and last points.
pub fn log_slope(x0: f64, y0: f64, x1: f64, y1: f64) -> f64 {
    (y1.abs().ln() - y0.abs().ln()) / (x1.ln() - x0.ln())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CustomSweepSummary {
    pub experiment: &'static str,
    pub variable: &'static str,
    pub points: usize,
    pub failed_points: usize,
    pub flagged_points: usize,
    /// Sign of the hot current at each point, `+1`, `-1` or `0`.
    pub q_h_me_signs: Vec<i8>,
    pub q_h_ex_signs: Vec<i8>,
    pub q_h_me_monotone: bool,
    pub q_h_ex_monotone: bool,
    pub max_dual_form_gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CustomSweepOutput {
    pub rows: Vec<SweepRow>,
    pub summary: CustomSweepSummary,
}

fn sign(v: f64) -> i8 {
    if v > 0.0 {
        1
    } else if v < 0.0 {
        -1
    } else {
        0
    }
}

fn monotone(v: &[f64]) -> bool {
    let up = v.windows(2).all(|w| w[1] >= w[0]);
    let down = v.windows(2).all(|w| w[1] <= w[0]);
    !v.iter().any(|x| x.is_nan()) && (up || down)
}

pub fn run_custom_sweep(config: &CustomSweepConfig) -> Result<CustomSweepOutput> {
    ExperimentConfig::CustomSweep(config.clone()).validate()?;
    let points: Vec<(RcPhysics, f64)> = config
        .grid
        .values()
        .into_iter()
        .map(|v| (config.physics.with(config.variable, v), v))
        .collect();
    let rows = evaluate_points(&points, &config.tolerances);
    let q_me: Vec<f64> = rows.iter().map(|r| r.q_h_me).collect();
    let q_ex: Vec<f64> = rows.iter().map(|r| r.q_h_ex).collect();
    let summary = CustomSweepSummary {
        experiment: "custom-sweep",
        variable: config.variable.name(),
        points: rows.len(),
        failed_points: rows.iter().filter(|r| !r.is_ok()).count(),
        flagged_points: rows.iter().filter(|r| !r.flags.is_empty()).count(),
        q_h_me_signs: q_me.iter().map(|&v| sign(v)).collect(),
        q_h_ex_signs: q_ex.iter().map(|&v| sign(v)).collect(),
        q_h_me_monotone: monotone(&q_me),
        q_h_ex_monotone: monotone(&q_ex),
        max_dual_form_gap: rows.iter().map(|r| r.dual_form_gap).filter(|g| !g.is_nan()).fold(0.0, f64::max),
    };
    Ok(CustomSweepOutput { rows, summary })
}

impl CustomSweepOutput {
    pub fn write(&self, config: &CustomSweepConfig, dir: &std::path::Path) -> Result<()> {
        let header = ExperimentConfig::CustomSweep(config.clone()).resolved_json();
        rows_table("sweep", &self.rows).write(dir, &header)?;
        write_summary(dir, "sweep_summary", &self.summary)
    }
}
