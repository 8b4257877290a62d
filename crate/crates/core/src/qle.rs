//! Exact stationary state of linear networks from the frequency-domain
//! quantum Langevin equations.
//!
//! With `A(ω) = −ω² + V + Σ_γ (δ_γ − χ̂_γ(ω)) e_γe_γᵀ` and independent bath
//! forces, the Dirac delta in the noise spectrum reduces every stationary
//! second moment to a single frequency integral, folded onto `ω > 0`:
//!
//! * `⟨½{X_a, X_b}⟩ = (1/π)∫ Re G_ab`
//! * `⟨½{P_a, P_b}⟩ = (1/π)∫ ω² Re G_ab`
//! * `⟨½{X_a, P_b}⟩ = −(1/π)∫ ω Im G_ab`
//!
//! where `G_ab = Σ_γ J_γ(ω) coth(ω/2T_γ) [A⁻¹]_aγ [A⁻¹]*_bγ`.
//!
//! Heat currents are also integrated in transmission form,
//! `Q̇_α = (1/π)Σ_β ∫ ω J_αJ_β (coth_α − coth_β) |[A⁻¹]_αβ|²`, which uses
//! `Im A = −Σ_γ J_γ e_γe_γᵀ` and shares no integrand with the covariances.

use std::cell::Cell;

use nalgebra::{DMatrix, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::currents::{BathCurrent, HeatCurrentReport, Method};
use crate::error::{Error, Result};
use crate::gaussian::{ensure_physical, CovarianceMatrix};
use crate::network::{check_symmetric, WireParams, COLD, HOT, RC};
use crate::quadrature::{integrate_vec, segments_from_breakpoints, Tolerance};
use crate::spectral::{check_temperature, SpectralDensity};

/// Tolerance on the uncertainty relation for quadrature-built covariances.
pub const EXACT_PHYSICAL_TOL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    Wire,
    Augmented,
    Custom,
}

/// A dissipative channel: bath at `node` with a closed-form kernel. When
/// `shifted`, the node also carries the counter-term `δ`, so the channel
/// enters `A(ω)` as `δ − χ̂(ω)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Channel {
    pub node: usize,
    pub spectral: SpectralDensity,
    pub temperature: f64,
    pub shifted: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LangevinModel {
    kind: ModelKind,
    potential: DMatrix<f64>,
    channels: Vec<Channel>,
    label: String,
}

impl LangevinModel {
    /// General model. `potential` holds every static term, including
    /// counter-terms of nodes that have no channel.
    pub fn custom(potential: DMatrix<f64>, channels: Vec<Channel>, label: impl Into<String>) -> Result<Self> {
        Self::build(ModelKind::Custom, potential, channels, label.into())
    }

    fn build(kind: ModelKind, potential: DMatrix<f64>, channels: Vec<Channel>, label: String) -> Result<Self> {
        check_symmetric(&potential, "potential")?;
        let n = potential.nrows();
        if n == 0 {
            return Err(Error::ContractViolation("model must have at least one node".into()));
        }
        for (i, c) in channels.iter().enumerate() {
            if c.node >= n {
                return Err(Error::ContractViolation(format!("channel on node {} of a {n}-node model", c.node)));
            }
            if channels[..i].iter().any(|d| d.node == c.node) {
                return Err(Error::ContractViolation(format!("more than one channel on node {}", c.node)));
            }
            check_temperature(c.temperature)?;
            c.spectral.validate()?;
            if matches!(c.spectral, SpectralDensity::OhmicLinear { .. }) {
                return Err(Error::Unsupported(
                    "exact solution needs a regularised residual spectrum (explicit cutoff)".into(),
                ));
            }
        }
        Ok(Self {
            kind,
            potential,
            channels,
            label,
        })
    }

    /// Two-node wire with both counter-terms, so that `A(0)` is the bare wire
    /// potential.
    pub fn wire(wire: WireParams, j_h: SpectralDensity, j_c: SpectralDensity, t_h: f64, t_c: f64) -> Result<Self> {
        let channels = vec![
            Channel {
                node: HOT,
                spectral: j_h,
                temperature: t_h,
                shifted: true,
            },
            Channel {
                node: COLD,
                spectral: j_c,
                temperature: t_c,
                shifted: true,
            },
        ];
        Self::build(ModelKind::Wire, wire.potential(), channels, "wire".into())
    }

    /// Hot node, cold node and reaction coordinate. The cold node keeps the
    /// static `δ_c = λ²/ω₀²` but no noise; the RC couples to an algebraic
    /// Ohmic residual bath of strength `γ` and cutoff `residual_cutoff`,
    /// with its counter-term `δ_res = γΛ_res`.
    pub fn augmented(
        wire: WireParams,
        j_h: SpectralDensity,
        j_c: SpectralDensity,
        residual_cutoff: f64,
        t_h: f64,
        t_c: f64,
    ) -> Result<Self> {
        let SpectralDensity::Underdamped { gamma, lambda, omega0 } = j_c else {
            return Err(Error::ContractViolation(
                "the augmented model needs an underdamped cold spectrum".into(),
            ));
        };
        let mut v = DMatrix::zeros(3, 3);
        v.view_mut((0, 0), (2, 2)).copy_from(&wire.potential());
        v[(1, 1)] += lambda * lambda / (omega0 * omega0);
        v[(1, 2)] = -lambda;
        v[(2, 1)] = -lambda;
        v[(2, 2)] = omega0 * omega0;
        let residual = SpectralDensity::ohmic_linear(gamma)?.regularised(residual_cutoff)?;
        let channels = vec![
            Channel {
                node: HOT,
                spectral: j_h,
                temperature: t_h,
                shifted: true,
            },
            Channel {
                node: RC,
                spectral: residual,
                temperature: t_c,
                shifted: true,
            },
        ];
        Self::build(ModelKind::Augmented, v, channels, "augmented".into())
    }

    pub fn kind(&self) -> ModelKind {
        self.kind
    }

    pub fn potential(&self) -> &DMatrix<f64> {
        &self.potential
    }

    pub fn channels(&self) -> &[Channel] {
        &self.channels
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_nodes(&self) -> usize {
        self.potential.nrows()
    }

    /// Returns a copy with every channel temperature set to `t`.
    pub fn at_temperature(&self, t: f64) -> Result<Self> {
        let channels = self.channels.iter().map(|c| Channel { temperature: t, ..*c }).collect();
        Self::build(self.kind, self.potential.clone(), channels, self.label.clone())
    }

    /// Static matrix `A(0)`: the potential plus `Σ (δ − χ̂(0))` for unshifted
    /// channels, i.e. `−χ̂(0) = −δ` there.
    pub fn static_matrix(&self) -> Result<DMatrix<f64>> {
        let mut m = self.potential.clone();
        for c in &self.channels {
            if !c.shifted {
                m[(c.node, c.node)] -= c.spectral.renormalisation_shift()?;
            }
        }
        Ok(m)
    }

    /// Quadrature breakpoints: conservative mode frequencies (also of the
    /// system extended by one reaction coordinate per underdamped channel),
    /// spectral features, temperatures, and geometric ladders converging on
    /// each mode frequency.
    fn breakpoints(&self) -> Vec<f64> {
        let mut modes = conservative_frequencies(&self.potential);
        let n = self.n_nodes();
        for c in &self.channels {
            if let SpectralDensity::Underdamped { lambda, omega0, .. } = c.spectral {
                let mut ext = DMatrix::zeros(n + 1, n + 1);
                ext.view_mut((0, 0), (n, n)).copy_from(&self.potential);
                if !c.shifted {
                    ext[(c.node, c.node)] += lambda * lambda / (omega0 * omega0);
                }
                ext[(c.node, n)] = -lambda;
                ext[(n, c.node)] = -lambda;
                ext[(n, n)] = omega0 * omega0;
                modes.extend(conservative_frequencies(&ext));
            }
        }
        let mut pts = vec![0.0];
        for &p in &modes {
            pts.push(p);
            for k in 1..=8 {
                let h = 10f64.powi(-k);
                pts.push(p * (1.0 - h));
                pts.push(p * (1.0 + h));
            }
        }
        let mut top = modes.iter().copied().fold(0.0_f64, f64::max);
        let mut bottom = modes.iter().copied().fold(f64::INFINITY, f64::min);
        for c in &self.channels {
            for f in c.spectral.features() {
                pts.push(f);
                top = top.max(f);
                bottom = bottom.min(f);
            }
            pts.push(c.temperature);
        }
        let mut d = 10f64.powf((bottom * 1e-3).log10().floor());
        while d <= top * 100.0 {
            pts.push(d);
            d *= 10.0;
        }
        pts.retain(|p| p.is_finite() && *p >= 0.0);
        pts
    }
}

fn conservative_frequencies(v: &DMatrix<f64>) -> Vec<f64> {
    SymmetricEigen::new(v.clone())
        .eigenvalues
        .iter()
        .filter(|&&e| e > 0.0)
        .map(|e| e.sqrt())
        .collect()
}

/// `A(ω)`; `A(−ω) = A(ω)*`.
pub fn susceptibility(model: &LangevinModel, omega: f64) -> DMatrix<Complex64> {
    let n = model.n_nodes();
    let mut a = DMatrix::from_fn(n, n, |i, j| {
        let d = if i == j { omega * omega } else { 0.0 };
        Complex64::new(model.potential[(i, j)] - d, 0.0)
    });
    for c in &model.channels {
        // channels are validated to be closed-form at construction
        let k = if c.shifted {
            c.spectral.shifted_kernel(omega)
        } else {
            c.spectral.fourier_kernel(omega).map(|x| -x)
        };
        a[(c.node, c.node)] += k.expect("closed-form kernel");
    }
    a
}

/// Stationary covariance with per-entry absolute error estimates.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactSolution {
    pub covariance: CovarianceMatrix,
    pub errors: DMatrix<f64>,
    pub panels_used: usize,
    pub tolerance: f64,
    /// Transmission-form current out of each channel, in channel order.
    pub transmission: Vec<f64>,
    pub transmission_errors: Vec<f64>,
}

/// Frequency integrals for every second moment at relative tolerance `tol`.
pub fn exact_solution(model: &LangevinModel, tol: f64) -> Result<ExactSolution> {
    if !(tol > 0.0 && tol < 1.0) {
        return Err(Error::ContractViolation(format!("tolerance must lie in (0, 1), got {tol}")));
    }
    let stat = model.static_matrix()?;
    let min_eig = stat.clone().symmetric_eigenvalues().min();
    if !(min_eig > 0.0) {
        return Err(Error::Instability(format!(
            "static potential is not positive definite (smallest eigenvalue {min_eig:.6e})"
        )));
    }
    let n = model.n_nodes();
    let tri: Vec<(usize, usize)> = (0..n).flat_map(|a| (a..n).map(move |b| (a, b))).collect();
    let nt = tri.len();
    let nc = model.channels.len();
    let dim = 2 * nt + n * n + nc;
    let singular = Cell::new(None::<f64>);
    let inv_pi = std::f64::consts::FRAC_1_PI;

    let integrand = |w: f64, out: &mut [f64]| {
        let a = susceptibility(model, w);
        let Some(ainv) = a.try_inverse() else {
            singular.set(Some(w));
            out.fill(0.0);
            return;
        };
        let mut g = DMatrix::<Complex64>::zeros(n, n);
        for c in &model.channels {
            let s = c.spectral.j_coth(w, c.temperature);
            let u = ainv.column(c.node);
            for x in 0..n {
                for y in 0..n {
                    g[(x, y)] += u[x] * u[y].conj() * s;
                }
            }
        }
        for (idx, &(x, y)) in tri.iter().enumerate() {
            let re = g[(x, y)].re * inv_pi;
            out[idx] = re;
            out[nt + idx] = w * w * re;
        }
        for x in 0..n {
            for y in 0..n {
                out[2 * nt + x * n + y] = -w * g[(x, y)].im * inv_pi;
            }
        }
        let base = 2 * nt + n * n;
        for (i, ci) in model.channels.iter().enumerate() {
            let mut q = 0.0;
            for cj in &model.channels {
                if cj.node == ci.node {
                    continue;
                }
                let t = ainv[(ci.node, cj.node)].norm_sqr();
                let flux = ci.spectral.j_coth(w, ci.temperature) * cj.spectral.j(w)
                    - ci.spectral.j(w) * cj.spectral.j_coth(w, cj.temperature);
                q += w * flux * t * inv_pi;
            }
            out[base + i] = q;
        }
        if out.iter().any(|v| !v.is_finite()) {
            singular.set(Some(w));
            out.fill(0.0);
        }
    };

    let segs = segments_from_breakpoints(&model.breakpoints(), true);
    let qtol = Tolerance {
        max_subdivisions: 100_000,
        ..Tolerance::relative(tol)
    };
    let r = integrate_vec(integrand, dim, &segs, &qtol)?;
    if let Some(w) = singular.get() {
        return Err(Error::Instability(format!("susceptibility singular on the real axis near ω = {w:.6e}")));
    }

    let mut c = DMatrix::zeros(2 * n, 2 * n);
    let mut e = DMatrix::zeros(2 * n, 2 * n);
    for (idx, &(x, y)) in tri.iter().enumerate() {
        for (off, row, col) in [(0, 2 * x, 2 * y), (nt, 2 * x + 1, 2 * y + 1)] {
            c[(row, col)] = r.values[off + idx];
            c[(col, row)] = r.values[off + idx];
            e[(row, col)] = r.errors[off + idx];
            e[(col, row)] = r.errors[off + idx];
        }
    }
    for x in 0..n {
        for y in 0..n {
            let k = 2 * nt + x * n + y;
            c[(2 * x, 2 * y + 1)] = r.values[k];
            c[(2 * y + 1, 2 * x)] = r.values[k];
            e[(2 * x, 2 * y + 1)] = r.errors[k];
            e[(2 * y + 1, 2 * x)] = r.errors[k];
        }
    }
    let covariance = CovarianceMatrix::new(c)?;
    ensure_physical(&covariance, EXACT_PHYSICAL_TOL)?;
    Ok(ExactSolution {
        covariance,
        errors: e,
        panels_used: r.panels_used,
        tolerance: tol,
        transmission: r.values[2 * nt + n * n..].to_vec(),
        transmission_errors: r.errors[2 * nt + n * n..].to_vec(),
    })
}

pub fn exact_steady_covariance(model: &LangevinModel, tol: f64) -> Result<CovarianceMatrix> {
    Ok(exact_solution(model, tol)?.covariance)
}

/// Heat current out of every channel, from the coupling forces on its node,
/// `Q̇_a = Σ_{b≠a} V_ab⟨X_bP_a⟩ = −Σ_{b≠a} V_ab⟨X_aP_b⟩`, cross-checked
/// against the transmission form. All three must agree to within ten times
/// the quadrature tolerance plus the integration error estimates.
pub fn heat_currents_from(model: &LangevinModel, sol: &ExactSolution) -> Result<HeatCurrentReport> {
    let n = model.n_nodes();
    if sol.covariance.n_modes() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: sol.covariance.n_modes(),
        });
    }
    if sol.transmission.len() != model.channels.len() {
        return Err(Error::DimensionMismatch {
            expected: model.channels.len(),
            got: sol.transmission.len(),
        });
    }
    let c = &sol.covariance;
    let err = |x: usize, y: usize| sol.errors[(2 * x, 2 * y + 1)];
    let mut currents = Vec::with_capacity(model.channels.len());
    for (i, ch) in model.channels.iter().enumerate() {
        let a = ch.node;
        let (mut f1, mut f2, mut budget) = (0.0, 0.0, 0.0);
        for b in (0..n).filter(|&b| b != a) {
            let v = model.potential[(a, b)];
            if v == 0.0 {
                continue;
            }
            f1 += v * c.xp(b, a);
            f2 -= v * c.xp(a, b);
            budget += v.abs() * (err(b, a) + err(a, b));
        }
        let f3 = sol.transmission[i];
        let scale = f1.abs().max(f2.abs()).max(f3.abs());
        let allowed = 10.0 * (sol.tolerance * scale + budget + sol.transmission_errors[i]);
        let spread = (f1 - f2).abs().max((f1 - f3).abs());
        if spread > allowed {
            return Err(Error::Integration(format!(
                "current forms disagree on node {a}: {f1:.10e}, {f2:.10e}, transmission {f3:.10e} (allowed {allowed:.3e})"
            )));
        }
        currents.push(BathCurrent {
            node: a,
            value: f1,
            alternative: Some(f3),
        });
    }
    Ok(HeatCurrentReport::new(Method::Exact, currents))
}

pub fn exact_heat_currents(model: &LangevinModel, tol: f64) -> Result<HeatCurrentReport> {
    heat_currents_from(model, &exact_solution(model, tol)?)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityReport {
    /// Smallest eigenvalue of `A(0)`.
    pub static_min_eigenvalue: f64,
    /// Smallest `|det A(ω)| / Π_a ‖row_a A(ω)‖` over the scan (Hadamard ratio,
    /// in `[0, 1]`).
    pub min_hadamard_ratio: f64,
    pub at_frequency: f64,
    pub samples: usize,
    pub flagged: bool,
}

/// Scans `|det A(ω)|` on a log grid up to `omega_max` refined by the
/// quadrature breakpoints; flags an indefinite static matrix or a Hadamard
/// ratio below `1e-12`.
pub fn stability_scan(model: &LangevinModel, omega_max: f64) -> StabilityReport {
    let static_min_eigenvalue = model
        .static_matrix()
        .map(|m| m.symmetric_eigenvalues().min())
        .unwrap_or(f64::NAN);
    let lo = (omega_max * 1e-8).max(f64::MIN_POSITIVE);
    let mut grid: Vec<f64> = (0..=4000).map(|k| lo * (omega_max / lo).powf(k as f64 / 4000.0)).collect();
    grid.extend(model.breakpoints().into_iter().filter(|&w| w > 0.0 && w <= omega_max));
    let mut min_ratio = f64::INFINITY;
    let mut at = 0.0;
    for &w in &grid {
        let a = susceptibility(model, w);
        let det = a.clone().determinant().norm();
        let hadamard: f64 = a.row_iter().map(|r| r.norm()).product();
        let ratio = if hadamard > 0.0 { det / hadamard } else { 0.0 };
        if ratio < min_ratio {
            min_ratio = ratio;
            at = w;
        }
    }
    StabilityReport {
        static_min_eigenvalue,
        min_hadamard_ratio: min_ratio,
        at_frequency: at,
        samples: grid.len(),
        flagged: !(static_min_eigenvalue > 0.0) || min_ratio < 1e-12,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::{thermal_mode, uhlmann_fidelity};

    fn fig2_wire(gamma: f64) -> LangevinModel {
        LangevinModel::wire(
            WireParams::new(1.0, 3.0, 0.8),
            SpectralDensity::ohmic_algebraic(1e-3, 1e3).unwrap(),
            SpectralDensity::underdamped(gamma, 0.9, 4.0).unwrap(),
            3.3,
            1.2,
        )
        .unwrap()
    }

    #[test]
    fn static_limit_is_bare_potential() {
        let m = fig2_wire(0.4);
        let a0 = susceptibility(&m, 0.0);
        let bare = WireParams::new(1.0, 3.0, 0.8).potential();
        for i in 0..2 {
            for j in 0..2 {
                assert!((a0[(i, j)].re - bare[(i, j)]).abs() < 1e-15);
                assert_eq!(a0[(i, j)].im, 0.0);
            }
        }
    }

    #[test]
    fn reality_condition() {
        let m = fig2_wire(0.4);
        for w in [0.3, 1.3, 4.0, 20.0] {
            let a = susceptibility(&m, w);
            let b = susceptibility(&m, -w);
            assert!((a.map(|z| z.conj()) - b).iter().all(|z| z.norm() < 1e-12));
        }
    }

    #[test]
    fn single_weakly_damped_node_thermalises() {
        let (w0, t) = (1.3, 2.0);
        let m = LangevinModel::custom(
            DMatrix::from_element(1, 1, w0 * w0),
            vec![Channel {
                node: 0,
                spectral: SpectralDensity::ohmic_algebraic(1e-4, 1e3).unwrap(),
                temperature: t,
                shifted: true,
            }],
            "single",
        )
        .unwrap();
        let c = exact_steady_covariance(&m, 1e-9).unwrap();
        let (xx, pp) = thermal_mode(w0, t);
        let th = CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[xx, 0.0, 0.0, pp])).unwrap();
        assert!(uhlmann_fidelity(&c, &th).unwrap() > 0.9999);
    }

    #[test]
    fn equilibrium_has_no_current() {
        let m = fig2_wire(0.7).at_temperature(1.5).unwrap();
        let q = exact_heat_currents(&m, 1e-8).unwrap();
        assert!(q.currents.iter().all(|c| c.value.abs() < 1e-10 * 1.5));
    }

    #[test]
    fn wire_currents_agree_and_conserve() {
        let m = fig2_wire(0.7);
        let sol = exact_solution(&m, 1e-8).unwrap();
        let asym = (sol.covariance.data() - sol.covariance.data().transpose()).amax();
        assert!(asym < 1e-10);
        let q = heat_currents_from(&m, &sol).unwrap();
        let qh = q.at(HOT).unwrap();
        assert!(qh > 0.0);
        assert!((qh + q.at(COLD).unwrap()).abs() < 1e-6 * qh);
    }

    #[test]
    fn ohmic_linear_channel_needs_cutoff() {
        let r = LangevinModel::custom(
            DMatrix::from_element(1, 1, 1.0),
            vec![Channel {
                node: 0,
                spectral: SpectralDensity::ohmic_linear(0.1).unwrap(),
                temperature: 1.0,
                shifted: true,
            }],
            "x",
        );
        assert!(matches!(r, Err(Error::Unsupported(_))));
    }

    #[test]
    fn scan_flags_indefinite_potential() {
        let ok = stability_scan(&fig2_wire(1.0), 1e3);
        assert!(!ok.flagged);
        let bad = LangevinModel::custom(
            DMatrix::from_row_slice(2, 2, &[1.0, -2.0, -2.0, 1.0]),
            vec![],
            "indefinite",
        )
        .unwrap();
        assert!(stability_scan(&bad, 10.0).flagged);
        assert!(matches!(exact_solution(&bad, 1e-8), Err(Error::Instability(_))));
    }

    #[test]
    fn decoupled_rc_block_diagonalises() {
        let m = LangevinModel::custom(
            DMatrix::from_row_slice(2, 2, &[2.0, 0.0, 0.0, 16.0]),
            vec![],
            "decoupled",
        )
        .unwrap();
        let a = susceptibility(&m, 1.1);
        assert_eq!(a[(0, 1)], Complex64::new(0.0, 0.0));
    }
}
