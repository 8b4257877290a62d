//! Global Born–Markov–secular master equation for harmonic networks with
//! local baths: rates, closed-form covariance dynamics, stationary state and
//! dissipator heat currents.
//!
//! In normal-mode coordinates every `2×2` block of the covariance matrix
//! obeys `ċ_jk = A_j c_jk + c_jk A_kᵀ + δ_jk D_j` with
//! `A_j = [[κ_j, 1], [−Ω_j², κ_j]]`, `κ_j = Δ̃_j/2` and
//! `D_j = diag(Σ̃_j/(2Ω_j), Σ̃_jΩ_j/2)`, so the exact solution is
//! `c(t) = E(t)(c₀ − c_∞)E(t)ᵀ + c_∞` with `E = ⊕_j e^{A_j t}`.

use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use crate::currents::{BathCurrent, HeatCurrentReport, Method};
use crate::error::{Error, Result};
use crate::gaussian::{ensure_physical, CovarianceMatrix, PHYSICAL_TOL};
use crate::network::{HarmonicNetwork, NormalModeBasis};
use crate::spectral::x_coth_x;

/// Secular criterion flagged below this ratio of minimum gap to maximum rate.
pub const SECULAR_THRESHOLD: f64 = 10.0;
/// Weak coupling flagged above this ratio of maximum bath strength to the
/// lowest mode frequency.
pub const WEAK_COUPLING_THRESHOLD: f64 = 0.1;

/// Rates indexed `(bath i, mode j)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ModeRates {
    /// `Γ_i(Ω_j)`
    pub gamma_plus: DMatrix<f64>,
    /// `Γ_i(−Ω_j) = Γ_i(Ω_j)·e^{−Ω_j/T_i}`
    pub gamma_minus: DMatrix<f64>,
    /// `P_{a_i j}² / (2Ω_j)` with `a_i` the node of bath `i`.
    pub weight: DMatrix<f64>,
    /// `Γ_i(−Ω_j) + Γ_i(Ω_j) = 2J_i(Ω_j)·coth(Ω_j/2T_i)`
    pub sigma: DMatrix<f64>,
    /// `Γ_i(−Ω_j) − Γ_i(Ω_j) = −2J_i(Ω_j)`
    pub delta: DMatrix<f64>,
}

impl ModeRates {
    /// `Σ̃(Ω_j) = Σ_i w_ij Σ_i(Ω_j)`.
    pub fn sigma_tilde(&self, j: usize) -> f64 {
        self.weight.column(j).dot(&self.sigma.column(j))
    }

    /// `Δ̃(Ω_j) = Σ_i w_ij Δ_i(Ω_j)`.
    pub fn delta_tilde(&self, j: usize) -> f64 {
        self.weight.column(j).dot(&self.delta.column(j))
    }
}

fn check_basis(net: &HarmonicNetwork, basis: &NormalModeBasis) -> Result<()> {
    if basis.n_modes() != net.n_nodes() {
        return Err(Error::DimensionMismatch {
            expected: net.n_nodes(),
            got: basis.n_modes(),
        });
    }
    Ok(())
}

/// `Γ_i(Ω_j) = 2J_i(Ω_j)(1 − e^{−Ω_j/T_i})⁻¹` and its companions.
pub fn decay_rates(net: &HarmonicNetwork, basis: &NormalModeBasis) -> Result<ModeRates> {
    check_basis(net, basis)?;
    let m = net.baths().len();
    let n = basis.n_modes();
    let mut r = ModeRates {
        gamma_plus: DMatrix::zeros(m, n),
        gamma_minus: DMatrix::zeros(m, n),
        weight: DMatrix::zeros(m, n),
        sigma: DMatrix::zeros(m, n),
        delta: DMatrix::zeros(m, n),
    };
    for (i, bath) in net.baths().iter().enumerate() {
        let t = bath.temperature;
        for j in 0..n {
            let w = basis.omega()[j];
            if !(w > 0.0) {
                return Err(Error::ContractViolation(format!("mode frequency {w} is not positive")));
            }
            let j_val = bath.spectral.evaluate(w)?;
            let x = w / t;
            let gp = 2.0 * j_val / -(-x).exp_m1();
            r.gamma_plus[(i, j)] = gp;
            r.gamma_minus[(i, j)] = gp * (-x).exp();
            r.sigma[(i, j)] = 2.0 * j_val * x_coth_x(0.5 * x) / (0.5 * x);
            r.delta[(i, j)] = -2.0 * j_val;
            r.weight[(i, j)] = basis.p()[(bath.node, j)].powi(2) / (2.0 * w);
        }
    }
    Ok(r)
}

/// Time grid plus covariance snapshots in node coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceTrajectory {
    pub times: Vec<f64>,
    pub states: Vec<CovarianceMatrix>,
    pub label: String,
    pub method: Method,
}

/// Per-mode damping `κ_j`, frequencies and the stationary mode-space state.
struct Generator {
    omega: Vec<f64>,
    kappa: Vec<f64>,
    sigma_tilde: Vec<f64>,
    c_inf: DMatrix<f64>,
}

impl Generator {
    fn new(net: &HarmonicNetwork, basis: &NormalModeBasis) -> Result<Self> {
        let rates = decay_rates(net, basis)?;
        let n = basis.n_modes();
        let omega: Vec<f64> = basis.omega().iter().copied().collect();
        let mut kappa = vec![0.0; n];
        let mut sigma_tilde = vec![0.0; n];
        let mut c_inf = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            let dt = rates.delta_tilde(j);
            let st = rates.sigma_tilde(j);
            kappa[j] = 0.5 * dt;
            sigma_tilde[j] = st;
            if dt < 0.0 {
                c_inf[(2 * j, 2 * j)] = -st / (2.0 * dt * omega[j]);
                c_inf[(2 * j + 1, 2 * j + 1)] = -st * omega[j] / (2.0 * dt);
            }
        }
        Ok(Self {
            omega,
            kappa,
            sigma_tilde,
            c_inf,
        })
    }

    fn undamped_mode(&self) -> Option<usize> {
        self.kappa.iter().position(|&k| !(k < 0.0))
    }

    fn propagator(&self, t: f64) -> DMatrix<f64> {
        let n = self.omega.len();
        let mut e = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            let w = self.omega[j];
            let decay = (self.kappa[j] * t).exp();
            let (s, c) = (w * t).sin_cos();
            e[(2 * j, 2 * j)] = decay * c;
            e[(2 * j, 2 * j + 1)] = decay * s / w;
            e[(2 * j + 1, 2 * j)] = -decay * w * s;
            e[(2 * j + 1, 2 * j + 1)] = decay * c;
        }
        e
    }

    /// `A c + c Aᵀ + D` in mode coordinates.
    fn rhs(&self, c: &DMatrix<f64>) -> DMatrix<f64> {
        let n = self.omega.len();
        let mut a = DMatrix::zeros(2 * n, 2 * n);
        let mut d = DMatrix::zeros(2 * n, 2 * n);
        for j in 0..n {
            let w = self.omega[j];
            a[(2 * j, 2 * j)] = self.kappa[j];
            a[(2 * j, 2 * j + 1)] = 1.0;
            a[(2 * j + 1, 2 * j)] = -w * w;
            a[(2 * j + 1, 2 * j + 1)] = self.kappa[j];
            d[(2 * j, 2 * j)] = self.sigma_tilde[j] / (2.0 * w);
            d[(2 * j + 1, 2 * j + 1)] = self.sigma_tilde[j] * w / 2.0;
        }
        &a * c + c * a.transpose() + d
    }
}

/// Exact covariance evolution on `times` from the physical initial state `c0`
/// (node coordinates). Undamped modes simply rotate.
pub fn propagate(
    net: &HarmonicNetwork,
    basis: &NormalModeBasis,
    c0: &CovarianceMatrix,
    times: &[f64],
) -> Result<CovarianceTrajectory> {
    check_basis(net, basis)?;
    if c0.n_modes() != basis.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: basis.n_modes(),
            got: c0.n_modes(),
        });
    }
    ensure_physical(c0, PHYSICAL_TOL)?;
    let gen = Generator::new(net, basis)?;
    let q = basis.q();
    let dev = q.transpose() * c0.data() * q - &gen.c_inf;
    let mut states = Vec::with_capacity(times.len());
    for &t in times {
        if !t.is_finite() {
            return Err(Error::ContractViolation(format!("non-finite time {t}")));
        }
        let e = gen.propagator(t);
        let c = &e * &dev * e.transpose() + &gen.c_inf;
        states.push(CovarianceMatrix::new(q * c * q.transpose())?);
    }
    Ok(CovarianceTrajectory {
        times: times.to_vec(),
        states,
        label: net.label().to_string(),
        method: Method::Gkls,
    })
}

/// First moments `⟨(X₁, P₁, …)⟩(t)` from `r0`; they decay at the same `κ_j`
/// as the covariances and carry no noise.
pub fn propagate_means(net: &HarmonicNetwork, basis: &NormalModeBasis, r0: &DVector<f64>, t: f64) -> Result<DVector<f64>> {
    check_basis(net, basis)?;
    if r0.len() != 2 * basis.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: 2 * basis.n_modes(),
            got: r0.len(),
        });
    }
    let gen = Generator::new(net, basis)?;
    let q = basis.q();
    Ok(q * (gen.propagator(t) * (q.transpose() * r0)))
}

/// Stationary state: `⟨η_j²⟩ = −Σ̃/(2Δ̃Ω_j)`, `⟨π_j²⟩ = Ω_j²⟨η_j²⟩`, all other
/// mode-space entries zero; returned in node coordinates.
pub fn steady_state(net: &HarmonicNetwork, basis: &NormalModeBasis) -> Result<CovarianceMatrix> {
    check_basis(net, basis)?;
    let gen = Generator::new(net, basis)?;
    if let Some(j) = gen.undamped_mode() {
        return Err(Error::NoSteadyState {
            mode: j,
            frequency: gen.omega[j],
        });
    }
    let q = basis.q();
    CovarianceMatrix::new(q * &gen.c_inf * q.transpose())
}

/// Largest entry of the right-hand side of the covariance equations at `c`
/// (node coordinates), relative to the largest entry of `c`.
pub fn generator_residual(net: &HarmonicNetwork, basis: &NormalModeBasis, c: &CovarianceMatrix) -> Result<f64> {
    check_basis(net, basis)?;
    let gen = Generator::new(net, basis)?;
    let q = basis.q();
    let cm = q.transpose() * c.data() * q;
    Ok(gen.rhs(&cm).amax() / cm.amax().max(f64::MIN_POSITIVE))
}

/// `Q̇_i = Σ_j w_ij [Δ_i(Ω_j)(½Ω_j²⟨η_j²⟩ + ½⟨π_j²⟩) + Ω_jΣ_i(Ω_j)/2]`.
pub fn heat_currents(net: &HarmonicNetwork, basis: &NormalModeBasis, steady: &CovarianceMatrix) -> Result<HeatCurrentReport> {
    check_basis(net, basis)?;
    if steady.n_modes() != basis.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: basis.n_modes(),
            got: steady.n_modes(),
        });
    }
    let rates = decay_rates(net, basis)?;
    let q = basis.q();
    let c = q.transpose() * steady.data() * q;
    let n = basis.n_modes();
    let energy: Vec<f64> = (0..n)
        .map(|j| {
            let w = basis.omega()[j];
            0.5 * w * w * c[(2 * j, 2 * j)] + 0.5 * c[(2 * j + 1, 2 * j + 1)]
        })
        .collect();
    let currents = net
        .baths()
        .iter()
        .enumerate()
        .map(|(i, bath)| {
            let value = (0..n)
                .map(|j| {
                    let w = basis.omega()[j];
                    rates.weight[(i, j)] * (rates.delta[(i, j)] * energy[j] + 0.5 * w * rates.sigma[(i, j)])
                })
                .sum();
            BathCurrent {
                node: bath.node,
                value,
                alternative: None,
            }
        })
        .collect();
    // gross emission of the busiest bath, which stays finite at equilibrium
    let scale = (0..net.baths().len())
        .map(|i| (0..n).map(|j| 0.5 * rates.weight[(i, j)] * basis.omega()[j] * rates.sigma[(i, j)]).sum::<f64>())
        .fold(0.0, f64::max);
    Ok(HeatCurrentReport::with_scale(Method::Gkls, currents, scale))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ValidityReport {
    /// `min_{j≠k}{|Ω_j − Ω_k|, 2Ω_j}`
    pub min_gap: f64,
    /// `max_i γ_i`
    pub max_rate: f64,
    pub secular_ratio: f64,
    pub secular_ok: bool,
    /// `max_i γ_i / min_j Ω_j`
    pub weak_coupling_ratio: f64,
    pub weak_coupling_ok: bool,
}

/// Advisory checks of the secular and weak-coupling assumptions.
pub fn validity_diagnostics(net: &HarmonicNetwork, basis: &NormalModeBasis) -> ValidityReport {
    let om = basis.omega();
    let n = om.len();
    let mut min_gap = f64::INFINITY;
    for j in 0..n {
        min_gap = min_gap.min(2.0 * om[j]);
        for k in 0..j {
            min_gap = min_gap.min((om[j] - om[k]).abs());
        }
    }
    let max_rate = net.baths().iter().fold(0.0_f64, |m, b| m.max(b.spectral.gamma()));
    let secular_ratio = if max_rate > 0.0 { min_gap / max_rate } else { f64::INFINITY };
    let weak_coupling_ratio = max_rate / om.min();
    ValidityReport {
        min_gap,
        max_rate,
        secular_ratio,
        secular_ok: secular_ratio >= SECULAR_THRESHOLD,
        weak_coupling_ratio,
        weak_coupling_ok: weak_coupling_ratio <= WEAK_COUPLING_THRESHOLD,
    }
}
