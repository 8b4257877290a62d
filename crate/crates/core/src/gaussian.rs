//! Zero-mean Gaussian states described by their symmetrised covariance
//! matrix in the ordering `(X₁, P₁, …, X_N, P_N)`.

use nalgebra::{Cholesky, DMatrix, SymmetricEigen};

use crate::error::{Error, Result};
use crate::network::NormalModeBasis;
use crate::spectral::{check_temperature, x_coth_x};

/// Tolerance on the uncertainty relation used by [`is_physical`].
pub const PHYSICAL_TOL: f64 = 1e-9;
/// Looser tolerance applied to fidelity inputs, which may come from quadrature.
pub const FIDELITY_INPUT_TOL: f64 = 1e-6;

/// `⟨½{r_j, r_k}⟩`. Symmetric by construction; physicality is checked
/// separately so that unphysical matrices can still be inspected.
#[derive(Debug, Clone, PartialEq)]
pub struct CovarianceMatrix {
    data: DMatrix<f64>,
}

impl CovarianceMatrix {
    /// Accepts a `2N×2N` matrix symmetric to within `1e-12` relative and
    /// stores its exact symmetric part.
    pub fn new(data: DMatrix<f64>) -> Result<Self> {
        if !data.is_square() || data.nrows() == 0 || data.nrows() % 2 != 0 {
            return Err(Error::ContractViolation(format!(
                "covariance matrix must be 2N×2N with N ≥ 1, got {}x{}",
                data.nrows(),
                data.ncols()
            )));
        }
        if data.iter().any(|x| !x.is_finite()) {
            return Err(Error::ContractViolation("covariance matrix has non-finite entries".into()));
        }
        let scale = data.amax().max(f64::MIN_POSITIVE);
        let asym = (&data - data.transpose()).amax();
        if asym > 1e-12 * scale {
            return Err(Error::ContractViolation(format!(
                "covariance matrix is not symmetric (max |C − Cᵀ| = {asym:.3e})"
            )));
        }
        let sym = (&data + data.transpose()) * 0.5;
        Ok(Self { data: sym })
    }

    pub fn vacuum(n_modes: usize) -> Self {
        Self {
            data: DMatrix::identity(2 * n_modes, 2 * n_modes) * 0.5,
        }
    }

    pub fn n_modes(&self) -> usize {
        self.data.nrows() / 2
    }

    pub fn data(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn into_inner(self) -> DMatrix<f64> {
        self.data
    }

    /// `⟨X_i²⟩`.
    pub fn x2(&self, i: usize) -> f64 {
        self.data[(2 * i, 2 * i)]
    }

    /// `⟨P_i²⟩`.
    pub fn p2(&self, i: usize) -> f64 {
        self.data[(2 * i + 1, 2 * i + 1)]
    }

    /// `⟨½{X_i, P_j}⟩`.
    pub fn xp(&self, i: usize, j: usize) -> f64 {
        self.data[(2 * i, 2 * j + 1)]
    }
}

/// `Θ = ⊕ [[0, 1], [−1, 0]]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymplecticForm {
    pub n_modes: usize,
}

impl SymplecticForm {
    pub fn new(n_modes: usize) -> Self {
        Self { n_modes }
    }

    pub fn matrix(&self) -> DMatrix<f64> {
        let mut t = DMatrix::zeros(2 * self.n_modes, 2 * self.n_modes);
        for k in 0..self.n_modes {
            t[(2 * k, 2 * k + 1)] = 1.0;
            t[(2 * k + 1, 2 * k)] = -1.0;
        }
        t
    }
}

/// Symplectic spectrum (ascending, one value per mode) of a positive-definite
/// matrix: with `C = LLᵀ`, the antisymmetric `LᵀΘL` has eigenvalues `±iν`.
fn symplectic_spectrum_pd(chol: &Cholesky<f64, nalgebra::Dyn>, theta: &DMatrix<f64>) -> Vec<f64> {
    let l = chol.l();
    let m = l.transpose() * theta * &l;
    let s = m.transpose() * &m;
    let s = (&s + s.transpose()) * 0.5;
    let mut ev: Vec<f64> = SymmetricEigen::new(s).eigenvalues.iter().copied().collect();
    ev.sort_by(f64::total_cmp);
    ev.chunks(2).map(|p| (0.5 * (p[0] + p[1])).max(0.0).sqrt()).collect()
}

/// Symplectic eigenvalues of any symmetric matrix, taken as the moduli of the
/// eigenvalues of `ΘC` paired off in ascending order.
pub fn symplectic_eigenvalues(c: &CovarianceMatrix) -> Vec<f64> {
    let theta = SymplecticForm::new(c.n_modes()).matrix();
    match Cholesky::new(c.data.clone()) {
        Some(chol) => symplectic_spectrum_pd(&chol, &theta),
        None => {
            let mut ev: Vec<f64> = (&theta * &c.data).complex_eigenvalues().iter().map(|z| z.norm()).collect();
            ev.sort_by(f64::total_cmp);
            ev.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect()
        }
    }
}

/// `(physical, symplectic eigenvalues)`; physical iff `C > 0` and every
/// symplectic eigenvalue is at least `½ − 1e-9`.
pub fn is_physical(c: &CovarianceMatrix) -> (bool, Vec<f64>) {
    is_physical_with(c, PHYSICAL_TOL)
}

pub fn is_physical_with(c: &CovarianceMatrix, tol: f64) -> (bool, Vec<f64>) {
    let pd = Cholesky::new(c.data.clone()).is_some();
    let nu = symplectic_eigenvalues(c);
    let ok = pd && nu.iter().all(|&v| v >= 0.5 - tol);
    (ok, nu)
}

/// Errors with [`Error::Unphysical`] unless `c` passes [`is_physical_with`].
pub fn ensure_physical(c: &CovarianceMatrix, tol: f64) -> Result<()> {
    let (ok, nu) = is_physical_with(c, tol);
    if ok {
        Ok(())
    } else {
        Err(Error::Unphysical {
            min_symplectic: nu.iter().copied().fold(f64::INFINITY, f64::min),
        })
    }
}

/// Uhlmann fidelity `𝓕 = (F / det(C₁+C₂)^{1/4})²` between zero-mean Gaussian
/// states, where
/// `C_aux = Θᵀ(C₁+C₂)⁻¹(Θ/4 + C₂ΘC₁)` and
/// `F⁴ = det[2(√(1 + (C_auxΘ)⁻²/4) + 1) C_aux]`.
///
/// The eigenvalues of `C_auxΘ` are `±iν_k`, so the determinant reduces to
/// `det(C_aux)·Π_k [2(√(1 − 1/(4ν_k²)) + 1)]²`.
pub fn uhlmann_fidelity(c1: &CovarianceMatrix, c2: &CovarianceMatrix) -> Result<f64> {
    if c1.n_modes() != c2.n_modes() {
        return Err(Error::DimensionMismatch {
            expected: c1.n_modes(),
            got: c2.n_modes(),
        });
    }
    ensure_physical(c1, FIDELITY_INPUT_TOL)?;
    ensure_physical(c2, FIDELITY_INPUT_TOL)?;
    let n = c1.n_modes();
    let theta = SymplecticForm::new(n).matrix();
    let sum = &c1.data + &c2.data;
    let chol = Cholesky::new(sum.clone()).ok_or_else(|| {
        Error::Conditioning(format!(
            "C₁ + C₂ is not positive definite (max entry {:.3e})",
            sum.amax()
        ))
    })?;
    let log_det_sum: f64 = 2.0 * chol.l().diagonal().iter().map(|d| d.ln()).sum::<f64>();
    let sum_inv = chol.inverse();
    let aux = theta.transpose() * &sum_inv * (&theta * 0.25 + &c2.data * &theta * &c1.data);
    // C_aux is not symmetric in general, but C_auxΘ still has spectrum ±iν_k.
    let det_aux = aux.clone().lu().determinant();
    if !(det_aux > 0.0) {
        return Err(Error::Conditioning(format!("det C_aux = {det_aux:.3e} is not positive")));
    }
    let mut moduli: Vec<f64> = (&aux * &theta).complex_eigenvalues().iter().map(|z| z.norm()).collect();
    moduli.sort_by(f64::total_cmp);
    let nu: Vec<f64> = moduli.chunks(2).map(|p| 0.5 * (p[0] + p[1])).collect();
    let mut log_f2 = 0.5 * det_aux.ln();
    for &v in &nu {
        let mut arg = 1.0 - 1.0 / (4.0 * v * v);
        if arg < 0.0 {
            if arg < -1e-6 {
                return Err(Error::Conditioning(format!(
                    "auxiliary symplectic eigenvalue {v:.12} below 1/2"
                )));
            }
            arg = 0.0;
        }
        log_f2 += (2.0 * (arg.sqrt() + 1.0)).ln();
    }
    let fid = (log_f2 - 0.5 * log_det_sum).exp();
    if !fid.is_finite() || fid <= 0.0 {
        return Err(Error::Conditioning(format!("fidelity evaluated to {fid}")));
    }
    Ok(fid.min(1.0))
}

/// Partial trace: keeps the `(X_i, P_i)` pairs listed in `keep`, in order.
pub fn reduce(c: &CovarianceMatrix, keep: &[usize]) -> Result<CovarianceMatrix> {
    if keep.is_empty() {
        return Err(Error::ContractViolation("reduce needs at least one mode to keep".into()));
    }
    let n = c.n_modes();
    for (a, &i) in keep.iter().enumerate() {
        if i >= n {
            return Err(Error::ContractViolation(format!("mode index {i} out of range for {n} modes")));
        }
        if keep[..a].contains(&i) {
            return Err(Error::ContractViolation(format!("mode index {i} listed twice")));
        }
    }
    let idx: Vec<usize> = keep.iter().flat_map(|&i| [2 * i, 2 * i + 1]).collect();
    let m = idx.len();
    let data = DMatrix::from_fn(m, m, |r, s| c.data[(idx[r], idx[s])]);
    Ok(CovarianceMatrix { data })
}

/// `(⟨X²⟩, ⟨P²⟩)` of a thermal oscillator at frequency `omega`.
pub fn thermal_mode(omega: f64, temperature: f64) -> (f64, f64) {
    let x = omega / (2.0 * temperature);
    let coth = x_coth_x(x) / x;
    (coth / (2.0 * omega), omega * coth / 2.0)
}

/// Gibbs state of the network Hamiltonian: each normal mode thermal at `T`,
/// rotated back to node coordinates with `Q`.
pub fn thermal_covariance(basis: &NormalModeBasis, temperature: f64) -> Result<CovarianceMatrix> {
    check_temperature(temperature).map_err(|_| {
        Error::ContractViolation(format!("temperature must be positive, got {temperature}"))
    })?;
    let n = basis.n_modes();
    let mut c = DMatrix::zeros(2 * n, 2 * n);
    for j in 0..n {
        let w = basis.omega()[j];
        if !(w > 0.0) {
            return Err(Error::ContractViolation(format!("mode frequency {w} is not positive")));
        }
        let (xx, pp) = thermal_mode(w, temperature);
        c[(2 * j, 2 * j)] = xx;
        c[(2 * j + 1, 2 * j + 1)] = pp;
    }
    let q = basis.q();
    CovarianceMatrix::new(q * c * q.transpose())
}

/// Uncorrelated product of single-oscillator thermal states.
pub fn product_thermal(frequencies: &[f64], temperatures: &[f64]) -> Result<CovarianceMatrix> {
    if frequencies.len() != temperatures.len() {
        return Err(Error::DimensionMismatch {
            expected: frequencies.len(),
            got: temperatures.len(),
        });
    }
    let n = frequencies.len();
    let mut c = DMatrix::zeros(2 * n, 2 * n);
    for (j, (&w, &t)) in frequencies.iter().zip(temperatures).enumerate() {
        check_temperature(t)?;
        if !(w > 0.0) {
            return Err(Error::ContractViolation(format!("frequency {w} is not positive")));
        }
        let (xx, pp) = thermal_mode(w, t);
        c[(2 * j, 2 * j)] = xx;
        c[(2 * j + 1, 2 * j + 1)] = pp;
    }
    CovarianceMatrix::new(c)
}
