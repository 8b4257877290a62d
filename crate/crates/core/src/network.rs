//! Harmonic networks (unit masses) with local bath attachments, and their
//! normal-mode decomposition.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::spectral::{check_temperature, SpectralDensity};

/// Node indices of the wire and of the augmented chain.
pub const HOT: usize = 0;
pub const COLD: usize = 1;
pub const RC: usize = 2;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BathAttachment {
    pub node: usize,
    pub spectral: SpectralDensity,
    pub temperature: f64,
}

/// Bare two-node wire parameters: local frequencies and spring constant.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WireParams {
    pub omega_h: f64,
    pub omega_c: f64,
    pub k: f64,
}

impl WireParams {
    pub fn new(omega_h: f64, omega_c: f64, k: f64) -> Self {
        Self { omega_h, omega_c, k }
    }

    fn validate(&self) -> Result<()> {
        if !(self.omega_h > 0.0 && self.omega_c > 0.0) {
            return Err(Error::Model(format!(
                "local frequencies must be positive, got ω_h = {}, ω_c = {}",
                self.omega_h, self.omega_c
            )));
        }
        if !(self.k >= 0.0 && self.k.is_finite()) {
            return Err(Error::Model(format!("spring constant must be non-negative, got {}", self.k)));
        }
        Ok(())
    }

    /// Unshifted wire potential `[[ω_h²+k, −k], [−k, ω_c²+k]]`.
    pub fn potential(&self) -> DMatrix<f64> {
        let k = self.k;
        DMatrix::from_row_slice(
            2,
            2,
            &[self.omega_h.powi(2) + k, -k, -k, self.omega_c.powi(2) + k],
        )
    }
}

/// `H = ½ Σ P_i² + ½ XᵀVX` plus the list of local baths.
#[derive(Debug, Clone, PartialEq)]
pub struct HarmonicNetwork {
    v: DMatrix<f64>,
    baths: Vec<BathAttachment>,
    label: String,
}

pub(crate) fn check_symmetric(m: &DMatrix<f64>, what: &str) -> Result<()> {
    if !m.is_square() {
        return Err(Error::ContractViolation(format!("{what} must be square, got {}x{}", m.nrows(), m.ncols())));
    }
    let scale = m.amax().max(f64::MIN_POSITIVE);
    for i in 0..m.nrows() {
        for j in 0..i {
            if (m[(i, j)] - m[(j, i)]).abs() > 1e-12 * scale {
                return Err(Error::ContractViolation(format!(
                    "{what} is not symmetric: entries ({i},{j}) = {} and ({j},{i}) = {}",
                    m[(i, j)],
                    m[(j, i)]
                )));
            }
        }
    }
    Ok(())
}

fn check_positive_definite(v: &DMatrix<f64>) -> Result<()> {
    let min = v.clone().symmetric_eigenvalues().min();
    if min > 0.0 {
        Ok(())
    } else {
        Err(Error::Model(format!(
            "interaction matrix is not positive definite (smallest eigenvalue {min:.6e})"
        )))
    }
}

impl HarmonicNetwork {
    /// Validates symmetry, bath nodes (in range, one per node) and
    /// temperatures. Positive definiteness is checked by [`normal_modes`]
    /// and by the builders.
    pub fn new(v: DMatrix<f64>, baths: Vec<BathAttachment>, label: impl Into<String>) -> Result<Self> {
        check_symmetric(&v, "interaction matrix")?;
        if v.nrows() == 0 {
            return Err(Error::ContractViolation("network must have at least one node".into()));
        }
        let mut seen = vec![false; v.nrows()];
        for b in &baths {
            if b.node >= v.nrows() {
                return Err(Error::ContractViolation(format!(
                    "bath attached to node {} of a {}-node network",
                    b.node,
                    v.nrows()
                )));
            }
            if seen[b.node] {
                return Err(Error::ContractViolation(format!("more than one bath on node {}", b.node)));
            }
            seen[b.node] = true;
            check_temperature(b.temperature)?;
            b.spectral.validate()?;
        }
        Ok(Self {
            v,
            baths,
            label: label.into(),
        })
    }

    pub fn v(&self) -> &DMatrix<f64> {
        &self.v
    }

    pub fn baths(&self) -> &[BathAttachment] {
        &self.baths
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn n_nodes(&self) -> usize {
        self.v.nrows()
    }

    /// Returns a copy with one more bath attached.
    pub fn with_bath(mut self, node: usize, spectral: SpectralDensity, temperature: f64) -> Result<Self> {
        self.baths.push(BathAttachment {
            node,
            spectral,
            temperature,
        });
        Self::new(self.v, self.baths, self.label)
    }

    /// Returns a copy with every bath temperature replaced.
    pub fn with_temperatures(&self, temperatures: &[f64]) -> Result<Self> {
        if temperatures.len() != self.baths.len() {
            return Err(Error::DimensionMismatch {
                expected: self.baths.len(),
                got: temperatures.len(),
            });
        }
        let baths = self
            .baths
            .iter()
            .zip(temperatures)
            .map(|(b, &t)| BathAttachment { temperature: t, ..*b })
            .collect();
        Self::new(self.v.clone(), baths, self.label.clone())
    }
}

/// Two-node wire without baths. With `shift_cold`, the cold diagonal entry
/// carries the counter-term `δ_c`.
pub fn build_wire(omega_h: f64, omega_c: f64, k: f64, shift_cold: bool, delta_c: f64) -> Result<HarmonicNetwork> {
    let w = WireParams::new(omega_h, omega_c, k);
    w.validate()?;
    let mut v = w.potential();
    if shift_cold {
        v[(1, 1)] += delta_c;
    }
    check_positive_definite(&v)?;
    HarmonicNetwork::new(v, Vec::new(), if shift_cold { "wire (shifted)" } else { "wire" })
}

/// Hot node, cold node and reaction coordinate, in that order. The hot bath
/// sits on the hot node and the residual bath on the RC; neither brings a
/// counter-term. The cold node keeps `δ_c = λ²/ω₀²`.
pub fn build_augmented(
    wire: WireParams,
    j_c: SpectralDensity,
    j_h: SpectralDensity,
    residual: SpectralDensity,
    t_h: f64,
    t_c: f64,
) -> Result<HarmonicNetwork> {
    build_augmented_with_shift(wire, j_c, j_h, residual, t_h, t_c, true)
}

/// As [`build_augmented`], optionally dropping the cold counter-term.
pub fn build_augmented_with_shift(
    wire: WireParams,
    j_c: SpectralDensity,
    j_h: SpectralDensity,
    residual: SpectralDensity,
    t_h: f64,
    t_c: f64,
    shift_cold: bool,
) -> Result<HarmonicNetwork> {
    wire.validate()?;
    let SpectralDensity::Underdamped { lambda, omega0, .. } = j_c else {
        return Err(Error::ContractViolation(
            "the reaction-coordinate mapping needs an underdamped cold spectrum".into(),
        ));
    };
    let mut v = DMatrix::zeros(3, 3);
    v.view_mut((0, 0), (2, 2)).copy_from(&wire.potential());
    if shift_cold {
        v[(1, 1)] += lambda * lambda / (omega0 * omega0);
    }
    v[(1, 2)] = -lambda;
    v[(2, 1)] = -lambda;
    v[(2, 2)] = omega0 * omega0;
    check_positive_definite(&v)?;
    let label = if shift_cold { "augmented" } else { "augmented (unshifted)" };
    HarmonicNetwork::new(
        v,
        vec![
            BathAttachment {
                node: HOT,
                spectral: j_h,
                temperature: t_h,
            },
            BathAttachment {
                node: RC,
                spectral: residual,
                temperature: t_c,
            },
        ],
        label,
    )
}

/// Orthogonal `P` with `PᵀVP = diag(Ω²)`, and the interleaved transform `Q`
/// taking `(η₁, π₁, …)` to `(X₁, P₁, …)`.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalModeBasis {
    p: DMatrix<f64>,
    omega: DVector<f64>,
    q: DMatrix<f64>,
}

impl NormalModeBasis {
    pub fn p(&self) -> &DMatrix<f64> {
        &self.p
    }

    /// Mode frequencies, ascending.
    pub fn omega(&self) -> &DVector<f64> {
        &self.omega
    }

    pub fn q(&self) -> &DMatrix<f64> {
        &self.q
    }

    pub fn n_modes(&self) -> usize {
        self.omega.len()
    }
}

/// Diagonalises `V`. Columns are ordered by ascending frequency and signed so
/// that each column's largest-magnitude entry is positive.
pub fn normal_modes(net: &HarmonicNetwork) -> Result<NormalModeBasis> {
    modes_of(net.v())
}

pub(crate) fn modes_of(v: &DMatrix<f64>) -> Result<NormalModeBasis> {
    check_symmetric(v, "interaction matrix")?;
    let n = v.nrows();
    let eig = SymmetricEigen::new(v.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    if eig.eigenvalues[order[0]] <= 0.0 {
        return Err(Error::Model(format!(
            "interaction matrix is not positive definite (smallest eigenvalue {:.6e})",
            eig.eigenvalues[order[0]]
        )));
    }
    let mut p = DMatrix::zeros(n, n);
    let mut omega = DVector::zeros(n);
    for (col, &src) in order.iter().enumerate() {
        let mut c = eig.eigenvectors.column(src).into_owned();
        let imax = c.iamax();
        if c[imax] < 0.0 {
            c = -c;
        }
        p.set_column(col, &c);
        omega[col] = eig.eigenvalues[src].sqrt();
    }
    let top = omega.max();
    for j in 1..n {
        if omega[j] - omega[j - 1] < 1e-9 * top {
            return Err(Error::Degenerate(omega[j - 1], omega[j]));
        }
    }
    let mut q = DMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            q[(2 * i, 2 * j)] = p[(i, j)];
            q[(2 * i + 1, 2 * j + 1)] = p[(i, j)];
        }
    }
    Ok(NormalModeBasis { p, omega, q })
}
