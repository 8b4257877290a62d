//! Closed-form spectral densities, their renormalisation shifts and
//! dissipation kernels, and bath correlation functions by quadrature.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quadrature::{integrate_vec, segments_from_breakpoints, Segment, Tolerance, VectorQuadrature};

/// Bath coupling spectrum.
///
/// * `OhmicAlgebraic`: `J(ω) = γΛ²ω / (ω² + Λ²)`
/// * `Underdamped`: `J(ω) = γλ²ω / (γ²ω² + (ω² − ω₀²)²)`
/// * `OhmicLinear`: `J(ω) = γω`, only meaningful for master-equation rates
///   unless regularised with an explicit cutoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum SpectralDensity {
    OhmicAlgebraic { gamma: f64, cutoff: f64 },
    Underdamped { gamma: f64, lambda: f64, omega0: f64 },
    OhmicLinear { gamma: f64 },
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::ContractViolation(format!("{name} must be positive and finite, got {v}")))
    }
}

pub(crate) fn check_temperature(t: f64) -> Result<()> {
    if t > 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(Error::ContractViolation(format!("temperature must be positive and finite, got {t}")))
    }
}

/// `x·coth(x)`, smooth through `x = 0`.
pub fn x_coth_x(x: f64) -> f64 {
    let ax = x.abs();
    if ax < 1e-4 {
        1.0 + ax * ax / 3.0
    } else if ax > 40.0 {
        ax
    } else {
        ax / ax.tanh()
    }
}

impl SpectralDensity {
    pub fn ohmic_algebraic(gamma: f64, cutoff: f64) -> Result<Self> {
        let s = Self::OhmicAlgebraic { gamma, cutoff };
        s.validate()?;
        Ok(s)
    }

    pub fn underdamped(gamma: f64, lambda: f64, omega0: f64) -> Result<Self> {
        let s = Self::Underdamped { gamma, lambda, omega0 };
        s.validate()?;
        Ok(s)
    }

    pub fn ohmic_linear(gamma: f64) -> Result<Self> {
        let s = Self::OhmicLinear { gamma };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::OhmicAlgebraic { gamma, cutoff } => {
                positive("gamma", gamma)?;
                positive("cutoff", cutoff)
            }
            Self::Underdamped { gamma, lambda, omega0 } => {
                positive("gamma", gamma)?;
                positive("lambda", lambda)?;
                positive("omega0", omega0)
            }
            Self::OhmicLinear { gamma } => positive("gamma", gamma),
        }
    }

    /// Friction-like strength parameter `γ`.
    pub fn gamma(&self) -> f64 {
        match *self {
            Self::OhmicAlgebraic { gamma, .. } | Self::Underdamped { gamma, .. } | Self::OhmicLinear { gamma } => gamma,
        }
    }

    /// `J(ω)` for `ω ≥ 0`.
    pub fn evaluate(&self, omega: f64) -> Result<f64> {
        if !(omega >= 0.0) {
            return Err(Error::ContractViolation(format!(
                "spectral density evaluated at negative or NaN frequency {omega}"
            )));
        }
        Ok(self.j(omega))
    }

    pub(crate) fn j(&self, omega: f64) -> f64 {
        omega * self.j_over_omega(omega)
    }

    /// `J(ω)/ω`, finite at `ω = 0`.
    pub fn j_over_omega(&self, omega: f64) -> f64 {
        match *self {
            Self::OhmicAlgebraic { gamma, cutoff } => gamma * cutoff * cutoff / (omega * omega + cutoff * cutoff),
            Self::Underdamped { gamma, lambda, omega0 } => {
                let d = omega * omega - omega0 * omega0;
                gamma * lambda * lambda / (gamma * gamma * omega * omega + d * d)
            }
            Self::OhmicLinear { gamma } => gamma,
        }
    }

    /// `J(ω)·coth(ω/2T)`, with the `ω → 0` limit `2T·J(ω)/ω` handled exactly.
    pub fn j_coth(&self, omega: f64, temperature: f64) -> f64 {
        let x = omega / (2.0 * temperature);
        self.j_over_omega(omega) * 2.0 * temperature * x_coth_x(x)
    }

    /// Counter-term `δ = (2/π)∫₀^∞ J(ω)/ω dω`.
    pub fn renormalisation_shift(&self) -> Result<f64> {
        match *self {
            Self::OhmicAlgebraic { gamma, cutoff } => Ok(gamma * cutoff),
            Self::Underdamped { lambda, omega0, .. } => Ok(lambda * lambda / (omega0 * omega0)),
            Self::OhmicLinear { .. } => Err(Error::Unsupported(
                "the Ohmic-linear shift diverges; regularise with an explicit cutoff first".into(),
            )),
        }
    }

    /// Replaces an Ohmic-linear spectrum by its algebraic-cutoff version with
    /// the given cutoff. Other variants are returned unchanged.
    pub fn regularised(&self, cutoff: f64) -> Result<Self> {
        match *self {
            Self::OhmicLinear { gamma } => Self::ohmic_algebraic(gamma, cutoff),
            other => Ok(other),
        }
    }

    /// Fourier transform of the dissipation kernel, `χ̂(ω)`, for real `ω`.
    pub fn fourier_kernel(&self, omega: f64) -> Result<Complex64> {
        match *self {
            Self::OhmicAlgebraic { gamma, cutoff } => {
                Ok(Complex64::new(gamma * cutoff * cutoff, 0.0) / Complex64::new(cutoff, -omega))
            }
            Self::Underdamped { gamma, lambda, omega0 } => Ok(Complex64::new(lambda * lambda, 0.0)
                / Complex64::new(omega0 * omega0 - omega * omega, -gamma * omega)),
            Self::OhmicLinear { .. } => Err(Error::Unsupported(
                "the Ohmic-linear kernel needs an explicit cutoff (use `regularised`)".into(),
            )),
        }
    }

    /// `δ − χ̂(ω)`, written without the cancellation between the two terms
    /// (the shift can exceed the remainder by many orders of magnitude).
    pub fn shifted_kernel(&self, omega: f64) -> Result<Complex64> {
        let i_w = Complex64::new(0.0, omega);
        match *self {
            Self::OhmicAlgebraic { gamma, cutoff } => {
                Ok(-(gamma * cutoff) * i_w / Complex64::new(cutoff, -omega))
            }
            Self::Underdamped { gamma, lambda, omega0 } => {
                let w02 = omega0 * omega0;
                let num = Complex64::new(omega * omega, gamma * omega);
                Ok(-(lambda * lambda / w02) * num / Complex64::new(w02 - omega * omega, -gamma * omega))
            }
            Self::OhmicLinear { .. } => self.fourier_kernel(omega),
        }
    }

    /// Frequencies where the spectrum changes character; used as quadrature
    /// breakpoints.
    pub fn features(&self) -> Vec<f64> {
        match *self {
            Self::OhmicAlgebraic { cutoff, .. } => vec![cutoff],
            Self::Underdamped { gamma, omega0, .. } => {
                let mut v = vec![omega0, omega0 + 0.5 * gamma];
                if omega0 > 0.5 * gamma {
                    v.push(omega0 - 0.5 * gamma);
                }
                v
            }
            Self::OhmicLinear { .. } => vec![],
        }
    }

    /// Bath correlation function
    /// `⟨B(t)B(0)⟩ = (1/π)∫₀^∞ J(ω)[coth(ω/2T) cos ωt − i sin ωt] dω`.
    pub fn correlation_function(&self, temperature: f64, t: f64, rel_tol: f64) -> Result<Complex64> {
        check_temperature(temperature)?;
        self.check_quadrature_time(t)?;
        if t == 0.0 {
            if !matches!(self, Self::Underdamped { .. }) {
                return Err(Error::Unsupported(
                    "equal-time correlation diverges for spectra decaying slower than ω⁻²".into(),
                ));
            }
            let segs = segments_from_breakpoints(&self.breakpoints(temperature), true);
            let r = integrate_vec(
                |w, out: &mut [f64]| out[0] = self.j_coth(w, temperature),
                1,
                &segs,
                &Tolerance::relative(rel_tol),
            )?;
            return Ok(Complex64::new(r.values[0] / PI, 0.0));
        }
        let r = self.oscillatory(
            t,
            temperature,
            rel_tol,
            |w, out| {
                let (s, c) = (w * t).sin_cos();
                out[0] = self.j_coth(w, temperature) * c;
                out[1] = -self.j(w) * s;
            },
            |w| self.j_coth(w, temperature).max(self.j(w)),
        )?;
        Ok(Complex64::new(r.values[0], r.values[1]) / PI)
    }

    /// `∫₀ᵗ ⟨B(s)B(0)⟩ ds`, with the time integral carried out analytically.
    ///
    /// The imaginary part is written as `−δ/2 + (1/π)∫ J cos(ωt)/ω dω`, so the
    /// spectrum must have a finite shift.
    pub fn integrated_correlation(&self, temperature: f64, t: f64, rel_tol: f64) -> Result<Complex64> {
        check_temperature(temperature)?;
        self.check_quadrature_time(t)?;
        if t == 0.0 {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let delta = self.renormalisation_shift()?;
        let r = self.oscillatory(
            t,
            temperature,
            rel_tol,
            |w, out| {
                let (s, c) = (w * t).sin_cos();
                let sinc_t = if (w * t).abs() < 1e-6 { t * (1.0 - (w * t).powi(2) / 6.0) } else { s / w };
                out[0] = self.j_coth(w, temperature) * sinc_t;
                out[1] = self.j_over_omega(w) * c;
            },
            |w| (self.j_coth(w, temperature) / w).max(self.j_over_omega(w)),
        )?;
        Ok(Complex64::new(r.values[0] / PI, -0.5 * delta + r.values[1] / PI))
    }

    fn check_quadrature_time(&self, t: f64) -> Result<()> {
        if !(t >= 0.0 && t.is_finite()) {
            return Err(Error::ContractViolation(format!("time must be non-negative and finite, got {t}")));
        }
        Ok(())
    }

    fn breakpoints(&self, temperature: f64) -> Vec<f64> {
        let mut b = vec![0.0, temperature];
        b.extend(self.features());
        b
    }

    /// Integrates the two-component oscillatory integrand `f` over `[0, ∞)`.
    ///
    /// Panels are a few oscillation periods wide. The upper limit is doubled
    /// until the Dirichlet bound `2·envelope(W)/t` on the remaining
    /// oscillatory tail is below the tolerance relative to `∫|f|`; `envelope`
    /// must be non-increasing beyond the spectral features.
    fn oscillatory<F, E>(&self, t: f64, temperature: f64, rel_tol: f64, f: F, envelope: E) -> Result<VectorQuadrature>
    where
        F: Fn(f64, &mut [f64]),
        E: Fn(f64) -> f64,
    {
        const MAX_PANELS: usize = 4_000_000;
        let period = 2.0 * PI / t;
        let width = 3.0 * period;
        let bps = self.breakpoints(temperature);
        let top_feature = bps.iter().copied().fold(0.0_f64, f64::max);
        let mut upper = (4.0 * top_feature).max(10.0 * period).max(20.0 * temperature);
        let mut lower = 0.0;
        let mut total = [0.0_f64; 2];
        let mut errors = [0.0_f64; 2];
        let mut l1 = [0.0_f64; 2];
        let mut panels = 0usize;
        let tol = Tolerance {
            max_subdivisions: 200_000,
            ..Tolerance::l1(rel_tol)
        };
        loop {
            let n = ((upper - lower) / width).ceil().max(1.0) as usize;
            if panels + n > MAX_PANELS {
                return Err(Error::Quadrature {
                    achieved: 2.0 * envelope(lower) / t,
                    requested: rel_tol * l1.iter().copied().fold(0.0, f64::max),
                    panels,
                });
            }
            let mut pts: Vec<f64> = (0..=n).map(|i| lower + (upper - lower) * i as f64 / n as f64).collect();
            pts.extend(bps.iter().copied().filter(|&b| b > lower && b < upper));
            let segs: Vec<Segment> = segments_from_breakpoints(&pts, false);
            let r = integrate_vec(&f, 2, &segs, &tol)?;
            for i in 0..2 {
                total[i] += r.values[i];
                errors[i] += r.errors[i];
                l1[i] += r.l1[i];
            }
            panels += r.panels_used;
            let tail = 2.0 * envelope(upper) / t;
            if (0..2).all(|i| tail <= rel_tol * l1[i] || l1[i] == 0.0 && tail == 0.0) {
                for e in errors.iter_mut() {
                    *e += tail;
                }
                return Ok(VectorQuadrature {
                    values: total.to_vec(),
                    errors: errors.to_vec(),
                    l1: l1.to_vec(),
                    panels_used: panels,
                });
            }
            lower = upper;
            upper *= 2.0;
        }
    }
}

/// Underdamped spectrum with `λ² = α₁α₂γ` and `ω₀² = α₂γ`; tends to the
/// overdamped `α₁α₂ω/(ω² + α₂²)` as `γ → ∞`.
pub fn scaled_underdamped(alpha1: f64, alpha2: f64, gamma: f64) -> Result<SpectralDensity> {
    positive("alpha1", alpha1)?;
    positive("alpha2", alpha2)?;
    positive("gamma", gamma)?;
    SpectralDensity::underdamped(gamma, (alpha1 * alpha2 * gamma).sqrt(), (alpha2 * gamma).sqrt())
}

/// The `γ → ∞` limit of [`scaled_underdamped`], as an algebraic-cutoff
/// Ohmic spectrum.
pub fn overdamped_limit(alpha1: f64, alpha2: f64) -> Result<SpectralDensity> {
    positive("alpha1", alpha1)?;
    positive("alpha2", alpha2)?;
    SpectralDensity::ohmic_algebraic(alpha1 / alpha2, alpha2)
}
