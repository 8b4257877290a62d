//! Experiment configurations. Every field has a default, so `{"experiment":
//! "fig2"}` is a complete config; `resolved_json` expands all defaults.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::network::{build_augmented, build_wire, WireParams};
use crate::spectral::{overdamped_limit, scaled_underdamped, SpectralDensity};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "experiment", rename_all = "kebab-case")]
pub enum ExperimentConfig {
    Fig2(Fig2Config),
    Fig3(Fig3Config),
    Fig4(Fig4Config),
    CustomSweep(CustomSweepConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Spacing {
    Lin,
    Log,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn log(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points, spacing: Spacing::Log }
    }

    pub fn lin(min: f64, max: f64, points: usize) -> Self {
        Self { min, max, points, spacing: Spacing::Lin }
    }

    pub fn validate(&self, what: &str) -> Result<()> {
        if self.points == 0 {
            return Err(Error::Config(format!("{what}: grid has no points")));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.min > self.max {
            return Err(Error::Config(format!("{what}: need finite min <= max, got [{}, {}]", self.min, self.max)));
        }
        if self.points == 1 && self.min != self.max {
            return Err(Error::Config(format!("{what}: a one-point grid needs min == max")));
        }
        if self.spacing == Spacing::Log && !(self.min > 0.0) {
            return Err(Error::Config(format!("{what}: log grid needs min > 0, got {}", self.min)));
        }
        Ok(())
    }

    /// Grid values; endpoints are reproduced exactly.
    pub fn values(&self) -> Vec<f64> {
        let n = self.points;
        if n == 1 {
            return vec![self.min];
        }
        (0..n)
            .map(|i| {
                if i == 0 {
                    return self.min;
                }
                if i == n - 1 {
                    return self.max;
                }
                let s = i as f64 / (n - 1) as f64;
                match self.spacing {
                    Spacing::Lin => self.min + s * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + s * (self.max / self.min).ln()).exp(),
                }
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Relative tolerance of the frequency integrals of the exact solver.
    pub quadrature_rel: f64,
    /// Relative tolerance of bath correlation integrals.
    pub correlation_rel: f64,
    /// Fidelity level whose crossing is reported.
    pub fidelity_level: f64,
    /// Relative change `|f(2t) − f(t)|/|f(t)|` below which a correlation
    /// integral counts as saturated.
    pub saturation_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            quadrature_rel: 1e-8,
            correlation_rel: 1e-8,
            fidelity_level: 0.95,
            saturation_rel: 0.01,
        }
    }
}

impl Tolerances {
    fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("quadrature_rel", self.quadrature_rel),
            ("correlation_rel", self.correlation_rel),
            ("saturation_rel", self.saturation_rel),
        ] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Config(format!("tolerance {name} must lie in (0, 1), got {v}")));
            }
        }
        if !(self.fidelity_level > 0.0 && self.fidelity_level < 1.0) {
            return Err(Error::Config(format!("fidelity_level must lie in (0, 1), got {}", self.fidelity_level)));
        }
        Ok(())
    }
}

/// Wire plus hot bath plus underdamped cold bath, the setting of the
/// residual-friction sweeps.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RcPhysics {
    pub omega_h: f64,
    pub omega_c: f64,
    pub k: f64,
    pub t_h: f64,
    pub t_c: f64,
    /// Strength and cutoff of the algebraic Ohmic hot bath.
    pub gamma_h: f64,
    pub cutoff_h: f64,
    /// Coupling `λ` and resonance `ω₀` of the underdamped cold bath.
    pub lambda: f64,
    pub omega0: f64,
    /// Friction `γ` of the cold bath; overwritten by sweeps over `γ`.
    pub gamma: f64,
    /// Cutoff of the residual bath in the exact augmented solver.
    pub residual_cutoff: f64,
    /// Factor applied to `residual_cutoff` for the sensitivity check.
    pub cutoff_check_factor: f64,
}

impl Default for RcPhysics {
    fn default() -> Self {
        Self {
            omega_h: 1.0,
            omega_c: 3.0,
            k: 0.8,
            t_h: 3.3,
            t_c: 1.2,
            gamma_h: 1e-3,
            cutoff_h: 1e3,
            lambda: 0.9,
            omega0: 4.0,
            gamma: 1e-3,
            residual_cutoff: 1e3,
            cutoff_check_factor: 10.0,
        }
    }
}

impl RcPhysics {
    pub fn wire(&self) -> WireParams {
        WireParams::new(self.omega_h, self.omega_c, self.k)
    }

    pub fn hot_spectrum(&self) -> Result<SpectralDensity> {
        SpectralDensity::ohmic_algebraic(self.gamma_h, self.cutoff_h)
    }

    pub fn cold_spectrum(&self) -> Result<SpectralDensity> {
        SpectralDensity::underdamped(self.gamma, self.lambda, self.omega0)
    }

    pub fn with_gamma(&self, gamma: f64) -> Self {
        Self { gamma, ..*self }
    }

    /// Copy with `variable` set to `value`.
    pub fn with(&self, variable: SweepVariable, value: f64) -> Self {
        let mut p = *self;
        match variable {
            SweepVariable::Gamma => p.gamma = value,
            SweepVariable::K => p.k = value,
            SweepVariable::THot => p.t_h = value,
            SweepVariable::TCold => p.t_c = value,
            SweepVariable::Lambda => p.lambda = value,
            SweepVariable::Omega0 => p.omega0 = value,
            SweepVariable::OmegaH => p.omega_h = value,
            SweepVariable::OmegaC => p.omega_c = value,
            SweepVariable::GammaH => p.gamma_h = value,
        }
        p
    }

    pub fn validate(&self) -> Result<()> {
        let cfg = |e: Error| Error::Config(e.to_string());
        let hot = self.hot_spectrum().map_err(cfg)?;
        let cold = self.cold_spectrum().map_err(cfg)?;
        let residual = SpectralDensity::ohmic_linear(self.gamma).map_err(cfg)?;
        for (name, v) in [
            ("t_h", self.t_h),
            ("t_c", self.t_c),
            ("residual_cutoff", self.residual_cutoff),
            ("cutoff_check_factor", self.cutoff_check_factor),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::Config(format!("{name} must be positive and finite, got {v}")));
            }
        }
        build_augmented(self.wire(), cold, hot, residual, self.t_h, self.t_c).map_err(cfg)?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig2Config {
    pub physics: RcPhysics,
    /// Residual friction `γ`.
    pub gamma_grid: Grid,
    /// Single `γ` values evaluated on top of the grid.
    pub probe_gammas: Vec<f64>,
    pub tolerances: Tolerances,
    pub output_dir: String,
}

impl Default for Fig2Config {
    fn default() -> Self {
        let gamma_h = RcPhysics::default().gamma_h;
        Self {
            physics: RcPhysics::default(),
            gamma_grid: Grid::log(gamma_h, gamma_h * 11f64.exp(), 45),
            probe_gammas: vec![1e-3, 1.0, 60.0],
            tolerances: Tolerances::default(),
            output_dir: "out/fig2".into(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SweepVariable {
    Gamma,
    K,
    THot,
    TCold,
    Lambda,
    Omega0,
    OmegaH,
    OmegaC,
    GammaH,
}

impl SweepVariable {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Gamma => "gamma",
            Self::K => "k",
            Self::THot => "t-hot",
            Self::TCold => "t-cold",
            Self::Lambda => "lambda",
            Self::Omega0 => "omega0",
            Self::OmegaH => "omega-h",
            Self::OmegaC => "omega-c",
            Self::GammaH => "gamma-h",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CustomSweepConfig {
    pub physics: RcPhysics,
    pub variable: SweepVariable,
    pub grid: Grid,
    pub tolerances: Tolerances,
    pub output_dir: String,
}

impl Default for CustomSweepConfig {
    fn default() -> Self {
        Self {
            physics: RcPhysics::default(),
            variable: SweepVariable::K,
            grid: Grid::lin(0.1, 1.5, 15),
            tolerances: Tolerances::default(),
            output_dir: "out/sweep".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig3Config {
    /// Strength `α₁` and cutoff `α₂` of the overdamped limit.
    pub alpha1: f64,
    pub alpha2: f64,
    /// Friction of the scaled underdamped spectrum.
    pub gamma: f64,
    pub temperature: f64,
    /// Rate defining the time unit `γ_h t`.
    pub gamma_h: f64,
    pub omega_grid: Grid,
    /// Positive times in units of `γ_h t`; `t = 0` is always prepended.
    pub time_grid: Grid,
    pub tolerances: Tolerances,
    pub output_dir: String,
}

impl Default for Fig3Config {
    fn default() -> Self {
        Self {
            alpha1: 1e-3,
            alpha2: 1e3,
            gamma: 1e3,
            temperature: 0.5,
            gamma_h: 1e-3,
            omega_grid: Grid::log(1e-2, 1e5, 141),
            time_grid: Grid::log(1e-7, 1e-1, 121),
            tolerances: Tolerances::default(),
            output_dir: "out/fig3".into(),
        }
    }
}

impl Fig3Config {
    pub fn scaled(&self) -> Result<SpectralDensity> {
        scaled_underdamped(self.alpha1, self.alpha2, self.gamma)
    }

    pub fn limit(&self) -> Result<SpectralDensity> {
        overdamped_limit(self.alpha1, self.alpha2)
    }
}

/// Initial state of the three-node propagation; the wire starts from its
/// two-node reduction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum InitialState {
    /// Uncorrelated thermal nodes; the wire nodes oscillate at `√V_ii`
    /// without the counter-term and the RC at `ω₀`.
    ProductThermal { t_hot_node: f64, t_cold_node: f64, t_rc: f64 },
    /// Full 6×6 covariance in `(X_h, P_h, X_c, P_c, X_RC, P_RC)` order.
    Explicit { covariance: Vec<Vec<f64>> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Fig4Config {
    pub omega_h: f64,
    pub omega_c: f64,
    pub k: f64,
    pub t_h: f64,
    pub t_c: f64,
    pub gamma_h: f64,
    pub cutoff_h: f64,
    pub alpha1: f64,
    pub alpha2: f64,
    pub gamma: f64,
    /// Residual-bath cutoff of the exact augmented solver.
    pub residual_cutoff: f64,
    pub cutoff_check_factor: f64,
    /// Linear part of the time grid in units of `γ_h t`.
    pub early_grid: Grid,
    /// Log part of the time grid in units of `γ_h t`, after `early_grid`.
    pub late_grid: Grid,
    /// Window in `γ_h t` over which the deviations of the augmented runs
    /// from the wire are compared.
    pub intermediate_window: [f64; 2],
    pub initial_state: InitialState,
    pub tolerances: Tolerances,
    pub output_dir: String,
}

impl Default for Fig4Config {
    fn default() -> Self {
        Self {
            omega_h: 0.1,
            omega_c: 0.5,
            k: 0.4,
            t_h: 0.6,
            t_c: 0.5,
            gamma_h: 1e-3,
            cutoff_h: 1e3,
            alpha1: 1e-3,
            alpha2: 1e3,
            gamma: 1e3,
            residual_cutoff: 1e6,
            cutoff_check_factor: 10.0,
            early_grid: Grid::lin(0.0, 1e-3, 41),
            late_grid: Grid::log(1.25e-3, 50.0, 120),
            intermediate_window: [1e-3, 1.0],
            initial_state: InitialState::ProductThermal {
                t_hot_node: 0.6,
                t_cold_node: 0.5,
                t_rc: 0.5,
            },
            tolerances: Tolerances::default(),
            output_dir: "out/fig4".into(),
        }
    }
}

impl Fig4Config {
    pub fn wire(&self) -> WireParams {
        WireParams::new(self.omega_h, self.omega_c, self.k)
    }

    pub fn hot_spectrum(&self) -> Result<SpectralDensity> {
        SpectralDensity::ohmic_algebraic(self.gamma_h, self.cutoff_h)
    }

    pub fn cold_spectrum(&self) -> Result<SpectralDensity> {
        scaled_underdamped(self.alpha1, self.alpha2, self.gamma)
    }

    /// Physical times of the shared grid.
    pub fn times(&self) -> Vec<f64> {
        let mut s = self.early_grid.values();
        s.extend(self.late_grid.values());
        s.into_iter().map(|x| x / self.gamma_h).collect()
    }
}

fn positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
    }
}

impl ExperimentConfig {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Fig2(_) => "fig2",
            Self::Fig3(_) => "fig3",
            Self::Fig4(_) => "fig4",
            Self::CustomSweep(_) => "custom-sweep",
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("cannot parse config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Pretty JSON with every default expanded.
    pub fn resolved_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("configs serialise")
    }

    pub fn output_dir(&self) -> &str {
        match self {
            Self::Fig2(c) => &c.output_dir,
            Self::Fig3(c) => &c.output_dir,
            Self::Fig4(c) => &c.output_dir,
            Self::CustomSweep(c) => &c.output_dir,
        }
    }

    pub fn set_output_dir(&mut self, dir: String) {
        match self {
            Self::Fig2(c) => c.output_dir = dir,
            Self::Fig3(c) => c.output_dir = dir,
            Self::Fig4(c) => c.output_dir = dir,
            Self::CustomSweep(c) => c.output_dir = dir,
        }
    }

    fn tolerances_mut(&mut self) -> &mut Tolerances {
        match self {
            Self::Fig2(c) => &mut c.tolerances,
            Self::Fig3(c) => &mut c.tolerances,
            Self::Fig4(c) => &mut c.tolerances,
            Self::CustomSweep(c) => &mut c.tolerances,
        }
    }

    /// Overrides both integration tolerances.
    pub fn set_tolerance(&mut self, rel: f64) {
        let t = self.tolerances_mut();
        t.quadrature_rel = rel;
        t.correlation_rel = rel;
    }

    /// Overrides the point count of the main grid: `γ` for fig2, time for
    /// fig3, the late time grid for fig4, the swept variable otherwise.
    pub fn set_points(&mut self, points: usize) {
        match self {
            Self::Fig2(c) => c.gamma_grid.points = points,
            Self::Fig3(c) => c.time_grid.points = points,
            Self::Fig4(c) => c.late_grid.points = points,
            Self::CustomSweep(c) => c.grid.points = points,
        }
    }

    /// Checks grids, tolerances and that every model at the grid endpoints
    /// can be built.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Fig2(c) => {
                c.tolerances.validate()?;
                c.gamma_grid.validate("gamma_grid")?;
                c.physics.validate()?;
                for &g in c.probe_gammas.iter().chain([c.gamma_grid.min, c.gamma_grid.max].iter()) {
                    c.physics.with_gamma(g).validate()?;
                }
                Ok(())
            }
            Self::CustomSweep(c) => {
                c.tolerances.validate()?;
                c.grid.validate("grid")?;
                for v in c.grid.values() {
                    c.physics.with(c.variable, v).validate()?;
                }
                Ok(())
            }
            Self::Fig3(c) => {
                c.tolerances.validate()?;
                c.omega_grid.validate("omega_grid")?;
                c.time_grid.validate("time_grid")?;
                if c.time_grid.min <= 0.0 {
                    return Err(Error::Config("time_grid must be strictly positive".into()));
                }
                positive("temperature", c.temperature)?;
                positive("gamma_h", c.gamma_h)?;
                c.scaled().map_err(|e| Error::Config(e.to_string()))?;
                c.limit().map_err(|e| Error::Config(e.to_string()))?;
                Ok(())
            }
            Self::Fig4(c) => {
                c.tolerances.validate()?;
                c.early_grid.validate("early_grid")?;
                c.late_grid.validate("late_grid")?;
                if c.early_grid.min < 0.0 || c.late_grid.min <= c.early_grid.max {
                    return Err(Error::Config(
                        "time grids must start at t >= 0 and late_grid must begin after early_grid".into(),
                    ));
                }
                let [a, b] = c.intermediate_window;
                if !(a >= 0.0 && b > a) {
                    return Err(Error::Config(format!("intermediate_window [{a}, {b}] is empty")));
                }
                for (name, v) in [
                    ("t_h", c.t_h),
                    ("t_c", c.t_c),
                    ("gamma_h", c.gamma_h),
                    ("residual_cutoff", c.residual_cutoff),
                    ("cutoff_check_factor", c.cutoff_check_factor),
                ] {
                    positive(name, v)?;
                }
                let cfg = |e: Error| Error::Config(e.to_string());
                let hot = c.hot_spectrum().map_err(cfg)?;
                let cold = c.cold_spectrum().map_err(cfg)?;
                overdamped_limit(c.alpha1, c.alpha2).map_err(cfg)?;
                build_wire(c.omega_h, c.omega_c, c.k, true, 0.0).map_err(cfg)?;
                let residual = SpectralDensity::ohmic_linear(c.gamma).map_err(cfg)?;
                build_augmented(c.wire(), cold, hot, residual, c.t_h, c.t_c).map_err(cfg)?;
                match &c.initial_state {
                    InitialState::ProductThermal { t_hot_node, t_cold_node, t_rc } => {
                        positive("t_hot_node", *t_hot_node)?;
                        positive("t_cold_node", *t_cold_node)?;
                        positive("t_rc", *t_rc)?;
                    }
                    InitialState::Explicit { covariance } => {
                        if covariance.len() != 6 || covariance.iter().any(|r| r.len() != 6) {
                            return Err(Error::Config("explicit initial covariance must be 6x6".into()));
                        }
                    }
                }
                Ok(())
            }
        }
    }
}
