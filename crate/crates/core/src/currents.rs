use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    /// Global master equation, dissipator-based currents.
    Gkls,
    /// Quantum Langevin steady state.
    Exact,
}

/// Stationary heat current flowing from the bath at `node` into the network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BathCurrent {
    pub node: usize,
    pub value: f64,
    /// Independent second evaluation, when the method has one.
    pub alternative: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HeatCurrentReport {
    pub method: Method,
    pub currents: Vec<BathCurrent>,
    /// Reference magnitude for the residual, for states where every current
    /// vanishes; 0 when the method has none.
    pub scale: f64,
    /// `|Σ_i Q̇_i| / max(max_i |Q̇_i|, scale)`, or 0 when both vanish.
    pub conservation_residual: f64,
}

impl HeatCurrentReport {
    pub fn new(method: Method, currents: Vec<BathCurrent>) -> Self {
        Self::with_scale(method, currents, 0.0)
    }

    pub fn with_scale(method: Method, currents: Vec<BathCurrent>, scale: f64) -> Self {
        let mut r = Self {
            method,
            currents,
            scale,
            conservation_residual: 0.0,
        };
        r.conservation_residual = r.residual_against(scale);
        r
    }

    /// `|Σ_i Q̇_i| / max(max_i |Q̇_i|, scale)`.
    pub fn residual_against(&self, scale: f64) -> f64 {
        let total: f64 = self.currents.iter().map(|c| c.value).sum();
        let largest = self.currents.iter().fold(scale, |m, c| m.max(c.value.abs()));
        if largest > 0.0 {
            total.abs() / largest
        } else {
            0.0
        }
    }

    pub fn at(&self, node: usize) -> Option<f64> {
        self.currents.iter().find(|c| c.node == node).map(|c| c.value)
    }
}
