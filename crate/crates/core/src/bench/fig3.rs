//! Scaled underdamped spectrum against its overdamped limit, and the
//! saturation of the integrated bath correlation function.

use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::config::{ExperimentConfig, Fig3Config};
use super::output::{write_summary, Table};
use crate::error::Result;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Saturation {
    /// In units of `γ_h t`; `None` if the criterion never holds through the
    /// end of the grid.
    pub real: Option<f64>,
    pub imag: Option<f64>,
    pub modulus: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Fig3Summary {
    pub experiment: &'static str,
    pub saturation_rel: f64,
    pub saturation: Saturation,
    /// Stationary values at the last grid time.
    pub final_value_re: f64,
    pub final_value_im: f64,
    /// `−δ/2` of the scaled spectrum, the limit of the imaginary part.
    pub imag_limit: f64,
    /// Largest `|J_scaled/J_limit − 1|` over grid frequencies `ω ≤ 10`.
    pub max_spectrum_deviation_below_10: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Fig3Output {
    pub spectrum: Table,
    pub correlation: Table,
    pub summary: Fig3Summary,
}

/// First grid time from which `|g(t) − f(t)|/|f(t)| < rel` holds at every
/// later grid time, with `g` the values at `2t`.
pub fn saturation_time(times: &[f64], f: &[f64], g: &[f64], rel: f64) -> Option<f64> {
    let mut first = None;
    for i in (0..times.len()).rev() {
        let ok = f[i] != 0.0 && ((g[i] - f[i]) / f[i]).abs() < rel;
        if !ok {
            break;
        }
        first = Some(times[i]);
    }
    first
}

pub fn run_fig3(config: &Fig3Config) -> Result<Fig3Output> {
    ExperimentConfig::Fig3(config.clone()).validate()?;
    let scaled = config.scaled()?;
    let limit = config.limit()?;

    let mut spectrum = Table::new("fig3_spectrum", vec!["omega", "j_scaled", "j_limit", "relative_deviation"]);
    let mut max_dev: f64 = 0.0;
    for w in config.omega_grid.values() {
        let (a, b) = (scaled.evaluate(w)?, limit.evaluate(w)?);
        let dev = (a / b - 1.0).abs();
        if w <= 10.0 {
            max_dev = max_dev.max(dev);
        }
        spectrum.push(vec![w.into(), a.into(), b.into(), dev.into()]);
    }

    let scaled_times = config.time_grid.values();
    let rel = config.tolerances.correlation_rel;
    let temp = config.temperature;
    let values: Vec<(Complex64, Complex64)> = scaled_times
        .par_iter()
        .map(|&s| {
            let t = s / config.gamma_h;
            Ok((scaled.integrated_correlation(temp, t, rel)?, scaled.integrated_correlation(temp, 2.0 * t, rel)?))
        })
        .collect::<Result<_>>()?;

    let mut correlation = Table::new(
        "fig3_correlation",
        vec!["gamma_h_t", "t", "re", "im", "modulus", "re_at_2t", "im_at_2t", "modulus_at_2t"],
    );
    let zero = 0.0_f64;
    correlation.push(vec![zero.into(), zero.into(), zero.into(), zero.into(), zero.into(), zero.into(), zero.into(), zero.into()]);
    for (&s, (f, g)) in scaled_times.iter().zip(&values) {
        correlation.push(vec![
            s.into(),
            (s / config.gamma_h).into(),
            f.re.into(),
            f.im.into(),
            f.norm().into(),
            g.re.into(),
            g.im.into(),
            g.norm().into(),
        ]);
    }

    let sr = config.tolerances.saturation_rel;
    let part = |h: fn(&Complex64) -> f64| {
        let f: Vec<f64> = values.iter().map(|(f, _)| h(f)).collect();
        let g: Vec<f64> = values.iter().map(|(_, g)| h(g)).collect();
        saturation_time(&scaled_times, &f, &g, sr)
    };
    let last = values.last().map(|(f, _)| *f).unwrap_or_default();
    let summary = Fig3Summary {
        experiment: "fig3",
        saturation_rel: sr,
        saturation: Saturation {
            real: part(|z| z.re),
            imag: part(|z| z.im),
            modulus: part(|z| z.norm()),
        },
        final_value_re: last.re,
        final_value_im: last.im,
        imag_limit: -0.5 * scaled.renormalisation_shift()?,
        max_spectrum_deviation_below_10: max_dev,
    };
    Ok(Fig3Output {
        spectrum,
        correlation,
        summary,
    })
}

impl Fig3Output {
    pub fn write(&self, config: &Fig3Config, dir: &Path) -> Result<()> {
        let header = ExperimentConfig::Fig3(config.clone()).resolved_json();
        self.spectrum.write(dir, &header)?;
        self.correlation.write(dir, &header)?;
        write_summary(dir, "fig3_summary", &self.summary)
    }
}
