//! Globally adaptive Gauss–Kronrod (10/21) quadrature for vector-valued
//! integrands on unions of finite panels and a mapped semi-infinite tail.
//!
//! All components share one panel structure, so every bisection refines the
//! whole vector at once. A semi-infinite segment `[a, ∞)` is mapped onto
//! `(0, 1]` through `ω = a / s`; integrands decaying at least like `ω⁻²`
//! become bounded there, and the Kronrod rule never samples `s = 0`.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{Error, Result};

const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_717_087_765_391,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

// 10-point Gauss weights, attached to XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

/// Outcome of a scalar integration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadratureResult {
    pub value: f64,
    pub error_estimate: f64,
    pub panels_used: usize,
}

/// Outcome of a vector integration; one value/error pair per component.
#[derive(Debug, Clone, PartialEq)]
pub struct VectorQuadrature {
    pub values: Vec<f64>,
    pub errors: Vec<f64>,
    /// `∫|f_i|`, useful as a cancellation-aware scale.
    pub l1: Vec<f64>,
    pub panels_used: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Segment {
    Finite(f64, f64),
    /// `[from, ∞)`, `from > 0`.
    Tail(f64),
}

/// Error target for every component `i`:
/// `err_i ≤ max(rel·|I_i|, abs, floor·max_j |I_j|)`, or `rel·∫|f_i|` when
/// `l1_relative` is set (oscillatory integrands with heavy cancellation).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rel: f64,
    pub abs: f64,
    pub floor: f64,
    pub l1_relative: bool,
    pub max_subdivisions: usize,
}

impl Tolerance {
    pub fn relative(rel: f64) -> Self {
        Self {
            rel,
            abs: 0.0,
            floor: 1e-6,
            l1_relative: false,
            max_subdivisions: 50_000,
        }
    }

    pub fn l1(rel: f64) -> Self {
        Self {
            l1_relative: true,
            ..Self::relative(rel)
        }
    }
}

/// Sorts and deduplicates breakpoints into consecutive finite segments,
/// optionally followed by a tail starting at the last point.
pub fn segments_from_breakpoints(points: &[f64], with_tail: bool) -> Vec<Segment> {
    let mut pts: Vec<f64> = points.iter().copied().filter(|p| p.is_finite()).collect();
    pts.sort_by(|a, b| a.partial_cmp(b).unwrap_or(Ordering::Equal));
    pts.dedup_by(|a, b| (*a - *b).abs() <= 1e-15 * a.abs().max(b.abs()));
    let mut segs: Vec<Segment> = pts.windows(2).map(|w| Segment::Finite(w[0], w[1])).collect();
    if with_tail {
        if let Some(&last) = pts.last() {
            segs.push(Segment::Tail(last));
        }
    }
    segs
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    tail_from: Option<f64>,
}

impl Panel {
    fn refinable(&self) -> bool {
        let width = self.b - self.a;
        let centre = 0.5 * (self.a + self.b);
        width > 64.0 * f64::EPSILON * centre.abs().max(f64::MIN_POSITIVE)
    }
}

struct Workspace {
    dim: usize,
    values: Vec<f64>,
    errors: Vec<f64>,
    l1: Vec<f64>,
    fv: Vec<f64>,
    fc: Vec<f64>,
    fvals: Vec<f64>,
}

impl Workspace {
    fn new(dim: usize) -> Self {
        Self {
            dim,
            values: Vec::new(),
            errors: Vec::new(),
            l1: Vec::new(),
            fv: vec![0.0; dim],
            fc: vec![0.0; dim],
            fvals: vec![0.0; 21 * dim],
        }
    }
}

fn eval_at<F: Fn(f64, &mut [f64])>(f: &F, panel: &Panel, x: f64, out: &mut [f64]) {
    match panel.tail_from {
        None => f(x, out),
        Some(from) => {
            let w = from / x;
            f(w, out);
            let jac = from / (x * x);
            for v in out.iter_mut() {
                *v *= jac;
            }
        }
    }
}

/// Applies the 21-point Kronrod rule to `panel`, writing value, error and
/// `∫|f|` into the three output slices.
fn gk21<F: Fn(f64, &mut [f64])>(
    f: &F,
    panel: &Panel,
    ws: &mut Workspace,
    value: &mut [f64],
    error: &mut [f64],
    absval: &mut [f64],
) {
    let dim = ws.dim;
    let centre = 0.5 * (panel.a + panel.b);
    let half = 0.5 * (panel.b - panel.a);

    eval_at(f, panel, centre, &mut ws.fc);
    ws.fvals[..dim].copy_from_slice(&ws.fc);
    for j in 0..10 {
        let dx = half * XGK[j];
        eval_at(f, panel, centre - dx, &mut ws.fv);
        ws.fvals[(1 + 2 * j) * dim..(2 + 2 * j) * dim].copy_from_slice(&ws.fv);
        eval_at(f, panel, centre + dx, &mut ws.fv);
        ws.fvals[(2 + 2 * j) * dim..(3 + 2 * j) * dim].copy_from_slice(&ws.fv);
    }

    for i in 0..dim {
        let fc = ws.fvals[i];
        let mut res_k = fc * WGK[10];
        let mut res_g = 0.0;
        let mut res_abs = fc.abs() * WGK[10];
        for j in 0..10 {
            let f1 = ws.fvals[(1 + 2 * j) * dim + i];
            let f2 = ws.fvals[(2 + 2 * j) * dim + i];
            res_k += WGK[j] * (f1 + f2);
            res_abs += WGK[j] * (f1.abs() + f2.abs());
            if j % 2 == 1 {
                res_g += WG[j / 2] * (f1 + f2);
            }
        }
        let mean = 0.5 * res_k;
        let mut res_asc = WGK[10] * (fc - mean).abs();
        for j in 0..10 {
            let f1 = ws.fvals[(1 + 2 * j) * dim + i];
            let f2 = ws.fvals[(2 + 2 * j) * dim + i];
            res_asc += WGK[j] * ((f1 - mean).abs() + (f2 - mean).abs());
        }
        let hl = half.abs();
        let result = res_k * half;
        res_abs *= hl;
        res_asc *= hl;
        let mut err = ((res_k - res_g) * half).abs();
        if res_asc != 0.0 && err != 0.0 {
            err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
        }
        if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
            err = err.max(50.0 * f64::EPSILON * res_abs);
        }
        value[i] = result;
        error[i] = err;
        absval[i] = res_abs;
    }
}

#[derive(PartialEq)]
struct Scored(f64, usize);

impl Eq for Scored {}

impl PartialOrd for Scored {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Scored {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .partial_cmp(&other.0)
            .unwrap_or(Ordering::Equal)
            .then_with(|| other.1.cmp(&self.1))
    }
}

struct Totals {
    values: Vec<f64>,
    errors: Vec<f64>,
    l1: Vec<f64>,
}

fn totals(ws: &Workspace, n: usize) -> Totals {
    let dim = ws.dim;
    let mut t = Totals {
        values: vec![0.0; dim],
        errors: vec![0.0; dim],
        l1: vec![0.0; dim],
    };
    for p in 0..n {
        for i in 0..dim {
            t.values[i] += ws.values[p * dim + i];
            t.errors[i] += ws.errors[p * dim + i];
            t.l1[i] += ws.l1[p * dim + i];
        }
    }
    t
}

fn thresholds(t: &Totals, tol: &Tolerance) -> Vec<f64> {
    let largest = t.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    t.values
        .iter()
        .zip(&t.l1)
        .map(|(v, l1)| {
            let base = if tol.l1_relative { tol.rel * l1 } else { tol.rel * v.abs() };
            base.max(tol.abs).max(tol.floor * tol.rel * largest)
        })
        .collect()
}

fn score(ws: &Workspace, p: usize, thr: &[f64]) -> f64 {
    let dim = ws.dim;
    (0..dim).fold(0.0_f64, |m, i| {
        let e = ws.errors[p * dim + i];
        let s = if thr[i] > 0.0 {
            e / thr[i]
        } else if e > 0.0 {
            f64::INFINITY
        } else {
            0.0
        };
        m.max(s)
    })
}

/// Integrates the `dim`-component function `f` over the union of `segments`.
///
/// `f(x, out)` must fill `out` (length `dim`). Returns an error carrying the
/// achieved error estimate when the tolerance cannot be met within
/// `tol.max_subdivisions` bisections.
pub fn integrate_vec<F>(f: F, dim: usize, segments: &[Segment], tol: &Tolerance) -> Result<VectorQuadrature>
where
    F: Fn(f64, &mut [f64]),
{
    if dim == 0 {
        return Err(Error::ContractViolation("integrand dimension must be positive".into()));
    }
    if !(tol.rel > 0.0) {
        return Err(Error::ContractViolation("relative tolerance must be positive".into()));
    }
    let mut panels: Vec<Panel> = Vec::with_capacity(segments.len() * 2);
    for seg in segments {
        match *seg {
            Segment::Finite(a, b) => {
                if !(a.is_finite() && b.is_finite()) {
                    return Err(Error::ContractViolation(format!("non-finite segment [{a}, {b}]")));
                }
                if b > a {
                    panels.push(Panel { a, b, tail_from: None });
                }
            }
            Segment::Tail(from) => {
                if !(from > 0.0 && from.is_finite()) {
                    return Err(Error::ContractViolation(format!("tail must start at a positive finite point, got {from}")));
                }
                panels.push(Panel {
                    a: 0.0,
                    b: 1.0,
                    tail_from: Some(from),
                });
            }
        }
    }

    let mut ws = Workspace::new(dim);
    ws.values = vec![0.0; panels.len() * dim];
    ws.errors = vec![0.0; panels.len() * dim];
    ws.l1 = vec![0.0; panels.len() * dim];
    let mut v = vec![0.0; dim];
    let mut e = vec![0.0; dim];
    let mut l = vec![0.0; dim];
    for (p, panel) in panels.iter().enumerate() {
        gk21(&f, panel, &mut ws, &mut v, &mut e, &mut l);
        ws.values[p * dim..(p + 1) * dim].copy_from_slice(&v);
        ws.errors[p * dim..(p + 1) * dim].copy_from_slice(&e);
        ws.l1[p * dim..(p + 1) * dim].copy_from_slice(&l);
    }

    let mut tot = totals(&ws, panels.len());
    let mut thr = thresholds(&tot, tol);
    let mut heap: BinaryHeap<Scored> = BinaryHeap::new();
    let rebuild = |ws: &Workspace, panels: &[Panel], thr: &[f64], heap: &mut BinaryHeap<Scored>| {
        heap.clear();
        for (p, panel) in panels.iter().enumerate() {
            if panel.refinable() {
                heap.push(Scored(score(ws, p, thr), p));
            }
        }
    };
    rebuild(&ws, &panels, &thr, &mut heap);

    let converged = |tot: &Totals, thr: &[f64]| tot.errors.iter().zip(thr).all(|(e, t)| e <= t);

    let mut subdivisions = 0usize;
    loop {
        if converged(&tot, &thr) {
            // thresholds follow the refined totals; confirm against fresh ones
            tot = totals(&ws, panels.len());
            let fresh = thresholds(&tot, tol);
            let done = converged(&tot, &fresh);
            thr = fresh;
            if done {
                break;
            }
            rebuild(&ws, &panels, &thr, &mut heap);
        }
        if subdivisions >= tol.max_subdivisions {
            break;
        }
        let Some(Scored(s, p)) = heap.pop() else { break };
        if s <= 0.0 {
            break;
        }
        let panel = panels[p];
        let mid = 0.5 * (panel.a + panel.b);
        let left = Panel { b: mid, ..panel };
        let right = Panel { a: mid, ..panel };

        for i in 0..dim {
            tot.values[i] -= ws.values[p * dim + i];
            tot.errors[i] -= ws.errors[p * dim + i];
            tot.l1[i] -= ws.l1[p * dim + i];
        }
        gk21(&f, &left, &mut ws, &mut v, &mut e, &mut l);
        ws.values[p * dim..(p + 1) * dim].copy_from_slice(&v);
        ws.errors[p * dim..(p + 1) * dim].copy_from_slice(&e);
        ws.l1[p * dim..(p + 1) * dim].copy_from_slice(&l);
        panels[p] = left;
        gk21(&f, &right, &mut ws, &mut v, &mut e, &mut l);
        ws.values.extend_from_slice(&v);
        ws.errors.extend_from_slice(&e);
        ws.l1.extend_from_slice(&l);
        panels.push(right);
        let q = panels.len() - 1;
        for i in 0..dim {
            tot.values[i] += ws.values[p * dim + i] + ws.values[q * dim + i];
            tot.errors[i] += ws.errors[p * dim + i] + ws.errors[q * dim + i];
            tot.l1[i] += ws.l1[p * dim + i] + ws.l1[q * dim + i];
        }
        subdivisions += 1;

        if subdivisions % 512 == 0 {
            // running sums drift; resum and re-prioritise
            tot = totals(&ws, panels.len());
            thr = thresholds(&tot, tol);
            rebuild(&ws, &panels, &thr, &mut heap);
        } else {
            for idx in [p, q] {
                if panels[idx].refinable() {
                    heap.push(Scored(score(&ws, idx, &thr), idx));
                }
            }
        }
    }

    tot = totals(&ws, panels.len());
    thr = thresholds(&tot, tol);
    if !converged(&tot, &thr) {
        let (worst, _) = tot
            .errors
            .iter()
            .zip(&thr)
            .enumerate()
            .max_by(|a, b| {
                let ra = a.1 .0 / a.1 .1.max(f64::MIN_POSITIVE);
                let rb = b.1 .0 / b.1 .1.max(f64::MIN_POSITIVE);
                ra.partial_cmp(&rb).unwrap_or(Ordering::Equal)
            })
            .expect("dim > 0");
        return Err(Error::Quadrature {
            achieved: tot.errors[worst],
            requested: thr[worst],
            panels: panels.len(),
        });
    }
    Ok(VectorQuadrature {
        values: tot.values,
        errors: tot.errors,
        l1: tot.l1,
        panels_used: panels.len(),
    })
}

/// Scalar convenience wrapper around [`integrate_vec`].
pub fn integrate<F>(f: F, segments: &[Segment], tol: &Tolerance) -> Result<QuadratureResult>
where
    F: Fn(f64) -> f64,
{
    let r = integrate_vec(|x, out: &mut [f64]| out[0] = f(x), 1, segments, tol)?;
    Ok(QuadratureResult {
        value: r.values[0],
        error_estimate: r.errors[0],
        panels_used: r.panels_used,
    })
}
