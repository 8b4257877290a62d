//! Library results against independent computations: Fock-space density
//! matrices, a Runge-Kutta integrator, brute-force frequency sums and direct
//! evaluation of the rate formulas.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rcmap::bench::config::RcPhysics;
use rcmap::bench::Fig4Config;
use rcmap::gaussian::{product_thermal, reduce, thermal_covariance, uhlmann_fidelity, CovarianceMatrix};
use rcmap::gkls::{decay_rates, propagate, steady_state, validity_diagnostics};
use rcmap::network::{build_augmented, build_augmented_with_shift, build_wire, normal_modes, COLD, HOT, RC};
use rcmap::qle::{exact_solution, heat_currents_from, stability_scan, Channel, LangevinModel};
use rcmap::spectral::{overdamped_limit, scaled_underdamped, SpectralDensity};

// ---------------------------------------------------------------------------
// Fock-space fidelity

const FOCK_BUILD: usize = 110;
const FOCK_KEEP: usize = 60;

fn c(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

fn annihilation(n: usize) -> DMatrix<Complex64> {
    DMatrix::from_fn(n, n, |i, j| if j == i + 1 { c((j as f64).sqrt()) } else { c(0.0) })
}

/// `R(θ) S(r) ρ_th(n̄) S(r)† R(θ)†` in a truncated Fock basis.
fn squeezed_thermal(nbar: f64, r: f64, theta: f64) -> DMatrix<Complex64> {
    let n = FOCK_BUILD;
    let q = nbar / (nbar + 1.0);
    let rho = DMatrix::from_fn(n, n, |i, j| if i == j { c((1.0 - q) * q.powi(i as i32)) } else { c(0.0) });
    let a = annihilation(n);
    let ad = a.adjoint();
    let gen = (&a * &a - &ad * &ad) * c(0.5 * r);
    let s = gen.exp();
    let rot = DMatrix::from_fn(n, n, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, -theta * i as f64)
        } else {
            c(0.0)
        }
    });
    let u = rot * s;
    &u * rho * u.adjoint()
}

/// Symmetrised quadrature moments of `ρ`, computed on the full build basis.
fn fock_covariance(rho: &DMatrix<Complex64>) -> CovarianceMatrix {
    let a = annihilation(rho.nrows());
    let ad = a.adjoint();
    let s = 1.0 / 2f64.sqrt();
    let x = (&a + &ad) * c(s);
    let p = (&a - &ad) * Complex64::new(0.0, -s);
    let tr = |o: DMatrix<Complex64>| (rho * o).trace().re;
    let xx = tr(&x * &x);
    let pp = tr(&p * &p);
    let xp = 0.5 * tr(&x * &p + &p * &x);
    CovarianceMatrix::new(DMatrix::from_row_slice(2, 2, &[xx, xp, xp, pp])).unwrap()
}

fn truncate(rho: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let t = rho.view((0, 0), (FOCK_KEEP, FOCK_KEEP)).into_owned();
    let norm = t.trace();
    t / norm
}

fn psd_sqrt(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    let h = (m + m.adjoint()) * c(0.5);
    let e = h.symmetric_eigen();
    let d = DMatrix::from_fn(e.eigenvalues.len(), e.eigenvalues.len(), |i, j| {
        if i == j {
            c(e.eigenvalues[i].max(0.0).sqrt())
        } else {
            c(0.0)
        }
    });
    &e.eigenvectors * d * e.eigenvectors.adjoint()
}

/// `(tr √(√ρ σ √ρ))²`.
fn fock_fidelity(rho: &DMatrix<Complex64>, sigma: &DMatrix<Complex64>) -> f64 {
    let s = psd_sqrt(rho);
    let m = &s * sigma * &s;
    let h = (&m + m.adjoint()) * c(0.5);
    let root: f64 = h.symmetric_eigen().eigenvalues.iter().map(|&l| l.max(0.0).sqrt()).sum();
    root * root
}

fn compare_fock(a: (f64, f64, f64), b: (f64, f64, f64)) -> (f64, f64) {
    let ra = squeezed_thermal(a.0, a.1, a.2);
    let rb = squeezed_thermal(b.0, b.1, b.2);
    let oracle = fock_fidelity(&truncate(&ra), &truncate(&rb));
    let lib = uhlmann_fidelity(&fock_covariance(&ra), &fock_covariance(&rb)).unwrap();
    (lib, oracle)
}

#[test]
fn fidelity_thermal_pairs_match_fock_sum() {
    for &(n1, n2) in &[(0.3, 1.7), (0.0, 0.5), (1.0, 1.0), (2.5, 0.1)] {
        let (lib, oracle) = compare_fock((n1, 0.0, 0.0), (n2, 0.0, 0.0));
        let (q1, q2) = (n1 / (n1 + 1.0), n2 / (n2 + 1.0));
        let closed: f64 = (0..400)
            .map(|k| ((1.0 - q1) * q1.powi(k) * (1.0 - q2) * q2.powi(k)).sqrt())
            .sum::<f64>()
            .powi(2);
        assert!((lib - closed).abs() < 1e-10, "n̄ = ({n1}, {n2}): {lib} vs closed {closed}");
        assert!((lib - oracle).abs() < 1e-6, "n̄ = ({n1}, {n2}): {lib} vs Fock {oracle}");
    }
}

#[test]
fn fidelity_squeezed_against_thermal_matches_fock() {
    for &(r, theta) in &[(0.3, 0.0), (0.5, 0.7), (0.2, 2.0)] {
        let (lib, oracle) = compare_fock((0.4, r, theta), (0.8, 0.0, 0.0));
        assert!((lib - oracle).abs() < 1e-6, "r = {r}, θ = {theta}: {lib} vs {oracle}");
    }
}

#[test]
fn fidelity_random_single_mode_pairs_match_fock() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..12 {
        let mut draw = || (rng.random_range(0.0..1.0), rng.random_range(0.0..0.55), rng.random_range(0.0..PI));
        let (a, b) = (draw(), draw());
        let (lib, oracle) = compare_fock(a, b);
        assert!((lib - oracle).abs() < 1e-6, "{a:?} vs {b:?}: {lib} vs {oracle}");
    }
}

// ---------------------------------------------------------------------------
// Dormand-Prince integration of the covariance equations

type M4 = Matrix4<f64>;

struct Lyapunov {
    m: M4,
    n: M4,
}

impl Lyapunov {
    fn rhs(&self, c: &M4) -> M4 {
        self.m * c + c * self.m.transpose() + self.n
    }
}

/// Adaptive fifth-order Dormand-Prince with fourth-order error control,
/// stopping exactly on every requested time.
fn dopri(sys: &Lyapunov, c0: M4, times: &[f64], rtol: f64, atol: f64) -> Vec<M4> {
    const A: [[f64; 6]; 6] = [
        [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
        [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
        [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
        [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
        [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
        [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
    ];
    const E: [f64; 7] = [
        71.0 / 57600.0,
        0.0,
        -71.0 / 16695.0,
        71.0 / 1920.0,
        -17253.0 / 339200.0,
        22.0 / 525.0,
        -1.0 / 40.0,
    ];
    let mut out = Vec::with_capacity(times.len());
    let (mut t, mut y, mut h): (f64, M4, f64) = (0.0, c0, 1e-3);
    for &target in times {
        while t < target {
            let step = h.min(target - t);
            let mut k = [M4::zeros(); 7];
            k[0] = sys.rhs(&y);
            for s in 1..7 {
                let mut ys = y;
                for (j, kj) in k.iter().enumerate().take(s) {
                    ys += kj * (step * A[s - 1][j]);
                }
                k[s] = sys.rhs(&ys);
            }
            let mut y5 = y;
            for (j, kj) in k.iter().enumerate().take(6) {
                y5 += kj * (step * A[5][j]);
            }
            let mut err = M4::zeros();
            for (j, kj) in k.iter().enumerate() {
                err += kj * (step * E[j]);
            }
            let scale = y.abs().max().max(y5.abs().max()) * rtol + atol;
            let ratio = err.abs().max() / scale;
            if ratio <= 1.0 {
                t += step;
                y = y5;
            }
            let factor = if ratio > 0.0 { 0.9 * ratio.powf(-0.2) } else { 5.0 };
            h = step * factor.clamp(0.2, 5.0);
        }
        out.push(y);
    }
    out
}

#[test]
fn closed_form_propagation_matches_runge_kutta() {
    let cfg = Fig4Config::default();
    let wire = build_wire(cfg.omega_h, cfg.omega_c, cfg.k, false, 0.0)
        .unwrap()
        .with_bath(HOT, cfg.hot_spectrum().unwrap(), cfg.t_h)
        .unwrap()
        .with_bath(COLD, overdamped_limit(cfg.alpha1, cfg.alpha2).unwrap(), cfg.t_c)
        .unwrap();
    let basis = normal_modes(&wire).unwrap();

    // rates straight from Γ(Ω) = 2J(Ω)/(1 − e^{−Ω/T}) and w = P²/(2Ω)
    let mut a = M4::zeros();
    let mut d = M4::zeros();
    for j in 0..2 {
        let w = basis.omega()[j];
        let (mut sigma, mut delta) = (0.0, 0.0);
        for bath in wire.baths() {
            let jw = bath.spectral.evaluate(w).unwrap();
            let up = 2.0 * jw / (1.0 - (-w / bath.temperature).exp());
            let down = up * (-w / bath.temperature).exp();
            let weight = basis.p()[(bath.node, j)].powi(2) / (2.0 * w);
            sigma += weight * (up + down);
            delta += weight * (down - up);
        }
        a[(2 * j, 2 * j)] = 0.5 * delta;
        a[(2 * j, 2 * j + 1)] = 1.0;
        a[(2 * j + 1, 2 * j)] = -w * w;
        a[(2 * j + 1, 2 * j + 1)] = 0.5 * delta;
        d[(2 * j, 2 * j)] = sigma / (2.0 * w);
        d[(2 * j + 1, 2 * j + 1)] = sigma * w / 2.0;
    }
    let q = M4::from_iterator(basis.q().iter().copied());
    let sys = Lyapunov {
        m: q * a * q.transpose(),
        n: q * d * q.transpose(),
    };

    let omega0 = (cfg.alpha2 * cfg.gamma).sqrt();
    let c0 = reduce(
        &product_thermal(&[cfg.omega_h.hypot(cfg.k.sqrt()), (cfg.omega_c.powi(2) + cfg.k).sqrt(), omega0], &[cfg.t_h, cfg.t_c, cfg.t_c])
            .unwrap(),
        &[HOT, COLD],
    )
    .unwrap();
    let times = cfg.times();
    let rk = dopri(&sys, M4::from_iterator(c0.data().iter().copied()), &times, 1e-12, 1e-15);
    let lib = propagate(&wire, &basis, &c0, &times).unwrap();
    let mut worst: f64 = 0.0;
    for (r, s) in rk.iter().zip(&lib.states) {
        worst = worst.max((r[(0, 0)] - s.x2(HOT)).abs() / r[(0, 0)]);
    }
    assert!(worst < 1e-7, "sup relative gap in ⟨X_h²⟩: {worst:.3e}");
}

// ---------------------------------------------------------------------------
// Frequency integrals by brute force

/// Composite Simpson rule on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

#[test]
fn integrated_correlation_matches_direct_sum() {
    let j = scaled_underdamped(1e-3, 1e3, 1e3).unwrap();
    let (temp, t) = (0.5, 0.1);
    let jw = |w: f64| j.evaluate(w).unwrap();
    let coth = |w: f64| 1.0 / (w / (2.0 * temp)).tanh();
    // ∫₀ᵗ C(s) ds = (1/π)∫ J [coth sin(ωt) − i(1 − cos ωt)] / ω dω
    let re = |w: f64| {
        if w == 0.0 {
            0.0
        } else {
            jw(w) * coth(w) * (w * t).sin() / w
        }
    };
    let im = |w: f64| if w == 0.0 { 0.0 } else { -jw(w) * (1.0 - (w * t).cos()) / w };
    // J ~ ω at the origin, so J·coth·sin(ωt)/ω → 2T·J'(0)·t
    let j0 = jw(1e-9) / 1e-9;
    let re0 = |w: f64| if w == 0.0 { 2.0 * temp * j0 * t } else { re(w) };
    let split = 50.0;
    let top = 1e6;
    let oracle_re = (simpson(re0, 0.0, split, 200_000) + simpson(re, split, top, 20_000_000)) / PI;
    let oracle_im = (simpson(im, 0.0, split, 200_000) + simpson(im, split, top, 20_000_000)) / PI;
    let lib = j.integrated_correlation(temp, t, 1e-10).unwrap();
    assert!((lib.re - oracle_re).abs() < 1e-6 * oracle_re.abs(), "re {} vs {}", lib.re, oracle_re);
    assert!((lib.im - oracle_im).abs() < 1e-6 * oracle_im.abs(), "im {} vs {}", lib.im, oracle_im);
}

#[test]
fn integrated_correlation_is_time_integral_of_correlation() {
    let j = SpectralDensity::underdamped(1.0, 0.9, 4.0).unwrap();
    let (temp, t) = (1.2, 2.0);
    let n = 400;
    let h = t / n as f64;
    let samples: Vec<Complex64> = (0..=n).map(|i| j.correlation_function(temp, i as f64 * h, 1e-11).unwrap()).collect();
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, s) in samples.iter().enumerate() {
        let w = if i == 0 || i == n {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        acc += s * w;
    }
    acc *= h / 3.0;
    let lib = j.integrated_correlation(temp, t, 1e-11).unwrap();
    assert!((lib - acc).norm() < 1e-6 * lib.norm(), "{lib} vs nested {acc}");
}

/// `(2/π) P∫₀^∞ νJ(ν)/(ν² − ω²) dν` with the pole removed by subtracting
/// `ωJ(ω)`, using `P∫₀^∞ dν/(ν² − ω²) = 0`.
fn kramers_kronig(j: &SpectralDensity, w: f64) -> f64 {
    let f = |v: f64| v * j.evaluate(v).unwrap();
    let fw = f(w);
    let g = |v: f64| {
        if (v - w).abs() < 1e-7 * w {
            let h = 1e-4 * w;
            (f(w + h) - f(w - h)) / (2.0 * h) / (2.0 * w)
        } else {
            (f(v) - fw) / (v * v - w * w)
        }
    };
    let top = 40.0 * w.max(10.0);
    // the tail beyond `top` through ν = top/u; the integrand has a finite limit at u = 0
    let tail = |u: f64| {
        let u = u.max(1e-9);
        g(top / u) * top / (u * u)
    };
    let mut edges = vec![0.0, 0.5 * w, w, 1.5 * w, 2.0 * w];
    for &x in &j.features() {
        if x < top {
            edges.push(x);
        }
    }
    edges.push(top);
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let mut s = 0.0;
    for e in edges.windows(2) {
        s += simpson(g, e[0], e[1], 200_000);
    }
    s += simpson(tail, 0.0, 1.0, 200_000);
    2.0 / PI * s
}

#[test]
fn dissipation_kernel_satisfies_kramers_kronig() {
    let spectra = [
        SpectralDensity::ohmic_algebraic(0.3, 5.0).unwrap(),
        SpectralDensity::underdamped(0.5, 0.9, 4.0).unwrap(),
    ];
    for j in &spectra {
        for &w in &[0.3, 2.0, 4.0, 7.0] {
            let k = j.fourier_kernel(w).unwrap();
            let oracle = kramers_kronig(j, w);
            assert!((k.re - oracle).abs() < 1e-8 * k.re.abs().max(1e-3), "{j:?} at ω = {w}: {} vs {oracle}", k.re);
            assert!((k.im - j.evaluate(w).unwrap()).abs() < 1e-14, "Im χ̂ is J at ω = {w}");
        }
    }
}

#[test]
fn renormalisation_shift_matches_quadrature() {
    let j = SpectralDensity::ohmic_algebraic(1e-3, 1e3).unwrap();
    assert_eq!(j.renormalisation_shift().unwrap(), 1.0);
    // (2/π)∫ J/ω over [0, Λ] and the tail ν = Λ/u
    let g = |v: f64| j.j_over_omega(v);
    let tail = |u: f64| {
        let u = u.max(1e-9);
        g(1e3 / u) * 1e3 / (u * u)
    };
    let s = 2.0 / PI * (simpson(g, 0.0, 1e3, 20_000) + simpson(tail, 0.0, 1.0, 20_000));
    assert!((s - 1.0).abs() < 1e-10, "{s}");

    let p = RcPhysics::default();
    let aug = build_augmented(
        p.wire(),
        p.cold_spectrum().unwrap(),
        p.hot_spectrum().unwrap(),
        SpectralDensity::ohmic_linear(p.gamma).unwrap(),
        p.t_h,
        p.t_c,
    )
    .unwrap();
    assert!((aug.v()[(COLD, COLD)] - 9.850625).abs() < 1e-14);
    assert_eq!(aug.v()[(COLD, RC)], -0.9);
    assert_eq!(aug.v()[(RC, RC)], 16.0);
}

// ---------------------------------------------------------------------------
// Master-equation rates and stationary states

fn fig2_augmented(gamma: f64) -> rcmap::network::HarmonicNetwork {
    let p = RcPhysics::default().with_gamma(gamma);
    build_augmented(
        p.wire(),
        p.cold_spectrum().unwrap(),
        p.hot_spectrum().unwrap(),
        SpectralDensity::ohmic_linear(gamma).unwrap(),
        p.t_h,
        p.t_c,
    )
    .unwrap()
}

#[test]
fn decay_rates_match_direct_formula() {
    let net = fig2_augmented(1e-3);
    let basis = normal_modes(&net).unwrap();
    let rates = decay_rates(&net, &basis).unwrap();
    let (g, cutoff, temp) = (1e-3, 1e3, 3.3);
    for j in 0..3 {
        let w = basis.omega()[j];
        let jw = g * w * cutoff * cutoff / (cutoff * cutoff + w * w);
        let up = 2.0 * jw / (1.0 - (-w / temp).exp());
        assert!((rates.gamma_plus[(0, j)] - up).abs() < 1e-12 * up);
        assert!((rates.gamma_minus[(0, j)] - up * (-w / temp).exp()).abs() < 1e-12 * up);
        assert!((rates.weight[(0, j)] - basis.p()[(HOT, j)].powi(2) / (2.0 * w)).abs() < 1e-15);
        assert!((rates.delta[(0, j)] + 2.0 * jw).abs() < 1e-12 * jw);
    }
}

#[test]
fn long_time_propagation_reaches_steady_state() {
    let net = fig2_augmented(1e-3);
    let basis = normal_modes(&net).unwrap();
    let traj = propagate(&net, &basis, &CovarianceMatrix::vacuum(3), &[1e8]).unwrap();
    let ness = steady_state(&net, &basis).unwrap();
    let f = uhlmann_fidelity(&traj.states[0], &ness).unwrap();
    assert!(f > 1.0 - 1e-8, "{f}");
}

#[test]
fn equal_temperature_wire_relaxes_to_gibbs() {
    let cfg = Fig4Config::default();
    let wire = build_wire(cfg.omega_h, cfg.omega_c, cfg.k, false, 0.0)
        .unwrap()
        .with_bath(HOT, cfg.hot_spectrum().unwrap(), 0.5)
        .unwrap()
        .with_bath(COLD, overdamped_limit(cfg.alpha1, cfg.alpha2).unwrap(), 0.5)
        .unwrap();
    let basis = normal_modes(&wire).unwrap();
    let gibbs = thermal_covariance(&basis, 0.5).unwrap();
    let late = propagate(&wire, &basis, &CovarianceMatrix::vacuum(2), &[1e7]).unwrap();
    let f = uhlmann_fidelity(&late.states[0], &gibbs).unwrap();
    assert!(f > 1.0 - 1e-10, "{f}");
    // independent Gibbs state: modes thermal at ⟨η²⟩ = coth(Ω/2T)/(2Ω)
    let g = &gibbs.data();
    let p = basis.p();
    for a in 0..2 {
        for b in 0..2 {
            let xx: f64 = (0..2)
                .map(|j| {
                    let w = basis.omega()[j];
                    p[(a, j)] * p[(b, j)] / (2.0 * w * (w / 1.0).tanh())
                })
                .sum();
            assert!((g[(2 * a, 2 * b)] - xx).abs() < 1e-12, "⟨X_{a}X_{b}⟩");
        }
    }
}

#[test]
fn secular_flag_raised_at_moderate_friction() {
    let low = fig2_augmented(1e-3);
    assert!(validity_diagnostics(&low, &normal_modes(&low).unwrap()).secular_ok);
    let mid = fig2_augmented(0.1);
    let r = validity_diagnostics(&mid, &normal_modes(&mid).unwrap());
    assert!(!r.secular_ok, "{r:?}");
}

// ---------------------------------------------------------------------------
// Exact solver

#[test]
fn shifted_augmented_model_is_stable_across_friction_range() {
    let p = RcPhysics::default();
    for k in 0..=12 {
        let gamma = 1e-3 * 10f64.powf(k as f64 / 2.0);
        let pg = p.with_gamma(gamma);
        let model =
            LangevinModel::augmented(pg.wire(), pg.hot_spectrum().unwrap(), pg.cold_spectrum().unwrap(), 1e3, pg.t_h, pg.t_c)
                .unwrap();
        let s = stability_scan(&model, 1e5);
        assert!(!s.flagged, "γ = {gamma}: {s:?}");
    }
}

#[test]
fn unshifted_strong_coupling_is_flagged() {
    let p = RcPhysics::default();
    let (lambda, omega0) = (20.0, 4.0);
    let model = |shift: bool| {
        let mut v = DMatrix::zeros(3, 3);
        v.view_mut((0, 0), (2, 2)).copy_from(&p.wire().potential());
        if shift {
            v[(1, 1)] += lambda * lambda / (omega0 * omega0);
        }
        v[(1, 2)] = -lambda;
        v[(2, 1)] = -lambda;
        v[(2, 2)] = omega0 * omega0;
        let channels = vec![
            Channel {
                node: HOT,
                spectral: p.hot_spectrum().unwrap(),
                temperature: p.t_h,
                shifted: true,
            },
            Channel {
                node: RC,
                spectral: SpectralDensity::ohmic_algebraic(1.0, 1e3).unwrap(),
                temperature: p.t_c,
                shifted: true,
            },
        ];
        LangevinModel::custom(v, channels, "custom").unwrap()
    };
    assert!(stability_scan(&model(false), 1e5).flagged);
    assert!(!stability_scan(&model(true), 1e5).flagged);
    // the master equation refuses the same potential outright
    let cold = SpectralDensity::underdamped(1.0, lambda, omega0).unwrap();
    let built = build_augmented_with_shift(
        p.wire(),
        cold,
        p.hot_spectrum().unwrap(),
        SpectralDensity::ohmic_linear(1.0).unwrap(),
        p.t_h,
        p.t_c,
        false,
    );
    assert!(built.is_err());
}

#[test]
fn transmission_and_covariance_currents_agree() {
    let tol = 1e-8;
    for &gamma in &[1e-3, 1.0, 60.0] {
        let p = RcPhysics::default().with_gamma(gamma);
        let model =
            LangevinModel::wire(p.wire(), p.hot_spectrum().unwrap(), p.cold_spectrum().unwrap(), p.t_h, p.t_c).unwrap();
        let sol = exact_solution(&model, tol).unwrap();
        let report = heat_currents_from(&model, &sol).unwrap();
        for c in &report.currents {
            let alt = c.alternative.unwrap();
            let gap = (c.value - alt).abs() / c.value.abs();
            assert!(gap < 10.0 * tol, "γ = {gamma}, node {}: {} vs {alt} ({gap:.3e})", c.node, c.value);
        }
        assert!(report.conservation_residual < 10.0 * tol, "{report:?}");
    }
}
