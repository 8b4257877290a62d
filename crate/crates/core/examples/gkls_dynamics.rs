// Relaxation of ⟨X_h²⟩ in the wire with an overdamped cold bath.

use rcmap::bench::Fig4Config;
use rcmap::gaussian::product_thermal;
use rcmap::gkls::{propagate, steady_state};
use rcmap::network::{build_wire, normal_modes, COLD, HOT};
use rcmap::spectral::overdamped_limit;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = Fig4Config::default();
    let net = build_wire(cfg.omega_h, cfg.omega_c, cfg.k, false, 0.0)?
        .with_bath(HOT, cfg.hot_spectrum()?, cfg.t_h)?
        .with_bath(COLD, overdamped_limit(cfg.alpha1, cfg.alpha2)?, cfg.t_c)?;
    let basis = normal_modes(&net)?;
    let v = net.v();
    let c0 = product_thermal(&[v[(0, 0)].sqrt(), v[(1, 1)].sqrt()], &[cfg.t_h, cfg.t_c])?;
    let times: Vec<f64> = (0..=8).map(|k| 10f64.powi(k - 2)).collect();
    let traj = propagate(&net, &basis, &c0, &times)?;
    for (t, c) in traj.times.iter().zip(&traj.states) {
        println!("γ_h t = {:9.2e}   ⟨X_h²⟩ = {:.8}", t * cfg.gamma_h, c.x2(HOT));
    }
    println!("stationary       ⟨X_h²⟩ = {:.8}", steady_state(&net, &basis)?.x2(HOT));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
