// Nonequilibrium steady state of the augmented system under the global
// master equation, with heat currents and validity diagnostics.

use rcmap::bench::config::RcPhysics;
use rcmap::gaussian::{reduce, symplectic_eigenvalues};
use rcmap::gkls::{decay_rates, heat_currents, steady_state, validity_diagnostics};
use rcmap::network::{build_augmented, normal_modes, HOT, COLD};
use rcmap::spectral::SpectralDensity;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = RcPhysics::default().with_gamma(0.05);
    let net = build_augmented(
        p.wire(),
        p.cold_spectrum()?,
        p.hot_spectrum()?,
        SpectralDensity::ohmic_linear(p.gamma)?,
        p.t_h,
        p.t_c,
    )?;
    let basis = normal_modes(&net)?;
    let rates = decay_rates(&net, &basis)?;
    println!("Γ(Ω_j) per bath:\n{:.4e}", rates.gamma_plus);

    let ness = steady_state(&net, &basis)?;
    println!("wire block:\n{:.6}", reduce(&ness, &[HOT, COLD])?.data());
    println!("ν = {:.6?}", symplectic_eigenvalues(&ness));
    let q = heat_currents(&net, &basis, &ness)?;
    for c in &q.currents {
        println!("Q̇ into node {} = {:+.6e}", c.node, c.value);
    }
    println!("conservation residual {:.2e}", q.conservation_residual);
    println!("{:?}", validity_diagnostics(&net, &basis));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
