// Exact stationary covariances and currents of the wire from the
// frequency-domain Langevin solution, compared with the augmented model.

use rcmap::bench::config::RcPhysics;
use rcmap::gaussian::{reduce, uhlmann_fidelity};
use rcmap::network::{COLD, HOT};
use rcmap::qle::{exact_heat_currents, exact_solution, stability_scan, LangevinModel};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let p = RcPhysics::default().with_gamma(1.0);
    let wire = LangevinModel::wire(p.wire(), p.hot_spectrum()?, p.cold_spectrum()?, p.t_h, p.t_c)?;
    let sol = exact_solution(&wire, 1e-8)?;
    println!("exact wire covariance ({} panels):\n{:.8}", sol.panels_used, sol.covariance.data());
    for c in &exact_heat_currents(&wire, 1e-8)?.currents {
        println!("Q̇ node {} = {:+.8e} (transmission form {:+.8e})", c.node, c.value, c.alternative.unwrap_or(f64::NAN));
    }

    let aug = LangevinModel::augmented(p.wire(), p.hot_spectrum()?, p.cold_spectrum()?, p.residual_cutoff, p.t_h, p.t_c)?;
    let c3 = exact_solution(&aug, 1e-8)?.covariance;
    let f = uhlmann_fidelity(&reduce(&c3, &[HOT, COLD])?, &sol.covariance)?;
    println!("augmented reduced vs wire: F = {f:.12}");
    println!("{:?}", stability_scan(&aug, 1e5));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
