// Normal-mode frequencies of the two-node wire and of the augmented system
// with the reaction coordinate.

use rcmap::network::{build_augmented, build_wire, normal_modes};
use rcmap::spectral::SpectralDensity;

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let wire = build_wire(0.1, 0.5, 0.4, false, 0.0)?;
    let basis = normal_modes(&wire)?;
    println!("wire Ω = {:.4?}", basis.omega().as_slice());

    let params = rcmap::network::WireParams::new(1.0, 3.0, 0.8);
    let cold = SpectralDensity::underdamped(1e-3, 0.9, 4.0)?;
    let hot = SpectralDensity::ohmic_algebraic(1e-3, 1e3)?;
    let residual = SpectralDensity::ohmic_linear(1e-3)?;
    let aug = build_augmented(params, cold, hot, residual, 3.3, 1.2)?;
    let basis = normal_modes(&aug)?;
    println!("augmented Ω = {:.4?}", basis.omega().as_slice());
    println!("P =\n{:.4}", basis.p());
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
