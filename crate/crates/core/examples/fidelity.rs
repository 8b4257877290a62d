// Gaussian-state toolkit: physicality, symplectic spectrum, reduction and
// Uhlmann fidelity.

use nalgebra::DMatrix;
use rcmap::gaussian::{is_physical, product_thermal, reduce, symplectic_eigenvalues, uhlmann_fidelity, CovarianceMatrix};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let a = product_thermal(&[1.0, 2.0], &[0.5, 1.5])?;
    let b = product_thermal(&[1.0, 2.0], &[0.6, 1.5])?;
    println!("ν(a) = {:.6?}", symplectic_eigenvalues(&a));
    println!("F(a, b) = {:.10}", uhlmann_fidelity(&a, &b)?);
    println!("F(a₀, b₀) = {:.10}", uhlmann_fidelity(&reduce(&a, &[0])?, &reduce(&b, &[0])?)?);

    // squeezed vacuum against the vacuum
    let r: f64 = 0.4;
    let sq = CovarianceMatrix::new(DMatrix::from_diagonal_element(2, 2, 0.5).component_mul(
        &DMatrix::from_row_slice(2, 2, &[(-2.0 * r).exp(), 0.0, 0.0, (2.0 * r).exp()]),
    ))?;
    println!("F(squeezed, vacuum) = {:.10} (1/cosh r = {:.10})", uhlmann_fidelity(&sq, &CovarianceMatrix::vacuum(1))?, 1.0 / r.cosh());

    // below the uncertainty bound: a valid matrix, but not a quantum state
    let sub = CovarianceMatrix::new(DMatrix::from_diagonal_element(2, 2, 0.3))?;
    println!("physical: {:?}", is_physical(&sub));
    if let Err(e) = uhlmann_fidelity(&sub, &CovarianceMatrix::vacuum(1)) {
        println!("fidelity refused: {e}");
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
