// Scaled underdamped spectrum, its overdamped limit, and the integrated
// bath correlation function at a few times.

use rcmap::spectral::{overdamped_limit, scaled_underdamped};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let (a1, a2, gamma, temp) = (1e-3, 1e3, 1e3, 0.5);
    let j = scaled_underdamped(a1, a2, gamma)?;
    let lim = overdamped_limit(a1, a2)?;
    for w in [0.1, 1.0, 10.0, 100.0, 1000.0] {
        println!("ω = {w:7}: J = {:.6e}, limit {:.6e}", j.evaluate(w)?, lim.evaluate(w)?);
    }
    println!("δ = {}", j.renormalisation_shift()?);
    for t in [1e-3, 1e-2, 1e-1, 1.0, 10.0] {
        let g = j.integrated_correlation(temp, t, 1e-8)?;
        println!("t = {t:6}: ∫₀ᵗ C = {:+.6e} {:+.6e}i", g.re, g.im);
    }
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
