// Short residual-friction sweep: fidelities and hot currents from both
// methods, with the interpolated 95% crossing.

use rcmap::bench::{crossing, run_fig2, Fig2Config, Grid};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = Fig2Config {
        gamma_grid: Grid::log(1e-3, 60.0, 12),
        ..Fig2Config::default()
    };
    let out = run_fig2(&cfg)?;
    println!("{:>10} {:>12} {:>12} {:>12} {:>12}", "γ", "F wire", "F aug", "Q̇_h me", "Q̇_h ex");
    for r in &out.rows {
        println!(
            "{:10.3e} {:12.8} {:12.8} {:12.4e} {:12.4e}",
            r.gamma, r.fidelity_wire, r.fidelity_augmented, r.q_h_me, r.q_h_ex
        );
    }
    let g: Vec<f64> = out.rows.iter().map(|r| r.gamma).collect();
    let f: Vec<f64> = out.rows.iter().map(|r| r.fidelity_wire).collect();
    println!("wire fidelity crosses 0.95 at γ = {:?}", crossing(&g, &f, 0.95));
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
