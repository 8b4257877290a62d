// Sweep of the hot-bath temperature through the cold one; the heat
// currents reverse at equilibrium.

use rcmap::bench::{run_custom_sweep, CustomSweepConfig, Grid, SweepVariable};

pub fn run_example() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = CustomSweepConfig {
        variable: SweepVariable::THot,
        grid: Grid::lin(0.6, 2.0, 8),
        ..CustomSweepConfig::default()
    };
    let out = run_custom_sweep(&cfg)?;
    for r in &out.rows {
        println!("T_h = {:.2}: Q̇_h me {:+.4e}, exact {:+.4e} [{}]", r.value, r.q_h_me, r.q_h_ex, r.flags);
    }
    println!("signs: {:?}", out.summary.q_h_ex_signs);
    Ok(())
}

fn main() {
    if let Err(e) = run_example() {
        eprintln!("{e}");
        std::process::exit(1);
    }
}
