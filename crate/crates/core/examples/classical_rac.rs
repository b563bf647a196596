// Brute-force oracles next to the closed forms they check.
//
// ```text
// cargo run --release --example classical_rac
// ```

use gdw::oracles::{classical_rac_exhaustive, tradeoff_grid_check, two_factor_grid_bound};
use gdw::solver::{solve_bound, SolverConfig};
use gdw::structure::{Kind, ProductStructure};
use gdw::tradeoff::optimal_asp_single;

pub fn run_example(resolution: usize) -> gdw::Result<()> {
    for d in 2..=3 {
        println!(
            "classical d={d}: every strategy {:.12}, formula {:.12}",
            classical_rac_exhaustive(d)?,
            optimal_asp_single(d, Kind::Classical)?
        );
    }
    for d in [2, 16] {
        let check = tradeoff_grid_check(d, resolution)?;
        println!(
            "quantum d={d}: state sweep max ASP {:.12}, off-curve {:.1e}",
            check.optimum.oracle_value, check.curve.oracle_value
        );
    }
    for name in ["Q2*C2", "Q13*Q3"] {
        let s: ProductStructure = name.parse()?;
        println!(
            "{name}: lattice {:.9}, solver {:.9}",
            two_factor_grid_bound(&s, resolution)?,
            solve_bound(&s, &SolverConfig::default())?.asp
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example(2000) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
