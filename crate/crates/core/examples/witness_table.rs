// Optimal ASP for every quantum product structure of a dimension.
//
// ```text
// cargo run --release --example witness_table -- 1024
// ```

use std::time::Instant;

use gdw::solver::{bound_table, SolverConfig};
use gdw::structure::Filter;

pub fn run_example(dim: u64) -> gdw::Result<()> {
    let start = Instant::now();
    let table = bound_table(dim, Filter::QuantumOnly, &SolverConfig::default())?;
    println!("{:<40} {:>10}", "structure", "optimal p");
    for row in &table {
        println!("{:<40} {:>10.6}", row.structure.to_string(), row.asp);
    }
    println!("{} structures in {:.2?}", table.len(), start.elapsed());
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let dim = std::env::args()
        .nth(1)
        .and_then(|a| a.parse().ok())
        .unwrap_or(1024);
    if let Err(e) = run_example(dim) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
