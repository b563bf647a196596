// Simulate a ququart, write the click log, read it back and certify it
// against every product structure of d = 4.
//
// ```text
// cargo run --release --example certify_pipeline
// ```

use std::fs::File;
use std::io::BufWriter;

use gdw::certify::{certify, ingest_click_log, Verdict, DEFAULT_SIGMA_THRESHOLD};
use gdw::sim::{simulate_with_log, SimConfig};
use gdw::solver::{bound_table, SolverConfig};
use gdw::structure::Filter;

pub fn run_example(rounds: u64) -> gdw::Result<()> {
    let config = SimConfig {
        k: 1,
        rounds,
        seed: 11,
        ..SimConfig::default()
    };
    let log = std::env::temp_dir().join(format!("gdw-clicks-{}.csv", std::process::id()));
    let simulated = simulate_with_log(&config, BufWriter::new(File::create(&log)?))?;
    let tally = ingest_click_log(&log, Some(config.dim()))?;
    std::fs::remove_file(&log)?;
    assert_eq!(simulated, tally);

    let bounds = bound_table(config.dim(), Filter::All, &SolverConfig::default())?;
    let report = certify(&tally, config.dim(), &bounds, DEFAULT_SIGMA_THRESHOLD)?;
    println!("p = {:.4} +- {:.4}", report.p_hat, report.sigma);
    for b in &report.bounds {
        println!("  {:<8} {:.6}  z = {:+7.2}", b.structure.to_string(), b.asp, b.z_score);
    }
    match report.verdict {
        Verdict::IrreducibleQuantum(d) => println!("irreducible {d}-dimensional quantum system"),
        other => println!("not certified: {other:?}"),
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let rounds = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(1_000_000);
    if let Err(e) = run_example(rounds) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
