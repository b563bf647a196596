// Single-detector experiment at d = 1024 with a weak coherent source.
//
// ```text
// cargo run --release --example photonic_experiment -- 10000000
// ```

use gdw::sim::{fom_closed_form, fom_first_order, simulate, SimConfig};

pub fn run_example(rounds: u64) -> gdw::Result<()> {
    let config = SimConfig {
        k: 5,
        mu: 0.4,
        nu: 0.13,
        rounds,
        seed: 2024,
        ..SimConfig::default()
    };
    let tally = simulate(&config)?;
    let q = config.effective_q();
    println!("d={} nu*mu={:.3} rounds={}", config.dim(), config.nu_mu(), rounds);
    println!("X1={} X2={} D1={} D2={}", tally.x1, tally.x2, tally.d1, tally.d2);
    match tally.figure_of_merit() {
        Some(f) => println!("D1/(D1+D2) = {f:.5}"),
        None => println!("no clicks"),
    }
    println!(
        "expected {:.5} (first order {:.5}); ideal ASP {q:.6}",
        fom_closed_form(q, config.dim(), config.nu_mu())?,
        fom_first_order(q, config.dim(), config.nu_mu())
    );
    for v in [1.0, 0.97, 0.9] {
        let noisy = SimConfig { visibility: v, ..config.clone() };
        println!(
            "visibility {v:.2}: expected figure of merit {:.6}",
            fom_closed_form(noisy.effective_q(), noisy.dim(), noisy.nu_mu())?
        );
    }
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let rounds = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(20_000_000);
    if let Err(e) = run_example(rounds) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
