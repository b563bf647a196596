// Quantum and classical trade-off curves for one dimension.
//
// ```text
// cargo run --example tradeoff_curves -- 16
// ```

use gdw::structure::Kind;
use gdw::tradeoff::{optimal_asp_single, sample_curve, tradeoff_fixed_point};

pub fn run_example(dim: u64, points: usize) -> gdw::Result<()> {
    let quantum = sample_curve(Kind::Quantum, dim, points)?;
    let classical = sample_curve(Kind::Classical, dim, points)?;
    println!("{:>10} {:>10} {:>10}", "z", "M^q", "M^c");
    for ((z, mq), (_, mc)) in quantum.iter().zip(&classical) {
        println!("{z:>10.6} {mq:>10.6} {mc:>10.6}");
    }
    let z = tradeoff_fixed_point(dim)?;
    println!("fixed point z = M^q(z) = {z:.9}");
    println!(
        "best single-system ASP: quantum {:.9}, classical {:.9}",
        optimal_asp_single(dim, Kind::Quantum)?,
        optimal_asp_single(dim, Kind::Classical)?
    );
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let dim = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(16);
    if let Err(e) = run_example(dim, 20) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
