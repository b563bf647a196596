// Two qudits of dimensions 13 and 3: the optimum is a joint strategy with
// two maximisers, and it beats playing the two RACs independently.
//
// ```text
// cargo run --example d39_two_maxima
// ```

use gdw::solver::{local_maxima, solve_bound, SolverConfig};
use gdw::structure::{Kind, ProductStructure};
use gdw::tradeoff::{optimal_asp_single, tradeoff_q};

pub fn run_example() -> gdw::Result<()> {
    let structure: ProductStructure = "Q13*Q3".parse()?;
    let config = SolverConfig::default();
    let best = solve_bound(&structure, &config)?;
    println!("{structure}: optimal ASP {:.9} at {:?}", best.asp, best.argmax);

    for m in local_maxima(&structure, &config)? {
        let mirrored = [tradeoff_q(13, m.z[0])?, tradeoff_q(3, m.z[1])?];
        println!(
            "  local max {:.9} at ({:.4}, {:.4}) from {} starts; mirror ({:.4}, {:.4})",
            m.value, m.z[0], m.z[1], m.hits, mirrored[0], mirrored[1]
        );
    }
    let independent = optimal_asp_single(13, Kind::Quantum)? * optimal_asp_single(3, Kind::Quantum)?;
    println!("independent strategies: {independent:.6}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    if let Err(e) = run_example() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
