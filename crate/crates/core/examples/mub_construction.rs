// The +-1 mutually unbiased bases for d = 4^k and the optimal encoding.
//
// ```text
// cargo run --example mub_construction -- 5
// ```

use gdw::mub::{build_mub, encode_optimal, measurement_overlap, Basis};

pub fn run_example(k: u32) -> gdw::Result<()> {
    let mubs = build_mub(k)?;
    let dim = mubs.dim();
    if k == 1 {
        for y in [Basis::First, Basis::Second] {
            println!("basis {}:", y.index());
            mubs.write_pm1(y, std::io::stdout().lock())?;
        }
    }
    let exhaustive = k <= 3;
    let unbiased = if exhaustive {
        mubs.is_unbiased_exhaustive()
    } else {
        mubs.has_tensor_structure(10_000, 1) && mubs.is_unbiased_sampled(10_000, 1)
    };
    println!(
        "d={dim}: orthogonal {} / {}, unbiased (|dot| = {}) {unbiased} ({})",
        mubs.basis(Basis::First).is_orthogonal(),
        mubs.basis(Basis::Second).is_orthogonal(),
        mubs.unbiased_magnitude(),
        if exhaustive { "all pairs" } else { "structure + samples" }
    );

    let (x1, x2) = (0, dim - 1);
    let state = encode_optimal(&mubs, x1, x2)?;
    let right = measurement_overlap(&mubs, Basis::First, x1, &state)?;
    let wrong = measurement_overlap(&mubs, Basis::First, (x1 + 1) % dim, &state)?;
    let total: f64 = (0..dim)
        .map(|j| measurement_overlap(&mubs, Basis::Second, j, &state))
        .sum::<gdw::Result<f64>>()?;
    println!("encoded (x1, x2) = ({x1}, {x2}), norm {:.15}", state.norm());
    println!("  |<m_x1|psi>|^2 = {right:.12}, any other index {wrong:.12}");
    println!("  sum over the second basis {total:.15}");
    Ok(())
}

#[allow(dead_code)]
fn main() {
    let k = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(5);
    if let Err(e) = run_example(k) {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
