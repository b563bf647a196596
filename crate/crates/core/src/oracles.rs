//! Brute-force cross-checks for the closed forms and the solver.
//!
//! None of these share code paths with what they check: the classical
//! oracle plays every deterministic strategy, the trade-off sweep measures
//! explicit states, and the grid bound evaluates the objective on a lattice.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mub::{build_mub, curve_state, measurement_overlap, Basis, MAX_K};
use crate::structure::{Kind, ProductStructure};
use crate::tradeoff::{optimal_asp_single, tradeoff_q};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub name: String,
    pub instance: String,
    pub oracle_value: f64,
    pub analytic_value: f64,
    pub abs_diff: f64,
    pub tolerance: f64,
}

impl OracleReport {
    pub fn new(name: &str, instance: String, oracle_value: f64, analytic_value: f64, tolerance: f64) -> Self {
        Self {
            name: name.to_string(),
            instance,
            oracle_value,
            analytic_value,
            abs_diff: (oracle_value - analytic_value).abs(),
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.abs_diff <= self.tolerance
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DecoderSearch {
    /// Every pair of decoding functions.
    All,
    /// Bob outputs the received symbol for both questions.
    IdentityOnly,
}

/// Largest `d` the classical search accepts; `d = 4` would need ~2.8e14 strategies.
pub const CLASSICAL_MAX_DIM: u64 = 3;

/// Best classical 2-dit RAC value over every encoding `[d]^2 -> [d]` and
/// every pair of decoders `[d] -> [d]`.
pub fn classical_rac_exhaustive(d: u64) -> Result<f64> {
    classical_rac_search(d, DecoderSearch::All)
}

pub fn classical_rac_search(d: u64, decoders: DecoderSearch) -> Result<f64> {
    if !(2..=CLASSICAL_MAX_DIM).contains(&d) {
        return Err(Error::Domain {
            what: "classical oracle dimension",
            value: d as f64,
            lo: 2.0,
            hi: CLASSICAL_MAX_DIM as f64,
        });
    }
    let d = d as usize;
    let inputs = d * d;

    let decode_tables: Vec<Vec<usize>> = match decoders {
        DecoderSearch::All => (0..d.pow(d as u32)).map(|code| digits(code, d, d)).collect(),
        DecoderSearch::IdentityOnly => vec![(0..d).collect()],
    };
    let encodings = d.pow(inputs as u32);

    let best_wins = (0..encodings)
        .into_par_iter()
        .map(|code| {
            let encode = digits(code, d, inputs);
            // wins[y][decoder] for each question separately
            let wins = |y: usize| -> Vec<usize> {
                decode_tables
                    .iter()
                    .map(|dec| {
                        (0..inputs)
                            .filter(|&x| {
                                let (x1, x2) = (x / d, x % d);
                                let guess = dec[encode[x]];
                                guess == if y == 0 { x1 } else { x2 }
                            })
                            .count()
                    })
                    .collect()
            };
            let first = wins(0);
            let second = wins(1);
            let mut best = 0;
            for a in &first {
                for b in &second {
                    best = best.max(a + b);
                }
            }
            best
        })
        .max()
        .unwrap_or(0);
    Ok(best_wins as f64 / (2 * inputs) as f64)
}

fn digits(mut code: usize, base: usize, len: usize) -> Vec<usize> {
    let mut out = vec![0; len];
    for slot in out.iter_mut() {
        *slot = code % base;
        code /= base;
    }
    out
}

/// Results of sweeping the trade-off-achieving state family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TradeoffCheck {
    /// Largest `|w(t) - M_d(z(t))|` over the sweep; analytic value 0.
    pub curve: OracleReport,
    /// Largest `(z + w)/2` over the sweep against `(1 + 1/sqrt d)/2`.
    pub optimum: OracleReport,
    /// Largest `w(t) - M_d(z(t))`; positive would beat the trade-off.
    pub max_excess: f64,
    /// `(z, w)` at `t = 1/2`.
    pub midpoint: (f64, f64),
}

fn guess_probabilities(d: u64, resolution: usize) -> Result<Vec<(f64, f64)>> {
    let ts = (0..=resolution).map(|i| i as f64 / resolution as f64);
    let k = (1..=MAX_K).find(|&k| 4u64.pow(k) == d);
    match k {
        Some(k) => {
            let mubs = build_mub(k)?;
            ts.map(|t| {
                let s = curve_state(&mubs, 0, 0, t)?;
                Ok((
                    measurement_overlap(&mubs, Basis::First, 0, &s)?,
                    measurement_overlap(&mubs, Basis::Second, 0, &s)?,
                ))
            })
            .collect()
        }
        None => {
            // Two real unit vectors at overlap 1/sqrt(d), spanning the plane the state lives in.
            let c = 1.0 / (d as f64).sqrt();
            let s = (1.0 - c * c).sqrt();
            Ok(ts
                .map(|t| {
                    let (a, b) = (t + (1.0 - t) * c, (1.0 - t) * s);
                    let n2 = a * a + b * b;
                    let z = a * a / n2;
                    let w = (a * c + b * s).powi(2) / n2;
                    (z, w)
                })
                .collect())
        }
    }
}

/// Sweeps `t` over `[0, 1]` and checks that the state family lands on the
/// quantum trade-off curve and peaks at the fixed point.
pub fn tradeoff_grid_check(d: u64, resolution: usize) -> Result<TradeoffCheck> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if resolution < 1000 {
        return Err(Error::Config(format!("resolution must be at least 1000, got {resolution}")));
    }
    let points = guess_probabilities(d, resolution)?;
    let mut max_dev: f64 = 0.0;
    let mut max_excess = f64::NEG_INFINITY;
    let mut best = f64::NEG_INFINITY;
    for &(z, w) in &points {
        let dev = w - tradeoff_q(d, z)?;
        max_dev = max_dev.max(dev.abs());
        max_excess = max_excess.max(dev);
        best = best.max(0.5 * (z + w));
    }
    let midpoint = guess_probabilities(d, 2)?[1];
    let instance = format!("d={d} resolution={resolution}");
    Ok(TradeoffCheck {
        curve: OracleReport::new("tradeoff-curve", instance.clone(), max_dev, 0.0, 1e-10),
        optimum: OracleReport::new(
            "tradeoff-optimum",
            instance,
            best,
            optimal_asp_single(d, Kind::Quantum)?,
            1e-10,
        ),
        max_excess,
        midpoint,
    })
}

/// Maximum of the two-factor objective over a `resolution x resolution`
/// lattice covering the box (edges included).
pub fn two_factor_grid_bound(structure: &ProductStructure, resolution: usize) -> Result<f64> {
    let factors = structure.factors();
    if factors.len() != 2 {
        return Err(Error::Rank {
            expected: 2,
            got: factors.len(),
        });
    }
    if resolution < 2 {
        return Err(Error::Config("resolution must be at least 2".into()));
    }
    let axis = |i: usize| -> Result<Vec<(f64, f64)>> {
        let f = factors[i];
        let lo = f.z_min();
        (0..resolution)
            .map(|k| {
                let z = if k + 1 == resolution {
                    1.0
                } else {
                    lo + (1.0 - lo) * k as f64 / (resolution - 1) as f64
                };
                f.tradeoff(z).map(|m| (z, m))
            })
            .collect()
    };
    let first = axis(0)?;
    let second = axis(1)?;
    let best = first
        .par_iter()
        .map(|&(z1, m1)| {
            second
                .iter()
                .map(|&(z2, m2)| z1 * z2 + m1 * m2)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .reduce(|| f64::NEG_INFINITY, f64::max);
    Ok(0.5 * best)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn classical_small_dimensions() {
        assert_eq!(classical_rac_exhaustive(2).unwrap(), 0.75);
        assert_eq!(classical_rac_search(2, DecoderSearch::IdentityOnly).unwrap(), 0.75);
        assert!(classical_rac_exhaustive(4).is_err());
        assert!(classical_rac_exhaustive(1).is_err());
    }

    #[test]
    fn grid_bound_classical_corner() {
        let s: ProductStructure = "C2*C2".parse().unwrap();
        assert!((two_factor_grid_bound(&s, 1000).unwrap() - 0.625).abs() < 1e-6);
        let s: ProductStructure = "C3*C2".parse().unwrap();
        let want = 0.5 * (1.0 + 1.0 / 6.0);
        assert!((two_factor_grid_bound(&s, 1000).unwrap() - want).abs() < 1e-6);
        let s: ProductStructure = "Q4".parse().unwrap();
        assert!(matches!(two_factor_grid_bound(&s, 100), Err(Error::Rank { .. })));
    }

    #[test]
    fn planar_sweep_for_non_power_of_four() {
        let c = tradeoff_grid_check(2, 1000).unwrap();
        assert!(c.curve.passed(), "{c:?}");
        assert!(c.optimum.passed(), "{c:?}");
        assert!(c.max_excess <= 1e-10);
        assert!(tradeoff_grid_check(2, 10).is_err());
    }
}
