//! Optimal ASP of a product structure.
//!
//! For factors `d_1 .. d_r` with trade-off functions `M_k`, the parallel QRAC
//! value is
//!
//! ```text
//! p(z) = ( z_1 z_2 ... z_r + M_1(z_1) M_2(z_2) ... M_r(z_r) ) / 2,   z_k in [1/d_k, 1]
//! ```
//!
//! and the bound is its maximum over the box. The objective has square-root
//! cusps at `z_k = 1` and can have several global maxima (the maps
//! `z_k -> M_k(z_k)` swap the two products), so the maximum is found by a
//! deterministic multistart of compass searches.

use std::cmp::Ordering;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::StreamFamily;
use crate::structure::{enumerate_structures, Factor, Filter, ProductStructure};
use crate::tradeoff::DOMAIN_SLOP;

/// Structures with at most this many factors get the full start grid.
pub const GRID_RANK_CAP: usize = 6;

/// Start points closer than this (max-norm) are reported as the same maximum.
const CLUSTER_RADIUS: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    /// Local searches stop once every coordinate step is below this.
    pub box_tolerance: f64,
    /// Local results within this of the best value count as tied maxima.
    pub objective_tolerance: f64,
    /// Start values per coordinate: box edges and diagonal point first.
    pub multistart_grid: usize,
    /// Additional quasi-random starts.
    pub random_starts: usize,
    pub seed: u64,
    /// Poll sweeps per local search before giving up.
    pub max_iterations: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            box_tolerance: 1e-10,
            objective_tolerance: 1e-12,
            multistart_grid: 3,
            random_starts: 64,
            seed: 0,
            max_iterations: 100_000,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive, got {v}")))
            }
        };
        positive("box_tolerance", self.box_tolerance)?;
        positive("objective_tolerance", self.objective_tolerance)?;
        if self.multistart_grid == 0 || self.random_starts == 0 || self.max_iterations == 0 {
            return Err(Error::Config(
                "multistart_grid, random_starts and max_iterations must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum SolveStatus {
    Converged,
    MaxIterations,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundResult {
    pub structure: ProductStructure,
    pub asp: f64,
    pub argmax: Vec<f64>,
    pub starts_used: usize,
    pub status: SolveStatus,
}

/// A distinct local maximum reached by the multistart.
#[derive(Clone, Debug, PartialEq)]
pub struct LocalMaximum {
    pub z: Vec<f64>,
    pub value: f64,
    /// How many starts ended here.
    pub hits: usize,
}

#[inline]
fn eval(factors: &[Factor], z: &[f64]) -> f64 {
    let mut guess_first = 1.0;
    let mut guess_second = 1.0;
    for (f, &zk) in factors.iter().zip(z) {
        guess_first *= zk;
        guess_second *= f.tradeoff_unchecked(zk);
    }
    0.5 * (guess_first + guess_second)
}

/// Objective `p(z)` for one `z` per factor.
pub fn objective(structure: &ProductStructure, z: &[f64]) -> Result<f64> {
    let factors = structure.factors();
    if z.len() != factors.len() {
        return Err(Error::LengthMismatch {
            expected: factors.len(),
            got: z.len(),
        });
    }
    let mut clamped = Vec::with_capacity(z.len());
    for (f, &zk) in factors.iter().zip(z) {
        let lo = f.z_min();
        if zk.is_nan() || zk < lo - DOMAIN_SLOP || zk > 1.0 + DOMAIN_SLOP {
            return Err(Error::Domain {
                what: "z",
                value: zk,
                lo,
                hi: 1.0,
            });
        }
        clamped.push(zk.clamp(lo, 1.0));
    }
    Ok(eval(factors, &clamped))
}

struct LocalRun {
    z: Vec<f64>,
    value: f64,
    converged: bool,
}

/// Opportunistic compass search: poll `+-step` along each coordinate in
/// turn, keep the first improvement, halve all steps after a sweep without
/// one.
fn compass_search(factors: &[Factor], start: &[f64], config: &SolverConfig) -> LocalRun {
    let lo: Vec<f64> = factors.iter().map(Factor::z_min).collect();
    let mut step: Vec<f64> = lo.iter().map(|l| 0.25 * (1.0 - l)).collect();
    let mut z: Vec<f64> = start.iter().zip(&lo).map(|(s, l)| s.clamp(*l, 1.0)).collect();
    let mut value = eval(factors, &z);
    let mut sweeps = 0;
    loop {
        if step.iter().all(|&s| s < config.box_tolerance) {
            return LocalRun { z, value, converged: true };
        }
        if sweeps >= config.max_iterations {
            return LocalRun { z, value, converged: false };
        }
        sweeps += 1;
        let mut improved = false;
        for k in 0..z.len() {
            let current = z[k];
            for dir in [1.0, -1.0] {
                let trial = (current + dir * step[k]).clamp(lo[k], 1.0);
                if trial == current {
                    continue;
                }
                z[k] = trial;
                let v = eval(factors, &z);
                if v > value {
                    value = v;
                    improved = true;
                    break;
                }
                z[k] = current;
            }
        }
        if !improved {
            step.iter_mut().for_each(|s| *s *= 0.5);
        }
    }
}

fn per_axis_values(f: &Factor, n: usize) -> Vec<f64> {
    let lo = f.z_min();
    match n {
        1 => vec![f.diagonal_point()],
        2 => vec![lo, 1.0],
        _ => {
            let mut v = vec![lo, f.diagonal_point(), 1.0];
            let extra = n - 3;
            v.extend((1..=extra).map(|i| lo + (1.0 - lo) * i as f64 / (extra + 1) as f64));
            v
        }
    }
}

fn first_primes(n: usize) -> Vec<u64> {
    let mut primes = Vec::with_capacity(n);
    let mut c = 2u64;
    while primes.len() < n {
        if primes.iter().take_while(|&&p| p * p <= c).all(|&p| !c.is_multiple_of(p)) {
            primes.push(c);
        }
        c += 1;
    }
    primes
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut scale = inv;
    let mut acc = 0.0;
    while i > 0 {
        acc += (i % base) as f64 * scale;
        i /= base;
        scale *= inv;
    }
    acc
}

/// Start points: the per-axis grid (full product up to [`GRID_RANK_CAP`]
/// factors, diagonal combinations beyond), then a randomly shifted Halton
/// sequence.
fn start_points(factors: &[Factor], config: &SolverConfig) -> Vec<Vec<f64>> {
    let r = factors.len();
    let axes: Vec<Vec<f64>> = factors
        .iter()
        .map(|f| per_axis_values(f, config.multistart_grid))
        .collect();
    let mut starts: Vec<Vec<f64>> = Vec::new();
    if r <= GRID_RANK_CAP {
        starts.push(Vec::with_capacity(r));
        for axis in &axes {
            starts = starts
                .into_iter()
                .flat_map(|prefix| {
                    axis.iter().map(move |&v| {
                        let mut p = prefix.clone();
                        p.push(v);
                        p
                    })
                })
                .collect();
        }
    } else {
        for i in 0..config.multistart_grid {
            starts.push(axes.iter().map(|a| a[i]).collect());
        }
    }

    let mut rng = StreamFamily::new(config.seed).stream(0);
    let shift: Vec<f64> = (0..r).map(|_| rng.random::<f64>()).collect();
    let primes = first_primes(r);
    for i in 1..=config.random_starts as u64 {
        let point = factors
            .iter()
            .zip(&primes)
            .zip(&shift)
            .map(|((f, &p), &s)| {
                let u = (radical_inverse(i, p) + s).fract();
                f.z_min() + (1.0 - f.z_min()) * u
            })
            .collect();
        starts.push(point);
    }
    starts
}

fn lexicographic(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| x.total_cmp(y))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

fn run_multistart(structure: &ProductStructure, config: &SolverConfig) -> Vec<LocalRun> {
    let factors = structure.factors();
    start_points(factors, config)
        .par_iter()
        .map(|s| compass_search(factors, s, config))
        .collect()
}

/// Distinct local maxima found by the multistart, best first.
pub fn local_maxima(structure: &ProductStructure, config: &SolverConfig) -> Result<Vec<LocalMaximum>> {
    config.validate()?;
    let mut runs = run_multistart(structure, config);
    runs.sort_by(|a, b| b.value.total_cmp(&a.value).then_with(|| lexicographic(&a.z, &b.z)));
    let mut out: Vec<LocalMaximum> = Vec::new();
    for run in runs {
        let near = out.iter_mut().find(|m| {
            m.z.iter().zip(&run.z).all(|(a, b)| (a - b).abs() <= CLUSTER_RADIUS)
        });
        match near {
            Some(m) => m.hits += 1,
            None => out.push(LocalMaximum {
                z: run.z,
                value: run.value,
                hits: 1,
            }),
        }
    }
    Ok(out)
}

/// Global maximum of the objective for `structure`.
///
/// Single-factor structures use the closed form. Otherwise every start is
/// refined by a compass search; among results within `objective_tolerance`
/// of the best, the lexicographically smallest `z` is reported.
pub fn solve_bound(structure: &ProductStructure, config: &SolverConfig) -> Result<BoundResult> {
    config.validate()?;
    if structure.rank() == 1 {
        let f = structure.factors()[0];
        let argmax = if f.is_quantum() { f.diagonal_point() } else { f.z_min() };
        return Ok(BoundResult {
            structure: structure.clone(),
            asp: f.optimal_asp(),
            argmax: vec![argmax],
            starts_used: 0,
            status: SolveStatus::Converged,
        });
    }

    let runs = run_multistart(structure, config);
    let starts_used = runs.len();
    let best = runs.iter().map(|r| r.value).fold(f64::NEG_INFINITY, f64::max);
    let chosen = runs
        .iter()
        .filter(|r| r.value >= best - config.objective_tolerance)
        .min_by(|a, b| lexicographic(&a.z, &b.z))
        .expect("at least one start");
    Ok(BoundResult {
        structure: structure.clone(),
        asp: eval(structure.factors(), &chosen.z),
        argmax: chosen.z.clone(),
        starts_used,
        status: if chosen.converged {
            SolveStatus::Converged
        } else {
            SolveStatus::MaxIterations
        },
    })
}

/// Orders results by ASP (descending), ties by structure enumeration order.
pub fn sort_results(results: &mut [BoundResult]) {
    results.sort_by(|a, b| b.asp.total_cmp(&a.asp).then_with(|| a.structure.cmp(&b.structure)));
}

/// Bounds for every structure of `d`, highest ASP first.
pub fn bound_table(d: u64, filter: Filter, config: &SolverConfig) -> Result<Vec<BoundResult>> {
    config.validate()?;
    let structures = enumerate_structures(d, filter)?;
    solve_many(&structures, config)
}

/// Bounds for an explicit list of structures, highest ASP first.
pub fn solve_many(structures: &[ProductStructure], config: &SolverConfig) -> Result<Vec<BoundResult>> {
    let mut results = structures
        .par_iter()
        .map(|s| solve_bound(s, config))
        .collect::<Result<Vec<_>>>()?;
    sort_results(&mut results);
    Ok(results)
}
