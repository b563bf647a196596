//! Gamut dimension witnesses built from 2-dit quantum random access codes.
//!
//! For a total dimension `d`, every way of splitting the communicated system
//! into smaller quantum or classical pieces has its own optimal average
//! success probability (ASP). Observing an ASP above all of them certifies an
//! irreducible `d`-dimensional quantum system.
//!
//! The crate is organised around that pipeline:
//!
//! * [`structure`] enumerates and parses product structures such as `Q512*Q2`.
//! * [`tradeoff`] holds the quantum and classical trade-off functions.
//! * [`solver`] maximises the parallel-QRAC objective for a structure.
//! * [`mub`] builds the `+-1` mutually unbiased bases for `d = 4^k` and the
//!   optimal encoded states.
//! * [`sim`] runs the single-detector experiment with a Poissonian source.
//! * [`certify`] turns click tallies into an ASP estimate and a verdict.
//! * [`oracles`] are brute-force cross-checks for the closed forms.
//! * [`cli`] backs the `gdw` binary.

pub mod certify;
pub mod cli;
mod error;
pub mod mub;
pub mod oracles;
pub mod rng;
pub mod sim;
pub mod solver;
pub mod structure;
pub mod tradeoff;

pub use certify::{certify, estimate_asp, ingest_click_log, CertificationReport, Verdict};
pub use error::{Error, Result};
pub use mub::{build_mub, Basis, EncodedState, MubPair};
pub use sim::{simulate, ClickTally, SimConfig};
pub use solver::{bound_table, objective, solve_bound, BoundResult, SolveStatus, SolverConfig};
pub use structure::{enumerate_structures, Factor, Filter, Kind, ProductStructure};
pub use tradeoff::{optimal_asp_single, tradeoff_c, tradeoff_fixed_point, tradeoff_q};
