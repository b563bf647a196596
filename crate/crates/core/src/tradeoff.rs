//! Trade-off functions for the 2-dit random access code.
//!
//! `M_d(z)` is the best probability of guessing the second dit when the first
//! is guessed with probability `z`. Both are defined on `[1/d, 1]`; the
//! quantum one is a concave arc from `(1/d, 1)` to `(1, 1/d)`, the classical
//! one the straight chord between the same endpoints.

use crate::error::{Error, Result};
use crate::structure::{Factor, Kind};

/// Inputs this far outside `[1/d, 1]` are clamped instead of rejected.
pub const DOMAIN_SLOP: f64 = 1e-12;

fn check_dim(d: u64) -> Result<f64> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    Ok(d as f64)
}

fn check_domain(d: f64, z: f64) -> Result<f64> {
    let lo = 1.0 / d;
    if z.is_nan() || z < lo - DOMAIN_SLOP || z > 1.0 + DOMAIN_SLOP {
        return Err(Error::Domain {
            what: "z",
            value: z,
            lo,
            hi: 1.0,
        });
    }
    Ok(z.clamp(lo, 1.0))
}

/// Quantum trade-off, algebraic form
/// `1 - ((d-1)/d) (sqrt(z) - sqrt((1-z)/(d-1)))^2`.
pub fn tradeoff_q(d: u64, z: f64) -> Result<f64> {
    let df = check_dim(d)?;
    let z = check_domain(df, z)?;
    Ok(quantum_unchecked(df, z))
}

/// Quantum trade-off, angle form `cos^2(acos(1/sqrt d) - acos(sqrt z))`.
///
/// The arc cosines are evaluated as `atan2`, which stays accurate where
/// `acos` loses digits near an argument of 1.
pub fn tradeoff_q_trig(d: u64, z: f64) -> Result<f64> {
    let df = check_dim(d)?;
    let z = check_domain(df, z)?;
    let basis_angle = (df - 1.0).sqrt().atan2(1.0);
    let state_angle = (1.0 - z).sqrt().atan2(z.sqrt());
    let angle = basis_angle - state_angle;
    Ok(angle.cos().powi(2))
}

/// Classical trade-off `(d+1)/d - z`.
pub fn tradeoff_c(d: u64, z: f64) -> Result<f64> {
    let df = check_dim(d)?;
    let z = check_domain(df, z)?;
    Ok(classical_unchecked(df, z))
}

pub fn tradeoff(kind: Kind, d: u64, z: f64) -> Result<f64> {
    match kind {
        Kind::Quantum => tradeoff_q(d, z),
        Kind::Classical => tradeoff_c(d, z),
    }
}

#[inline]
pub(crate) fn quantum_unchecked(d: f64, z: f64) -> f64 {
    let gap = z.sqrt() - ((1.0 - z).max(0.0) / (d - 1.0)).sqrt();
    1.0 - (d - 1.0) / d * gap * gap
}

#[inline]
pub(crate) fn classical_unchecked(d: f64, z: f64) -> f64 {
    (d + 1.0) / d - z
}

/// Optimal single-system ASP: `(1 + 1/sqrt d)/2` quantum, `(1 + 1/d)/2` classical.
pub fn optimal_asp_single(d: u64, kind: Kind) -> Result<f64> {
    let df = check_dim(d)?;
    Ok(match kind {
        Kind::Quantum => 0.5 * (1.0 + 1.0 / df.sqrt()),
        Kind::Classical => 0.5 * (1.0 + 1.0 / df),
    })
}

/// The point where the quantum trade-off crosses the diagonal, `z = M_d(z)`.
pub fn tradeoff_fixed_point(d: u64) -> Result<f64> {
    optimal_asp_single(d, Kind::Quantum)
}

impl Factor {
    /// Trade-off function of this factor's kind and dimension.
    pub fn tradeoff(&self, z: f64) -> Result<f64> {
        tradeoff(self.kind(), self.dim(), z)
    }

    pub fn optimal_asp(&self) -> f64 {
        optimal_asp_single(self.dim(), self.kind()).expect("factor dimension is at least 2")
    }

    /// Lower edge `1/d` of the factor's z-box.
    pub fn z_min(&self) -> f64 {
        1.0 / self.dim() as f64
    }

    /// Diagonal point of the factor's trade-off, `z = M(z)`.
    pub fn diagonal_point(&self) -> f64 {
        let d = self.dim() as f64;
        match self.kind() {
            Kind::Quantum => 0.5 * (1.0 + 1.0 / d.sqrt()),
            Kind::Classical => 0.5 * (d + 1.0) / d,
        }
    }

    #[inline]
    pub(crate) fn tradeoff_unchecked(&self, z: f64) -> f64 {
        let d = self.dim() as f64;
        match self.kind() {
            Kind::Quantum => quantum_unchecked(d, z),
            Kind::Classical => classical_unchecked(d, z),
        }
    }
}

/// `n + 1` evenly spaced samples `(z, M(z))` over `[1/d, 1]`.
pub fn sample_curve(kind: Kind, d: u64, n: usize) -> Result<Vec<(f64, f64)>> {
    let df = check_dim(d)?;
    let lo = 1.0 / df;
    let n = n.max(1);
    (0..=n)
        .map(|i| {
            let z = if i == n { 1.0 } else { lo + (1.0 - lo) * i as f64 / n as f64 };
            tradeoff(kind, d, z).map(|m| (z, m))
        })
        .collect()
}
