//! Real `+-1` mutually unbiased bases for `d = 4^k` and the QRAC encoder.
//!
//! The two 4x4 sign matrices below are mutually unbiased (every cross column
//! product is `+-2`), and so are their `k`-fold tensor powers: cross products
//! are `+-2^k = +-sqrt(d)`. Columns are basis states; the implicit
//! normalisation `1/sqrt(d)` is never stored, so every orthogonality and
//! unbiasedness check is an exact integer computation on packed sign bits.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::StreamFamily;

/// Largest supported tensor power (`d = 16384`).
pub const MAX_K: u32 = 7;

const FIRST_4: [[i8; 4]; 4] = [[1, 1, 1, 1], [1, -1, 1, -1], [1, 1, -1, -1], [1, -1, -1, 1]];
const SECOND_4: [[i8; 4]; 4] = [[1, -1, 1, 1], [1, -1, -1, -1], [1, 1, 1, -1], [-1, -1, 1, -1]];

/// Square `+-1` matrix stored column-major, one bit per entry (set = `-1`).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SignMatrix {
    dim: usize,
    words: usize,
    bits: Vec<u64>,
}

impl SignMatrix {
    fn zeros(dim: usize) -> Self {
        let words = dim.div_ceil(64);
        Self {
            dim,
            words,
            bits: vec![0; words * dim],
        }
    }

    pub fn from_rows<const N: usize>(rows: &[[i8; N]; N]) -> Self {
        let mut m = Self::zeros(N);
        for (r, row) in rows.iter().enumerate() {
            for (c, &v) in row.iter().enumerate() {
                assert!(v == 1 || v == -1, "sign matrices hold only +-1");
                if v < 0 {
                    m.bits[c * m.words + r / 64] |= 1 << (r % 64);
                }
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    fn column(&self, c: usize) -> &[u64] {
        &self.bits[c * self.words..(c + 1) * self.words]
    }

    pub fn entry(&self, row: usize, col: usize) -> i8 {
        if self.column(col)[row / 64] >> (row % 64) & 1 == 1 {
            -1
        } else {
            1
        }
    }

    pub fn row(&self, row: usize) -> Vec<i8> {
        (0..self.dim).map(|c| self.entry(row, c)).collect()
    }

    /// Integer dot product of column `i` of `self` with column `j` of `other`.
    pub fn column_dot(&self, i: usize, other: &SignMatrix, j: usize) -> i64 {
        debug_assert_eq!(self.dim, other.dim);
        let differing: u32 = self
            .column(i)
            .iter()
            .zip(other.column(j))
            .map(|(a, b)| (a ^ b).count_ones())
            .sum();
        self.dim as i64 - 2 * differing as i64
    }

    /// True when distinct columns are orthogonal and every column has norm^2 `dim`.
    pub fn is_orthogonal(&self) -> bool {
        let n = self.dim as i64;
        (0..self.dim).all(|i| {
            self.column_dot(i, self, i) == n && (i + 1..self.dim).all(|j| self.column_dot(i, self, j) == 0)
        })
    }

    /// `k`-fold tensor power of a 4x4 sign matrix, digits of the row and
    /// column index read most significant first.
    fn tensor_power(base: &[[i8; 4]; 4], k: u32) -> Self {
        let dim = 4usize.pow(k);
        let mut m = Self::zeros(dim);
        let mut signs = vec![0u8; dim];
        let mut next = vec![0u8; dim];
        for col in 0..dim {
            let mut len = 1;
            signs[0] = 0;
            for level in (0..k).rev() {
                let digit = (col >> (2 * level)) & 3;
                for r in 0..len {
                    for s in 0..4 {
                        next[r * 4 + s] = signs[r] ^ u8::from(base[s][digit] < 0);
                    }
                }
                len *= 4;
                std::mem::swap(&mut signs, &mut next);
            }
            let column = &mut m.bits[col * m.words..(col + 1) * m.words];
            for (r, &neg) in signs.iter().enumerate() {
                if neg == 1 {
                    column[r / 64] |= 1 << (r % 64);
                }
            }
        }
        m
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    First,
    Second,
}

impl Basis {
    /// 1 or 2, as in the click log.
    pub fn index(self) -> u8 {
        match self {
            Basis::First => 1,
            Basis::Second => 2,
        }
    }

    pub fn from_index(y: u64) -> Option<Self> {
        match y {
            1 => Some(Basis::First),
            2 => Some(Basis::Second),
            _ => None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MubPair {
    k: u32,
    dim: usize,
    basis1: SignMatrix,
    basis2: SignMatrix,
}

/// The two `4^k`-dimensional sign matrices: tensor powers of the 4x4 pair.
pub fn build_mub(k: u32) -> Result<MubPair> {
    if !(1..=MAX_K).contains(&k) {
        return Err(Error::Domain {
            what: "k",
            value: k as f64,
            lo: 1.0,
            hi: MAX_K as f64,
        });
    }
    Ok(MubPair {
        k,
        dim: 4usize.pow(k),
        basis1: SignMatrix::tensor_power(&FIRST_4, k),
        basis2: SignMatrix::tensor_power(&SECOND_4, k),
    })
}

impl MubPair {
    pub fn k(&self) -> u32 {
        self.k
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn basis(&self, y: Basis) -> &SignMatrix {
        match y {
            Basis::First => &self.basis1,
            Basis::Second => &self.basis2,
        }
    }

    /// `sqrt(dim) = 2^k`, the magnitude every cross product must have.
    pub fn unbiased_magnitude(&self) -> i64 {
        1 << self.k
    }

    /// Integer product of basis-1 column `i` with basis-2 column `j`.
    pub fn cross_dot(&self, i: usize, j: usize) -> i64 {
        self.basis1.column_dot(i, &self.basis2, j)
    }

    fn check_index(&self, index: usize) -> Result<()> {
        if index >= self.dim {
            return Err(Error::IndexOutOfRange { index, dim: self.dim });
        }
        Ok(())
    }

    /// Every cross product checked.
    pub fn is_unbiased_exhaustive(&self) -> bool {
        let m = self.unbiased_magnitude();
        (0..self.dim).all(|i| (0..self.dim).all(|j| self.cross_dot(i, j).abs() == m))
    }

    /// `samples` random column pairs per check, for orthogonality within
    /// each basis and unbiasedness across them.
    pub fn is_unbiased_sampled(&self, samples: usize, seed: u64) -> bool {
        let mut rng = StreamFamily::new(seed).stream(0);
        let m = self.unbiased_magnitude();
        let n = self.dim as i64;
        (0..samples).all(|_| {
            let i = rng.random_range(0..self.dim);
            let j = rng.random_range(0..self.dim);
            let within = |b: &SignMatrix| {
                let dot = b.column_dot(i, b, j);
                if i == j {
                    dot == n
                } else {
                    dot == 0
                }
            };
            self.cross_dot(i, j).abs() == m && within(&self.basis1) && within(&self.basis2)
        })
    }

    /// The 4x4 factors are an exact unbiased pair and sampled entries equal
    /// the product of the factor entries picked out by the index digits.
    pub fn has_tensor_structure(&self, samples: usize, seed: u64) -> bool {
        let (f1, f2) = base_pair();
        let factors_ok = f1.is_orthogonal()
            && f2.is_orthogonal()
            && (0..4).all(|i| (0..4).all(|j| f1.column_dot(i, &f2, j).abs() == 2));
        if !factors_ok {
            return false;
        }
        let mut rng = StreamFamily::new(seed).stream(1);
        (0..samples).all(|_| {
            let r = rng.random_range(0..self.dim);
            let c = rng.random_range(0..self.dim);
            let expected = |base: &[[i8; 4]; 4]| -> i8 {
                (0..self.k)
                    .map(|level| base[(r >> (2 * level)) & 3][(c >> (2 * level)) & 3])
                    .product()
            };
            self.basis1.entry(r, c) == expected(&FIRST_4) && self.basis2.entry(r, c) == expected(&SECOND_4)
        })
    }

    /// Writes one basis in `pm1` form: a header line, then one row of `+`/`-` per matrix row.
    pub fn write_pm1<W: Write>(&self, y: Basis, mut out: W) -> Result<()> {
        writeln!(out, "# mub d={} basis={} k={}", self.dim, y.index(), self.k)?;
        let b = self.basis(y);
        let mut line = String::with_capacity(self.dim + 1);
        for r in 0..self.dim {
            line.clear();
            line.extend((0..self.dim).map(|c| if b.entry(r, c) > 0 { '+' } else { '-' }));
            line.push('\n');
            out.write_all(line.as_bytes())?;
        }
        Ok(())
    }

    /// Writes one basis as comma-separated `1`/`-1` rows.
    pub fn write_csv<W: Write>(&self, y: Basis, mut out: W) -> Result<()> {
        let b = self.basis(y);
        for r in 0..self.dim {
            let row: Vec<&str> = (0..self.dim)
                .map(|c| if b.entry(r, c) > 0 { "1" } else { "-1" })
                .collect();
            writeln!(out, "{}", row.join(","))?;
        }
        Ok(())
    }

    /// `|<m_j^y | psi>|^2` for `psi = w1 m_{x1}^1 + w2 m_{x2}^2`, from integer
    /// column products.
    pub(crate) fn overlap_raw(&self, y: Basis, j: usize, x1: usize, x2: usize, w1: f64, w2: f64) -> f64 {
        let b = self.basis(y);
        let with_first = b.column_dot(j, &self.basis1, x1) as f64;
        let with_second = b.column_dot(j, &self.basis2, x2) as f64;
        let amp = (w1 * with_first + w2 * with_second) / self.dim as f64;
        amp * amp
    }

    /// Weights `(w1, w2)` of the normalised state `t m_{x1}^1 + sgn (1-t) m_{x2}^2`.
    pub(crate) fn curve_weights(&self, x1: usize, x2: usize, t: f64) -> (f64, f64) {
        let g = self.cross_dot(x1, x2);
        let sign = if g < 0 { -1.0 } else { 1.0 };
        let overlap = g.abs() as f64 / self.dim as f64;
        let norm2 = t * t + (1.0 - t) * (1.0 - t) + 2.0 * t * (1.0 - t) * overlap;
        let norm = norm2.sqrt();
        (t / norm, sign * (1.0 - t) / norm)
    }
}

/// The 4x4 building blocks.
pub fn base_pair() -> (SignMatrix, SignMatrix) {
    (SignMatrix::from_rows(&FIRST_4), SignMatrix::from_rows(&SECOND_4))
}

/// A state in the plane of `m_{x1}^1` and `m_{x2}^2`.
///
/// Indices are 0-based. `weight1`/`weight2` are the coefficients on the two
/// unit basis vectors; `amplitudes` is the same vector in the standard basis.
#[derive(Clone, Debug, PartialEq)]
pub struct EncodedState {
    pub x1: usize,
    pub x2: usize,
    pub weight1: f64,
    pub weight2: f64,
    pub amplitudes: Vec<f64>,
}

impl EncodedState {
    fn new(mubs: &MubPair, x1: usize, x2: usize, weight1: f64, weight2: f64) -> Self {
        let scale = 1.0 / (mubs.dim as f64).sqrt();
        let amplitudes = (0..mubs.dim)
            .map(|i| {
                let a = f64::from(mubs.basis1.entry(i, x1));
                let b = f64::from(mubs.basis2.entry(i, x2));
                (weight1 * a + weight2 * b) * scale
            })
            .collect();
        Self {
            x1,
            x2,
            weight1,
            weight2,
            amplitudes,
        }
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}

/// Equal superposition of `m_{x1}^1` and `m_{x2}^2`, with the sign of their
/// overlap folded in so the cross term is positive.
pub fn encode_optimal(mubs: &MubPair, x1: usize, x2: usize) -> Result<EncodedState> {
    mubs.check_index(x1)?;
    mubs.check_index(x2)?;
    let (w1, w2) = mubs.curve_weights(x1, x2, 0.5);
    Ok(EncodedState::new(mubs, x1, x2, w1, w2))
}

/// The state `t m_{x1}^1 + sgn (1-t) m_{x2}^2`, normalised. Its guessing
/// probabilities for the two bases lie on the quantum trade-off curve.
pub fn curve_state(mubs: &MubPair, x1: usize, x2: usize, t: f64) -> Result<EncodedState> {
    mubs.check_index(x1)?;
    mubs.check_index(x2)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::Domain {
            what: "t",
            value: t,
            lo: 0.0,
            hi: 1.0,
        });
    }
    let (w1, w2) = mubs.curve_weights(x1, x2, t);
    Ok(EncodedState::new(mubs, x1, x2, w1, w2))
}

/// Probability `|<m_j^y | state>|^2` of projecting onto basis vector `j` of basis `y`.
pub fn measurement_overlap(mubs: &MubPair, y: Basis, j: usize, state: &EncodedState) -> Result<f64> {
    mubs.check_index(j)?;
    mubs.check_index(state.x1)?;
    mubs.check_index(state.x2)?;
    Ok(mubs.overlap_raw(y, j, state.x1, state.x2, state.weight1, state.weight2))
}
