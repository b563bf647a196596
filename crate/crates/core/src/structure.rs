//! Product structures: factorizations of a dimension into labeled quantum or
//! classical subsystems.
//!
//! A structure is rendered as `Q512*C2`. Factors are kept in canonical order
//! (dimension descending, quantum before classical), so two structures are
//! equal exactly when they are equal as labeled multisets.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Kind {
    Quantum,
    Classical,
}

impl Kind {
    pub fn symbol(self) -> char {
        match self {
            Kind::Quantum => 'Q',
            Kind::Classical => 'C',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Factor {
    dim: u64,
    kind: Kind,
}

impl Factor {
    pub fn new(dim: u64, kind: Kind) -> Result<Self> {
        if dim < 2 {
            return Err(Error::InvalidDimension(dim));
        }
        Ok(Self { dim, kind })
    }

    pub fn quantum(dim: u64) -> Result<Self> {
        Self::new(dim, Kind::Quantum)
    }

    pub fn classical(dim: u64) -> Result<Self> {
        Self::new(dim, Kind::Classical)
    }

    pub fn dim(&self) -> u64 {
        self.dim
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn is_quantum(&self) -> bool {
        self.kind == Kind::Quantum
    }
}

/// Canonical factor order: larger dimension first, then quantum before classical.
impl Ord for Factor {
    fn cmp(&self, other: &Self) -> Ordering {
        other.dim.cmp(&self.dim).then(self.kind.cmp(&other.kind))
    }
}

impl PartialOrd for Factor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.kind.symbol(), self.dim)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct ProductStructure {
    factors: Vec<Factor>,
    total_dim: u64,
}

impl ProductStructure {
    /// Builds a structure from factors in any order.
    pub fn new(mut factors: Vec<Factor>) -> Result<Self> {
        if factors.is_empty() {
            return Err(Error::Parse {
                offset: 0,
                message: "a structure needs at least one factor".into(),
            });
        }
        let mut total_dim: u64 = 1;
        for f in &factors {
            total_dim = total_dim.checked_mul(f.dim).ok_or_else(|| {
                Error::Config(format!("product of factor dimensions overflows at {f}"))
            })?;
        }
        factors.sort();
        Ok(Self { factors, total_dim })
    }

    /// The single-factor structure `Q_d` or `C_d`.
    pub fn single(dim: u64, kind: Kind) -> Result<Self> {
        Self::new(vec![Factor::new(dim, kind)?])
    }

    pub fn factors(&self) -> &[Factor] {
        &self.factors
    }

    pub fn total_dim(&self) -> u64 {
        self.total_dim
    }

    /// Number of factors.
    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn is_fully_quantum(&self) -> bool {
        self.factors.iter().all(Factor::is_quantum)
    }

    /// True for the irreducible quantum structure `Q_d`.
    pub fn is_irreducible_quantum(&self) -> bool {
        self.rank() == 1 && self.factors[0].is_quantum()
    }

    pub fn render(&self) -> String {
        self.to_string()
    }
}

impl Ord for ProductStructure {
    /// Enumeration order: fewer factors first, then dimension vectors in
    /// descending lexicographic order, then kinds with quantum first.
    fn cmp(&self, other: &Self) -> Ordering {
        self.rank()
            .cmp(&other.rank())
            .then_with(|| {
                let a = self.factors.iter().map(|f| f.dim);
                let b = other.factors.iter().map(|f| f.dim);
                b.cmp(a)
            })
            .then_with(|| {
                let a = self.factors.iter().map(|f| f.kind);
                let b = other.factors.iter().map(|f| f.kind);
                a.cmp(b)
            })
    }
}

impl PartialOrd for ProductStructure {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProductStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, factor) in self.factors.iter().enumerate() {
            if i > 0 {
                f.write_str("*")?;
            }
            write!(f, "{factor}")?;
        }
        Ok(())
    }
}

impl FromStr for ProductStructure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_structure(s)
    }
}

impl TryFrom<String> for ProductStructure {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        parse_structure(&s)
    }
}

impl From<ProductStructure> for String {
    fn from(s: ProductStructure) -> String {
        s.to_string()
    }
}

/// Parses `factor ("*" factor)*` with `factor = ("Q" | "C") integer`.
pub fn parse_structure(text: &str) -> Result<ProductStructure> {
    let err = |offset: usize, message: &str| Error::Parse {
        offset,
        message: message.to_string(),
    };
    let bytes = text.as_bytes();
    let mut factors = Vec::new();
    let mut pos = 0;
    loop {
        let kind = match bytes.get(pos) {
            Some(b'Q') => Kind::Quantum,
            Some(b'C') => Kind::Classical,
            Some(_) => return Err(err(pos, "expected 'Q' or 'C'")),
            None => return Err(err(pos, "unexpected end of input, expected a factor")),
        };
        pos += 1;
        let digits_start = pos;
        while pos < bytes.len() && bytes[pos].is_ascii_digit() {
            pos += 1;
        }
        if pos == digits_start {
            return Err(err(pos, "expected a dimension"));
        }
        let dim: u64 = text[digits_start..pos]
            .parse()
            .map_err(|_| err(digits_start, "dimension does not fit in 64 bits"))?;
        if dim < 2 {
            return Err(err(digits_start, "factor dimension must be at least 2"));
        }
        factors.push(Factor { dim, kind });
        match bytes.get(pos) {
            None => break,
            Some(b'*') => pos += 1,
            Some(_) => return Err(err(pos, "expected '*' or end of input")),
        }
    }
    ProductStructure::new(factors).map_err(|e| match e {
        Error::Config(m) => err(0, &m),
        other => other,
    })
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum Filter {
    #[default]
    All,
    QuantumOnly,
}

/// Multiplicative partitions of `n` into factors `>= 2`, each partition in
/// non-increasing order.
pub fn multiplicative_partitions(n: u64) -> Vec<Vec<u64>> {
    fn descend(n: u64, max: u64, prefix: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if n == 1 {
            out.push(prefix.clone());
            return;
        }
        let mut divisors: Vec<u64> = Vec::new();
        let mut i = 2;
        while i * i <= n {
            if n.is_multiple_of(i) {
                divisors.push(i);
                divisors.push(n / i);
            }
            i += 1;
        }
        divisors.push(n);
        divisors.sort_unstable_by(|a, b| b.cmp(a));
        divisors.dedup();
        for f in divisors.into_iter().filter(|&f| f <= max) {
            prefix.push(f);
            descend(n / f, f, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n >= 2 {
        descend(n, n, &mut Vec::new(), &mut out);
    }
    out
}

/// Every product structure of `d`, sorted in enumeration order.
pub fn enumerate_structures(d: u64, filter: Filter) -> Result<Vec<ProductStructure>> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let mut out = Vec::new();
    for dims in multiplicative_partitions(d) {
        // Runs of equal dimensions; a labeling is a count of quantum factors per run.
        let mut runs: Vec<(u64, usize)> = Vec::new();
        for &dim in &dims {
            match runs.last_mut() {
                Some((last, n)) if *last == dim => *n += 1,
                _ => runs.push((dim, 1)),
            }
        }
        let mut labelings: Vec<Vec<Factor>> = vec![Vec::new()];
        for &(dim, len) in &runs {
            let quantum_counts: Vec<usize> = match filter {
                Filter::All => (0..=len).rev().collect(),
                Filter::QuantumOnly => vec![len],
            };
            let mut next = Vec::with_capacity(labelings.len() * quantum_counts.len());
            for prefix in &labelings {
                for &nq in &quantum_counts {
                    let mut factors = prefix.clone();
                    factors.extend((0..nq).map(|_| Factor { dim, kind: Kind::Quantum }));
                    factors.extend((nq..len).map(|_| Factor { dim, kind: Kind::Classical }));
                    next.push(factors);
                }
            }
            labelings = next;
        }
        for factors in labelings {
            out.push(ProductStructure::new(factors)?);
        }
    }
    out.sort();
    Ok(out)
}
