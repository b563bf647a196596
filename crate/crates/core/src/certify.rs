//! From click counts to an irreducibility verdict.
//!
//! The ASP estimate is `p = D1 / (D1 + D2)`. Its error bar propagates
//! independent Poisson errors `sqrt(D1)`, `sqrt(D2)` through the ratio to
//! first order, which gives `sqrt(D1 D2 / (D1 + D2)) / (D1 + D2)`. Each bound
//! is then scored by `z = (p - bound) / sigma`.

use std::collections::HashSet;
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sim::{ClickTally, LOG_HEADER};
use crate::solver::BoundResult;
use crate::structure::{enumerate_structures, Filter, ProductStructure};

pub const DEFAULT_SIGMA_THRESHOLD: f64 = 3.0;

/// Recorded in every report.
pub const ERROR_MODEL: &str =
    "first-order propagation of independent Poisson errors on D1 and D2";

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub p_hat: f64,
    pub sigma: f64,
}

pub fn estimate_from_counts(d1: u64, d2: u64) -> Result<Estimate> {
    let total = d1 + d2;
    if total == 0 {
        return Err(Error::NoClicks);
    }
    let (a, b, n) = (d1 as f64, d2 as f64, total as f64);
    Ok(Estimate {
        p_hat: a / n,
        sigma: (a * b / n).sqrt() / n,
    })
}

pub fn estimate_asp(tally: &ClickTally) -> Result<Estimate> {
    estimate_from_counts(tally.d1, tally.d2)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub structure: ProductStructure,
    pub asp: f64,
    pub z_score: f64,
    pub violated: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Verdict {
    /// Every structure other than `Q_d` is violated.
    IrreducibleQuantum(u64),
    /// Only these structures are violated.
    ViolatesOnly(Vec<ProductStructure>),
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertificationReport {
    pub dim: u64,
    pub p_hat: f64,
    pub sigma: f64,
    pub sigma_threshold: f64,
    /// Scores against every bound except `Q_d`, highest bound first.
    pub bounds: Vec<BoundCheck>,
    pub verdict: Verdict,
    pub error_model: String,
    /// False when the bounds were an explicit subset of the structures of `dim`.
    pub covers_all_structures: bool,
}

impl CertificationReport {
    pub fn is_certified(&self) -> bool {
        matches!(self.verdict, Verdict::IrreducibleQuantum(_))
    }

    /// Check against a given structure, if it was among the bounds.
    pub fn check(&self, structure: &ProductStructure) -> Option<&BoundCheck> {
        self.bounds.iter().find(|b| &b.structure == structure)
    }
}

fn z_score(p_hat: f64, asp: f64, sigma: f64) -> f64 {
    let gap = p_hat - asp;
    if sigma > 0.0 {
        gap / sigma
    } else if gap > 0.0 {
        f64::INFINITY
    } else if gap < 0.0 {
        f64::NEG_INFINITY
    } else {
        0.0
    }
}

/// Scores an estimate against `bounds` for dimension `d`.
pub fn certify_estimate(
    estimate: Estimate,
    d: u64,
    bounds: &[BoundResult],
    sigma_threshold: f64,
) -> Result<CertificationReport> {
    if bounds.is_empty() {
        return Err(Error::EmptyBounds);
    }
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    if let Some(b) = bounds.iter().find(|b| b.structure.total_dim() != d) {
        return Err(Error::Config(format!(
            "bound {} has dimension {}, expected {d}",
            b.structure,
            b.structure.total_dim()
        )));
    }
    let mut checks: Vec<BoundCheck> = bounds
        .iter()
        .filter(|b| !b.structure.is_irreducible_quantum())
        .map(|b| {
            let z = z_score(estimate.p_hat, b.asp, estimate.sigma);
            BoundCheck {
                structure: b.structure.clone(),
                asp: b.asp,
                z_score: z,
                violated: z >= sigma_threshold,
            }
        })
        .collect();
    checks.sort_by(|a, b| b.asp.total_cmp(&a.asp).then_with(|| a.structure.cmp(&b.structure)));

    let violated: Vec<ProductStructure> = checks
        .iter()
        .filter(|c| c.violated)
        .map(|c| c.structure.clone())
        .collect();
    let verdict = if checks.is_empty() {
        Verdict::Inconclusive
    } else if violated.len() == checks.len() {
        Verdict::IrreducibleQuantum(d)
    } else if violated.is_empty() {
        Verdict::Inconclusive
    } else {
        Verdict::ViolatesOnly(violated)
    };
    Ok(CertificationReport {
        dim: d,
        p_hat: estimate.p_hat,
        sigma: estimate.sigma,
        sigma_threshold,
        bounds: checks,
        verdict,
        error_model: ERROR_MODEL.to_string(),
        covers_all_structures: covers_all(d, bounds)?,
    })
}

fn covers_all(d: u64, bounds: &[BoundResult]) -> Result<bool> {
    let present: HashSet<&ProductStructure> = bounds.iter().map(|b| &b.structure).collect();
    Ok(enumerate_structures(d, Filter::All)?
        .iter()
        .all(|s| present.contains(s)))
}

pub fn certify(
    tally: &ClickTally,
    d: u64,
    bounds: &[BoundResult],
    sigma_threshold: f64,
) -> Result<CertificationReport> {
    certify_estimate(estimate_asp(tally)?, d, bounds, sigma_threshold)
}

/// Tallies a click log read from `path`. With `dim`, indices are range-checked.
pub fn ingest_click_log(path: impl AsRef<Path>, dim: Option<u64>) -> Result<ClickTally> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|source| Error::File {
        path: path.to_path_buf(),
        source,
    })?;
    read_click_log(file, dim)
}

/// Streams a click log (`round,x1,x2,y,j,click`, 1-based indices).
pub fn read_click_log<R: Read>(reader: R, dim: Option<u64>) -> Result<ClickTally> {
    let mut lines = BufReader::new(reader).lines();
    let err = |line: usize, message: String| Error::ClickLog { line, message };
    match lines.next().transpose()? {
        Some(header) if header.trim() == LOG_HEADER => {}
        Some(_) => return Err(err(1, format!("expected header `{LOG_HEADER}`"))),
        None => return Err(err(1, "missing header".into())),
    }
    let mut tally = ClickTally::default();
    for (i, line) in lines.enumerate() {
        let lineno = i + 2;
        let line = line?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 6 {
            return Err(err(lineno, format!("expected 6 fields, found {}", fields.len())));
        }
        let num = |idx: usize, name: &str| -> Result<u64> {
            fields[idx]
                .trim()
                .parse::<u64>()
                .map_err(|_| err(lineno, format!("{name} is not a non-negative integer: {:?}", fields[idx])))
        };
        let index = |idx: usize, name: &str| -> Result<u64> {
            let v = num(idx, name)?;
            let max = dim.unwrap_or(u64::MAX);
            if v == 0 || v > max {
                return Err(err(lineno, format!("{name} = {v} is outside 1..={max}")));
            }
            Ok(v)
        };
        num(0, "round")?;
        let x1 = index(1, "x1")?;
        let x2 = index(2, "x2")?;
        let y = num(3, "y")?;
        let j = index(4, "j")?;
        let click = match fields[5].trim() {
            "0" => false,
            "1" => true,
            other => return Err(err(lineno, format!("click must be 0 or 1, got {other:?}"))),
        };
        let target = match y {
            1 => x1,
            2 => x2,
            _ => return Err(err(lineno, format!("y must be 1 or 2, got {y}"))),
        };
        tally.record(target == j, click);
    }
    Ok(tally)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::solver::SolveStatus;

    fn bound(s: &str, asp: f64) -> BoundResult {
        let structure: ProductStructure = s.parse().unwrap();
        BoundResult {
            argmax: vec![0.5; structure.rank()],
            structure,
            asp,
            starts_used: 0,
            status: SolveStatus::Converged,
        }
    }

    #[test]
    fn estimates() {
        let e = estimate_from_counts(50, 50).unwrap();
        assert_eq!(e.p_hat, 0.5);
        assert!((e.sigma - 0.05).abs() < 1e-15);
        assert_eq!(estimate_from_counts(0, 17).unwrap(), Estimate { p_hat: 0.0, sigma: 0.0 });
        assert_eq!(estimate_from_counts(17, 0).unwrap(), Estimate { p_hat: 1.0, sigma: 0.0 });
        assert!(matches!(estimate_from_counts(0, 0), Err(Error::NoClicks)));
    }

    #[test]
    fn headline_numbers_certify_at_one_sigma() {
        let bounds = vec![
            bound("Q1024", 0.515625),
            bound("Q512*Q2", 0.500980),
            bound("Q512*C2", 0.500973),
            bound("Q32*Q32", 0.500521),
            bound("C1024", 0.500488),
        ];
        let est = Estimate { p_hat: 0.515, sigma: 0.008 };
        let r = certify_estimate(est, 1024, &bounds, 1.0).unwrap();
        let top = &r.bounds[0];
        assert_eq!(top.structure.to_string(), "Q512*Q2");
        assert!((top.z_score - 1.7525).abs() < 1e-9);
        assert_eq!(r.verdict, Verdict::IrreducibleQuantum(1024));
        assert_eq!(r.bounds.len(), 4);
        assert!(!r.covers_all_structures);

        let at_bound = Estimate { p_hat: 0.500980, sigma: 0.001 };
        let r = certify_estimate(at_bound, 1024, &bounds, 1.0).unwrap();
        assert!(!r.bounds[0].violated);
        assert!(!r.is_certified());
    }

    #[test]
    fn zero_sigma_scores() {
        assert_eq!(z_score(0.6, 0.5, 0.0), f64::INFINITY);
        assert_eq!(z_score(0.4, 0.5, 0.0), f64::NEG_INFINITY);
        assert_eq!(z_score(0.5, 0.5, 0.0), 0.0);
    }

    #[test]
    fn rejects_empty_or_mismatched_bounds() {
        let est = Estimate { p_hat: 0.7, sigma: 0.01 };
        assert!(matches!(certify_estimate(est, 4, &[], 3.0), Err(Error::EmptyBounds)));
        assert!(certify_estimate(est, 4, &[bound("Q3", 0.7)], 3.0).is_err());
    }

    #[test]
    fn partial_violation_lists_structures() {
        let bounds = vec![bound("Q4", 0.75), bound("Q2*Q2", 0.7285), bound("C4", 0.625)];
        let r = certify_estimate(Estimate { p_hat: 0.70, sigma: 0.01 }, 4, &bounds, 3.0).unwrap();
        assert_eq!(r.verdict, Verdict::ViolatesOnly(vec!["C4".parse().unwrap()]));
        let r = certify_estimate(Estimate { p_hat: 0.60, sigma: 0.01 }, 4, &bounds, 3.0).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn reads_click_logs() {
        let log = "round,x1,x2,y,j,click\n1,2,3,1,2,1\n2,1,1,2,4,0\n3,4,4,1,1,0\n4,3,2,2,1,0\n";
        let t = read_click_log(log.as_bytes(), Some(4)).unwrap();
        assert_eq!(t, ClickTally { x1: 1, x2: 3, d1: 1, d2: 0 });

        let empty = read_click_log("round,x1,x2,y,j,click\n".as_bytes(), Some(4)).unwrap();
        assert_eq!(empty, ClickTally::default());
        assert!(matches!(estimate_asp(&empty), Err(Error::NoClicks)));
    }

    #[test]
    fn click_log_errors_name_the_line() {
        let cases = [
            ("", 1),
            ("x,y\n", 1),
            ("round,x1,x2,y,j,click\n1,2,3,1,2,1\n2,5,1,1,1,0\n", 3),
            ("round,x1,x2,y,j,click\n1,2,3,3,2,1\n", 2),
            ("round,x1,x2,y,j,click\n1,2,3,1,2,2\n", 2),
            ("round,x1,x2,y,j,click\n1,2,3,1\n", 2),
            ("round,x1,x2,y,j,click\n1,0,3,1,2,1\n", 2),
        ];
        for (text, line) in cases {
            match read_click_log(text.as_bytes(), Some(4)) {
                Err(Error::ClickLog { line: l, .. }) => assert_eq!(l, line, "{text:?}"),
                other => panic!("{text:?}: {other:?}"),
            }
        }
    }
}
