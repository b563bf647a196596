//! Monte Carlo model of the single-detector QRAC experiment.
//!
//! Each round Alice draws dits `x1, x2`, Bob draws a basis `y` and a basis
//! element `j`, and the detector is set to project onto `m_j^y`. A weak
//! coherent pulse with mean photon number `mu` and overall efficiency `nu`
//! clicks with probability `1 - exp(-nu mu q)`, where `q` is the projection
//! probability of the encoded state. Rounds with `x_y = j` feed `(X1, D1)`,
//! the rest `(X2, D2)`, and `D1 / (D1 + D2)` estimates the ASP.

use std::io::Write;
use std::ops::{Add, AddAssign};

use rand::Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mub::{build_mub, Basis, MubPair};
use crate::rng::StreamFamily;
use crate::tradeoff::DOMAIN_SLOP;

/// Below this `nu * mu` the figure of merit is taken from its series.
pub const SERIES_CUTOFF: f64 = 1e-9;

/// Click-log CSV header.
pub const LOG_HEADER: &str = "round,x1,x2,y,j,click";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    /// The system dimension is `4^k`.
    pub k: u32,
    /// Mean photon number per pulse.
    pub mu: f64,
    /// Total experimental efficiency.
    pub nu: f64,
    /// White-noise visibility: `q -> V q + (1 - V)/d`.
    pub visibility: f64,
    pub rounds: u64,
    pub seed: u64,
    /// Sample photon numbers and per-photon detection instead of the
    /// aggregate click probability.
    #[serde(default)]
    pub photon_counting: bool,
}

impl Default for SimConfig {
    fn default() -> Self {
        Self {
            k: 5,
            mu: 0.4,
            nu: 0.13,
            visibility: 1.0,
            rounds: 1_000_000,
            seed: 0,
            photon_counting: false,
        }
    }
}

impl SimConfig {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(m));
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return bad(format!("mu must be a finite non-negative number, got {}", self.mu));
        }
        if !(0.0..=1.0).contains(&self.nu) {
            return bad(format!("nu must lie in [0, 1], got {}", self.nu));
        }
        if !(self.visibility > 0.0 && self.visibility <= 1.0) {
            return bad(format!("visibility must lie in (0, 1], got {}", self.visibility));
        }
        if self.rounds == 0 {
            return bad("rounds must be at least 1".into());
        }
        if !(1..=crate::mub::MAX_K).contains(&self.k) {
            return bad(format!("k must lie in 1..={}, got {}", crate::mub::MAX_K, self.k));
        }
        Ok(())
    }

    pub fn dim(&self) -> u64 {
        4u64.pow(self.k)
    }

    pub fn nu_mu(&self) -> f64 {
        self.nu * self.mu
    }

    /// Success probability of the optimal encoder after white noise.
    pub fn effective_q(&self) -> f64 {
        let d = self.dim() as f64;
        let q = 0.5 * (1.0 + 1.0 / d.sqrt());
        self.visibility * q + (1.0 - self.visibility) / d
    }

    /// Expected number of `D1` clicks.
    pub fn expected_d1(&self) -> f64 {
        let d = self.dim() as f64;
        self.rounds as f64 / d * -(-self.nu_mu() * self.effective_q()).exp_m1()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClickTally {
    #[serde(rename = "X1")]
    pub x1: u64,
    #[serde(rename = "X2")]
    pub x2: u64,
    #[serde(rename = "D1")]
    pub d1: u64,
    #[serde(rename = "D2")]
    pub d2: u64,
}

impl ClickTally {
    pub fn rounds(&self) -> u64 {
        self.x1 + self.x2
    }

    pub fn clicks(&self) -> u64 {
        self.d1 + self.d2
    }

    /// Adds one round: `matched` is `x_y == j`.
    pub fn record(&mut self, matched: bool, click: bool) {
        if matched {
            self.x1 += 1;
            self.d1 += u64::from(click);
        } else {
            self.x2 += 1;
            self.d2 += u64::from(click);
        }
    }

    /// `D1 / (D1 + D2)`, or `None` without clicks.
    pub fn figure_of_merit(&self) -> Option<f64> {
        (self.clicks() > 0).then(|| self.d1 as f64 / self.clicks() as f64)
    }
}

impl Add for ClickTally {
    type Output = ClickTally;

    fn add(self, o: ClickTally) -> ClickTally {
        ClickTally {
            x1: self.x1 + o.x1,
            x2: self.x2 + o.x2,
            d1: self.d1 + o.d1,
            d2: self.d2 + o.d2,
        }
    }
}

impl AddAssign for ClickTally {
    fn add_assign(&mut self, o: ClickTally) {
        *self = *self + o;
    }
}

/// One simulated round; indices are 0-based.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RoundRecord {
    pub round: u64,
    pub x1: usize,
    pub x2: usize,
    pub y: Basis,
    pub j: usize,
    /// Projection probability after white noise.
    pub q: f64,
    pub click: bool,
}

impl RoundRecord {
    pub fn matched(&self) -> bool {
        let target = match self.y {
            Basis::First => self.x1,
            Basis::Second => self.x2,
        };
        target == self.j
    }
}

/// A configured experiment; round `i` is a pure function of `(seed, i)`.
pub struct Experiment {
    config: SimConfig,
    mubs: MubPair,
    streams: StreamFamily,
    poisson: Option<Poisson<f64>>,
}

impl Experiment {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let mubs = build_mub(config.k)?;
        let poisson = if config.photon_counting && config.mu > 0.0 {
            Some(Poisson::new(config.mu).map_err(|e| Error::Config(e.to_string()))?)
        } else {
            None
        };
        Ok(Self {
            streams: StreamFamily::new(config.seed),
            config,
            mubs,
            poisson,
        })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    pub fn round(&self, index: u64) -> RoundRecord {
        let dim = self.mubs.dim();
        let mut rng = self.streams.stream(index);
        let x1 = rng.random_range(0..dim);
        let x2 = rng.random_range(0..dim);
        let y = if rng.random::<bool>() { Basis::Second } else { Basis::First };
        let j = rng.random_range(0..dim);

        let (w1, w2) = self.mubs.curve_weights(x1, x2, 0.5);
        let ideal = self.mubs.overlap_raw(y, j, x1, x2, w1, w2);
        let v = self.config.visibility;
        let q = v * ideal + (1.0 - v) / dim as f64;

        let click = match &self.poisson {
            Some(poisson) => {
                let photons = poisson.sample(&mut rng) as u64;
                let p = (self.config.nu * q).clamp(0.0, 1.0);
                photons > 0
                    && Binomial::new(photons, p)
                        .expect("probability clamped to [0, 1]")
                        .sample(&mut rng)
                        > 0
            }
            None if self.config.photon_counting => false,
            None => rng.random::<f64>() < -(-self.config.nu_mu() * q).exp_m1(),
        };
        RoundRecord {
            round: index,
            x1,
            x2,
            y,
            j,
            q,
            click,
        }
    }

    /// Runs every round in parallel; the tally is independent of the thread count.
    pub fn run(&self) -> ClickTally {
        (0..self.config.rounds)
            .into_par_iter()
            .fold(ClickTally::default, |mut t, i| {
                let r = self.round(i);
                t.record(r.matched(), r.click);
                t
            })
            .reduce(ClickTally::default, Add::add)
    }

    /// Runs sequentially and writes one click-log row per round (1-based indices).
    pub fn run_logged<W: Write>(&self, mut out: W) -> Result<ClickTally> {
        writeln!(out, "{LOG_HEADER}")?;
        let mut tally = ClickTally::default();
        for i in 0..self.config.rounds {
            let r = self.round(i);
            tally.record(r.matched(), r.click);
            writeln!(
                out,
                "{},{},{},{},{},{}",
                r.round + 1,
                r.x1 + 1,
                r.x2 + 1,
                r.y.index(),
                r.j + 1,
                u8::from(r.click)
            )?;
        }
        out.flush()?;
        Ok(tally)
    }
}

pub fn simulate(config: &SimConfig) -> Result<ClickTally> {
    Ok(Experiment::new(config.clone())?.run())
}

/// Like [`simulate`], also writing the per-round click log.
pub fn simulate_with_log<W: Write>(config: &SimConfig, out: W) -> Result<ClickTally> {
    Experiment::new(config.clone())?.run_logged(out)
}

fn check_rate_inputs(q: f64, d: u64, nu_mu: f64) -> Result<(f64, f64)> {
    if d < 2 {
        return Err(Error::InvalidDimension(d));
    }
    let df = d as f64;
    let lo = 1.0 / df;
    if q.is_nan() || q < lo - DOMAIN_SLOP || q > 1.0 + DOMAIN_SLOP {
        return Err(Error::Domain {
            what: "q",
            value: q,
            lo,
            hi: 1.0,
        });
    }
    if !(nu_mu >= 0.0 && nu_mu.is_finite()) {
        return Err(Error::Domain {
            what: "nu*mu",
            value: nu_mu,
            lo: 0.0,
            hi: f64::INFINITY,
        });
    }
    Ok((q.clamp(lo, 1.0), df))
}

/// Expected `(D1/X1, D2/X2)`: `1 - exp(-nu mu q)` and `1 - exp(-nu mu (1-q)/(d-1))`.
pub fn expected_click_rates(q: f64, d: u64, nu_mu: f64) -> Result<(f64, f64)> {
    let (q, df) = check_rate_inputs(q, d, nu_mu)?;
    let rate1 = -(-nu_mu * q).exp_m1();
    let rate2 = -(-nu_mu * (1.0 - q) / (df - 1.0)).exp_m1();
    Ok((rate1, rate2))
}

/// Expected figure of merit `D1/(D1+D2)` for a strategy of success probability `q`.
pub fn fom_closed_form(q: f64, d: u64, nu_mu: f64) -> Result<f64> {
    let (q, df) = check_rate_inputs(q, d, nu_mu)?;
    if nu_mu < SERIES_CUTOFF {
        return Ok(fom_first_order(q, d, nu_mu));
    }
    let (rate1, rate2) = expected_click_rates(q, d, nu_mu)?;
    Ok(rate1 / (rate1 + (df - 1.0) * rate2))
}

/// First-order expansion `q - ((1-q)/(d-1)) q (dq - 1) nu mu / 2`.
pub fn fom_first_order(q: f64, d: u64, nu_mu: f64) -> f64 {
    let df = d as f64;
    q - 0.5 * ((1.0 - q) / (df - 1.0)) * q * (df * q - 1.0) * nu_mu
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_limits() {
        let q = 0.515625;
        assert!((fom_closed_form(q, 1024, 0.0).unwrap() - q).abs() < 1e-15);
        assert!((fom_closed_form(q, 1024, 1e-12).unwrap() - q).abs() < 1e-12);
        for nu_mu in [0.0, 0.01, 0.052, 1.0, 50.0] {
            for d in [2u64, 4, 1024] {
                let f = fom_closed_form(1.0 / d as f64, d, nu_mu).unwrap();
                assert!((f - 1.0 / d as f64).abs() < 1e-12, "d={d} nu_mu={nu_mu}");
            }
        }
    }

    #[test]
    fn first_order_matches_exact_at_setup_values() {
        let exact = fom_closed_form(0.515625, 1024, 0.052).unwrap();
        let series = fom_first_order(0.515625, 1024, 0.052);
        assert!((exact - 0.51228).abs() < 2e-4, "{exact}");
        assert!((series - (0.515625 - 0.003_346)).abs() < 1e-5, "{series}");
        assert!((exact - series).abs() < 1e-4);
        assert_eq!(fom_first_order(0.3, 7, 0.0), 0.3);
        assert_eq!(fom_first_order(0.25, 4, 0.7), 0.25);
    }

    #[test]
    fn click_rates() {
        let (r1, _) = expected_click_rates(1.0, 2, std::f64::consts::LN_2).unwrap();
        assert!((r1 - 0.5).abs() < 1e-15);
        assert_eq!(expected_click_rates(0.6, 4, 0.0).unwrap(), (0.0, 0.0));
        assert!(expected_click_rates(0.1, 4, 0.1).is_err());
        assert!(expected_click_rates(0.5, 4, -1.0).is_err());
        assert!(fom_closed_form(0.5, 1, 0.1).is_err());
    }

    #[test]
    fn config_validation() {
        let ok = SimConfig::default();
        assert!(ok.validate().is_ok());
        for bad in [
            SimConfig { mu: -1.0, ..ok.clone() },
            SimConfig { nu: 1.5, ..ok.clone() },
            SimConfig { visibility: 0.0, ..ok.clone() },
            SimConfig { rounds: 0, ..ok.clone() },
            SimConfig { k: 0, ..ok.clone() },
        ] {
            assert!(bad.validate().is_err(), "{bad:?}");
        }
    }

    #[test]
    fn rounds_are_pure_functions_of_seed_and_index() {
        let cfg = SimConfig { k: 1, rounds: 100, seed: 9, ..SimConfig::default() };
        let a = Experiment::new(cfg.clone()).unwrap();
        let b = Experiment::new(cfg).unwrap();
        for i in [0, 1, 57, 99] {
            assert_eq!(a.round(i), b.round(i));
        }
    }

    #[test]
    fn tally_is_thread_count_independent() {
        let cfg = SimConfig { k: 2, rounds: 50_000, seed: 3, ..SimConfig::default() };
        let serial = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap()
            .install(|| simulate(&cfg).unwrap());
        let parallel = rayon::ThreadPoolBuilder::new()
            .num_threads(4)
            .build()
            .unwrap()
            .install(|| simulate(&cfg).unwrap());
        assert_eq!(serial, parallel);
        assert_eq!(serial.rounds(), 50_000);
        let logged = simulate_with_log(&cfg, std::io::sink()).unwrap();
        assert_eq!(logged, serial);
    }

    #[test]
    fn no_light_no_clicks() {
        let cfg = SimConfig { k: 1, mu: 0.0, rounds: 1000, ..SimConfig::default() };
        assert_eq!(simulate(&cfg).unwrap().clicks(), 0);
        let counting = SimConfig { photon_counting: true, ..cfg };
        assert_eq!(simulate(&counting).unwrap().clicks(), 0);
    }
}
