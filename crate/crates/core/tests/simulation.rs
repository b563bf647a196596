use gdw::certify::read_click_log;
use gdw::sim::{expected_click_rates, fom_closed_form, simulate, simulate_with_log, Experiment, SimConfig};

fn config(k: u32, rounds: u64, seed: u64) -> SimConfig {
    SimConfig {
        k,
        mu: 0.4,
        nu: 0.13,
        visibility: 1.0,
        rounds,
        seed,
        photon_counting: false,
    }
}

fn sigmas(hits: u64, trials: u64, p: f64) -> f64 {
    let n = trials as f64;
    (hits as f64 / n - p) / (p * (1.0 - p) / n).sqrt()
}

#[test]
fn ten_million_rounds_match_closed_form() {
    for k in [1, 2] {
        let c = config(k, 10_000_000, 1000 + u64::from(k));
        let t = simulate(&c).unwrap();
        let (r1, r2) = expected_click_rates(c.effective_q(), c.dim(), c.nu_mu()).unwrap();
        let fom = fom_closed_form(c.effective_q(), c.dim(), c.nu_mu()).unwrap();
        assert!(sigmas(t.d1, t.x1, r1).abs() <= 4.0, "k={k} D1/X1 {t:?}");
        assert!(sigmas(t.d2, t.x2, r2).abs() <= 4.0, "k={k} D2/X2 {t:?}");
        assert!(sigmas(t.d1, t.clicks(), fom).abs() <= 4.0, "k={k} FOM {t:?}");
        assert!(sigmas(t.x1, t.rounds(), 1.0 / c.dim() as f64).abs() <= 4.0, "k={k} X1 {t:?}");
    }
}

#[test]
fn matched_clicks_are_binomial_across_seeds() {
    // Sum of squared standardized residuals over independent runs ~ chi^2(runs).
    let runs = 200;
    let mut c = config(1, 20_000, 0);
    c.mu = 5.0;
    let (r1, r2) = expected_click_rates(c.effective_q(), c.dim(), c.nu_mu()).unwrap();
    let (mut chi1, mut chi2) = (0.0, 0.0);
    for seed in 0..runs {
        c.seed = seed;
        let t = simulate(&c).unwrap();
        chi1 += sigmas(t.d1, t.x1, r1).powi(2);
        chi2 += sigmas(t.d2, t.x2, r2).powi(2);
    }
    let (mean, sd) = (runs as f64, (2.0 * runs as f64).sqrt());
    for chi in [chi1, chi2] {
        assert!((chi - mean).abs() <= 5.0 * sd, "chi^2 = {chi}");
    }
}

#[test]
fn saturated_detector_reports_one_over_d() {
    let c = SimConfig {
        mu: 1e6,
        nu: 1.0,
        ..config(1, 100_000, 5)
    };
    let t = simulate(&c).unwrap();
    assert_eq!(t.clicks(), t.rounds());
    let fom = t.figure_of_merit().unwrap();
    assert!(sigmas(t.d1, t.clicks(), 0.25).abs() <= 4.0, "{fom}");
    assert!((fom_closed_form(c.effective_q(), 4, c.nu_mu()).unwrap() - 0.25).abs() < 1e-12);
}

#[test]
fn lower_visibility_never_adds_matched_clicks() {
    // Rounds share their random numbers across configs, so the effect is pathwise.
    let mut previous: Option<(u64, u64)> = None;
    for v in [1.0, 0.9, 0.7, 0.4] {
        let c = SimConfig {
            visibility: v,
            ..config(1, 200_000, 77)
        };
        let t = simulate(&c).unwrap();
        if let Some((d1, d2)) = previous {
            assert!(t.d1 <= d1 && t.d2 >= d2, "V={v}: {t:?}");
        }
        previous = Some((t.d1, t.d2));
    }
}

#[test]
fn log_round_trips_and_matches_parallel_run() {
    let c = config(2, 50_000, 3);
    let mut log = Vec::new();
    let logged = simulate_with_log(&c, &mut log).unwrap();
    let parsed = read_click_log(log.as_slice(), Some(c.dim())).unwrap();
    assert_eq!(logged, parsed);
    assert_eq!(logged, simulate(&c).unwrap());
    let text = String::from_utf8(log).unwrap();
    assert_eq!(text.lines().count() as u64, c.rounds + 1);
    assert!(text.lines().nth(1).unwrap().starts_with("1,"));
}

#[test]
fn rounds_are_pure_functions_of_seed_and_index() {
    let a = Experiment::new(config(3, 10, 42)).unwrap();
    let b = Experiment::new(config(3, 1_000_000, 42)).unwrap();
    for i in [0, 1, 9, 5] {
        assert_eq!(a.round(i), b.round(i));
    }
    let other = Experiment::new(config(3, 10, 43)).unwrap();
    assert!((0..10).any(|i| other.round(i) != a.round(i)));
}

#[test]
fn photon_counting_mode_agrees_with_click_model() {
    let base = config(1, 2_000_000, 8);
    let counting = SimConfig {
        photon_counting: true,
        ..base.clone()
    };
    let t = simulate(&counting).unwrap();
    let (r1, r2) = expected_click_rates(base.effective_q(), 4, base.nu_mu()).unwrap();
    assert!(sigmas(t.d1, t.x1, r1).abs() <= 4.0, "{t:?}");
    assert!(sigmas(t.d2, t.x2, r2).abs() <= 4.0, "{t:?}");
}

#[test]
fn invalid_configs_are_rejected() {
    for bad in [
        SimConfig { mu: -1.0, ..config(1, 10, 0) },
        SimConfig { nu: 1.5, ..config(1, 10, 0) },
        SimConfig { visibility: 0.0, ..config(1, 10, 0) },
        SimConfig { rounds: 0, ..config(1, 10, 0) },
        config(0, 10, 0),
        config(8, 10, 0),
    ] {
        assert!(simulate(&bad).is_err(), "{bad:?}");
    }
}
