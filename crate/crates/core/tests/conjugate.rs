mod common;

use bayes_core::conjugate::*;
use bayes_core::discrete::{bayes_update, DiscreteTable, LikelihoodSpec};
use bayes_core::{Distribution, Family, Seed};
use common::*;
use proptest::prelude::*;

fn shapes(d: &Distribution) -> (f64, f64) {
    match *d.family() {
        Family::Beta { a, b } => (a, b),
        _ => panic!("expected a beta, got {d}"),
    }
}

fn normal_params(d: &Distribution) -> (f64, f64) {
    match *d.family() {
        Family::Normal { mean, sd } => (mean, sd),
        _ => panic!("expected a normal, got {d}"),
    }
}

#[test]
fn beta_updates() {
    let post = beta_update(&BetaBinomialState::new(1.0, 1.0, 4, 12).unwrap());
    assert_eq!(shapes(&post), (5.0, 9.0));
    assert_eq!(shapes(&beta_update(&BetaBinomialState::new(2.5, 0.4, 0, 0).unwrap())), (2.5, 0.4));
    assert_eq!(shapes(&beta_update(&BetaBinomialState::new(2.0, 3.0, 5, 5).unwrap())), (7.0, 3.0));
    assert!(BetaBinomialState::new(1.0, 1.0, 5, 4).is_err());
    assert!(BetaBinomialState::new(0.0, 1.0, 1, 4).is_err());
}

#[test]
fn normal_updates() {
    let (m, s) = normal_params(&normal_update(&NormalMeanState::new(0.0, 1.0, 2.0, 1, 1.0).unwrap()));
    assert!((m - 1.0).abs() < 1e-15 && (s - 0.5f64.sqrt()).abs() < 1e-15);
    let (m, s) = normal_params(&normal_update(&NormalMeanState::new(0.0, 1e6, 3.0, 4, 2.0).unwrap()));
    assert!((m - 3.0).abs() < 1e-9 && (s - 1.0).abs() < 1e-9);
    let (m, _) = normal_params(&normal_update(&NormalMeanState::new(5.0, 0.001, 100.0, 1, 1.0).unwrap()));
    assert!((m - 5.0).abs() < 0.01);
    assert!(NormalMeanState::new(0.0, 1.0, 2.0, 0, 1.0).is_err());
    assert!(NormalMeanState::new(0.0, 1.0, 2.0, 3, 0.0).is_err());
}

#[test]
fn beta_select_recovers_a_known_prior() {
    // Beta(2,2) has cdf 3x^2 - 2x^3; its 0.9 quantile by bisection on the oracle
    const Q90: f64 = 0.804_199_894_340_908_3;
    let x = bisect(|x| beta_cdf_int(2, 2, x) - 0.9, 0.0, 1.0);
    assert!((x - Q90).abs() < 1e-14);
    let d = beta_select((0.5, 0.5), (0.9, Q90)).unwrap();
    let (a, b) = shapes(&d);
    assert!((a - 2.0).abs() < 1e-3 && (b - 2.0).abs() < 1e-3, "{d}");
}

#[test]
fn beta_select_symmetric_and_consistent() {
    let d = beta_select((0.25, 0.3), (0.75, 0.7)).unwrap();
    let (a, b) = shapes(&d);
    assert!((a - b).abs() < 1e-6, "{d}");

    let d = beta_select((0.5, 0.3), (0.9, 0.5)).unwrap();
    assert!((d.quantile(0.5).unwrap() - 0.3).abs() < 1e-4);
    assert!((d.quantile(0.9).unwrap() - 0.5).abs() < 1e-4);
}

#[test]
fn beta_select_rejects_bad_input() {
    assert!(beta_select((0.9, 0.3), (0.5, 0.5)).is_err());
    assert!(beta_select((0.5, 0.6), (0.9, 0.5)).is_err());
    assert!(beta_select((0.0, 0.3), (0.9, 0.5)).is_err());
    // a median of 0.5 with a 0.9 quantile at 0.5000001 needs shapes far beyond the search box
    let e = beta_select((0.5, 0.5), (0.9, 0.500_000_1)).unwrap_err();
    assert!(e.to_string().contains("residual") || e.to_string().contains("search box"), "{e}");
}

#[test]
fn intervals() {
    let u = Distribution::beta(1.0, 1.0).unwrap();
    let ci = credible_interval(&u, 0.9, IntervalMethod::ExactQuantile).unwrap();
    assert!((ci.lower - 0.05).abs() < 1e-12 && (ci.upper - 0.95).abs() < 1e-12);

    let b = Distribution::beta(5.0, 9.0).unwrap();
    let exact = credible_interval(&b, 0.9, IntervalMethod::ExactQuantile).unwrap();
    let lo = bisect(|x| beta_cdf_int(5, 9, x) - 0.05, 0.0, 1.0);
    let hi = bisect(|x| beta_cdf_int(5, 9, x) - 0.95, 0.0, 1.0);
    assert!((exact.lower - lo).abs() < 1e-9 && (exact.upper - hi).abs() < 1e-9);
    assert_eq!(exact.method, IntervalKind::ExactQuantile);

    let sim = credible_interval(&b, 0.9, IntervalMethod::Simulation { draws: 10_000, seed: Seed(11) }).unwrap();
    assert!((sim.lower - lo).abs() < 0.02 && (sim.upper - hi).abs() < 0.02);
    assert_eq!(sim.method, IntervalKind::Simulation);
    assert!(sim.lower <= sim.upper);

    assert!(credible_interval(&b, 1.0, IntervalMethod::ExactQuantile).is_err());
    assert!(credible_interval(&b, 0.0, IntervalMethod::ExactQuantile).is_err());
}

#[test]
fn beta_binomial_predictive_cases() {
    let p = beta_binomial_predictive(&Distribution::beta(1.0, 1.0).unwrap(), 1).unwrap();
    assert!((p[0] - 0.5).abs() < 1e-14 && (p[1] - 0.5).abs() < 1e-14);
    let p = beta_binomial_predictive(&Distribution::beta(5.0, 9.0).unwrap(), 1).unwrap();
    assert!((p[1] - 5.0 / 14.0).abs() < 1e-14);
    assert_eq!(beta_binomial_predictive(&Distribution::beta(3.0, 4.0).unwrap(), 0).unwrap(), vec![1.0]);
    assert!(beta_binomial_predictive(&Distribution::normal(0.0, 1.0).unwrap(), 3).is_err());

    // Beta(1,1) gives the discrete uniform on 0..m
    let p = beta_binomial_predictive(&Distribution::beta(1.0, 1.0).unwrap(), 20).unwrap();
    assert!(p.iter().all(|v| (v - 1.0 / 21.0).abs() < 1e-13));
}

#[test]
fn beta_binomial_predictive_against_mixture_quadrature() {
    let (a, b, m) = (5u64, 9u64, 6u64);
    let post = Distribution::beta(a as f64, b as f64).unwrap();
    let pmf = beta_binomial_predictive(&post, m).unwrap();
    for k in 0..=m {
        let f = |p: f64| beta_pdf_int(a, b, p) * choose(m, k) * p.powi(k as i32) * (1.0 - p).powi((m - k) as i32);
        assert!((pmf[k as usize] - integrate(&f, 0.0, 1.0, 1e-13)).abs() < 1e-10);
    }
}

#[test]
fn normal_predictive_cases() {
    assert_eq!(normal_params(&normal_predictive(1.0, 0.0, 2.0).unwrap()), (1.0, 2.0));
    let (m, s) = normal_params(&normal_predictive(0.0, 1.0, 1.0).unwrap());
    assert!(m == 0.0 && (s - 2f64.sqrt()).abs() < 1e-15);
    assert!(normal_predictive(0.0, 1.0, 0.0).is_err());
    assert!(normal_predictive(0.0, -1.0, 1.0).is_err());
}

#[test]
fn normal_predictive_matches_two_stage_simulation() {
    let (mean, sd, sigma) = (1.5, 0.8, 2.0);
    let n = 100_000;
    let theta = Distribution::normal(mean, sd).unwrap().sample(n, Seed(21));
    let noise = Distribution::normal(0.0, sigma).unwrap().sample(n, Seed(22));
    let ys: Vec<f64> = theta.iter().zip(&noise).map(|(t, e)| t + e).collect();
    let pred = normal_predictive(mean, sd, sigma).unwrap();
    assert!(ks_statistic(&ys, |x| pred.cdf(x)) < ks_critical_001(n));
}

#[test]
fn beta_update_matches_dense_grid() {
    let mids: Vec<f64> = (0..1000).map(|k| (k as f64 + 0.5) / 1000.0).collect();
    let prior = DiscreteTable::uniform_scalar(&mids).unwrap();
    let grid = bayes_update(&prior, &LikelihoodSpec::binomial(4, 12).unwrap()).unwrap();
    let m = grid.mean()[0];
    let sd = grid.iter().map(|(p, w)| w * (p.coords()[0] - m).powi(2)).sum::<f64>().sqrt();
    let exact = beta_update(&BetaBinomialState::new(1.0, 1.0, 4, 12).unwrap());
    assert!((m - exact.mean()).abs() < 1e-4 && (sd - exact.sd()).abs() < 1e-4);
}

proptest! {
    #[test]
    fn split_data_conjugacy(a in 0.1f64..50.0, b in 0.1f64..50.0, y1 in 0u64..40, f1 in 0u64..40, y2 in 0u64..40, f2 in 0u64..40) {
        let first = beta_update(&BetaBinomialState::new(a, b, y1, y1 + f1).unwrap());
        let (a1, b1) = shapes(&first);
        let twice = beta_update(&BetaBinomialState::new(a1, b1, y2, y2 + f2).unwrap());
        let once = beta_update(&BetaBinomialState::new(a, b, y1 + y2, y1 + f1 + y2 + f2).unwrap());
        let ((ta, tb), (oa, ob)) = (shapes(&twice), shapes(&once));
        // integer-valued increments: exact up to the order of two additions
        prop_assert!((ta - oa).abs() <= 4.0 * f64::EPSILON * oa && (tb - ob).abs() <= 4.0 * f64::EPSILON * ob);
    }

    #[test]
    fn precisions_add(m0 in -10.0f64..10.0, s0 in 0.01f64..100.0, ybar in -10.0f64..10.0, n in 1u64..1000, sigma in 0.01f64..100.0) {
        let s = NormalMeanState::new(m0, s0, ybar, n, sigma).unwrap();
        prop_assert_eq!(s.posterior_precision(), 1.0 / (s0 * s0) + n as f64 / (sigma * sigma));
        let (_, sd) = normal_params(&normal_update(&s));
        prop_assert!((sd.powi(-2) / s.posterior_precision() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn predictive_pmf_is_a_pmf(a in 0.01f64..100.0, b in 0.01f64..100.0, m in 0u64..=50) {
        let p = beta_binomial_predictive(&Distribution::beta(a, b).unwrap(), m).unwrap();
        prop_assert_eq!(p.len() as u64, m + 1);
        prop_assert!(p.iter().all(|v| *v >= 0.0));
        prop_assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-10);
    }
}
