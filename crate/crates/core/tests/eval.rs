mod common;

use bayes_core::discrete::{bayes_update_with_evidence, DiscreteTable, LikelihoodSpec, Point};
use bayes_core::eval::*;
use bayes_core::{Distribution, DrawMatrix, Seed};
use common::*;
use proptest::prelude::*;

fn binom(y: u64, n: u64) -> LikelihoodSpec {
    LikelihoodSpec::binomial(y, n).unwrap()
}

#[test]
fn point_mass_marginals_and_factor() {
    let half = ModelSpec::point_mass(0.5);
    let ml = marginal_likelihood(&half, &binom(7, 10)).unwrap();
    assert!((ml - 120.0 / 1024.0).abs() < 1e-14);
    let bf = bayes_factor(&half, &ModelSpec::point_mass(0.7), &binom(7, 10)).unwrap();
    let want = 0.5f64.powi(10) / (0.7f64.powi(7) * 0.3f64.powi(3));
    assert!((bf - want).abs() < 1e-10);
    assert!((bf - 0.4392).abs() < 1e-4);
    assert_eq!(bayes_factor(&half, &half, &binom(7, 10)).unwrap(), 1.0);
}

#[test]
fn uniform_prior_marginal_is_discrete_uniform() {
    let flat = ModelSpec::beta(1.0, 1.0).unwrap();
    for n in 0..=30u64 {
        let mut total = 0.0;
        for y in 0..=n {
            let ml = marginal_likelihood(&flat, &binom(y, n)).unwrap();
            assert!((ml - 1.0 / (n + 1) as f64).abs() < 1e-10, "y={y} n={n}");
            total += ml;
        }
        assert!((total - 1.0).abs() < 1e-10);
    }
}

#[test]
fn beta_marginal_against_quadrature() {
    let spec = ModelSpec::beta(2.0, 3.0).unwrap();
    let ml = marginal_likelihood(&spec, &binom(4, 12)).unwrap();
    let quad = integrate(&|p| beta_pdf_int(2, 3, p) * choose(12, 4) * p.powi(4) * (1.0 - p).powi(8), 0.0, 1.0, 1e-14);
    assert!((ml - quad).abs() < 1e-12);
}

#[test]
fn normal_marginal_against_quadrature() {
    let spec = ModelSpec::normal(1.0, 2.0).unwrap();
    let data = LikelihoodSpec::normal_known_sd(2.5, 4, 3.0).unwrap();
    let ml = marginal_likelihood(&spec, &data).unwrap();
    let quad = integrate(&|m| normal_pdf(1.0, 2.0, m) * normal_pdf(m, 1.5, 2.5), -30.0, 30.0, 1e-14);
    assert!((ml - quad).abs() < 1e-12);
}

#[test]
fn discrete_evidence_is_the_update_normalizer() {
    let pts = [0.1, 0.3, 0.5, 0.7, 0.9];
    let t = DiscreteTable::new(pts.iter().map(|p| Point::Scalar(*p)).collect(), vec![0.1, 0.2, 0.4, 0.2, 0.1]).unwrap();
    let data = binom(6, 15);
    let u = bayes_update_with_evidence(&t, &data).unwrap();
    let ml = log_marginal_likelihood(&ModelSpec::discrete("survey", t.clone()), &data).unwrap();
    assert!((ml - u.log_evidence).abs() < 1e-12);
    let by_hand: f64 = t.iter().map(|(p, w)| w * choose(15, 6) * p.coords()[0].powi(6) * (1.0 - p.coords()[0]).powi(9)).sum();
    assert!((ml.exp() - by_hand).abs() < 1e-14);
}

#[test]
fn bayes_factor_errors() {
    let zero = ModelSpec::point_mass(0.0);
    assert!(bayes_factor(&ModelSpec::point_mass(0.5), &zero, &binom(3, 5)).is_err());
    assert_eq!(marginal_likelihood(&zero, &binom(3, 5)).unwrap(), 0.0);
    let normal = ModelSpec::normal(0.0, 1.0).unwrap();
    assert!(marginal_likelihood(&normal, &binom(3, 5)).is_err());
}

#[test]
fn constant_statistic_gives_tail_one() {
    let post = PosteriorSource::Distribution(Distribution::beta(5.0, 9.0).unwrap());
    let model = SamplingModel::Binomial { trials: vec![12; 4] };
    let r = posterior_predictive_check(&post, &model, |y| TestStatistic::SampleSize.eval(y), &[1.0, 2.0, 3.0, 4.0], 500, Seed(1)).unwrap();
    assert_eq!(r.tail_prob, 1.0);
    assert!(r.t_replicates.iter().all(|t| *t == 4.0));
}

#[test]
fn ppc_is_calibrated_when_the_model_is_right() {
    let mut inside = 0;
    for rep in 0..100u64 {
        let y = Distribution::binomial(20, 0.5).unwrap().sample(1, Seed(1000 + rep))[0];
        let post = PosteriorSource::Distribution(Distribution::beta(1.0 + y, 21.0 - y).unwrap());
        let model = SamplingModel::Binomial { trials: vec![20] };
        let r = posterior_predictive_check(&post, &model, |v| v[0], &[y], 1000, Seed(rep)).unwrap();
        if r.tail_prob > 0.05 && r.tail_prob < 0.95 {
            inside += 1;
        }
    }
    assert!(inside >= 90, "{inside}");
}

/// Ten groups of 20 trials with success rates spread over 0.1..0.9.
fn overdispersed() -> Vec<f64> {
    (0..10)
        .map(|j| {
            let p = 0.1 + 0.8 * j as f64 / 9.0;
            Distribution::binomial(20, p).unwrap().sample(1, Seed(500 + j))[0]
        })
        .collect()
}

#[test]
fn ppc_flags_overdispersion() {
    let ys = overdispersed();
    let total: f64 = ys.iter().sum();
    let post = PosteriorSource::Distribution(Distribution::beta(1.0 + total, 1.0 + 200.0 - total).unwrap());
    let model = SamplingModel::Binomial { trials: vec![20; 10] };
    let r = posterior_predictive_check(&post, &model, |y| TestStatistic::Variance.eval(y), &ys, 2000, Seed(3)).unwrap();
    assert!(r.tail_prob < 0.05, "{}", r.tail_prob);
}

#[test]
fn ppc_from_draws_and_normal_model() {
    let rows: Vec<Vec<f64>> = (0..400).map(|i| vec![0.1 * (i % 7) as f64, 1.0 + 0.01 * (i % 5) as f64]).collect();
    let d = DrawMatrix::from_rows(vec!["mu".into(), "sigma2".into()], &rows).unwrap();
    let post = PosteriorSource::from_draws(d.clone(), &["mu", "sigma2"]).unwrap();
    let obs = [0.3, -0.2, 1.1, 0.4];
    let model = SamplingModel::Normal { n: 4, sd: None };
    let a = posterior_predictive_check(&post, &model, |y| TestStatistic::Max.eval(y), &obs, 700, Seed(8)).unwrap();
    let b = posterior_predictive_check(&post, &model, |y| TestStatistic::Max.eval(y), &obs, 700, Seed(8)).unwrap();
    assert_eq!(a, b);
    assert_eq!(a.t_replicates.len(), 700);
    assert!(PosteriorSource::from_draws(d, &["nope"]).is_err());
    assert!(posterior_predictive_check(&post, &model, |y| y[0], &obs[..3], 10, Seed(1)).is_err());
    assert!(posterior_predictive_check(&post, &model, |y| y[0], &obs, 0, Seed(1)).is_err());
}

#[test]
fn ppc_is_identical_across_thread_pools() {
    let post = PosteriorSource::Distribution(Distribution::beta(3.0, 4.0).unwrap());
    let model = SamplingModel::Binomial { trials: vec![10; 6] };
    let obs = [3.0, 4.0, 5.0, 2.0, 6.0, 4.0];
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap().install(|| {
            posterior_predictive_check(&post, &model, |y| TestStatistic::Mean.eval(y), &obs, 3000, Seed(77)).unwrap()
        })
    };
    assert_eq!(run(1), run(4));
}

#[test]
fn ppc_json_keys() {
    let r = PpcResult { t_observed: 1.0, t_replicates: vec![2.0], tail_prob: 0.5 };
    let v = serde_json::to_string(&r).unwrap();
    assert_eq!(v, r#"{"t_observed":1.0,"t_replicates":[2.0],"tail_prob":0.5}"#);
}

#[test]
fn sensitivity_examples() {
    let base = ModelSpec::beta(1.0, 1.0).unwrap();
    let rows = sensitivity_scan(&base, &[base.clone()], &binom(4, 12), PosteriorSummary::Mean).unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0], rows[1]);

    let alts = [ModelSpec::beta(0.5, 0.5).unwrap(), ModelSpec::beta(2.0, 2.0).unwrap()];
    let rows = sensitivity_scan(&base, &alts, &binom(4, 12), PosteriorSummary::Mean).unwrap();
    let want = [5.0 / 14.0, 4.5 / 13.0, 6.0 / 16.0];
    for (r, w) in rows.iter().zip(want) {
        assert!((r.summary - w).abs() < 1e-14, "{}", r.label);
    }
    assert_eq!(rows[1].label, "beta(0.5,0.5)");

    let lower = sensitivity_scan(&base, &[], &binom(4, 12), PosteriorSummary::Lower(0.9)).unwrap();
    let lo = bisect(|x| beta_cdf_int(5, 9, x) - 0.05, 0.0, 1.0);
    assert!((lower[0].summary - lo).abs() < 1e-9);
    let above = sensitivity_scan(&base, &[], &binom(4, 12), PosteriorSummary::ProbAbove(0.5)).unwrap();
    assert!((above[0].summary - (1.0 - 7099.0 / 8192.0)).abs() < 1e-12);
}

proptest! {
    #[test]
    fn bayes_factors_are_transitive(p in prop::collection::vec(0.05f64..0.95, 3), y in 0u64..20, extra in 0u64..20) {
        let m: Vec<ModelSpec> = p.iter().map(|v| ModelSpec::point_mass(*v)).collect();
        let d = binom(y, y + extra);
        let b12 = bayes_factor(&m[0], &m[1], &d).unwrap();
        let b23 = bayes_factor(&m[1], &m[2], &d).unwrap();
        let b13 = bayes_factor(&m[0], &m[2], &d).unwrap();
        prop_assert!((b13 / (b12 * b23) - 1.0).abs() < 1e-12);
        let b21 = bayes_factor(&m[1], &m[0], &d).unwrap();
        prop_assert!((b12 * b21 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn beta_marginals_sum_to_one(a in 0.1f64..100.0, b in 0.1f64..100.0, n in 0u64..=50) {
        let spec = ModelSpec::beta(a, b).unwrap();
        let total: f64 = (0..=n).map(|y| marginal_likelihood(&spec, &binom(y, n)).unwrap()).sum();
        prop_assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn tail_probability_ignores_monotone_relabelling(a in 1.0f64..20.0, b in 1.0f64..20.0, seed in any::<u64>()) {
        let post = PosteriorSource::Distribution(Distribution::beta(a, b).unwrap());
        let model = SamplingModel::Binomial { trials: vec![15; 5] };
        let obs = [3.0, 9.0, 7.0, 12.0, 5.0];
        let plain = posterior_predictive_check(&post, &model, |y| TestStatistic::Mean.eval(y), &obs, 300, Seed(seed)).unwrap();
        let warped = posterior_predictive_check(&post, &model, |y| (TestStatistic::Mean.eval(y) / 3.0).exp() - 7.0, &obs, 300, Seed(seed)).unwrap();
        prop_assert_eq!(plain.tail_prob, warped.tail_prob);
    }

    #[test]
    fn posterior_mean_rises_with_prior_mean(m1 in 0.05f64..0.95, m2 in 0.05f64..0.95, strength in 0.5f64..50.0, y in 0u64..30, extra in 0u64..30) {
        let (lo, hi) = if m1 <= m2 { (m1, m2) } else { (m2, m1) };
        let d = binom(y, y + extra);
        let a = posterior_summary(&ModelSpec::beta(lo * strength, (1.0 - lo) * strength).unwrap(), &d, PosteriorSummary::Mean).unwrap();
        let b = posterior_summary(&ModelSpec::beta(hi * strength, (1.0 - hi) * strength).unwrap(), &d, PosteriorSummary::Mean).unwrap();
        prop_assert!(a <= b + 1e-15);
    }
}
