mod common;

use bayes_core::mcmc::*;
use bayes_core::{Distribution, DrawMatrix, Family, Seed};
use common::*;
use proptest::prelude::*;

fn simulated_data() -> Vec<f64> {
    Distribution::normal(5.0, 2.0).unwrap().sample(50, Seed(100))
}

#[test]
fn gibbs_conditionals_by_hand() {
    let d = NormalModelData::new(vec![1.0, 3.0]).unwrap();
    assert_eq!(*d.sigma2_conditional(2.0).unwrap().family(), Family::InverseGamma { shape: 1.0, scale: 1.0 });
    let mu = d.mu_conditional(1.0).unwrap();
    assert_eq!(mu.mean(), 2.0);
    assert!((mu.sd() - 0.5f64.sqrt()).abs() < 1e-15);
}

#[test]
fn gibbs_marginals_match_closed_forms() {
    let ys = simulated_data();
    let n = ys.len() as f64;
    let (ybar, s) = (mean(&ys), sd(&ys));
    let ss = (n - 1.0) * s * s;
    let data = NormalModelData::new(ys).unwrap();
    let r = gibbs_normal(&data, &RunSettings::new(22_000, 2_000, Seed(7)).unwrap(), (0.0, 1.0)).unwrap();
    assert_eq!(r.draws.nrows(), 20_000);
    assert!(r.acceptance_rate.is_none());

    // mu: Student-t with n-1 df, location ybar, scale s/sqrt(n)
    let mu = r.draws.column_by_name("mu").unwrap();
    let df = n - 1.0;
    let mu_sd = s / n.sqrt() * (df / (df - 2.0)).sqrt();
    assert!((mean(&mu) - ybar).abs() < 3.0 * batch_se(&mu, 50));
    assert!((sd(&mu) / mu_sd - 1.0).abs() < 0.03);

    // sigma2: inverse gamma with shape (n-1)/2 and scale ss/2
    let s2 = r.draws.column_by_name("sigma2").unwrap();
    let (shape, scale) = ((n - 1.0) / 2.0, ss / 2.0);
    let s2_mean = scale / (shape - 1.0);
    let s2_sd = s2_mean / (shape - 2.0).sqrt();
    assert!((mean(&s2) - s2_mean).abs() < 3.0 * batch_se(&s2, 50));
    assert!((sd(&s2) / s2_sd - 1.0).abs() < 0.05);

    let again = gibbs_normal(&data, &RunSettings::new(22_000, 2_000, Seed(7)).unwrap(), (0.0, 1.0)).unwrap();
    assert_eq!(r.draws, again.draws);
}

#[test]
fn gibbs_rejects_bad_input() {
    let d = NormalModelData::new(vec![1.0, 3.0]).unwrap();
    let s = RunSettings::new(10, 0, Seed(1)).unwrap();
    assert!(gibbs_normal(&d, &s, (0.0, 0.0)).is_err());
    assert!(gibbs_normal(&d, &s, (f64::NAN, 1.0)).is_err());
    assert!(NormalModelData::new(vec![4.0, 4.0]).is_err());
    assert!(RunSettings::new(10, 10, Seed(1)).is_err());
}

#[test]
fn metropolis_flat_target() {
    let flat = FnTarget::new(3, |_| 0.0);
    let r = metropolis_rw(&flat, &[1.0, 2.0, 3.0], &RunSettings::new(500, 0, Seed(3)).unwrap(), &[0.0; 3]).unwrap();
    assert_eq!(r.acceptance_rate, Some(1.0));
    assert_eq!(r.draws.names(), ["theta_1", "theta_2", "theta_3"]);
}

#[test]
fn metropolis_on_a_beta_target() {
    let target = Distribution::beta(5.0, 9.0).unwrap();
    let r = metropolis_rw(&target, &[0.2], &RunSettings::new(55_000, 5_000, Seed(8)).unwrap(), &[0.5]).unwrap();
    let mut xs = r.draws.column(0);
    assert!((mean(&xs) - 5.0 / 14.0).abs() < 0.01);
    xs.sort_by(f64::total_cmp);
    let q = |p: f64| xs[(p * (xs.len() - 1) as f64).round() as usize];
    let lo = bisect(|x| beta_cdf_int(5, 9, x) - 0.05, 0.0, 1.0);
    let hi = bisect(|x| beta_cdf_int(5, 9, x) - 0.95, 0.0, 1.0);
    assert!((q(0.05) - lo).abs() < 0.02 && (q(0.95) - hi).abs() < 0.02);
    let rate = r.acceptance_rate.unwrap();
    assert!(rate > 0.0 && rate < 1.0);
    assert_eq!(r.proposal_scale.as_deref(), Some(&[0.2][..]));
}

#[test]
fn metropolis_never_enters_zero_density() {
    let target = FnTarget::new(1, |x| if x[0] > 0.0 && x[0] < 1.0 { 0.0 } else { f64::NEG_INFINITY });
    let r = metropolis_rw(&target, &[3.0], &RunSettings::new(5_000, 0, Seed(4)).unwrap(), &[0.5]).unwrap();
    assert!(r.draws.column(0).iter().all(|x| *x > 0.0 && *x < 1.0));
    let nan = FnTarget::new(1, |x| if x[0] > 0.0 { -x[0] } else { f64::NAN });
    let r = metropolis_rw(&nan, &[1.0], &RunSettings::new(5_000, 0, Seed(4)).unwrap(), &[1.0]).unwrap();
    assert!(r.draws.column(0).iter().all(|x| *x > 0.0));
}

#[test]
fn metropolis_symmetric_targets() {
    for (i, (m, s)) in [(0.0, 1.0), (-3.0, 0.5), (10.0, 4.0)].into_iter().enumerate() {
        let target = FnTarget::new(1, move |x| {
            let z = (x[0] - m) / s;
            -(1.0 + z * z).ln() * 3.0
        });
        let r = metropolis_rw(&target, &[2.0 * s], &RunSettings::new(40_000, 2_000, Seed(50 + i as u64)).unwrap(), &[m + s]).unwrap();
        let xs = r.draws.column(0);
        assert!((mean(&xs) - m).abs() < 3.0 * batch_se(&xs, 40), "target centred at {m}");
    }
}

#[test]
fn tuning_reaches_the_target_band() {
    let target = Distribution::normal(0.0, 1.0).unwrap();
    let rec = tune_scale(&target, &[50.0], &[0.0], Seed(9), 1_000, 30).unwrap();
    assert!(rec.converged);
    let (_, rate) = *rec.rounds.last().unwrap();
    assert!((0.2..=0.5).contains(&rate));
}

#[test]
fn laplace_examples() {
    let n = Distribution::normal(3.0, 2.0).unwrap();
    let l = laplace_approx(&n, &[0.0]).unwrap();
    assert!((l.mode[0] - 3.0).abs() < 1e-4 && (l.covariance[(0, 0)] - 4.0).abs() < 1e-4);

    let b = Distribution::beta(5.0, 9.0).unwrap();
    let l = laplace_approx(&b, &[0.5]).unwrap();
    assert!((l.mode[0] - 1.0 / 3.0).abs() < 1e-6);
    assert!((l.sd()[0] - 1.0 / 54f64.sqrt()).abs() < 1e-5);

    let t = FnTarget::new(2, |x| -0.5 * x[0] * x[0] - 0.5 * (x[1] / 3.0).powi(2));
    let l = laplace_approx(&t, &[1.0, -2.0]).unwrap();
    let c = &l.covariance;
    assert!((c[(0, 0)] - 1.0).abs() < 1e-3 && (c[(1, 1)] - 9.0).abs() < 1e-3 && c[(0, 1)].abs() < 1e-3);

    let draws = l.sample(20_000, Seed(2)).unwrap();
    assert!((sd(&draws.column(1)) - 3.0).abs() < 0.1);
}

#[test]
fn laplace_fails_without_a_mode() {
    let line = FnTarget::new(1, |x| x[0]);
    assert!(laplace_approx(&line, &[0.0]).is_err());
}

#[test]
fn laplace_improves_with_information() {
    let errors: Vec<f64> = [2.0, 8.0, 32.0]
        .iter()
        .map(|&a| {
            let l = laplace_approx(&Distribution::beta(a, a).unwrap(), &[0.3]).unwrap();
            let exact = 1.0 / (2.0 * (2.0 * a + 1.0).sqrt());
            (l.sd()[0] - exact).abs()
        })
        .collect();
    assert!(errors[0] > errors[1] && errors[1] > errors[2], "{errors:?}");
}

fn odds(row: &[f64]) -> Vec<f64> {
    vec![row[0] / (1.0 - row[0])]
}

#[test]
fn transformed_draws() {
    let u = DrawMatrix::from_rows(vec!["p".into()], &Distribution::beta(1.0, 1.0).unwrap().sample(100_000, Seed(5)).into_iter().map(|x| vec![x]).collect::<Vec<_>>()).unwrap();
    let same = transform_draws(&u, vec!["p".into()], |r| r.to_vec()).unwrap();
    assert_eq!(same, u);
    let o = transform_draws(&u, vec!["odds".into()], odds).unwrap();
    assert_eq!(o.nrows(), u.nrows());
    assert!((bayes_core::summary::quantile(&o.column(0), 0.5) - 1.0).abs() < 0.02);

    let b = Distribution::beta(5.0, 9.0).unwrap();
    let rows: Vec<Vec<f64>> = b.sample(100_000, Seed(6)).into_iter().map(|x| vec![x]).collect();
    let o = transform_draws(&DrawMatrix::from_rows(vec!["p".into()], &rows).unwrap(), vec!["odds".into()], odds).unwrap();
    for q in [0.05, 0.95] {
        let want = odds(&[b.quantile(q).unwrap()])[0];
        assert!((bayes_core::summary::quantile(&o.column(0), q) - want).abs() < 0.02);
    }
    assert!(transform_draws(&u, vec!["a".into(), "b".into()], odds).is_err());
}

#[test]
fn diagnostics_examples() {
    let iid = Distribution::normal(0.0, 1.0).unwrap().sample(10_000, Seed(12));
    let m = DrawMatrix::from_rows(vec!["z".into()], &iid.iter().map(|x| vec![*x]).collect::<Vec<_>>()).unwrap();
    let d = diagnostics(&m, 50).unwrap();
    assert!((d[0].ess / 1e4 - 1.0).abs() < 0.15);

    let alt: Vec<Vec<f64>> = (0..1000).map(|i| vec![if i % 2 == 0 { 1.0 } else { -1.0 }]).collect();
    let d = diagnostics(&DrawMatrix::from_rows(vec!["x".into()], &alt).unwrap(), 10).unwrap();
    assert!((d[0].autocorrelation[0] + 1.0).abs() < 1e-2);
    // truncation stops at lag 1, so nothing is added to the denominator
    assert_eq!(d[0].ess, 1000.0);

    let flat = DrawMatrix::from_rows(vec!["c".into()], &vec![vec![2.0]; 100]).unwrap();
    assert_eq!(diagnostics(&flat, 10).unwrap_err().to_string(), "degenerate chain: column `c` has zero variance");
    assert!(diagnostics(&flat, 100).is_err());
}

#[test]
fn draw_matrix_csv() {
    let m = DrawMatrix::from_rows(vec!["a".into(), "b".into()], &[vec![1.0, 2.5], vec![-3.0, 0.125]]).unwrap();
    let mut out = Vec::new();
    m.write_csv(&mut out).unwrap();
    assert_eq!(String::from_utf8(out).unwrap(), "draw_index,a,b\n1,1,2.5\n2,-3,0.125\n");
    assert!(DrawMatrix::from_rows(vec!["a".into()], &[vec![f64::NAN]]).is_err());
}

proptest! {
    #[test]
    fn transform_commutes_with_row_subsetting(xs in prop::collection::vec(-5.0f64..5.0, 2..40), picks in prop::collection::vec(any::<prop::sample::Index>(), 1..20)) {
        let rows: Vec<Vec<f64>> = xs.iter().map(|x| vec![*x, x * x]).collect();
        let m = DrawMatrix::from_rows(vec!["x".into(), "y".into()], &rows).unwrap();
        let idx: Vec<usize> = picks.iter().map(|i| i.index(rows.len())).collect();
        let h = |r: &[f64]| vec![r[0].exp() + r[1]];
        let a = transform_draws(&m.select_rows(&idx).unwrap(), vec!["h".into()], h).unwrap();
        let b = transform_draws(&m, vec!["h".into()], h).unwrap().select_rows(&idx).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn ess_never_exceeds_draws_for_positive_correlation(phi in 0.0f64..0.95, seed in 0u64..1000) {
        let z = Distribution::normal(0.0, 1.0).unwrap().sample(2000, Seed(seed));
        let mut x = 0.0;
        let rows: Vec<Vec<f64>> = z.iter().map(|e| { x = phi * x + e; vec![x] }).collect();
        let d = diagnostics(&DrawMatrix::from_rows(vec!["x".into()], &rows).unwrap(), 50).unwrap();
        prop_assert!(d[0].ess <= 2000.0);
    }
}
