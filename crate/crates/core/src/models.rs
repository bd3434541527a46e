//! Prebuilt fits: exchangeable hierarchical models for proportions and means,
//! noninformative-prior linear regression by direct simulation, logistic
//! regression by random-walk Metropolis, and posterior functionals.

use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution as _, StandardNormal};

use crate::distributions::Distribution;
use crate::draws::DrawMatrix;
use crate::error::{Error, Result};
use crate::mcmc::{self, ChainReport, FnTarget, RunSettings};
use crate::rng::Seed;
use crate::summary;

/// Upper end of the log-uniform prior on the beta precision `K`.
pub const MAX_PRECISION: f64 = 1e4;

/// Successes and trials per group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupCounts {
    labels: Vec<String>,
    y: Vec<u64>,
    n: Vec<u64>,
}

impl GroupCounts {
    pub fn new(labels: Vec<String>, y: Vec<u64>, n: Vec<u64>) -> Result<Self> {
        if y.len() != n.len() || labels.len() != y.len() {
            return Err(Error::data("group labels, successes and trials differ in length"));
        }
        if y.len() < 2 {
            return Err(Error::data("hierarchical models need at least two groups"));
        }
        if let Some(j) = (0..y.len()).find(|&j| y[j] > n[j]) {
            return Err(Error::data(format!("group `{}`: successes {} exceed trials {}", labels[j], y[j], n[j])));
        }
        Ok(GroupCounts { labels, y, n })
    }

    /// Groups labelled `1..=J`.
    pub fn from_pairs(pairs: &[(u64, u64)]) -> Result<Self> {
        let labels = (1..=pairs.len()).map(|j| j.to_string()).collect();
        Self::new(labels, pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1).collect())
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn successes(&self) -> &[u64] {
        &self.y
    }

    pub fn trials(&self) -> &[u64] {
        &self.n
    }

    pub fn len(&self) -> usize {
        self.y.len()
    }

    pub fn is_empty(&self) -> bool {
        self.y.is_empty()
    }

    pub fn pooled_rate(&self) -> f64 {
        self.y.iter().sum::<u64>() as f64 / self.n.iter().sum::<u64>().max(1) as f64
    }
}

/// Sample mean and size per group, with a common known sampling sd.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupMeans {
    labels: Vec<String>,
    ybar: Vec<f64>,
    n: Vec<u64>,
    sigma: f64,
}

impl GroupMeans {
    pub fn new(labels: Vec<String>, ybar: Vec<f64>, n: Vec<u64>, sigma: f64) -> Result<Self> {
        if ybar.len() != n.len() || labels.len() != n.len() {
            return Err(Error::data("group labels, means and sizes differ in length"));
        }
        if n.len() < 2 {
            return Err(Error::data("hierarchical models need at least two groups"));
        }
        if n.contains(&0) {
            return Err(Error::data("every group needs at least one observation"));
        }
        if ybar.iter().any(|v| !v.is_finite()) {
            return Err(Error::data("group means must be finite"));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::data(format!("sampling sd must be positive, got {sigma}")));
        }
        Ok(GroupMeans { labels, ybar, n, sigma })
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn means(&self) -> &[f64] {
        &self.ybar
    }

    pub fn sizes(&self) -> &[u64] {
        &self.n
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Size-weighted mean of the group means.
    pub fn grand_mean(&self) -> f64 {
        let total: f64 = self.n.iter().map(|&v| v as f64).sum();
        self.ybar.iter().zip(&self.n).map(|(y, &n)| y * n as f64).sum::<f64>() / total
    }
}

fn logistic(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + (-x).exp())
    } else {
        let e = x.exp();
        e / (1.0 + e)
    }
}

/// `log(1 + exp(x))` without overflow.
fn log1p_exp(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

fn labelled(prefix: &str, j: usize) -> String {
    format!("{prefix}_{}", j + 1)
}

/// Exchangeable beta-binomial model:
/// `p_j ~ Beta(K*eta, K*(1-eta))`, `eta ~ Uniform(0, 1)`,
/// `log K ~ Uniform(0, log 1e4)`.
///
/// Each iteration draws every `p_j` from its beta conditional, then updates
/// `(logit eta, log K)` jointly by random-walk Metropolis with step sizes
/// `hyper_scale`. Columns: `p_1..p_J`, `eta`, `K`.
pub fn fit_hierarchical_proportions(
    data: &GroupCounts,
    settings: &RunSettings,
    hyper_scale: [f64; 2],
) -> Result<ChainReport> {
    settings.validate()?;
    if hyper_scale.iter().any(|s| !(s.is_finite() && *s > 0.0)) {
        return Err(Error::param("proposal scales must be positive"));
    }
    let j_count = data.len();
    let log_k_max = MAX_PRECISION.ln();
    let mut rng = settings.seed.rng();

    let mut names: Vec<String> = (0..j_count).map(|j| labelled("p", j)).collect();
    names.push("eta".into());
    names.push("K".into());
    let mut draws = DrawMatrix::with_capacity(names, settings.kept());

    let log_target = |theta: [f64; 2], logp: &[(f64, f64)]| -> f64 {
        if !(0.0..=log_k_max).contains(&theta[1]) {
            return f64::NEG_INFINITY;
        }
        let eta = logistic(theta[0]);
        let k = theta[1].exp();
        let (a, b) = (k * eta, k * (1.0 - eta));
        if a <= 0.0 || b <= 0.0 {
            return f64::NEG_INFINITY;
        }
        let lb = crate::special::ln_beta(a, b);
        let like: f64 = logp.iter().map(|(lp, lq)| (a - 1.0) * lp + (b - 1.0) * lq - lb).sum();
        // Jacobian of eta = logistic(theta_0); the log-uniform prior on K is flat in theta_1
        like + eta.ln() + (1.0 - eta).ln()
    };

    let pooled = data.pooled_rate().clamp(0.05, 0.95);
    let mut theta = [(pooled / (1.0 - pooled)).ln(), 10f64.ln()];
    let mut p = vec![0.0; j_count];
    let mut logp = vec![(0.0, 0.0); j_count];
    let mut accepted = 0usize;
    let mut row = vec![0.0; j_count + 2];

    for t in 0..settings.iters {
        let eta = logistic(theta[0]);
        let k = theta[1].exp();
        for j in 0..j_count {
            let a = k * eta + data.y[j] as f64;
            let b = k * (1.0 - eta) + (data.n[j] - data.y[j]) as f64;
            let mut v = Distribution::beta(a, b)?.draw(&mut rng);
            // keep log p and log(1-p) finite when the beta draw underflows
            v = v.clamp(f64::MIN_POSITIVE, 1.0 - f64::EPSILON / 2.0);
            p[j] = v;
            logp[j] = (v.ln(), (-v).ln_1p());
        }
        let current = log_target(theta, &logp);
        let proposal = [
            theta[0] + hyper_scale[0] * std_normal(&mut rng),
            theta[1] + hyper_scale[1] * std_normal(&mut rng),
        ];
        let cand = log_target(proposal, &logp);
        if mcmc_accept(&mut rng, cand - current) {
            theta = proposal;
            accepted += 1;
        }
        if t >= settings.burn_in {
            row[..j_count].copy_from_slice(&p);
            row[j_count] = logistic(theta[0]);
            row[j_count + 1] = theta[1].exp();
            draws.push_row(&row)?;
        }
    }
    let draws = draws.finish()?.with_burn_in(settings.burn_in).with_seed(settings.seed);
    let mut report = ChainReport::new(draws);
    report.acceptance_rate = Some(accepted as f64 / settings.iters as f64);
    report.proposal_scale = Some(hyper_scale.to_vec());
    Ok(report)
}

fn std_normal(rng: &mut crate::rng::ChainRng) -> f64 {
    StandardNormal.sample(rng)
}

fn mcmc_accept(rng: &mut crate::rng::ChainRng, log_ratio: f64) -> bool {
    let u: f64 = rand::Rng::random(rng);
    u.ln() < log_ratio
}

/// Exchangeable normal model:
/// `mu_j ~ Normal(tau_mean, tau_sd)`, flat prior on `tau_mean`,
/// `tau_sd ~ Uniform(0, 100 * sigma)`.
///
/// `mu_j` and `tau_mean` are drawn from their normal conditionals; `log tau_sd`
/// takes a random-walk Metropolis step of size `log_sd_scale`.
/// Columns: `mu_1..mu_J`, `tau_mean`, `tau_sd`.
pub fn fit_hierarchical_means(data: &GroupMeans, settings: &RunSettings, log_sd_scale: f64) -> Result<ChainReport> {
    settings.validate()?;
    if !(log_sd_scale.is_finite() && log_sd_scale > 0.0) {
        return Err(Error::param("proposal scale must be positive"));
    }
    let j_count = data.n.len();
    let sigma2 = data.sigma * data.sigma;
    let tau_sd_max = 100.0 * data.sigma;
    let mut rng = settings.seed.rng();

    let mut names: Vec<String> = (0..j_count).map(|j| labelled("mu", j)).collect();
    names.push("tau_mean".into());
    names.push("tau_sd".into());
    let mut draws = DrawMatrix::with_capacity(names, settings.kept());

    let mut tau_mean = summary::mean(&data.ybar);
    let spread = summary::sd(&data.ybar);
    let mut tau_sd = if spread > 0.0 { spread.min(0.5 * tau_sd_max) } else { 0.5 * tau_sd_max };
    let mut mu = data.ybar.clone();
    let mut accepted = 0usize;
    let mut row = vec![0.0; j_count + 2];

    let log_target = |log_sd: f64, mu: &[f64], tau_mean: f64| -> f64 {
        let sd = log_sd.exp();
        if !(sd > 0.0 && sd < tau_sd_max) {
            return f64::NEG_INFINITY;
        }
        let ss: f64 = mu.iter().map(|m| (m - tau_mean) * (m - tau_mean)).sum();
        // normal likelihood of the mu_j plus the Jacobian of sd = exp(log_sd)
        -(mu.len() as f64) * log_sd - 0.5 * ss / (sd * sd) + log_sd
    };

    for t in 0..settings.iters {
        let prior_prec = 1.0 / (tau_sd * tau_sd);
        for j in 0..j_count {
            let data_prec = data.n[j] as f64 / sigma2;
            let prec = data_prec + prior_prec;
            let mean = (data_prec * data.ybar[j] + prior_prec * tau_mean) / prec;
            let z: f64 = StandardNormal.sample(&mut rng);
            mu[j] = mean + z / prec.sqrt();
        }
        let z: f64 = StandardNormal.sample(&mut rng);
        tau_mean = summary::mean(&mu) + z * tau_sd / (j_count as f64).sqrt();

        let log_sd = tau_sd.ln();
        let prop = log_sd + log_sd_scale * std_normal(&mut rng);
        let ratio = log_target(prop, &mu, tau_mean) - log_target(log_sd, &mu, tau_mean);
        if mcmc_accept(&mut rng, ratio) {
            tau_sd = prop.exp();
            accepted += 1;
        }
        if t >= settings.burn_in {
            row[..j_count].copy_from_slice(&mu);
            row[j_count] = tau_mean;
            row[j_count + 1] = tau_sd;
            draws.push_row(&row)?;
        }
    }
    let draws = draws.finish()?.with_burn_in(settings.burn_in).with_seed(settings.seed);
    let mut report = ChainReport::new(draws);
    report.acceptance_rate = Some(accepted as f64 / settings.iters as f64);
    report.acceptance_by_parameter = Some(vec![("tau_sd".into(), accepted as f64 / settings.iters as f64)]);
    report.proposal_scale = Some(vec![log_sd_scale]);
    Ok(report)
}

/// Design matrix (first column all ones) and response.
#[derive(Clone, Debug, PartialEq)]
pub struct RegressionData {
    x: DMatrix<f64>,
    y: Vec<f64>,
    names: Vec<String>,
}

impl RegressionData {
    /// `rows` are the rows of the design matrix, including the leading 1.
    pub fn new(names: Vec<String>, rows: &[Vec<f64>], y: Vec<f64>) -> Result<Self> {
        let n = rows.len();
        let k = names.len();
        if y.len() != n {
            return Err(Error::data(format!("{n} design rows but {} responses", y.len())));
        }
        if n <= k {
            return Err(Error::data(format!("need more observations than coefficients (n={n}, k={k})")));
        }
        if rows.iter().any(|r| r.len() != k) {
            return Err(Error::data("design rows must have one value per coefficient"));
        }
        if rows.iter().flatten().chain(&y).any(|v| !v.is_finite()) {
            return Err(Error::data("design and response must be finite"));
        }
        if rows.iter().any(|r| r[0] != 1.0) {
            return Err(Error::data("first design column must be all ones (intercept)"));
        }
        let x = DMatrix::from_fn(n, k, |i, j| rows[i][j]);
        Ok(RegressionData { x, y, names })
    }

    /// Intercept plus the given covariate columns. The intercept is named `intercept`.
    pub fn with_intercept(y: Vec<f64>, covariates: Vec<(String, Vec<f64>)>) -> Result<Self> {
        let mut names = vec!["intercept".to_string()];
        names.extend(covariates.iter().map(|(n, _)| n.clone()));
        if let Some((name, _)) = covariates.iter().find(|(_, c)| c.len() != y.len()) {
            return Err(Error::data(format!("covariate `{name}` length differs from the response")));
        }
        let rows: Vec<Vec<f64>> = (0..y.len())
            .map(|i| std::iter::once(1.0).chain(covariates.iter().map(|(_, c)| c[i])).collect())
            .collect();
        Self::new(names, &rows, y)
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn design(&self) -> &DMatrix<f64> {
        &self.x
    }

    pub fn response(&self) -> &[f64] {
        &self.y
    }

    pub fn nobs(&self) -> usize {
        self.y.len()
    }

    pub fn ncoef(&self) -> usize {
        self.names.len()
    }
}

/// Least-squares pieces shared by the regression routines.
#[derive(Clone, Debug)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    /// Residual mean square `RSS / (n - k)`.
    pub residual_variance: f64,
    /// `(X'X)^{-1}`.
    pub unscaled_covariance: DMatrix<f64>,
}

pub fn least_squares(data: &RegressionData) -> Result<LeastSquares> {
    let xt = data.x.transpose();
    let xtx = &xt * &data.x;
    let chol = xtx
        .clone()
        .cholesky()
        .ok_or_else(|| Error::data("design matrix is rank deficient"))?;
    let l = chol.l();
    let diag: Vec<f64> = (0..l.nrows()).map(|i| l[(i, i)]).collect();
    let dmax = diag.iter().fold(0.0f64, |m, v| m.max(*v));
    if diag.iter().any(|v| *v <= 1e-7 * dmax) {
        return Err(Error::data("design matrix is rank deficient"));
    }
    let y = DVector::from_column_slice(&data.y);
    let beta = chol.solve(&(&xt * &y));
    let resid = &y - &data.x * &beta;
    let dof = (data.nobs() - data.ncoef()) as f64;
    Ok(LeastSquares {
        coefficients: beta.iter().copied().collect(),
        residual_variance: resid.norm_squared() / dof,
        unscaled_covariance: chol.inverse(),
    })
}

/// Exact simulation from the noninformative-prior regression posterior:
/// `sigma^2 = (n-k) s^2 / chi2_{n-k}`, then
/// `beta | sigma^2 ~ Normal(beta_hat, sigma^2 (X'X)^{-1})`.
/// Columns: the coefficient names, then `sigma`.
pub fn sim_linear_regression(data: &RegressionData, draws: usize, seed: Seed) -> Result<DrawMatrix> {
    if draws == 0 {
        return Err(Error::param("need at least one draw"));
    }
    let ls = least_squares(data)?;
    if ls.residual_variance <= 0.0 {
        return Err(Error::data("residual variance is zero (perfect fit)"));
    }
    let k = data.ncoef();
    let dof = (data.nobs() - k) as f64;
    let chi2 = Distribution::gamma(dof / 2.0, 0.5)?;
    let root = ls
        .unscaled_covariance
        .clone()
        .cholesky()
        .ok_or_else(|| Error::numerical("(X'X)^-1 is not positive definite"))?
        .l();
    let beta_hat = DVector::from_column_slice(&ls.coefficients);

    let mut names = data.names.clone();
    names.push("sigma".into());
    let mut out = DrawMatrix::with_capacity(names, draws);
    let mut rng = seed.rng();
    let mut row = vec![0.0; k + 1];
    for _ in 0..draws {
        let sigma = (dof * ls.residual_variance / chi2.draw(&mut rng)).sqrt();
        let z = DVector::from_fn(k, |_, _| StandardNormal.sample(&mut rng));
        let beta = &beta_hat + (&root * z) * sigma;
        row[..k].copy_from_slice(beta.as_slice());
        row[k] = sigma;
        out.push_row(&row)?;
    }
    Ok(out.finish()?.with_seed(seed))
}

/// Row-wise functionals of regression or normal-model draws.
#[derive(Clone, Debug, PartialEq)]
pub enum Functional {
    /// `location + z_q * scale`, the `q` percentile of the sampling distribution.
    NormalPercentile { q: f64, location: String, scale: String },
    /// `effect / scale`.
    StandardizedEffect { effect: String, scale: String },
}

pub fn posterior_functional(draws: &DrawMatrix, kind: &Functional) -> Result<DrawMatrix> {
    let col = |name: &str| {
        draws
            .column_index(name)
            .ok_or_else(|| Error::data(format!("draws have no column `{name}`")))
    };
    match kind {
        Functional::NormalPercentile { q, location, scale } => {
            let z = Distribution::normal(0.0, 1.0)?.quantile(*q)?;
            let (l, s) = (col(location)?, col(scale)?);
            mcmc::transform_draws(draws, vec![format!("percentile_{q}")], |r| vec![r[l] + z * r[s]])
        }
        Functional::StandardizedEffect { effect, scale } => {
            let (e, s) = (col(effect)?, col(scale)?);
            mcmc::transform_draws(draws, vec!["standardized_effect".into()], |r| vec![r[e] / r[s]])
        }
    }
}

/// Heuristic check for (quasi-)complete separation: a constant response, or a
/// single covariate whose values split the two classes.
pub fn separation_warnings(data: &RegressionData) -> Vec<String> {
    let mut out = Vec::new();
    let ones = data.y.iter().filter(|v| **v == 1.0).count();
    if ones == 0 || ones == data.nobs() {
        out.push("response is constant: the likelihood has no finite maximum, posterior driven by the prior".into());
        return out;
    }
    for j in 1..data.ncoef() {
        let (mut lo1, mut hi1, mut lo0, mut hi0) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for i in 0..data.nobs() {
            let v = data.x[(i, j)];
            if data.y[i] == 1.0 {
                lo1 = lo1.min(v);
                hi1 = hi1.max(v);
            } else {
                lo0 = lo0.min(v);
                hi0 = hi0.max(v);
            }
        }
        if hi0 <= lo1 || hi1 <= lo0 {
            out.push(format!("covariate `{}` separates the response classes", data.names[j]));
        }
    }
    out
}

/// Logistic regression with independent `Normal(0, prior_sd)` priors,
/// sampled by random-walk Metropolis from `beta = 0`.
///
/// Without `scale`, the proposal step for each coefficient is
/// `2.4 / sqrt(k)` times its Laplace-approximation sd.
pub fn fit_logistic(
    data: &RegressionData,
    settings: &RunSettings,
    prior_sd: f64,
    scale: Option<Vec<f64>>,
) -> Result<ChainReport> {
    settings.validate()?;
    if !(prior_sd.is_finite() && prior_sd > 0.0) {
        return Err(Error::param(format!("prior sd must be positive, got {prior_sd}")));
    }
    if data.y.iter().any(|v| *v != 0.0 && *v != 1.0) {
        return Err(Error::data("logistic regression needs a 0/1 response"));
    }
    let k = data.ncoef();
    let x = data.x.clone();
    let y = data.y.clone();
    let prior_var = prior_sd * prior_sd;
    let target = FnTarget::named(data.names.clone(), move |beta: &[f64]| {
        let b = DVector::from_column_slice(beta);
        let eta = &x * b;
        let like: f64 = eta.iter().zip(&y).map(|(e, yi)| yi * e - log1p_exp(*e)).sum();
        like - 0.5 * beta.iter().map(|v| v * v).sum::<f64>() / prior_var
    });
    let init = vec![0.0; k];
    let mut warnings = separation_warnings(data);
    let scale = match scale {
        Some(s) => s,
        None => match mcmc::laplace_approx(&target, &init) {
            Ok(la) => la.sd().iter().map(|s| 2.4 / (k as f64).sqrt() * s).collect(),
            Err(e) => {
                warnings.push(format!("Laplace approximation failed ({e}); using proposal scale 0.1"));
                vec![0.1; k]
            }
        },
    };
    let mut report = mcmc::metropolis_rw(&target, &scale, settings, &init)?;
    report.warnings = warnings;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn group_validation() {
        assert!(GroupCounts::from_pairs(&[(1, 10)]).is_err());
        assert!(GroupCounts::from_pairs(&[(1, 10), (11, 10)]).is_err());
        assert!(GroupMeans::new(vec!["a".into(), "b".into()], vec![1.0, 2.0], vec![1, 0], 1.0).is_err());
        assert!(GroupMeans::new(vec!["a".into(), "b".into()], vec![1.0, 2.0], vec![1, 1], 0.0).is_err());
    }

    #[test]
    fn least_squares_by_hand() {
        let d = RegressionData::with_intercept(vec![1.0, 2.0, 2.0], vec![("x".into(), vec![0.0, 1.0, 2.0])]).unwrap();
        let ls = least_squares(&d).unwrap();
        assert!((ls.coefficients[0] - 7.0 / 6.0).abs() < 1e-12);
        assert!((ls.coefficients[1] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rank_deficient_design() {
        let d = RegressionData::with_intercept(
            vec![1.0, 2.0, 2.0, 3.0],
            vec![("x".into(), vec![0.0, 1.0, 2.0, 3.0]), ("x2".into(), vec![0.0, 2.0, 4.0, 6.0])],
        )
        .unwrap();
        assert!(sim_linear_regression(&d, 10, Seed(1)).is_err());
        assert!(RegressionData::new(vec!["a".into()], &[vec![2.0], vec![1.0]], vec![1.0, 2.0]).is_err());
    }

    #[test]
    fn functionals_on_constant_rows() {
        let m = DrawMatrix::from_rows(vec!["mu".into(), "sigma".into(), "g".into()], &vec![vec![0.0, 2.0, 1.0]; 4]).unwrap();
        let e = posterior_functional(&m, &Functional::StandardizedEffect { effect: "g".into(), scale: "sigma".into() }).unwrap();
        assert!(e.column(0).iter().all(|v| *v == 0.5));
        let p = posterior_functional(
            &m,
            &Functional::NormalPercentile { q: 0.5, location: "mu".into(), scale: "sigma".into() },
        )
        .unwrap();
        assert!(p.column(0).iter().all(|v| v.abs() < 1e-12));
        let missing = Functional::StandardizedEffect { effect: "beta".into(), scale: "sigma".into() };
        assert!(posterior_functional(&m, &missing).is_err());
    }

    #[test]
    fn logistic_needs_kept_draws() {
        let d = RegressionData::with_intercept(vec![1.0, 1.0, 0.0], vec![]).unwrap();
        let e = RunSettings::new(100, 100, Seed(1)).unwrap_err();
        assert!(e.to_string().contains("iters must exceed burn_in"));
        let bad = RunSettings { iters: 100, burn_in: 100, seed: Seed(1) };
        assert!(fit_logistic(&d, &bad, 10.0, None).is_err());
        let nonbinary = RegressionData::with_intercept(vec![1.0, 2.0, 0.0], vec![]).unwrap();
        let ok = RunSettings::new(10, 0, Seed(1)).unwrap();
        assert!(fit_logistic(&nonbinary, &ok, 10.0, None).is_err());
    }

    #[test]
    fn separation_is_flagged() {
        let d = RegressionData::with_intercept(vec![0.0, 0.0, 1.0, 1.0], vec![("x".into(), vec![1.0, 2.0, 3.0, 4.0])]).unwrap();
        assert_eq!(separation_warnings(&d).len(), 1);
        let all_one = RegressionData::with_intercept(vec![1.0, 1.0], vec![]).unwrap();
        assert!(!separation_warnings(&all_one).is_empty());
    }
}
