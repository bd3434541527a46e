//! Model comparison and criticism: marginal likelihoods, Bayes factors,
//! posterior predictive checks and prior sensitivity scans.

use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::conjugate::{self, BetaBinomialState, IntervalMethod, NormalMeanState};
use crate::discrete::{self, DiscreteTable, LikelihoodSpec, Point};
use crate::distributions::Distribution;
use crate::draws::DrawMatrix;
use crate::error::{Error, Result};
use crate::rng::{ChainRng, Seed};
use crate::special::ln_beta;
use crate::summary;

#[derive(Clone, Debug, PartialEq)]
pub enum Prior {
    Discrete(DiscreteTable),
    Beta { a: f64, b: f64 },
    Normal { mean: f64, sd: f64 },
}

/// A prior paired with a label; the sampling family comes from the data.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub label: String,
    pub prior: Prior,
}

impl ModelSpec {
    pub fn new(label: impl Into<String>, prior: Prior) -> Result<Self> {
        match &prior {
            Prior::Discrete(_) => {}
            Prior::Beta { a, b } => {
                Distribution::beta(*a, *b)?;
            }
            Prior::Normal { mean, sd } => {
                Distribution::normal(*mean, *sd)?;
            }
        }
        Ok(ModelSpec { label: label.into(), prior })
    }

    pub fn beta(a: f64, b: f64) -> Result<Self> {
        Self::new(format!("beta({a},{b})"), Prior::Beta { a, b })
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        Self::new(format!("normal({mean},{sd})"), Prior::Normal { mean, sd })
    }

    pub fn discrete(label: impl Into<String>, table: DiscreteTable) -> Self {
        ModelSpec { label: label.into(), prior: Prior::Discrete(table) }
    }

    /// Point-mass prior at a scalar value.
    pub fn point_mass(p: f64) -> Self {
        Self::discrete(format!("point({p})"), DiscreteTable::point_mass(Point::Scalar(p)))
    }
}

fn incompatible(spec: &ModelSpec, data: &LikelihoodSpec) -> Error {
    let kind = match data {
        LikelihoodSpec::Binomial { .. } => "binomial",
        LikelihoodSpec::NormalKnownSd { .. } => "normal",
        LikelihoodSpec::Table(_) => "tabulated",
    };
    Error::data(format!("model `{}` cannot be paired with {kind} data", spec.label))
}

/// `log p(data | model)`; `-inf` when the data are impossible under every
/// prior point.
pub fn log_marginal_likelihood(spec: &ModelSpec, data: &LikelihoodSpec) -> Result<f64> {
    match (&spec.prior, data) {
        (Prior::Discrete(t), _) => match discrete::bayes_update_with_evidence(t, data) {
            Ok(u) => Ok(u.log_evidence),
            Err(Error::ImpossibleData) => Ok(f64::NEG_INFINITY),
            Err(e) => Err(e),
        },
        (Prior::Beta { a, b }, LikelihoodSpec::Binomial { y, n }) => {
            let (y, n) = (*y as f64, *n as f64);
            Ok(crate::special::ln_choose(n as u64, y as u64) + ln_beta(a + y, b + n - y) - ln_beta(*a, *b))
        }
        (Prior::Normal { mean, sd }, LikelihoodSpec::NormalKnownSd { ybar, n, sigma }) => {
            let spread = (sd * sd + sigma * sigma / *n as f64).sqrt();
            Ok(Distribution::normal(*mean, spread)?.log_density(*ybar))
        }
        _ => Err(incompatible(spec, data)),
    }
}

pub fn marginal_likelihood(spec: &ModelSpec, data: &LikelihoodSpec) -> Result<f64> {
    Ok(log_marginal_likelihood(spec, data)?.exp())
}

/// `p(data | m1) / p(data | m2)`, computed on the log scale.
pub fn bayes_factor(m1: &ModelSpec, m2: &ModelSpec, data: &LikelihoodSpec) -> Result<f64> {
    let l1 = log_marginal_likelihood(m1, data)?;
    let l2 = log_marginal_likelihood(m2, data)?;
    if l2 == f64::NEG_INFINITY {
        return Err(Error::data(format!("marginal likelihood of `{}` is zero", m2.label)));
    }
    Ok((l1 - l2).exp())
}

/// Where posterior parameter draws come from.
#[derive(Clone, Debug)]
pub enum PosteriorSource {
    /// Rows are resampled uniformly; `columns` picks the parameters in order.
    Draws { draws: DrawMatrix, columns: Vec<usize> },
    /// Univariate posterior sampled directly.
    Distribution(Distribution),
}

impl PosteriorSource {
    pub fn from_draws(draws: DrawMatrix, names: &[&str]) -> Result<Self> {
        let columns = names
            .iter()
            .map(|n| draws.column_index(n).ok_or_else(|| Error::data(format!("draws have no column `{n}`"))))
            .collect::<Result<Vec<_>>>()?;
        Ok(PosteriorSource::Draws { draws, columns })
    }

    fn dim(&self) -> usize {
        match self {
            PosteriorSource::Draws { columns, .. } => columns.len(),
            PosteriorSource::Distribution(_) => 1,
        }
    }

    fn draw(&self, rng: &mut ChainRng, out: &mut Vec<f64>) {
        out.clear();
        match self {
            PosteriorSource::Draws { draws, columns } => {
                let row = draws.row(rng.random_range(0..draws.nrows()));
                out.extend(columns.iter().map(|&j| row[j]));
            }
            PosteriorSource::Distribution(d) => out.push(d.draw(rng)),
        }
    }
}

/// Sampling model for replicated data, with the observed design.
#[derive(Clone, Debug, PartialEq)]
pub enum SamplingModel {
    /// One count per group, `y_j ~ Binomial(trials_j, p)` with `p` the single parameter.
    Binomial { trials: Vec<u64> },
    /// `n` observations `Normal(mu, sd)`; `mu` is the first parameter and `sd`
    /// is fixed here or, when `None`, the second parameter.
    Normal { n: usize, sd: Option<f64> },
}

impl SamplingModel {
    fn params_needed(&self) -> usize {
        match self {
            SamplingModel::Binomial { .. } => 1,
            SamplingModel::Normal { sd: Some(_), .. } => 1,
            SamplingModel::Normal { sd: None, .. } => 2,
        }
    }

    fn len(&self) -> usize {
        match self {
            SamplingModel::Binomial { trials } => trials.len(),
            SamplingModel::Normal { n, .. } => *n,
        }
    }

    fn replicate(&self, theta: &[f64], rng: &mut ChainRng, out: &mut Vec<f64>) -> Result<()> {
        out.clear();
        match self {
            SamplingModel::Binomial { trials } => {
                let p = theta[0];
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::data(format!("posterior draw p={p} is not a probability")));
                }
                for &n in trials {
                    out.push(Distribution::binomial(n, p)?.draw(rng));
                }
            }
            SamplingModel::Normal { n, sd } => {
                let d = Distribution::normal(theta[0], sd.unwrap_or_else(|| theta[1]))?;
                out.extend((0..*n).map(|_| d.draw(rng)));
            }
        }
        Ok(())
    }
}

/// Built-in test functions.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TestStatistic {
    Mean,
    Variance,
    Min,
    Max,
    SampleSize,
}

impl TestStatistic {
    pub const NAMES: [&'static str; 5] = ["mean", "variance", "min", "max", "n"];

    pub fn from_name(name: &str) -> Option<Self> {
        Some(match name {
            "mean" => Self::Mean,
            "variance" => Self::Variance,
            "min" => Self::Min,
            "max" => Self::Max,
            "n" | "sample-size" => Self::SampleSize,
            _ => return None,
        })
    }

    pub fn eval(self, ys: &[f64]) -> f64 {
        match self {
            Self::Mean => summary::mean(ys),
            Self::Variance => summary::variance(ys),
            Self::Min => ys.iter().copied().fold(f64::INFINITY, f64::min),
            Self::Max => ys.iter().copied().fold(f64::NEG_INFINITY, f64::max),
            Self::SampleSize => ys.len() as f64,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PpcResult {
    pub t_observed: f64,
    pub t_replicates: Vec<f64>,
    pub tail_prob: f64,
}

/// Replicates per random stream; chunk `c` draws from `seed.rng_stream(c)`.
const PPC_CHUNK: usize = 256;

/// Posterior predictive check of `statistic`.
///
/// Replicates are generated in fixed-size chunks with independent streams and
/// concatenated in chunk order, so the result does not depend on the number
/// of worker threads. Tail probability: `(1 + #{T_rep >= T_obs}) / (R + 1)`.
pub fn posterior_predictive_check<T>(
    posterior: &PosteriorSource,
    model: &SamplingModel,
    statistic: T,
    observed: &[f64],
    replicates: usize,
    seed: Seed,
) -> Result<PpcResult>
where
    T: Fn(&[f64]) -> f64 + Sync,
{
    if replicates == 0 {
        return Err(Error::param("need at least one replicate"));
    }
    if observed.len() != model.len() {
        return Err(Error::data(format!(
            "{} observations but the sampling model describes {}",
            observed.len(),
            model.len()
        )));
    }
    if posterior.dim() < model.params_needed() {
        return Err(Error::data(format!(
            "sampling model needs {} parameters, posterior supplies {}",
            model.params_needed(),
            posterior.dim()
        )));
    }
    let t_observed = statistic(observed);
    let chunks = replicates.div_ceil(PPC_CHUNK);
    let parts = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = seed.rng_stream(c as u64);
            let len = PPC_CHUNK.min(replicates - c * PPC_CHUNK);
            let (mut theta, mut rep) = (Vec::new(), Vec::new());
            let mut out = Vec::with_capacity(len);
            for _ in 0..len {
                posterior.draw(&mut rng, &mut theta);
                model.replicate(&theta, &mut rng, &mut rep)?;
                out.push(statistic(&rep));
            }
            Ok(out)
        })
        .collect::<Result<Vec<_>>>()?;
    let t_replicates: Vec<f64> = parts.concat();
    let exceed = t_replicates.iter().filter(|t| **t >= t_observed).count();
    let tail_prob = (1 + exceed) as f64 / (replicates + 1) as f64;
    Ok(PpcResult { t_observed, t_replicates, tail_prob })
}

/// Posterior summary recomputed under each prior in a sensitivity scan.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PosteriorSummary {
    Mean,
    /// Lower end of the equal-tailed interval at this level.
    Lower(f64),
    Upper(f64),
    /// `P(theta > c)`.
    ProbAbove(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub label: String,
    pub summary: f64,
}

enum Posterior {
    Table(DiscreteTable),
    Dist(Distribution),
}

fn posterior(spec: &ModelSpec, data: &LikelihoodSpec) -> Result<Posterior> {
    match (&spec.prior, data) {
        (Prior::Discrete(t), _) => Ok(Posterior::Table(discrete::bayes_update(t, data)?)),
        (Prior::Beta { a, b }, LikelihoodSpec::Binomial { y, n }) => {
            Ok(Posterior::Dist(conjugate::beta_update(&BetaBinomialState::new(*a, *b, *y, *n)?)))
        }
        (Prior::Normal { mean, sd }, LikelihoodSpec::NormalKnownSd { ybar, n, sigma }) => Ok(Posterior::Dist(
            conjugate::normal_update(&NormalMeanState::new(*mean, *sd, *ybar, *n, *sigma)?),
        )),
        _ => Err(incompatible(spec, data)),
    }
}

pub fn posterior_summary(spec: &ModelSpec, data: &LikelihoodSpec, what: PosteriorSummary) -> Result<f64> {
    let check_level = |level: f64| {
        if level > 0.0 && level < 1.0 {
            Ok(())
        } else {
            Err(Error::param(format!("interval level must be in (0, 1), got {level}")))
        }
    };
    match posterior(spec, data)? {
        Posterior::Dist(d) => match what {
            PosteriorSummary::Mean => Ok(d.mean()),
            PosteriorSummary::Lower(level) => {
                Ok(conjugate::credible_interval(&d, level, IntervalMethod::ExactQuantile)?.lower)
            }
            PosteriorSummary::Upper(level) => {
                Ok(conjugate::credible_interval(&d, level, IntervalMethod::ExactQuantile)?.upper)
            }
            PosteriorSummary::ProbAbove(c) => Ok(1.0 - d.cdf(c)),
        },
        Posterior::Table(t) => {
            if t.dim() != 1 {
                return Err(Error::param("sensitivity summaries need a one-dimensional prior"));
            }
            match what {
                PosteriorSummary::Mean => Ok(t.mean()[0]),
                PosteriorSummary::Lower(level) => {
                    check_level(level)?;
                    t.quantile((1.0 - level) / 2.0)
                }
                PosteriorSummary::Upper(level) => {
                    check_level(level)?;
                    t.quantile((1.0 + level) / 2.0)
                }
                PosteriorSummary::ProbAbove(c) => Ok(discrete::table_event_prob(&t, |p| p.coords()[0] > c)),
            }
        }
    }
}

/// The summary under `base`, then under each perturbation, in order.
pub fn sensitivity_scan(
    base: &ModelSpec,
    perturbations: &[ModelSpec],
    data: &LikelihoodSpec,
    what: PosteriorSummary,
) -> Result<Vec<SensitivityRow>> {
    std::iter::once(base)
        .chain(perturbations)
        .map(|m| Ok(SensitivityRow { label: m.label.clone(), summary: posterior_summary(m, data, what)? }))
        .collect()
}
