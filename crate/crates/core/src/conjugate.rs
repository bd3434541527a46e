//! Closed-form conjugate updating, percentile-based beta elicitation,
//! equal-tail credible intervals and predictive distributions.

use serde::Serialize;

use crate::distributions::{Distribution, Family};
use crate::error::{Error, Result};
use crate::rng::Seed;
use crate::special::{ln_beta, ln_choose};
use crate::summary;

/// Beta prior plus binomial data.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct BetaBinomialState {
    pub a: f64,
    pub b: f64,
    pub y: u64,
    pub n: u64,
}

impl BetaBinomialState {
    pub fn new(a: f64, b: f64, y: u64, n: u64) -> Result<Self> {
        Distribution::beta(a, b)?;
        if y > n {
            return Err(Error::data(format!("successes y={y} exceed trials n={n}")));
        }
        Ok(BetaBinomialState { a, b, y, n })
    }
}

/// Normal prior on a mean, plus the sample mean of `n` observations with known sd.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct NormalMeanState {
    pub m0: f64,
    pub s0: f64,
    pub ybar: f64,
    pub n: u64,
    pub sigma: f64,
}

impl NormalMeanState {
    pub fn new(m0: f64, s0: f64, ybar: f64, n: u64, sigma: f64) -> Result<Self> {
        Distribution::normal(m0, s0)?;
        if !ybar.is_finite() {
            return Err(Error::data("sample mean must be finite"));
        }
        if n < 1 {
            return Err(Error::data("normal update needs at least one observation"));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::data(format!("sampling sd must be positive, got {sigma}")));
        }
        Ok(NormalMeanState { m0, s0, ybar, n, sigma })
    }

    pub fn prior_precision(&self) -> f64 {
        1.0 / (self.s0 * self.s0)
    }

    pub fn data_precision(&self) -> f64 {
        self.n as f64 / (self.sigma * self.sigma)
    }

    pub fn posterior_precision(&self) -> f64 {
        self.prior_precision() + self.data_precision()
    }
}

/// `Beta(a + y, b + n - y)`.
pub fn beta_update(s: &BetaBinomialState) -> Distribution {
    Distribution::beta(s.a + s.y as f64, s.b + (s.n - s.y) as f64)
        .expect("validated state gives positive shapes")
}

/// Precision-weighted normal posterior for the mean.
pub fn normal_update(s: &NormalMeanState) -> Distribution {
    let precision = s.posterior_precision();
    let mean = (s.m0 * s.prior_precision() + s.ybar * s.data_precision()) / precision;
    Distribution::normal(mean, precision.sqrt().recip()).expect("validated state")
}

const LOG_MIN: f64 = -5.0;
const LOG_MAX: f64 = 12.0;
const SCAN_STEP: f64 = 0.05;
const MATCH_TOL: f64 = 1e-4;

/// Beta distribution whose `q1` and `q2` quantiles equal `x1` and `x2`.
///
/// Nested bisection on `(log a, log b)` over `[-5, 12]^2`: for each `log a` the
/// inner bisection picks `log b` with `cdf(x1) = q1`; the outer search finds
/// the `log a` where `cdf(x2) = q2` along that curve.
pub fn beta_select(p1: (f64, f64), p2: (f64, f64)) -> Result<Distribution> {
    let ((q1, x1), (q2, x2)) = (p1, p2);
    if !(0.0 < q1 && q1 < q2 && q2 < 1.0) {
        return Err(Error::param(format!("percentile levels must satisfy 0 < q1 < q2 < 1, got {q1}, {q2}")));
    }
    if !(0.0 < x1 && x1 < x2 && x2 < 1.0) {
        return Err(Error::param(format!("percentile values must satisfy 0 < x1 < x2 < 1, got {x1}, {x2}")));
    }

    let cdf = |x: f64, la: f64, lb: f64| crate::special::regularized_beta(x, la.exp(), lb.exp());

    // log b with cdf(x1 | a, b) = q1; the cdf at a fixed point increases with b.
    let solve_b = |la: f64| -> Option<f64> {
        let (mut lo, mut hi) = (LOG_MIN, LOG_MAX);
        if cdf(x1, la, lo) > q1 || cdf(x1, la, hi) < q1 {
            return None;
        }
        while hi - lo > 1e-14 {
            let mid = 0.5 * (lo + hi);
            if cdf(x1, la, mid) < q1 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        Some(0.5 * (lo + hi))
    };
    let residual = |la: f64| solve_b(la).map(|lb| (cdf(x2, la, lb) - q2, lb));

    let steps = ((LOG_MAX - LOG_MIN) / SCAN_STEP).round() as usize;
    let mut best: Option<(f64, f64, f64)> = None;
    let mut prev: Option<(f64, f64)> = None;
    let mut bracket = None;
    for i in 0..=steps {
        let la = LOG_MIN + i as f64 * SCAN_STEP;
        let Some((r, lb)) = residual(la) else {
            prev = None;
            continue;
        };
        if best.is_none_or(|(br, _, _)| r.abs() < br.abs()) {
            best = Some((r, la, lb));
        }
        if r == 0.0 {
            bracket = Some((la, la));
            break;
        }
        if let Some((pla, pr)) = prev {
            if pr.signum() != r.signum() {
                bracket = Some((pla, la));
                break;
            }
        }
        prev = Some((la, r));
    }

    let Some((mut lo, mut hi)) = bracket else {
        return Err(match best {
            Some((r, la, lb)) => Error::numerical(format!(
                "no beta distribution in the search box matches both percentiles; \
                 best residual {r:.3e} at Beta({:.4}, {:.4})",
                la.exp(),
                lb.exp()
            )),
            None => Error::numerical("no beta distribution in the search box matches the first percentile"),
        });
    };
    let lo_sign = residual(lo).map(|(r, _)| r.signum()).unwrap_or(0.0);
    while hi - lo > 1e-13 {
        let mid = 0.5 * (lo + hi);
        match residual(mid) {
            Some((r, _)) if r.signum() == lo_sign => lo = mid,
            Some(_) => hi = mid,
            None => break,
        }
    }
    let la = 0.5 * (lo + hi);
    let lb = solve_b(la).ok_or_else(|| Error::numerical("beta_select lost its bracket"))?;
    let d = Distribution::beta(la.exp(), lb.exp())?;
    let e1 = (d.quantile(q1)? - x1).abs();
    let e2 = (d.quantile(q2)? - x2).abs();
    if e1 > MATCH_TOL || e2 > MATCH_TOL {
        return Err(Error::numerical(format!(
            "beta_select converged to {d} but quantile residuals are {e1:.3e}, {e2:.3e}"
        )));
    }
    Ok(d)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntervalMethod {
    ExactQuantile,
    /// Empirical quantiles of `draws` seeded draws.
    Simulation { draws: usize, seed: Seed },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum IntervalKind {
    ExactQuantile,
    Simulation,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CredibleInterval {
    pub lower: f64,
    pub upper: f64,
    pub level: f64,
    pub method: IntervalKind,
}

/// Equal-tail interval with probability `level`.
pub fn credible_interval(d: &Distribution, level: f64, method: IntervalMethod) -> Result<CredibleInterval> {
    if !(level > 0.0 && level < 1.0) {
        return Err(Error::param(format!("interval level must lie in (0, 1), got {level}")));
    }
    let tail = (1.0 - level) / 2.0;
    let (lower, upper, kind) = match method {
        IntervalMethod::ExactQuantile => (d.quantile(tail)?, d.quantile(1.0 - tail)?, IntervalKind::ExactQuantile),
        IntervalMethod::Simulation { draws, seed } => {
            if draws == 0 {
                return Err(Error::param("simulation interval needs at least one draw"));
            }
            let mut xs = d.sample(draws, seed);
            xs.sort_by(f64::total_cmp);
            (
                summary::quantile_sorted(&xs, tail),
                summary::quantile_sorted(&xs, 1.0 - tail),
                IntervalKind::Simulation,
            )
        }
    };
    Ok(CredibleInterval { lower, upper, level, method: kind })
}

/// Beta-binomial predictive pmf of the successes in `m` future trials.
pub fn beta_binomial_predictive(posterior: &Distribution, m: u64) -> Result<Vec<f64>> {
    let Family::Beta { a, b } = *posterior.family() else {
        return Err(Error::param(format!("beta-binomial predictive needs a beta posterior, got {posterior}")));
    };
    let base = ln_beta(a, b);
    Ok((0..=m)
        .map(|k| (ln_choose(m, k) + ln_beta(a + k as f64, b + (m - k) as f64) - base).exp())
        .collect())
}

/// Predictive distribution of one future observation: `Normal(mean, sqrt(sd^2 + sigma^2))`.
/// `sd = 0` means the mean is known.
pub fn normal_predictive(mean: f64, sd: f64, sigma: f64) -> Result<Distribution> {
    if !(sd.is_finite() && sd >= 0.0) {
        return Err(Error::param(format!("posterior sd must be nonnegative, got {sd}")));
    }
    if !(sigma.is_finite() && sigma > 0.0) {
        return Err(Error::param(format!("sampling sd must be positive, got {sigma}")));
    }
    Distribution::normal(mean, sd.hypot(sigma))
}
