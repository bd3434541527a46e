//! Parametric distribution primitives: density, CDF, quantile and sampling.

use std::f64::consts::PI;
use std::fmt;

use rand::Rng;
use rand_distr::Distribution as _;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::Seed;
use crate::special::{
    binomial_log_kernel, ln_beta, ln_choose, ln_gamma, regularized_beta, regularized_gamma_p,
    regularized_gamma_q, std_normal_cdf,
};

/// Family tag plus parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Family {
    Beta { a: f64, b: f64 },
    Normal { mean: f64, sd: f64 },
    Gamma { shape: f64, rate: f64 },
    InverseGamma { shape: f64, scale: f64 },
    Binomial { trials: u64, prob: f64 },
    Uniform { lo: f64, hi: f64 },
    StudentT { df: f64, location: f64, scale: f64 },
}

/// A validated member of one of the supported families.
///
/// Values are immutable; construct through the named constructors or
/// [`Distribution::new`], which reject parameters outside the family's domain.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(transparent)]
pub struct Distribution(Family);

fn positive(name: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be positive and finite, got {v}")))
    }
}

fn finite(name: &str, v: f64) -> Result<()> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be finite, got {v}")))
    }
}

impl Distribution {
    pub fn new(family: Family) -> Result<Self> {
        match family {
            Family::Beta { a, b } => {
                positive("beta shape a", a)?;
                positive("beta shape b", b)?;
            }
            Family::Normal { mean, sd } => {
                finite("normal mean", mean)?;
                positive("normal sd", sd)?;
            }
            Family::Gamma { shape, rate } => {
                positive("gamma shape", shape)?;
                positive("gamma rate", rate)?;
            }
            Family::InverseGamma { shape, scale } => {
                positive("inverse-gamma shape", shape)?;
                positive("inverse-gamma scale", scale)?;
            }
            Family::Binomial { prob, .. } => {
                if !(0.0..=1.0).contains(&prob) {
                    return Err(Error::param(format!(
                        "binomial probability must lie in [0, 1], got {prob}"
                    )));
                }
            }
            Family::Uniform { lo, hi } => {
                finite("uniform lower bound", lo)?;
                finite("uniform upper bound", hi)?;
                if lo >= hi {
                    return Err(Error::param(format!(
                        "uniform bounds must satisfy lo < hi, got ({lo}, {hi})"
                    )));
                }
            }
            Family::StudentT { df, location, scale } => {
                positive("t degrees of freedom", df)?;
                finite("t location", location)?;
                positive("t scale", scale)?;
            }
        }
        Ok(Distribution(family))
    }

    pub fn beta(a: f64, b: f64) -> Result<Self> {
        Self::new(Family::Beta { a, b })
    }

    pub fn normal(mean: f64, sd: f64) -> Result<Self> {
        Self::new(Family::Normal { mean, sd })
    }

    pub fn gamma(shape: f64, rate: f64) -> Result<Self> {
        Self::new(Family::Gamma { shape, rate })
    }

    pub fn inverse_gamma(shape: f64, scale: f64) -> Result<Self> {
        Self::new(Family::InverseGamma { shape, scale })
    }

    pub fn binomial(trials: u64, prob: f64) -> Result<Self> {
        Self::new(Family::Binomial { trials, prob })
    }

    pub fn uniform(lo: f64, hi: f64) -> Result<Self> {
        Self::new(Family::Uniform { lo, hi })
    }

    pub fn student_t(df: f64, location: f64, scale: f64) -> Result<Self> {
        Self::new(Family::StudentT { df, location, scale })
    }

    pub fn family(&self) -> &Family {
        &self.0
    }

    pub fn is_discrete(&self) -> bool {
        matches!(self.0, Family::Binomial { .. })
    }

    /// Closure of the support as `(lower, upper)`.
    pub fn support(&self) -> (f64, f64) {
        match self.0 {
            Family::Beta { .. } => (0.0, 1.0),
            Family::Normal { .. } | Family::StudentT { .. } => {
                (f64::NEG_INFINITY, f64::INFINITY)
            }
            Family::Gamma { .. } | Family::InverseGamma { .. } => (0.0, f64::INFINITY),
            Family::Binomial { trials, .. } => (0.0, trials as f64),
            Family::Uniform { lo, hi } => (lo, hi),
        }
    }

    /// Log density (log pmf for the binomial); `-inf` outside the support.
    pub fn log_density(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NEG_INFINITY;
        }
        match self.0 {
            Family::Beta { a, b } => {
                if !(0.0..=1.0).contains(&x) {
                    return f64::NEG_INFINITY;
                }
                let lx = if a == 1.0 { 0.0 } else { (a - 1.0) * x.ln() };
                let l1x = if b == 1.0 { 0.0 } else { (b - 1.0) * (-x).ln_1p() };
                let v = lx + l1x - ln_beta(a, b);
                if v.is_nan() {
                    f64::NEG_INFINITY
                } else {
                    v
                }
            }
            Family::Normal { mean, sd } => {
                let z = (x - mean) / sd;
                -0.5 * (2.0 * PI).ln() - sd.ln() - 0.5 * z * z
            }
            Family::Gamma { shape, rate } => {
                if x < 0.0 {
                    return f64::NEG_INFINITY;
                }
                if x == 0.0 {
                    return match shape.partial_cmp(&1.0) {
                        Some(std::cmp::Ordering::Less) => f64::INFINITY,
                        Some(std::cmp::Ordering::Equal) => rate.ln(),
                        _ => f64::NEG_INFINITY,
                    };
                }
                shape * rate.ln() - ln_gamma(shape) + (shape - 1.0) * x.ln() - rate * x
            }
            Family::InverseGamma { shape, scale } => {
                if x <= 0.0 {
                    return f64::NEG_INFINITY;
                }
                shape * scale.ln() - ln_gamma(shape) - (shape + 1.0) * x.ln() - scale / x
            }
            Family::Binomial { trials, prob } => {
                if x < 0.0 || x > trials as f64 || x.fract() != 0.0 {
                    return f64::NEG_INFINITY;
                }
                ln_choose(trials, x as u64) + binomial_log_kernel(x, trials as f64, prob)
            }
            Family::Uniform { lo, hi } => {
                if x < lo || x > hi {
                    f64::NEG_INFINITY
                } else {
                    -(hi - lo).ln()
                }
            }
            Family::StudentT { df, location, scale } => {
                let t = (x - location) / scale;
                ln_gamma((df + 1.0) / 2.0)
                    - ln_gamma(df / 2.0)
                    - 0.5 * (df * PI).ln()
                    - scale.ln()
                    - (df + 1.0) / 2.0 * (t * t / df).ln_1p()
            }
        }
    }

    pub fn density(&self, x: f64) -> f64 {
        self.log_density(x).exp()
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x.is_nan() {
            return f64::NAN;
        }
        match self.0 {
            Family::Beta { a, b } => regularized_beta(x, a, b),
            Family::Normal { mean, sd } => std_normal_cdf((x - mean) / sd),
            Family::Gamma { shape, rate } => regularized_gamma_p(shape, rate * x),
            Family::InverseGamma { shape, scale } => {
                if x <= 0.0 {
                    0.0
                } else {
                    regularized_gamma_q(shape, scale / x)
                }
            }
            Family::Binomial { trials, prob } => {
                if x < 0.0 {
                    return 0.0;
                }
                let k = x.floor();
                if k >= trials as f64 {
                    return 1.0;
                }
                // P(X <= k) = I_{1-p}(n - k, k + 1)
                regularized_beta(1.0 - prob, trials as f64 - k, k + 1.0)
            }
            Family::Uniform { lo, hi } => ((x - lo) / (hi - lo)).clamp(0.0, 1.0),
            Family::StudentT { df, location, scale } => {
                let t = (x - location) / scale;
                if t.is_infinite() {
                    return if t > 0.0 { 1.0 } else { 0.0 };
                }
                let tail = 0.5 * regularized_beta(df / (df + t * t), df / 2.0, 0.5);
                if t > 0.0 {
                    1.0 - tail
                } else {
                    tail
                }
            }
        }
    }

    /// Smallest `x` with `cdf(x) >= q`, for `q` in (0, 1).
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if !(q > 0.0 && q < 1.0) {
            return Err(Error::param(format!("quantile level must lie in (0, 1), got {q}")));
        }
        Ok(match self.0 {
            Family::Uniform { lo, hi } => lo + q * (hi - lo),
            Family::Binomial { trials, .. } => {
                let mut k = 0;
                while k < trials && self.cdf(k as f64) < q {
                    k += 1;
                }
                k as f64
            }
            _ => self.invert_cdf(q),
        })
    }

    pub fn median(&self) -> f64 {
        self.quantile(0.5).expect("0.5 is a valid level")
    }

    /// Initial location and width for bracketing the inverse CDF.
    fn center_and_width(&self) -> (f64, f64) {
        match self.0 {
            Family::Beta { a, b } => (a / (a + b), 0.25),
            Family::Normal { mean, sd } => (mean, sd),
            Family::Gamma { shape, rate } => (shape / rate, shape.sqrt() / rate),
            Family::InverseGamma { shape, scale } => (scale / (shape + 1.0), scale / shape),
            Family::StudentT { location, scale, .. } => (location, scale),
            Family::Binomial { .. } | Family::Uniform { .. } => unreachable!(),
        }
    }

    fn invert_cdf(&self, q: f64) -> f64 {
        let (s_lo, s_hi) = self.support();
        let (center, width) = self.center_and_width();

        let mut lo = center;
        let mut step = width;
        while self.cdf(lo) >= q {
            if lo <= s_lo {
                return s_lo;
            }
            lo = (lo - step).max(s_lo);
            step *= 2.0;
        }
        let mut hi = center;
        let mut step = width;
        while self.cdf(hi) < q {
            if hi >= s_hi {
                return s_hi;
            }
            hi = (hi + step).min(s_hi);
            step *= 2.0;
        }

        // Safeguarded Newton: bisect whenever the Newton step leaves the bracket.
        let mut x = 0.5 * (lo + hi);
        for _ in 0..400 {
            let f = self.cdf(x) - q;
            if f >= 0.0 {
                hi = x;
            } else {
                lo = x;
            }
            if f.abs() < 1e-15 || hi - lo <= 4.0 * f64::EPSILON * x.abs().max(f64::MIN_POSITIVE) {
                break;
            }
            let dens = self.density(x);
            let newton = x - f / dens;
            x = if dens > 0.0 && newton.is_finite() && newton > lo && newton < hi {
                newton
            } else {
                0.5 * (lo + hi)
            };
        }
        x
    }

    /// Mean; `NaN` when undefined (t with df <= 1) and `inf` when infinite.
    pub fn mean(&self) -> f64 {
        match self.0 {
            Family::Beta { a, b } => a / (a + b),
            Family::Normal { mean, .. } => mean,
            Family::Gamma { shape, rate } => shape / rate,
            Family::InverseGamma { shape, scale } => {
                if shape > 1.0 {
                    scale / (shape - 1.0)
                } else {
                    f64::INFINITY
                }
            }
            Family::Binomial { trials, prob } => trials as f64 * prob,
            Family::Uniform { lo, hi } => 0.5 * (lo + hi),
            Family::StudentT { df, location, .. } => {
                if df > 1.0 {
                    location
                } else {
                    f64::NAN
                }
            }
        }
    }

    pub fn variance(&self) -> f64 {
        match self.0 {
            Family::Beta { a, b } => a * b / ((a + b).powi(2) * (a + b + 1.0)),
            Family::Normal { sd, .. } => sd * sd,
            Family::Gamma { shape, rate } => shape / (rate * rate),
            Family::InverseGamma { shape, scale } => {
                if shape > 2.0 {
                    scale * scale / ((shape - 1.0).powi(2) * (shape - 2.0))
                } else {
                    f64::INFINITY
                }
            }
            Family::Binomial { trials, prob } => trials as f64 * prob * (1.0 - prob),
            Family::Uniform { lo, hi } => (hi - lo).powi(2) / 12.0,
            Family::StudentT { df, scale, .. } => {
                if df > 2.0 {
                    scale * scale * df / (df - 2.0)
                } else if df > 1.0 {
                    f64::INFINITY
                } else {
                    f64::NAN
                }
            }
        }
    }

    pub fn sd(&self) -> f64 {
        self.variance().sqrt()
    }

    /// One draw using the caller's generator.
    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        match self.0 {
            Family::Beta { a, b } => rand_distr::Beta::new(a, b).expect("validated").sample(rng),
            Family::Normal { mean, sd } => {
                let z: f64 = rand_distr::StandardNormal.sample(rng);
                mean + sd * z
            }
            Family::Gamma { shape, rate } => rand_distr::Gamma::new(shape, 1.0 / rate)
                .expect("validated")
                .sample(rng),
            Family::InverseGamma { shape, scale } => {
                let g = rand_distr::Gamma::new(shape, 1.0).expect("validated").sample(rng);
                scale / g
            }
            Family::Binomial { trials, prob } => rand_distr::Binomial::new(trials, prob)
                .expect("validated")
                .sample(rng) as f64,
            Family::Uniform { lo, hi } => lo + (hi - lo) * rng.random::<f64>(),
            Family::StudentT { df, location, scale } => {
                let t = rand_distr::StudentT::new(df).expect("validated").sample(rng);
                location + scale * t
            }
        }
    }

    /// `n` i.i.d. draws from a fresh stream seeded with `seed`.
    pub fn sample(&self, n: usize, seed: Seed) -> Vec<f64> {
        let mut rng = seed.rng();
        self.sample_with(n, &mut rng)
    }

    pub fn sample_with<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<f64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.0 {
            Family::Beta { a, b } => write!(f, "Beta({a}, {b})"),
            Family::Normal { mean, sd } => write!(f, "Normal({mean}, {sd})"),
            Family::Gamma { shape, rate } => write!(f, "Gamma({shape}, {rate})"),
            Family::InverseGamma { shape, scale } => write!(f, "InverseGamma({shape}, {scale})"),
            Family::Binomial { trials, prob } => write!(f, "Binomial({trials}, {prob})"),
            Family::Uniform { lo, hi } => write!(f, "Uniform({lo}, {hi})"),
            Family::StudentT { df, location, scale } => {
                write!(f, "StudentT({df}, {location}, {scale})")
            }
        }
    }
}
