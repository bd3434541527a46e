use super::{ChainReport, RunSettings};
use crate::distributions::Distribution;
use crate::draws::DrawMatrix;
use crate::error::{Error, Result};
use crate::summary;

/// Observations for the normal model with unknown mean and variance.
#[derive(Clone, Debug, PartialEq)]
pub struct NormalModelData {
    ys: Vec<f64>,
    mean: f64,
}

impl NormalModelData {
    pub fn new(ys: Vec<f64>) -> Result<Self> {
        if ys.len() < 2 {
            return Err(Error::data("the normal model needs at least two observations"));
        }
        if ys.iter().any(|y| !y.is_finite()) {
            return Err(Error::data("observations must be finite"));
        }
        if summary::variance(&ys) <= 0.0 {
            return Err(Error::data("observations have zero sample variance"));
        }
        let mean = summary::mean(&ys);
        Ok(NormalModelData { ys, mean })
    }

    pub fn values(&self) -> &[f64] {
        &self.ys
    }

    pub fn len(&self) -> usize {
        self.ys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ys.is_empty()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `[mu | sigma2] = Normal(ybar, sqrt(sigma2 / n))`.
    pub fn mu_conditional(&self, sigma2: f64) -> Result<Distribution> {
        Distribution::normal(self.mean, (sigma2 / self.len() as f64).sqrt())
    }

    /// `[sigma2 | mu] = InverseGamma(n / 2, sum (y_i - mu)^2 / 2)`.
    pub fn sigma2_conditional(&self, mu: f64) -> Result<Distribution> {
        let ss: f64 = self.ys.iter().map(|y| (y - mu) * (y - mu)).sum();
        Distribution::inverse_gamma(self.len() as f64 / 2.0, ss / 2.0)
    }
}

/// Gibbs sampler for `(mu, sigma2)` under the prior `g(mu, sigma2) ∝ 1/sigma2`,
/// alternating the normal and inverse-gamma conditionals.
/// Columns: `mu`, `sigma2`.
pub fn gibbs_normal(data: &NormalModelData, settings: &RunSettings, init: (f64, f64)) -> Result<ChainReport> {
    settings.validate()?;
    let (mu0, s2_0) = init;
    if !mu0.is_finite() {
        return Err(Error::param("initial mu must be finite"));
    }
    if !(s2_0.is_finite() && s2_0 > 0.0) {
        return Err(Error::param(format!("initial sigma2 must be positive, got {s2_0}")));
    }
    let mut rng = settings.seed.rng();
    let mut draws = DrawMatrix::with_capacity(vec!["mu".into(), "sigma2".into()], settings.kept());
    let mut sigma2 = s2_0;
    for t in 0..settings.iters {
        let mu = data.mu_conditional(sigma2)?.draw(&mut rng);
        sigma2 = data.sigma2_conditional(mu)?.draw(&mut rng);
        if t >= settings.burn_in {
            draws.push_row(&[mu, sigma2])?;
        }
    }
    let draws = draws.finish()?.with_burn_in(settings.burn_in).with_seed(settings.seed);
    Ok(ChainReport::new(draws))
}
