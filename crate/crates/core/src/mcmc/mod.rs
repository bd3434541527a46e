//! Simulation-based posterior computation: Gibbs sampling for the normal
//! model, random-walk Metropolis, Laplace approximation, draw transformation
//! and chain diagnostics.

mod diagnostics;
mod gibbs;
mod laplace;
mod metropolis;
mod report;

pub use diagnostics::{autocorrelation, diagnostics, effective_sample_size, ColumnDiagnostics};
pub use gibbs::{gibbs_normal, NormalModelData};
pub use laplace::{laplace_approx, LaplaceApprox};
pub use metropolis::{metropolis_rw, tune_scale, FnTarget, LogTarget, TuningRecord};
pub use report::{ChainReport, ParameterSummary};

use crate::draws::DrawMatrix;
use crate::error::{Error, Result};
use crate::rng::Seed;

/// Iteration budget shared by the samplers. `iters` counts every iteration,
/// including the `burn_in` discarded at the start.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunSettings {
    pub iters: usize,
    pub burn_in: usize,
    pub seed: Seed,
}

impl RunSettings {
    pub fn new(iters: usize, burn_in: usize, seed: Seed) -> Result<Self> {
        if iters <= burn_in {
            return Err(Error::param(format!(
                "iters must exceed burn_in (iters={iters}, burn_in={burn_in})"
            )));
        }
        Ok(RunSettings { iters, burn_in, seed })
    }

    /// Burn-in defaults to 10% of the iterations.
    pub fn with_default_burn_in(iters: usize, seed: Seed) -> Result<Self> {
        Self::new(iters, iters / 10, seed)
    }

    pub fn kept(&self) -> usize {
        self.iters - self.burn_in
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.iters, self.burn_in, self.seed).map(|_| ())
    }
}

/// Applies `h` to every row; `h` must return one value per output name.
pub fn transform_draws<F>(draws: &DrawMatrix, names: Vec<String>, h: F) -> Result<DrawMatrix>
where
    F: Fn(&[f64]) -> Vec<f64>,
{
    let mut out = DrawMatrix::with_capacity(names, draws.nrows());
    for row in draws.rows() {
        out.push_row(&h(row))?;
    }
    let mut out = out.finish()?.with_burn_in(draws.burn_in());
    if let Some(s) = draws.seed() {
        out = out.with_seed(s);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn settings_require_kept_draws() {
        let e = RunSettings::new(100, 100, Seed(1)).unwrap_err();
        assert!(e.to_string().contains("iters must exceed burn_in"));
        assert_eq!(RunSettings::with_default_burn_in(1000, Seed(1)).unwrap().burn_in, 100);
    }

    #[test]
    fn identity_transform() {
        let m = DrawMatrix::from_rows(vec!["p".into()], &[vec![0.2], vec![0.7]]).unwrap();
        let t = transform_draws(&m, vec!["p".into()], |r| r.to_vec()).unwrap();
        assert_eq!(t, m);
    }

    #[test]
    fn transform_checks_width() {
        let m = DrawMatrix::from_rows(vec!["p".into()], &[vec![0.2]]).unwrap();
        assert!(transform_draws(&m, vec!["a".into(), "b".into()], |r| r.to_vec()).is_err());
        assert!(transform_draws(&m, vec!["a".into()], |_| vec![f64::INFINITY]).is_err());
    }
}
