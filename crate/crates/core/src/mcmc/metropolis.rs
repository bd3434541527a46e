use rand::Rng;
use rand_distr::{Distribution as _, StandardNormal};
use serde::Serialize;

use super::{ChainReport, RunSettings};
use crate::distributions::Distribution;
use crate::draws::DrawMatrix;
use crate::error::{Error, Result};
use crate::rng::{ChainRng, Seed};

/// Log of an unnormalized posterior density on `R^d`.
///
/// Implementations return `-inf` outside the support; a `NaN` is treated as `-inf`.
pub trait LogTarget {
    fn dim(&self) -> usize;

    fn log_density(&self, x: &[f64]) -> f64;

    fn names(&self) -> Vec<String> {
        if self.dim() == 1 {
            return vec!["theta".into()];
        }
        (1..=self.dim()).map(|i| format!("theta_{i}")).collect()
    }
}

/// Wraps a closure as a [`LogTarget`].
pub struct FnTarget<F> {
    dim: usize,
    f: F,
    names: Option<Vec<String>>,
}

impl<F: Fn(&[f64]) -> f64> FnTarget<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnTarget { dim, f, names: None }
    }

    pub fn named(names: Vec<String>, f: F) -> Self {
        FnTarget { dim: names.len(), f, names: Some(names) }
    }
}

impl<F: Fn(&[f64]) -> f64> LogTarget for FnTarget<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        (self.f)(x)
    }

    fn names(&self) -> Vec<String> {
        match &self.names {
            Some(n) => n.clone(),
            None if self.dim == 1 => vec!["theta".into()],
            None => (1..=self.dim).map(|i| format!("theta_{i}")).collect(),
        }
    }
}

impl LogTarget for Distribution {
    fn dim(&self) -> usize {
        1
    }

    fn log_density(&self, x: &[f64]) -> f64 {
        Distribution::log_density(self, x[0])
    }
}

pub(crate) fn eval<T: LogTarget + ?Sized>(target: &T, x: &[f64]) -> f64 {
    let v = target.log_density(x);
    if v.is_nan() {
        f64::NEG_INFINITY
    } else {
        v
    }
}

/// Metropolis acceptance: `log u < log_ratio`.
pub(crate) fn accept(rng: &mut ChainRng, log_ratio: f64) -> bool {
    let u: f64 = rng.random();
    u.ln() < log_ratio
}

fn check_inputs<T: LogTarget + ?Sized>(target: &T, scale: &[f64], init: &[f64]) -> Result<f64> {
    let d = target.dim();
    if scale.len() != d || init.len() != d {
        return Err(Error::param(format!(
            "target has dimension {d} but got {} scales and {} initial values",
            scale.len(),
            init.len()
        )));
    }
    if let Some(s) = scale.iter().find(|s| !(s.is_finite() && **s > 0.0)) {
        return Err(Error::param(format!("proposal scales must be positive, got {s}")));
    }
    let lp = eval(target, init);
    if lp == f64::NEG_INFINITY || !lp.is_finite() {
        return Err(Error::param(format!("initial point {init:?} is outside the support of the target")));
    }
    Ok(lp)
}

struct Walk {
    state: Vec<f64>,
    log_p: f64,
    accepted: usize,
}

impl Walk {
    fn step<T: LogTarget + ?Sized>(&mut self, target: &T, scale: &[f64], rng: &mut ChainRng, proposal: &mut [f64]) {
        for ((p, x), s) in proposal.iter_mut().zip(&self.state).zip(scale) {
            let z: f64 = StandardNormal.sample(rng);
            *p = x + s * z;
        }
        let lp = eval(target, proposal);
        if accept(rng, lp - self.log_p) {
            self.state.copy_from_slice(proposal);
            self.log_p = lp;
            self.accepted += 1;
        }
    }
}

/// Random-walk Metropolis with Gaussian proposals `theta + scale * z`.
pub fn metropolis_rw<T: LogTarget + ?Sized>(
    target: &T,
    scale: &[f64],
    settings: &RunSettings,
    init: &[f64],
) -> Result<ChainReport> {
    settings.validate()?;
    let log_p = check_inputs(target, scale, init)?;
    let mut rng = settings.seed.rng();
    let mut walk = Walk { state: init.to_vec(), log_p, accepted: 0 };
    let mut proposal = vec![0.0; init.len()];
    let mut draws = DrawMatrix::with_capacity(target.names(), settings.kept());
    for t in 0..settings.iters {
        walk.step(target, scale, &mut rng, &mut proposal);
        if t >= settings.burn_in {
            draws.push_row(&walk.state)?;
        }
    }
    let draws = draws.finish()?.with_burn_in(settings.burn_in).with_seed(settings.seed);
    let mut report = ChainReport::new(draws);
    report.acceptance_rate = Some(walk.accepted as f64 / settings.iters as f64);
    report.proposal_scale = Some(scale.to_vec());
    Ok(report)
}

/// Pilot runs used to pick a proposal scale.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TuningRecord {
    /// `(scale multiplier, acceptance rate)` for each pilot run.
    pub rounds: Vec<(f64, f64)>,
    pub scale: Vec<f64>,
    pub converged: bool,
}

pub const TUNE_TARGET: (f64, f64) = (0.2, 0.5);

/// Rescales `scale` by short pilot runs until the acceptance rate falls in
/// [0.2, 0.5]. Sampling afterwards uses the returned scale unchanged.
pub fn tune_scale<T: LogTarget + ?Sized>(
    target: &T,
    scale: &[f64],
    init: &[f64],
    seed: Seed,
    pilot_iters: usize,
    max_rounds: usize,
) -> Result<TuningRecord> {
    let log_p = check_inputs(target, scale, init)?;
    if pilot_iters == 0 {
        return Err(Error::param("pilot runs need at least one iteration"));
    }
    let mut walk = Walk { state: init.to_vec(), log_p, accepted: 0 };
    let mut proposal = vec![0.0; init.len()];
    let mut mult = 1.0;
    let mut factor = 2.0f64;
    let mut last_dir = 0i8;
    let mut rounds = Vec::new();
    for r in 0..max_rounds {
        let s: Vec<f64> = scale.iter().map(|v| v * mult).collect();
        let mut rng = seed.rng_stream(r as u64 + 1);
        walk.accepted = 0;
        for _ in 0..pilot_iters {
            walk.step(target, &s, &mut rng, &mut proposal);
        }
        let rate = walk.accepted as f64 / pilot_iters as f64;
        rounds.push((mult, rate));
        let dir = if rate < TUNE_TARGET.0 {
            -1
        } else if rate > TUNE_TARGET.1 {
            1
        } else {
            return Ok(TuningRecord { rounds, scale: s, converged: true });
        };
        if last_dir != 0 && dir != last_dir {
            factor = factor.sqrt();
        }
        last_dir = dir;
        mult = if dir > 0 { mult * factor } else { mult / factor };
    }
    Ok(TuningRecord { rounds, scale: scale.iter().map(|v| v * mult).collect(), converged: false })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_target_always_accepts() {
        let flat = FnTarget::new(2, |_| 0.0);
        let s = RunSettings::new(200, 0, Seed(4)).unwrap();
        let r = metropolis_rw(&flat, &[1.0, 1.0], &s, &[0.0, 0.0]).unwrap();
        assert_eq!(r.acceptance_rate, Some(1.0));
    }

    #[test]
    fn zero_density_region_is_never_entered() {
        // support is x > 0; the chain starts at the edge and proposals below 0 are rejected
        let half = FnTarget::new(1, |x| if x[0] > 0.0 { -x[0] } else { f64::NEG_INFINITY });
        let s = RunSettings::new(2000, 0, Seed(5)).unwrap();
        let r = metropolis_rw(&half, &[5.0], &s, &[1e-3]).unwrap();
        assert!(r.draws.column(0).iter().all(|x| *x > 0.0));

        let nowhere = FnTarget::new(1, |x| if x[0] == 0.0 { 0.0 } else { f64::NEG_INFINITY });
        let r = metropolis_rw(&nowhere, &[1.0], &s, &[0.0]).unwrap();
        assert_eq!(r.acceptance_rate, Some(0.0));
    }

    #[test]
    fn init_outside_support() {
        let beta = Distribution::beta(5.0, 9.0).unwrap();
        let s = RunSettings::new(10, 0, Seed(1)).unwrap();
        assert!(metropolis_rw(&beta, &[0.2], &s, &[1.5]).is_err());
        assert!(metropolis_rw(&beta, &[0.0], &s, &[0.5]).is_err());
        assert!(metropolis_rw(&beta, &[0.1, 0.1], &s, &[0.5]).is_err());
    }

    #[test]
    fn nan_is_rejected_like_neg_inf() {
        let t = FnTarget::new(1, |x| if x[0] > 1.0 { f64::NAN } else { -0.5 * x[0] * x[0] });
        let s = RunSettings::new(3000, 0, Seed(2)).unwrap();
        let r = metropolis_rw(&t, &[1.0], &s, &[0.0]).unwrap();
        assert!(r.draws.column(0).iter().all(|x| *x <= 1.0));
    }

    #[test]
    fn tuning_reaches_target_band() {
        let n = Distribution::normal(0.0, 1.0).unwrap();
        let rec = tune_scale(&n, &[100.0], &[0.0], Seed(3), 1000, 30).unwrap();
        assert!(rec.converged, "{rec:?}");
        let last = rec.rounds.last().unwrap().1;
        assert!((0.2..=0.5).contains(&last));
    }
}
