use nalgebra::{DMatrix, DVector};
use rand_distr::{Distribution as _, StandardNormal};

use super::metropolis::{eval, LogTarget};
use crate::draws::DrawMatrix;
use crate::error::{Error, Result};
use crate::rng::Seed;

const OBJECTIVE_TOL: f64 = 1e-8;
const MAX_NM_ITERS: usize = 20_000;
const MAX_SWEEPS: usize = 200;
const GOLDEN: f64 = 0.618_033_988_749_894_9;

/// Normal approximation centred at the posterior mode.
#[derive(Clone, Debug)]
pub struct LaplaceApprox {
    pub names: Vec<String>,
    pub mode: Vec<f64>,
    /// Inverse of the negative Hessian of the log target at the mode.
    pub covariance: DMatrix<f64>,
    pub log_density_at_mode: f64,
    chol: DMatrix<f64>,
}

impl LaplaceApprox {
    pub fn sd(&self) -> Vec<f64> {
        (0..self.mode.len()).map(|i| self.covariance[(i, i)].sqrt()).collect()
    }

    /// `n` draws from the approximating multivariate normal.
    pub fn sample(&self, n: usize, seed: Seed) -> Result<DrawMatrix> {
        let d = self.mode.len();
        let mut rng = seed.rng();
        let mut draws = DrawMatrix::with_capacity(self.names.clone(), n);
        let mode = DVector::from_column_slice(&self.mode);
        for _ in 0..n {
            let z = DVector::from_fn(d, |_, _| StandardNormal.sample(&mut rng));
            let x = &mode + &self.chol * z;
            draws.push_row(x.as_slice())?;
        }
        Ok(draws.finish()?.with_seed(seed))
    }
}

/// Finds the mode of `target` starting from `init` and fits a normal
/// approximation whose covariance is the inverse negative Hessian there.
///
/// The mode search runs a Nelder–Mead simplex, then coordinate-wise
/// golden-section sweeps, then Newton polishing steps on the finite-difference
/// Hessian. The Hessian uses central differences with step
/// `max(1e-4, 1e-4 |x_i|)`.
pub fn laplace_approx<T: LogTarget + ?Sized>(target: &T, init: &[f64]) -> Result<LaplaceApprox> {
    let d = target.dim();
    if init.len() != d || d == 0 {
        return Err(Error::param(format!("target has dimension {d} but init has {} values", init.len())));
    }
    let f = |x: &[f64]| -eval(target, x);
    if !f(init).is_finite() {
        return Err(Error::param(format!("initial point {init:?} is outside the support of the target")));
    }

    let mut x = nelder_mead(&f, init)?;
    coordinate_sweeps(&f, &mut x);
    newton_polish(&f, &mut x);

    let h = hessian(&f, &x);
    if h.iter().any(|v| !v.is_finite()) {
        return Err(Error::numerical(format!("Hessian at {x:?} is not finite")));
    }
    // f is the negative log target, so its Hessian must be positive definite.
    let chol_h = h.clone().cholesky().ok_or_else(|| {
        Error::numerical(format!("Hessian of the log target at {x:?} is not negative definite: {h}"))
    })?;
    let covariance = chol_h.inverse();
    let chol = covariance
        .clone()
        .cholesky()
        .ok_or_else(|| Error::numerical("approximate covariance is not positive definite"))?
        .l();
    Ok(LaplaceApprox {
        names: target.names(),
        log_density_at_mode: -f(&x),
        mode: x,
        covariance,
        chol,
    })
}

fn nelder_mead<F: Fn(&[f64]) -> f64>(f: &F, init: &[f64]) -> Result<Vec<f64>> {
    let d = init.len();
    let mut simplex: Vec<Vec<f64>> = vec![init.to_vec()];
    for i in 0..d {
        let mut step = 0.1 * init[i].abs().max(1.0);
        let mut v = init.to_vec();
        // shrink the initial step until the vertex is inside the support
        for _ in 0..60 {
            v[i] = init[i] + step;
            if f(&v).is_finite() {
                break;
            }
            v[i] = init[i] - step;
            if f(&v).is_finite() {
                break;
            }
            step *= 0.5;
        }
        simplex.push(v);
    }
    let mut values: Vec<f64> = simplex.iter().map(|v| f(v)).collect();

    for _ in 0..MAX_NM_ITERS {
        let mut order: Vec<usize> = (0..=d).collect();
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.iter().map(|&i| simplex[i].clone()).collect();
        values = order.iter().map(|&i| values[i]).collect();

        let spread = values[d] - values[0];
        let size = simplex[1..]
            .iter()
            .map(|v| v.iter().zip(&simplex[0]).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max))
            .fold(0.0, f64::max);
        if spread.is_finite() && spread < OBJECTIVE_TOL && size < 1e-6 * simplex[0].iter().fold(1.0f64, |m, v| m.max(v.abs())) {
            return Ok(simplex.swap_remove(0));
        }

        let centroid: Vec<f64> = (0..d).map(|j| simplex[..d].iter().map(|v| v[j]).sum::<f64>() / d as f64).collect();
        let along = |t: f64| -> Vec<f64> { centroid.iter().zip(&simplex[d]).map(|(c, w)| c + t * (w - c)).collect() };

        let xr = along(-1.0);
        let fr = f(&xr);
        if fr < values[0] {
            let xe = along(-2.0);
            let fe = f(&xe);
            if fe < fr {
                simplex[d] = xe;
                values[d] = fe;
            } else {
                simplex[d] = xr;
                values[d] = fr;
            }
        } else if fr < values[d - 1] {
            simplex[d] = xr;
            values[d] = fr;
        } else {
            let (xc, fc) = if fr < values[d] {
                let xc = along(-0.5);
                let fc = f(&xc);
                (xc, fc)
            } else {
                let xc = along(0.5);
                let fc = f(&xc);
                (xc, fc)
            };
            if fc < values[d].min(fr) {
                simplex[d] = xc;
                values[d] = fc;
            } else {
                let best = simplex[0].clone();
                for i in 1..=d {
                    simplex[i] = best.iter().zip(&simplex[i]).map(|(b, v)| b + 0.5 * (v - b)).collect();
                    values[i] = f(&simplex[i]);
                }
            }
        }
    }
    Err(Error::numerical(format!(
        "mode search did not converge in {MAX_NM_ITERS} iterations (objective spread {:.3e})",
        values.iter().fold(f64::NEG_INFINITY, |a, b| a.max(*b)) - values.iter().fold(f64::INFINITY, |a, b| a.min(*b))
    )))
}

/// Golden-section line search along each coordinate in turn.
fn coordinate_sweeps<F: Fn(&[f64]) -> f64>(f: &F, x: &mut [f64]) {
    let mut fx = f(x);
    for _ in 0..MAX_SWEEPS {
        let before = fx;
        for i in 0..x.len() {
            let mut probe = x.to_vec();
            let mut at = |t: f64| {
                probe[i] = t;
                f(&probe)
            };
            let c = x[i];
            let mut delta = 1e-3 * c.abs().max(1.0);
            let (mut a, mut b) = (c - delta, c + delta);
            // widen until both ends are no better than the centre
            let mut grow = 0;
            while at(a) < fx && grow < 60 {
                delta *= 2.0;
                a = c - delta;
                grow += 1;
            }
            delta = 1e-3 * c.abs().max(1.0);
            grow = 0;
            while at(b) < fx && grow < 60 {
                delta *= 2.0;
                b = c + delta;
                grow += 1;
            }
            let mut p = b - GOLDEN * (b - a);
            let mut q = a + GOLDEN * (b - a);
            let mut fp = at(p);
            let mut fq = at(q);
            for _ in 0..200 {
                if (b - a).abs() <= 1e-13 * c.abs().max(1e-8) {
                    break;
                }
                if fp < fq {
                    b = q;
                    q = p;
                    fq = fp;
                    p = b - GOLDEN * (b - a);
                    fp = at(p);
                } else {
                    a = p;
                    p = q;
                    fp = fq;
                    q = a + GOLDEN * (b - a);
                    fq = at(q);
                }
            }
            let (t, ft) = if fp < fq { (p, fp) } else { (q, fq) };
            if ft < fx {
                x[i] = t;
                fx = ft;
            }
        }
        if before - fx < 1e-14 * before.abs().max(1.0) {
            break;
        }
    }
}

fn step_size(x: f64) -> f64 {
    (1e-4 * x.abs()).max(1e-4)
}

fn gradient<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> DVector<f64> {
    let mut probe = x.to_vec();
    DVector::from_fn(x.len(), |i, _| {
        let h = step_size(x[i]);
        probe[i] = x[i] + h;
        let up = f(&probe);
        probe[i] = x[i] - h;
        let down = f(&probe);
        probe[i] = x[i];
        (up - down) / (2.0 * h)
    })
}

fn hessian<F: Fn(&[f64]) -> f64>(f: &F, x: &[f64]) -> DMatrix<f64> {
    let d = x.len();
    let f0 = f(x);
    let mut h = DMatrix::zeros(d, d);
    let mut probe = x.to_vec();
    for i in 0..d {
        let hi = step_size(x[i]);
        probe[i] = x[i] + hi;
        let up = f(&probe);
        probe[i] = x[i] - hi;
        let down = f(&probe);
        probe[i] = x[i];
        h[(i, i)] = (up - 2.0 * f0 + down) / (hi * hi);
        for j in 0..i {
            let hj = step_size(x[j]);
            let mut corner = |si: f64, sj: f64| {
                probe[i] = x[i] + si * hi;
                probe[j] = x[j] + sj * hj;
                let v = f(&probe);
                probe[i] = x[i];
                probe[j] = x[j];
                v
            };
            let v = (corner(1.0, 1.0) - corner(1.0, -1.0) - corner(-1.0, 1.0) + corner(-1.0, -1.0)) / (4.0 * hi * hj);
            h[(i, j)] = v;
            h[(j, i)] = v;
        }
    }
    h
}

/// Newton steps on the finite-difference gradient and Hessian, kept only
/// while they lower the objective.
fn newton_polish<F: Fn(&[f64]) -> f64>(f: &F, x: &mut Vec<f64>) {
    let mut fx = f(x);
    for _ in 0..20 {
        let h = hessian(f, x);
        let Some(chol) = h.cholesky() else { return };
        let step = chol.solve(&gradient(f, x));
        if step.iter().any(|s| !s.is_finite()) {
            return;
        }
        let cand: Vec<f64> = x.iter().zip(step.iter()).map(|(a, s)| a - s).collect();
        let fc = f(&cand);
        if !(fc <= fx) {
            return;
        }
        let moved = step.iter().zip(x.iter()).all(|(s, a)| s.abs() <= 1e-12 * a.abs().max(1.0));
        *x = cand;
        fx = fc;
        if moved {
            return;
        }
    }
}
