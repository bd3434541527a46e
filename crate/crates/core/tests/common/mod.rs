//! Independent reference computations used as test oracles. Nothing here
//! calls into the library's special functions.
#![allow(dead_code)]

/// Adaptive Simpson quadrature of `f` on `[a, b]`.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        (m, fm, (b - a) / 6.0 * (fa + 4.0 * fm + fb))
    }
    #[allow(clippy::too_many_arguments)]
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let (lm, flm, left) = simpson(f, a, fa, m, fm);
        let (rm, frm, right) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            return left + right + delta / 15.0;
        }
        recurse(f, a, fa, m, fm, left, lm, flm, tol / 2.0, depth - 1)
            + recurse(f, m, fm, b, fb, right, rm, frm, tol / 2.0, depth - 1)
    }
    // split first so narrow peaks are not missed by the initial estimate
    let pieces = 64;
    let h = (b - a) / pieces as f64;
    (0..pieces)
        .map(|k| {
            let (lo, hi) = (a + k as f64 * h, a + (k + 1) as f64 * h);
            let (flo, fhi) = (f(lo), f(hi));
            let (m, fm, whole) = simpson(f, lo, flo, hi, fhi);
            recurse(f, lo, flo, hi, fhi, whole, m, fm, tol / pieces as f64, 40)
        })
        .sum()
}

/// Root of an increasing function on `[lo, hi]` by bisection.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn factorial(n: u64) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

pub fn choose(n: u64, k: u64) -> f64 {
    (0..k).map(|i| (n - i) as f64 / (i + 1) as f64).product()
}

/// Beta density for integer shapes through factorials.
pub fn beta_pdf_int(a: u64, b: u64, x: f64) -> f64 {
    if !(0.0..=1.0).contains(&x) {
        return 0.0;
    }
    factorial(a + b - 1) / (factorial(a - 1) * factorial(b - 1)) * x.powi(a as i32 - 1) * (1.0 - x).powi(b as i32 - 1)
}

/// Beta CDF for integer shapes: `P(Beta(a, b) <= x) = P(Binomial(a+b-1, x) >= a)`.
pub fn beta_cdf_int(a: u64, b: u64, x: f64) -> f64 {
    let n = a + b - 1;
    (a..=n).map(|k| choose(n, k) * x.powi(k as i32) * (1.0 - x).powi((n - k) as i32)).sum()
}

pub fn normal_pdf(mean: f64, sd: f64, x: f64) -> f64 {
    let z = (x - mean) / sd;
    (-0.5 * z * z).exp() / (sd * (2.0 * std::f64::consts::PI).sqrt())
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_statistic<F: Fn(f64) -> f64>(xs: &[f64], cdf: F) -> f64 {
    let mut v = xs.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len() as f64;
    v.iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            (f - i as f64 / n).abs().max(((i + 1) as f64 / n - f).abs())
        })
        .fold(0.0, f64::max)
}

/// Asymptotic KS critical value at level 0.001.
pub fn ks_critical_001(n: usize) -> f64 {
    1.9495 / (n as f64).sqrt()
}

pub fn mean(xs: &[f64]) -> f64 {
    xs.iter().sum::<f64>() / xs.len() as f64
}

pub fn sd(xs: &[f64]) -> f64 {
    let m = mean(xs);
    (xs.iter().map(|x| (x - m) * (x - m)).sum::<f64>() / (xs.len() - 1) as f64).sqrt()
}

/// Standard error of the mean of a correlated series by the method of batch means.
pub fn batch_se(xs: &[f64], batches: usize) -> f64 {
    let size = xs.len() / batches;
    let means: Vec<f64> = (0..batches).map(|b| mean(&xs[b * size..(b + 1) * size])).collect();
    sd(&means) / (batches as f64).sqrt()
}

/// `ln Gamma(x)` for `x > 0`: shift up by the recurrence, then Stirling's series.
pub fn ln_gamma(mut x: f64) -> f64 {
    let mut shift = 0.0;
    while x < 15.0 {
        shift -= x.ln();
        x += 1.0;
    }
    let z = 1.0 / (x * x);
    let series = (1.0 / 12.0 - z * (1.0 / 360.0 - z * (1.0 / 1260.0 - z / 1680.0))) / x;
    shift + (x - 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + series
}

pub fn ln_beta(a: f64, b: f64) -> f64 {
    ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)
}

/// Posterior means of `(p_1, p_2)` in the two-group model
/// `p_j ~ Beta(K eta, K (1 - eta))`, `eta ~ U(0, 1)`, `log K ~ U(0, log 1e4)`,
/// by an `m^3` midpoint rule over `(p_1, eta, log K)` with `p_2` integrated out.
pub fn hier_props_quadrature(y1: u64, n1: u64, y2: u64, n2: u64, m: usize) -> (f64, f64) {
    let h = 1.0 / m as f64;
    let log_k_max = 1e4f64.ln();
    let (y1f, f1, y2f, f2) = (y1 as f64, (n1 - y1) as f64, y2 as f64, (n2 - y2) as f64);
    let (mut total, mut s1, mut s2) = (0.0, 0.0, 0.0);
    for i in 0..m {
        let eta = (i as f64 + 0.5) * h;
        for j in 0..m {
            let k = ((j as f64 + 0.5) * h * log_k_max).exp();
            let (a, b) = (k * eta, k * (1.0 - eta));
            let norm = ln_beta(a, b);
            // p_2 integrated out in closed form
            let second = ln_beta(a + y2f, b + f2) - norm;
            let e_p2 = (a + y2f) / (k + n2 as f64);
            for l in 0..m {
                let p = (l as f64 + 0.5) * h;
                let w = ((a - 1.0 + y1f) * p.ln() + (b - 1.0 + f1) * (1.0 - p).ln() - norm + second).exp();
                total += w;
                s1 += w * p;
                s2 += w * e_p2;
            }
        }
    }
    (s1 / total, s2 / total)
}
