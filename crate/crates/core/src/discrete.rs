//! Bayes' rule on finite supports: one-parameter tables, two-proportion grids,
//! sequential updating and resampling.

use std::cmp::Ordering;
use std::io::{Read, Write};

use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::Seed;
use crate::special::{binomial_log_kernel, ln_choose};

const SUM_TOL: f64 = 1e-10;

/// A support point of a one- or two-dimensional table.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Point {
    Scalar(f64),
    Pair(f64, f64),
}

impl Point {
    pub fn dim(&self) -> usize {
        match self {
            Point::Scalar(_) => 1,
            Point::Pair(..) => 2,
        }
    }

    pub fn coords(&self) -> Vec<f64> {
        match *self {
            Point::Scalar(x) => vec![x],
            Point::Pair(x, y) => vec![x, y],
        }
    }

    fn total_cmp(&self, other: &Point) -> Ordering {
        match (self, other) {
            (Point::Scalar(a), Point::Scalar(b)) => a.total_cmp(b),
            (Point::Pair(a1, a2), Point::Pair(b1, b2)) => a1.total_cmp(b1).then(a2.total_cmp(b2)),
            (a, b) => a.dim().cmp(&b.dim()),
        }
    }
}

/// Finite distribution: distinct support points with probabilities summing to one.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DiscreteTable {
    points: Vec<Point>,
    probs: Vec<f64>,
}

impl DiscreteTable {
    /// Builds a table from nonnegative weights, normalizing them to sum to one.
    pub fn from_weights(points: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::data("a discrete table needs at least one support point"));
        }
        if points.len() != weights.len() {
            return Err(Error::data(format!(
                "{} support points but {} probabilities",
                points.len(),
                weights.len()
            )));
        }
        let dim = points[0].dim();
        if points.iter().any(|p| p.dim() != dim) {
            return Err(Error::data("support points mix one- and two-dimensional values"));
        }
        if points.iter().flat_map(|p| p.coords()).any(|c| !c.is_finite()) {
            return Err(Error::data("support points must be finite"));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w >= 0.0)) {
            return Err(Error::data(format!("probabilities must be nonnegative and finite, got {w}")));
        }
        let mut sorted = points.clone();
        sorted.sort_by(Point::total_cmp);
        if sorted.windows(2).any(|w| w[0].total_cmp(&w[1]) == Ordering::Equal) {
            return Err(Error::data("support points must be distinct"));
        }
        let total: f64 = weights.iter().sum();
        if total <= 0.0 {
            return Err(Error::data("probabilities sum to zero"));
        }
        let probs = weights.iter().map(|w| w / total).collect();
        Ok(DiscreteTable { points, probs })
    }

    /// Builds a table whose probabilities already sum to one (within 1e-10).
    pub fn new(points: Vec<Point>, probs: Vec<f64>) -> Result<Self> {
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > SUM_TOL {
            return Err(Error::data(format!("probabilities sum to {total}, not 1")));
        }
        Self::from_weights(points, probs)
    }

    pub fn uniform(points: Vec<Point>) -> Result<Self> {
        let w = vec![1.0; points.len()];
        Self::from_weights(points, w)
    }

    /// Uniform table over scalar values.
    pub fn uniform_scalar(values: &[f64]) -> Result<Self> {
        Self::uniform(values.iter().map(|&v| Point::Scalar(v)).collect())
    }

    pub fn point_mass(point: Point) -> Self {
        DiscreteTable { points: vec![point], probs: vec![1.0] }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.points[0].dim()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Point, f64)> {
        self.points.iter().zip(self.probs.iter().copied())
    }

    /// Posterior mean of each coordinate.
    pub fn mean(&self) -> Vec<f64> {
        let mut m = vec![0.0; self.dim()];
        for (p, w) in self.iter() {
            for (acc, c) in m.iter_mut().zip(p.coords()) {
                *acc += w * c;
            }
        }
        m
    }

    /// Marginal table of coordinate `axis` (0 or 1) of a two-dimensional table,
    /// support sorted ascending.
    pub fn marginal(&self, axis: usize) -> Result<DiscreteTable> {
        if axis >= self.dim() {
            return Err(Error::param(format!(
                "axis {axis} out of range for a {}-dimensional table",
                self.dim()
            )));
        }
        let mut acc: Vec<(f64, f64)> = Vec::new();
        for (p, w) in self.iter() {
            let c = p.coords()[axis];
            match acc.iter_mut().find(|(v, _)| v.total_cmp(&c) == Ordering::Equal) {
                Some(slot) => slot.1 += w,
                None => acc.push((c, w)),
            }
        }
        acc.sort_by(|a, b| a.0.total_cmp(&b.0));
        let (pts, ws): (Vec<_>, Vec<_>) = acc.into_iter().map(|(v, w)| (Point::Scalar(v), w)).unzip();
        DiscreteTable::from_weights(pts, ws)
    }

    /// Smallest scalar support point whose cumulative probability reaches `q`.
    pub fn quantile(&self, q: f64) -> Result<f64> {
        if self.dim() != 1 {
            return Err(Error::param("quantiles need a one-dimensional table"));
        }
        let mut pairs: Vec<(f64, f64)> = self.iter().map(|(p, w)| (p.coords()[0], w)).collect();
        pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
        let mut cum = 0.0;
        for (v, w) in &pairs {
            cum += w;
            if cum >= q - 1e-12 {
                return Ok(*v);
            }
        }
        Ok(pairs.last().expect("nonempty").0)
    }

    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        if self.dim() == 1 {
            w.write_record(["point_1", "prob"])?;
        } else {
            w.write_record(["point_1", "point_2", "prob"])?;
        }
        for (p, prob) in self.iter() {
            let mut rec: Vec<String> = p.coords().iter().map(|c| c.to_string()).collect();
            rec.push(prob.to_string());
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads `point_1[,point_2],prob`; the `prob` column is normalized.
    pub fn read_csv<R: Read>(input: R) -> Result<Self> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let headers = r.headers()?.clone();
        let idx = |name: &str| headers.iter().position(|h| h == name);
        let p1 = idx("point_1").ok_or_else(|| Error::data("missing column `point_1`"))?;
        let p2 = idx("point_2");
        let pr = idx("prob").ok_or_else(|| Error::data("missing column `prob`"))?;
        let mut points = Vec::new();
        let mut weights = Vec::new();
        for (row, rec) in r.records().enumerate() {
            let rec = rec?;
            let cell = |i: usize, name: &str| -> Result<f64> {
                let raw = rec.get(i).unwrap_or("");
                raw.parse::<f64>().map_err(|_| {
                    Error::data(format!("row {}: column `{name}`: `{raw}` is not a number", row + 1))
                })
            };
            let x = cell(p1, "point_1")?;
            let point = match p2 {
                Some(i) => Point::Pair(x, cell(i, "point_2")?),
                None => Point::Scalar(x),
            };
            points.push(point);
            weights.push(cell(pr, "prob")?);
        }
        Self::from_weights(points, weights)
    }
}

/// Observation model evaluated at each support point.
#[derive(Clone, Debug, PartialEq)]
pub enum LikelihoodSpec {
    /// `y` successes in `n` trials; support points are proportions.
    Binomial { y: u64, n: u64 },
    /// Sample mean `ybar` of `n` normal observations with known sd `sigma`;
    /// support points are means.
    NormalKnownSd { ybar: f64, n: u64, sigma: f64 },
    /// Explicit likelihood value per support point, in table order.
    Table(Vec<f64>),
}

impl LikelihoodSpec {
    pub fn binomial(y: u64, n: u64) -> Result<Self> {
        if y > n {
            return Err(Error::data(format!("successes y={y} exceed trials n={n}")));
        }
        Ok(LikelihoodSpec::Binomial { y, n })
    }

    pub fn normal_known_sd(ybar: f64, n: u64, sigma: f64) -> Result<Self> {
        if !ybar.is_finite() {
            return Err(Error::data("sample mean must be finite"));
        }
        if !(sigma.is_finite() && sigma > 0.0) {
            return Err(Error::data(format!("sampling sd must be positive, got {sigma}")));
        }
        Ok(LikelihoodSpec::NormalKnownSd { ybar, n, sigma })
    }

    pub fn table(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v >= 0.0)) {
            return Err(Error::data(format!("likelihood values must be nonnegative, got {v}")));
        }
        Ok(LikelihoodSpec::Table(values))
    }

    /// Log likelihood at support point `point` (index `index` in its table).
    pub fn log_likelihood(&self, index: usize, point: &Point) -> Result<f64> {
        match self {
            LikelihoodSpec::Binomial { y, n } => {
                let p = scalar(point, "binomial")?;
                if !(0.0..=1.0).contains(&p) {
                    return Err(Error::data(format!(
                        "binomial likelihood needs proportions in [0, 1], got {p}"
                    )));
                }
                Ok(ln_choose(*n, *y) + binomial_log_kernel(*y as f64, *n as f64, p))
            }
            LikelihoodSpec::NormalKnownSd { ybar, n, sigma } => {
                let mu = scalar(point, "normal")?;
                if *n == 0 {
                    return Ok(0.0);
                }
                let se = sigma / (*n as f64).sqrt();
                let z = (ybar - mu) / se;
                Ok(-0.5 * (2.0 * std::f64::consts::PI).ln() - se.ln() - 0.5 * z * z)
            }
            LikelihoodSpec::Table(values) => values
                .get(index)
                .map(|v| v.ln())
                .ok_or_else(|| Error::data("likelihood table shorter than the support")),
        }
    }

    fn check_len(&self, support: usize) -> Result<()> {
        match self {
            LikelihoodSpec::Table(v) if v.len() != support => Err(Error::data(format!(
                "likelihood table has {} entries but the support has {support} points",
                v.len()
            ))),
            _ => Ok(()),
        }
    }
}

fn scalar(point: &Point, kind: &str) -> Result<f64> {
    match point {
        Point::Scalar(x) => Ok(*x),
        Point::Pair(..) => Err(Error::data(format!(
            "{kind} likelihood needs one-dimensional support points"
        ))),
    }
}

/// Posterior table together with the log normalizing constant
/// `log sum_j prior_j * L(point_j)`.
#[derive(Clone, Debug)]
pub struct Update {
    pub posterior: DiscreteTable,
    pub log_evidence: f64,
}

/// Normalizes `prior * exp(log_like)` in log space (max subtracted first).
fn normalize(prior: &DiscreteTable, log_like: Vec<f64>) -> Result<Update> {
    let log_prod: Vec<f64> = prior
        .probs
        .iter()
        .zip(&log_like)
        .map(|(p, l)| if *p == 0.0 { f64::NEG_INFINITY } else { p.ln() + l })
        .collect();
    let max = log_prod.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::ImpossibleData);
    }
    let weights: Vec<f64> = log_prod.iter().map(|l| (l - max).exp()).collect();
    let total: f64 = weights.iter().sum();
    let probs = weights.iter().map(|w| w / total).collect();
    Ok(Update {
        posterior: DiscreteTable { points: prior.points.clone(), probs },
        log_evidence: max + total.ln(),
    })
}

/// Bayes' rule with the normalizing constant.
pub fn bayes_update_with_evidence(prior: &DiscreteTable, like: &LikelihoodSpec) -> Result<Update> {
    like.check_len(prior.len())?;
    let log_like = prior
        .points
        .iter()
        .enumerate()
        .map(|(i, p)| like.log_likelihood(i, p))
        .collect::<Result<Vec<_>>>()?;
    normalize(prior, log_like)
}

/// Posterior probabilities proportional to prior times likelihood.
pub fn bayes_update(prior: &DiscreteTable, like: &LikelihoodSpec) -> Result<DiscreteTable> {
    Ok(bayes_update_with_evidence(prior, like)?.posterior)
}

/// Applies observations one after another, each posterior becoming the next prior.
pub fn sequential_update(prior: &DiscreteTable, observations: &[LikelihoodSpec]) -> Result<DiscreteTable> {
    observations
        .iter()
        .try_fold(prior.clone(), |table, obs| bayes_update(&table, obs))
}

/// Product grid over `(p1, p2)` with total probability `diagonal_mass` placed
/// uniformly on the points with `p1 == p2` and the rest spread uniformly over
/// the off-diagonal points. Points are ordered with `p1` varying slowest.
pub fn make_grid_prior(p1_values: &[f64], p2_values: &[f64], diagonal_mass: f64) -> Result<DiscreteTable> {
    for (name, vals) in [("p1", p1_values), ("p2", p2_values)] {
        if vals.is_empty() {
            return Err(Error::data(format!("{name} grid is empty")));
        }
        if vals.iter().any(|v| !(0.0..=1.0).contains(v)) {
            return Err(Error::data(format!("{name} grid values must lie in [0, 1]")));
        }
        if vals.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::data(format!("{name} grid values must be strictly increasing")));
        }
    }
    if !(0.0..1.0).contains(&diagonal_mass) {
        return Err(Error::param(format!("diagonal mass must lie in [0, 1), got {diagonal_mass}")));
    }
    let points: Vec<Point> = p1_values
        .iter()
        .flat_map(|&a| p2_values.iter().map(move |&b| Point::Pair(a, b)))
        .collect();
    if diagonal_mass == 0.0 {
        return DiscreteTable::uniform(points);
    }
    let on_diag = |p: &Point| matches!(p, Point::Pair(a, b) if a == b);
    let n_diag = points.iter().filter(|p| on_diag(p)).count();
    if n_diag == 0 {
        return Err(Error::data("diagonal mass requested but the grids share no value (no p1 = p2 point)"));
    }
    let n_off = points.len() - n_diag;
    let weights = points
        .iter()
        .map(|p| {
            if on_diag(p) {
                diagonal_mass / n_diag as f64
            } else {
                (1.0 - diagonal_mass) / n_off as f64
            }
        })
        .collect();
    DiscreteTable::from_weights(points, weights)
}

/// Grid update for two independent binomial samples `(y1, n1)`, `(y2, n2)`.
pub fn two_proportion_update(prior: &DiscreteTable, y1: u64, n1: u64, y2: u64, n2: u64) -> Result<DiscreteTable> {
    Ok(two_proportion_update_with_evidence(prior, y1, n1, y2, n2)?.posterior)
}

pub fn two_proportion_update_with_evidence(
    prior: &DiscreteTable,
    y1: u64,
    n1: u64,
    y2: u64,
    n2: u64,
) -> Result<Update> {
    if prior.dim() != 2 {
        return Err(Error::data("two-proportion update needs a (p1, p2) grid prior"));
    }
    if y1 > n1 || y2 > n2 {
        return Err(Error::data("successes exceed trials"));
    }
    let c = ln_choose(n1, y1) + ln_choose(n2, y2);
    let log_like = prior
        .points
        .iter()
        .map(|p| match *p {
            Point::Pair(p1, p2) => {
                if !(0.0..=1.0).contains(&p1) || !(0.0..=1.0).contains(&p2) {
                    return Err(Error::data("grid proportions must lie in [0, 1]"));
                }
                Ok(c + binomial_log_kernel(y1 as f64, n1 as f64, p1)
                    + binomial_log_kernel(y2 as f64, n2 as f64, p2))
            }
            Point::Scalar(_) => unreachable!("dimension checked"),
        })
        .collect::<Result<Vec<_>>>()?;
    normalize(prior, log_like)
}

/// Total probability of the points satisfying `pred`.
pub fn table_event_prob<F: Fn(&Point) -> bool>(t: &DiscreteTable, pred: F) -> f64 {
    t.iter().filter(|(p, _)| pred(p)).map(|(_, w)| w).sum()
}

/// Common events on two-dimensional tables. Ties (`p1 == p2`) belong only to
/// [`PairEvent::Equal`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairEvent {
    FirstLess,
    Equal,
    FirstGreater,
}

impl PairEvent {
    pub fn holds(self, p: &Point) -> bool {
        match (*p, self) {
            (Point::Pair(a, b), PairEvent::FirstLess) => a < b,
            (Point::Pair(a, b), PairEvent::Equal) => a == b,
            (Point::Pair(a, b), PairEvent::FirstGreater) => a > b,
            (Point::Scalar(_), _) => false,
        }
    }
}

/// `n` i.i.d. draws from the table (sampling with replacement).
pub fn sample_table(t: &DiscreteTable, n: usize, seed: Seed) -> Vec<Point> {
    let mut rng = seed.rng();
    let mut cum = Vec::with_capacity(t.len());
    let mut acc = 0.0;
    for p in &t.probs {
        acc += p;
        cum.push(acc);
    }
    let last = t.len() - 1;
    (0..n)
        .map(|_| {
            let u = rng.random::<f64>() * acc;
            let i = cum.partition_point(|c| *c <= u).min(last);
            t.points[i]
        })
        .collect()
}
