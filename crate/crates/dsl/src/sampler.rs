//! Systematic-scan Metropolis-within-Gibbs over the unknowns of a graph.

use std::collections::BTreeMap;

use bayes_core::mcmc::{ChainReport, RunSettings};
use bayes_core::DrawMatrix;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::ast::DistKind;
use crate::error::{DslError, Result};
use crate::graph::{ModelGraph, NodeId, NodeKind};

/// Target acceptance for the univariate random-walk steps during burn-in.
const ADAPT_TARGET: f64 = 0.44;
const ADAPT_BATCH: usize = 50;

#[derive(Clone, Debug, Default)]
pub struct SamplerOptions {
    /// Proposal sd per unknown on the transformed scale. When absent every
    /// scale starts at 1 and is adapted during burn-in only.
    pub scales: Option<Vec<f64>>,
    /// Initial values by node key; other unknowns start at prior medians.
    pub inits: BTreeMap<String, f64>,
}

/// Unconstrained parameterization used for the proposal.
#[derive(Clone, Copy, Debug)]
enum Transform {
    Identity,
    Log,
    /// `x = lo + (hi - lo) * logistic(z)`
    Logit { lo: f64, hi: f64 },
}

impl Transform {
    fn forward(self, x: f64) -> f64 {
        match self {
            Transform::Identity => x,
            Transform::Log => x.ln(),
            Transform::Logit { lo, hi } => ((x - lo) / (hi - x)).ln(),
        }
    }

    fn inverse(self, z: f64) -> f64 {
        match self {
            Transform::Identity => z,
            Transform::Log => z.exp(),
            Transform::Logit { lo, hi } => lo + (hi - lo) / (1.0 + (-z).exp()),
        }
    }

    /// `log |dx/dz|` up to a constant, or `None` when `x` has reached the boundary.
    fn log_jacobian(self, x: f64) -> Option<f64> {
        match self {
            Transform::Identity => x.is_finite().then_some(0.0),
            Transform::Log => (x > 0.0 && x.is_finite()).then(|| x.ln()),
            Transform::Logit { lo, hi } => (x > lo && x < hi).then(|| (x - lo).ln() + (hi - x).ln()),
        }
    }
}

fn transform_for(g: &ModelGraph, id: NodeId, values: &[f64]) -> Result<Transform> {
    let node = g.node(id);
    let NodeKind::Stochastic { dist, args, .. } = &node.kind else {
        unreachable!("unknowns are stochastic")
    };
    Ok(match dist {
        DistKind::Norm => Transform::Identity,
        DistKind::Gamma => Transform::Log,
        DistKind::Beta => Transform::Logit { lo: 0.0, hi: 1.0 },
        DistKind::Unif => Transform::Logit { lo: args[0].eval(values), hi: args[1].eval(values) },
        DistKind::Bin => {
            return Err(DslError::Compile {
                span: node.span,
                message: format!("unknown discrete node `{}` (dbin) cannot be sampled; supply it as data", node.key),
            })
        }
    })
}

/// Runs the sampler and returns post-burn-in draws of every unknown, in
/// declaration order, with per-node acceptance rates.
pub fn sample_graph(g: &ModelGraph, settings: &RunSettings, opts: &SamplerOptions) -> Result<ChainReport> {
    settings.validate()?;
    let unknowns = g.unknowns().to_vec();
    if unknowns.is_empty() {
        return Err(DslError::Compile { span: None, message: "no unknowns: every stochastic node is observed".into() });
    }
    let adapt = opts.scales.is_none();
    let mut scales = match &opts.scales {
        Some(s) if s.len() != unknowns.len() => {
            return Err(DslError::Sampling(bayes_core::Error::param(format!(
                "{} proposal scales for {} unknowns",
                s.len(),
                unknowns.len()
            ))))
        }
        Some(s) if s.iter().any(|v| !(v.is_finite() && *v > 0.0)) => {
            return Err(DslError::Sampling(bayes_core::Error::param("proposal scales must be positive")))
        }
        Some(s) => s.clone(),
        None => vec![1.0; unknowns.len()],
    };

    let mut values = g.initial_values(&opts.inits)?;
    for &u in &unknowns {
        transform_for(g, u, &values)?;
    }
    for (id, node) in g.nodes().iter().enumerate() {
        if matches!(node.kind, NodeKind::Stochastic { .. }) && !g.node_log_density(id, &values).is_finite() {
            return Err(DslError::Compile {
                span: node.span,
                message: format!("log density of `{}` is not finite at the initial values", node.key),
            });
        }
    }

    let mut rng = settings.seed.rng();
    let mut accepted = vec![0usize; unknowns.len()];
    let mut batch = vec![0usize; unknowns.len()];
    let mut rows = Vec::with_capacity(settings.kept());
    let mut saved: Vec<f64> = Vec::new();

    for t in 0..settings.iters {
        for (k, &u) in unknowns.iter().enumerate() {
            let tr = transform_for(g, u, &values)?;
            let x = values[u];
            let Some(jac) = tr.log_jacobian(x) else { continue };
            let current = g.blanket_log_density(u, &values) + jac;
            let z: f64 = rng.sample(StandardNormal);
            let x_new = tr.inverse(tr.forward(x) + scales[k] * z);
            let Some(jac_new) = tr.log_jacobian(x_new) else { continue };

            saved.clear();
            saved.extend(g.det_desc(u).iter().map(|&d| values[d]));
            values[u] = x_new;
            g.update_descendants(u, &mut values);
            let proposed = g.blanket_log_density(u, &values) + jac_new;
            let u01: f64 = rng.random();
            if u01.ln() < proposed - current {
                if t >= settings.burn_in {
                    accepted[k] += 1;
                }
                batch[k] += 1;
            } else {
                values[u] = x;
                for (&d, &v) in g.det_desc(u).iter().zip(&saved) {
                    values[d] = v;
                }
            }
        }
        if adapt && t < settings.burn_in && (t + 1) % ADAPT_BATCH == 0 {
            for (s, b) in scales.iter_mut().zip(batch.iter_mut()) {
                let rate = *b as f64 / ADAPT_BATCH as f64;
                *s *= (rate / ADAPT_TARGET).clamp(0.5, 2.0);
                *b = 0;
            }
        }
        if t >= settings.burn_in {
            rows.push(unknowns.iter().map(|&u| values[u]).collect::<Vec<f64>>());
        }
    }

    let draws = DrawMatrix::from_rows(g.unknown_names(), &rows)?
        .with_burn_in(settings.burn_in)
        .with_seed(settings.seed);
    let kept = settings.kept() as f64;
    let rates: Vec<(String, f64)> = g.unknown_names().into_iter().zip(accepted.iter().map(|&a| a as f64 / kept)).collect();
    let mut report = ChainReport::new(draws);
    report.acceptance_rate = Some(rates.iter().map(|(_, r)| r).sum::<f64>() / rates.len() as f64);
    report.acceptance_by_parameter = Some(rates);
    report.proposal_scale = Some(scales);
    Ok(report)
}
