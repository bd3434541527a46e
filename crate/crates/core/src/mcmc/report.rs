use serde::Serialize;

use super::diagnostics::{autocorrelation, effective_sample_size, ColumnDiagnostics};
use super::metropolis::TuningRecord;
use crate::draws::DrawMatrix;
use crate::rng::Seed;
use crate::summary;

const DEFAULT_MAX_LAG: usize = 50;

/// Sampler output: draws plus acceptance, autocorrelation and ESS per column.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub draws: DrawMatrix,
    /// Overall acceptance rate of the Metropolis steps; `None` for pure Gibbs.
    pub acceptance_rate: Option<f64>,
    /// Acceptance rate per Metropolis-updated parameter, when tracked separately.
    pub acceptance_by_parameter: Option<Vec<(String, f64)>>,
    /// One entry per column; `None` when the column has zero variance.
    pub diagnostics: Vec<Option<ColumnDiagnostics>>,
    pub proposal_scale: Option<Vec<f64>>,
    pub tuning: Option<TuningRecord>,
    pub warnings: Vec<String>,
}

impl ChainReport {
    pub fn new(draws: DrawMatrix) -> Self {
        let s = draws.nrows();
        let max_lag = DEFAULT_MAX_LAG.min(s.saturating_sub(1));
        let diagnostics = draws
            .names()
            .iter()
            .enumerate()
            .map(|(j, name)| {
                if max_lag == 0 {
                    return None;
                }
                let rho = autocorrelation(&draws.column(j), max_lag)?;
                Some(ColumnDiagnostics { name: name.clone(), ess: effective_sample_size(s, &rho), autocorrelation: rho })
            })
            .collect();
        ChainReport {
            draws,
            acceptance_rate: None,
            acceptance_by_parameter: None,
            diagnostics,
            proposal_scale: None,
            tuning: None,
            warnings: Vec::new(),
        }
    }

    pub fn seed(&self) -> Option<Seed> {
        self.draws.seed()
    }

    /// ESS of column `name`, if the column exists and is not constant.
    pub fn ess(&self, name: &str) -> Option<f64> {
        let j = self.draws.column_index(name)?;
        self.diagnostics[j].as_ref().map(|d| d.ess)
    }

    /// Monte Carlo standard error of the column mean, `sd / sqrt(ESS)`.
    pub fn mc_standard_error(&self, name: &str) -> Option<f64> {
        let col = self.draws.column_by_name(name)?;
        Some(summary::sd(&col) / self.ess(name)?.sqrt())
    }

    pub fn summarize(&self) -> Vec<ParameterSummary> {
        self.draws
            .summarize()
            .into_iter()
            .zip(&self.diagnostics)
            .map(|(s, d)| ParameterSummary {
                ess: d.as_ref().map(|d| d.ess),
                lag1_autocorrelation: d.as_ref().and_then(|d| d.autocorrelation.first().copied()),
                name: s.name,
                mean: s.mean,
                sd: s.sd,
                q05: s.q05,
                q50: s.q50,
                q95: s.q95,
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ParameterSummary {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
    pub ess: Option<f64>,
    pub lag1_autocorrelation: Option<f64>,
}
