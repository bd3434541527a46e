use serde::Serialize;

use crate::draws::DrawMatrix;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColumnDiagnostics {
    pub name: String,
    /// Sample autocorrelations at lags `1..=max_lag`.
    pub autocorrelation: Vec<f64>,
    pub ess: f64,
}

/// Sample autocorrelations `rho(1..=max_lag)`; `None` for a constant series.
pub fn autocorrelation(xs: &[f64], max_lag: usize) -> Option<Vec<f64>> {
    let n = xs.len();
    let mean = xs.iter().sum::<f64>() / n as f64;
    let dev: Vec<f64> = xs.iter().map(|x| x - mean).collect();
    let c0: f64 = dev.iter().map(|d| d * d).sum();
    if c0 <= 0.0 || !c0.is_finite() {
        return None;
    }
    Some(
        (1..=max_lag.min(n.saturating_sub(1)))
            .map(|lag| dev[..n - lag].iter().zip(&dev[lag..]).map(|(a, b)| a * b).sum::<f64>() / c0)
            .collect(),
    )
}

/// `S / (1 + 2 * sum rho(l))`, the sum stopping before the first nonpositive
/// autocorrelation.
pub fn effective_sample_size(n: usize, rho: &[f64]) -> f64 {
    let tail: f64 = rho.iter().take_while(|r| **r > 0.0).sum();
    n as f64 / (1.0 + 2.0 * tail)
}

/// Autocorrelations and effective sample size for every column.
pub fn diagnostics(draws: &DrawMatrix, max_lag: usize) -> Result<Vec<ColumnDiagnostics>> {
    let s = draws.nrows();
    if max_lag < 1 || s <= max_lag {
        return Err(Error::param(format!(
            "diagnostics need 1 <= max_lag < number of draws (max_lag={max_lag}, draws={s})"
        )));
    }
    draws
        .names()
        .iter()
        .enumerate()
        .map(|(j, name)| {
            let col = draws.column(j);
            let rho = autocorrelation(&col, max_lag).ok_or_else(|| Error::DegenerateChain(name.clone()))?;
            Ok(ColumnDiagnostics { name: name.clone(), ess: effective_sample_size(s, &rho), autocorrelation: rho })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn alternating_chain() {
        let xs: Vec<Vec<f64>> = (0..1000).map(|i| vec![if i % 2 == 0 { 1.0 } else { -1.0 }]).collect();
        let m = DrawMatrix::from_rows(vec!["x".into()], &xs).unwrap();
        let d = diagnostics(&m, 10).unwrap();
        assert!((d[0].autocorrelation[0] + 1.0).abs() < 0.002);
        assert_eq!(d[0].ess, 1000.0);
    }

    #[test]
    fn constant_chain_is_degenerate() {
        let m = DrawMatrix::from_rows(vec!["c".into()], &vec![vec![2.0]; 50]).unwrap();
        assert_eq!(diagnostics(&m, 5), Err(Error::DegenerateChain("c".into())));
    }

    #[test]
    fn lag_must_fit() {
        let m = DrawMatrix::from_rows(vec!["x".into()], &[vec![1.0], vec![2.0]]).unwrap();
        assert!(diagnostics(&m, 2).is_err());
        assert!(diagnostics(&m, 0).is_err());
    }
}
