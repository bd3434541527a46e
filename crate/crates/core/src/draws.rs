//! Matrix of simulated draws: the common output of every sampler.

use std::io::Write;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::rng::Seed;
use crate::summary;

/// `S x d` matrix of draws with named columns, stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DrawMatrix {
    names: Vec<String>,
    data: Vec<f64>,
    rows: usize,
    burn_in: usize,
    seed: Option<Seed>,
}

impl DrawMatrix {
    /// Builds a matrix from rows; every row must have one entry per name and
    /// every entry must be finite.
    pub fn from_rows(names: Vec<String>, rows: &[Vec<f64>]) -> Result<Self> {
        let mut m = DrawMatrix::with_capacity(names, rows.len());
        for r in rows {
            m.push_row(r)?;
        }
        m.finish()
    }

    pub(crate) fn with_capacity(names: Vec<String>, rows: usize) -> Self {
        let d = names.len();
        DrawMatrix { names, data: Vec::with_capacity(rows * d), rows: 0, burn_in: 0, seed: None }
    }

    pub(crate) fn push_row(&mut self, row: &[f64]) -> Result<()> {
        if row.len() != self.names.len() {
            return Err(Error::data(format!(
                "row has {} values but there are {} columns",
                row.len(),
                self.names.len()
            )));
        }
        if let Some((j, v)) = row.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::numerical(format!(
                "non-finite draw {v} in column `{}` at row {}",
                self.names[j],
                self.rows + 1
            )));
        }
        self.data.extend_from_slice(row);
        self.rows += 1;
        Ok(())
    }

    pub(crate) fn finish(self) -> Result<Self> {
        if self.rows == 0 {
            return Err(Error::data("a draw matrix needs at least one row"));
        }
        if self.names.is_empty() {
            return Err(Error::data("a draw matrix needs at least one column"));
        }
        Ok(self)
    }

    pub fn with_burn_in(mut self, burn_in: usize) -> Self {
        self.burn_in = burn_in;
        self
    }

    pub fn with_seed(mut self, seed: Seed) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.names.len()
    }

    pub fn burn_in(&self) -> usize {
        self.burn_in
    }

    pub fn seed(&self) -> Option<Seed> {
        self.seed
    }

    pub fn row(&self, i: usize) -> &[f64] {
        let d = self.ncols();
        &self.data[i * d..(i + 1) * d]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.data.chunks_exact(self.ncols())
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        self.rows().map(|r| r[j]).collect()
    }

    pub fn column_by_name(&self, name: &str) -> Option<Vec<f64>> {
        self.column_index(name).map(|j| self.column(j))
    }

    /// Rows at `indices`, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<DrawMatrix> {
        let mut m = DrawMatrix::with_capacity(self.names.clone(), indices.len());
        for &i in indices {
            if i >= self.rows {
                return Err(Error::param(format!("row {i} out of range ({} rows)", self.rows)));
            }
            m.push_row(self.row(i))?;
        }
        m.burn_in = self.burn_in;
        m.seed = self.seed;
        m.finish()
    }

    pub fn summarize(&self) -> Vec<ColumnSummary> {
        (0..self.ncols())
            .map(|j| {
                let mut xs = self.column(j);
                let mean = summary::mean(&xs);
                let sd = summary::sd(&xs);
                xs.sort_by(f64::total_cmp);
                ColumnSummary {
                    name: self.names[j].clone(),
                    mean,
                    sd,
                    q05: summary::quantile_sorted(&xs, 0.05),
                    q50: summary::quantile_sorted(&xs, 0.5),
                    q95: summary::quantile_sorted(&xs, 0.95),
                }
            })
            .collect()
    }

    /// CSV with a leading 1-based `draw_index` column, `\n` line endings.
    pub fn write_csv<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        let mut header = vec!["draw_index".to_string()];
        header.extend(self.names.iter().cloned());
        w.write_record(&header)?;
        for (i, r) in self.rows().enumerate() {
            let mut rec = vec![(i + 1).to_string()];
            rec.extend(r.iter().map(|v| v.to_string()));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ColumnSummary {
    pub name: String,
    pub mean: f64,
    pub sd: f64,
    pub q05: f64,
    pub q50: f64,
    pub q95: f64,
}
