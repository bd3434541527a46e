use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use bayes_core::mcmc::ChainReport;
use bayes_core::{DrawMatrix, Seed};
use clap::ValueEnum;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

/// Rows for CSV output; a `seed` column is appended on emission.
#[derive(Debug, Default)]
pub struct Rows {
    pub header: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Rows {
    pub fn new(header: &[&str]) -> Self {
        Rows { header: header.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }
}

/// Result of one command in both output shapes.
#[derive(Debug)]
pub struct Report {
    fields: Map<String, Value>,
    rows: Option<Rows>,
    pub default_format: Format,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn json() -> Self {
        Report { fields: Map::new(), rows: None, default_format: Format::Json, warnings: Vec::new() }
    }

    pub fn table(rows: Rows) -> Self {
        Report { fields: Map::new(), rows: Some(rows), default_format: Format::Csv, warnings: Vec::new() }
    }

    pub fn set(&mut self, key: &str, v: impl Serialize) -> &mut Self {
        let mut value = serde_json::to_value(v).expect("plain data serializes");
        integral_floats(&mut value);
        self.fields.insert(key.into(), value);
        self
    }

    pub fn with_rows(&mut self, rows: Rows) -> &mut Self {
        self.rows = Some(rows);
        self
    }

    fn csv_rows(&self) -> Rows {
        if let Some(r) = &self.rows {
            return Rows { header: r.header.clone(), rows: r.rows.clone() };
        }
        // scalar fields become a single row
        let mut out = Rows::default();
        let mut row = Vec::new();
        for (k, v) in &self.fields {
            let cell = match v {
                Value::Number(n) => match (n.as_u64(), n.as_i64()) {
                    (Some(u), _) => u.to_string(),
                    (_, Some(i)) => i.to_string(),
                    _ => num(n.as_f64().unwrap_or(f64::NAN)),
                },
                Value::String(s) => s.clone(),
                Value::Bool(b) => b.to_string(),
                Value::Null => String::new(),
                _ => continue,
            };
            out.header.push(k.clone());
            row.push(cell);
        }
        out.rows.push(row);
        out
    }

    pub fn render(&self, format: Format, seed: Seed) -> CliResult<Vec<u8>> {
        match format {
            Format::Json => {
                let mut obj = self.fields.clone();
                obj.insert("seed".into(), json!(seed.0));
                let mut text = serde_json::to_string_pretty(&Value::Object(obj))
                    .map_err(|e| CliError::data(e.to_string()))?;
                text.push('\n');
                Ok(text.into_bytes())
            }
            Format::Csv => {
                let rows = self.csv_rows();
                let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
                let seed = seed.0.to_string();
                let mut header = rows.header.clone();
                header.push("seed".into());
                w.write_record(&header).map_err(|e| CliError::data(e.to_string()))?;
                for r in &rows.rows {
                    let mut rec = r.clone();
                    rec.push(seed.clone());
                    w.write_record(&rec).map_err(|e| CliError::data(e.to_string()))?;
                }
                w.into_inner().map_err(|e| CliError::data(e.to_string()))
            }
        }
    }
}

/// Whole-valued floats print as integers (`5`, not `5.0`), matching the CSV cells.
fn integral_floats(v: &mut Value) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = n.as_f64().unwrap_or(f64::NAN);
            if x.fract() == 0.0 && x.abs() < 9.007_199_254_740_992e15 {
                *v = json!(x as i64);
            }
        }
        Value::Array(xs) => xs.iter_mut().for_each(integral_floats),
        Value::Object(m) => m.values_mut().for_each(integral_floats),
        _ => {}
    }
}

pub fn num(v: f64) -> String {
    v.to_string()
}

pub fn write_out(bytes: &[u8], path: Option<&Path>) -> CliResult<()> {
    let result = match path {
        Some(p) => File::create(p).and_then(|f| {
            let mut w = BufWriter::new(f);
            w.write_all(bytes)?;
            w.flush()
        }),
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes).and_then(|_| out.flush())
        }
    };
    result.map_err(|e| match path {
        None if e.kind() == io::ErrorKind::BrokenPipe => CliError::BrokenPipe,
        Some(p) => CliError::data(format!("cannot write {}: {e}", p.display())),
        None => CliError::data(format!("cannot write to stdout: {e}")),
    })
}

pub fn draw_rows(draws: &DrawMatrix) -> Rows {
    let mut header = vec!["draw_index".to_string()];
    header.extend(draws.names().iter().cloned());
    let rows = draws
        .rows()
        .enumerate()
        .map(|(i, r)| std::iter::once((i + 1).to_string()).chain(r.iter().map(|v| num(*v))).collect())
        .collect();
    Rows { header, rows }
}

fn columns(draws: &DrawMatrix) -> Map<String, Value> {
    draws.names().iter().enumerate().map(|(j, n)| (n.clone(), json!(draws.column(j)))).collect()
}

/// Draws only (exact simulation, no chain diagnostics).
pub fn draws_report(draws: &DrawMatrix) -> Report {
    let mut r = Report::table(draw_rows(draws));
    r.set("summary", draws.summarize()).set("draws", columns(draws));
    r
}

pub fn chain_report(c: &ChainReport) -> Report {
    let mut r = Report::table(draw_rows(&c.draws));
    r.set("burn_in", c.draws.burn_in())
        .set("kept", c.draws.nrows())
        .set("acceptance_rate", c.acceptance_rate);
    if let Some(by) = &c.acceptance_by_parameter {
        let m: Map<String, Value> = by.iter().map(|(n, v)| (n.clone(), json!(v))).collect();
        r.set("acceptance_by_parameter", m);
    }
    r.set("proposal_scale", &c.proposal_scale);
    if let Some(t) = &c.tuning {
        r.set("tuning", t);
    }
    r.set("summary", c.summarize()).set("warnings", &c.warnings).set("draws", columns(&c.draws));
    r.warnings = c.warnings.clone();
    r
}
