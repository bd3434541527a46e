//! Named scalars and arrays bound to model identifiers.

use std::collections::BTreeMap;
use std::io::Read;

use crate::error::{DslError, Result};

#[derive(Clone, Debug, PartialEq)]
pub enum DataValue {
    Scalar(f64),
    /// Indexed from 1 in scripts.
    Array(Vec<f64>),
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct DataSet {
    values: BTreeMap<String, DataValue>,
}

impl DataSet {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn scalar(mut self, name: &str, v: f64) -> Self {
        self.values.insert(name.into(), DataValue::Scalar(v));
        self
    }

    pub fn array(mut self, name: &str, v: Vec<f64>) -> Self {
        self.values.insert(name.into(), DataValue::Array(v));
        self
    }

    pub fn insert(&mut self, name: String, v: DataValue) {
        self.values.insert(name, v);
    }

    pub fn get(&self, name: &str) -> Option<&DataValue> {
        self.values.get(name)
    }

    pub fn contains(&self, name: &str) -> bool {
        self.values.contains_key(name)
    }

    /// A scalar, or the single entry of a length-1 array.
    pub fn get_scalar(&self, name: &str) -> Option<f64> {
        match self.values.get(name)? {
            DataValue::Scalar(v) => Some(*v),
            DataValue::Array(a) if a.len() == 1 => Some(a[0]),
            DataValue::Array(_) => None,
        }
    }

    /// Entry `index` (1-based) of an array.
    pub fn get_element(&self, name: &str, index: usize) -> Option<f64> {
        match self.values.get(name)? {
            DataValue::Array(a) => index.checked_sub(1).and_then(|i| a.get(i)).copied(),
            DataValue::Scalar(v) => (index == 1).then_some(*v),
        }
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.values.keys().map(String::as_str)
    }

    /// JSON object whose values are numbers or arrays of numbers.
    pub fn from_json(text: &str) -> Result<Self> {
        let v: serde_json::Value = serde_json::from_str(text).map_err(|e| DslError::Data(format!("invalid JSON: {e}")))?;
        let obj = v.as_object().ok_or_else(|| DslError::Data("top level must be an object".into()))?;
        let mut out = DataSet::new();
        for (k, v) in obj {
            let num = |x: &serde_json::Value| {
                x.as_f64()
                    .filter(|f| f.is_finite())
                    .ok_or_else(|| DslError::Data(format!("`{k}`: expected a finite number, found {x}")))
            };
            let value = match v {
                serde_json::Value::Array(items) => DataValue::Array(items.iter().map(num).collect::<Result<_>>()?),
                other => DataValue::Scalar(num(other)?),
            };
            out.insert(k.clone(), value);
        }
        Ok(out)
    }

    /// CSV whose columns are arrays; trailing empty cells shorten a column.
    pub fn from_csv<R: Read>(input: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(input);
        let headers: Vec<String> = rdr
            .headers()
            .map_err(|e| DslError::Data(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        if headers.is_empty() || headers.iter().any(String::is_empty) {
            return Err(DslError::Data("CSV header names every column".into()));
        }
        let mut cols: Vec<Vec<f64>> = vec![Vec::new(); headers.len()];
        let mut ended = vec![false; headers.len()];
        for (r, rec) in rdr.records().enumerate() {
            let rec = rec.map_err(|e| DslError::Data(e.to_string()))?;
            let row = r + 2;
            for (j, cell) in rec.iter().enumerate() {
                if cell.is_empty() {
                    ended[j] = true;
                    continue;
                }
                if ended[j] {
                    return Err(DslError::Data(format!("row {row}, column `{}`: value after an empty cell", headers[j])));
                }
                let v: f64 = cell
                    .parse()
                    .ok()
                    .filter(|v: &f64| v.is_finite())
                    .ok_or_else(|| DslError::Data(format!("row {row}, column `{}`: `{cell}` is not a number", headers[j])))?;
                cols[j].push(v);
            }
        }
        let mut out = DataSet::new();
        for (h, c) in headers.into_iter().zip(cols) {
            out.insert(h, DataValue::Array(c));
        }
        Ok(out)
    }
}
