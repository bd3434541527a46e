//! CSV input with header checks and row-numbered errors.
//!
//! Rows are numbered from 1 starting at the first data row; messages also give
//! the physical line so either convention finds the cell.

use std::collections::HashMap;
use std::fs::File;
use std::io::Read;
use std::path::Path;

use crate::error::{CliError, CliResult};

#[derive(Debug)]
pub struct Table {
    source: String,
    headers: Vec<String>,
    index: HashMap<String, usize>,
    rows: Vec<(usize, Vec<String>)>,
}

impl Table {
    pub fn read(path: &Path) -> CliResult<Table> {
        let file = File::open(path).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
        Table::from_reader(file, &path.display().to_string())
    }

    pub fn from_reader<R: Read>(input: R, source: &str) -> CliResult<Table> {
        let mut r = csv::ReaderBuilder::new().trim(csv::Trim::All).flexible(true).from_reader(input);
        let headers: Vec<String> = r
            .headers()
            .map_err(|e| CliError::data(format!("{source}: {e}")))?
            .iter()
            .map(str::to_string)
            .collect();
        if headers.is_empty() || headers.iter().all(String::is_empty) {
            return Err(CliError::data(format!("{source}: empty file")));
        }
        let mut index = HashMap::new();
        for (i, h) in headers.iter().enumerate() {
            if index.insert(h.clone(), i).is_some() {
                return Err(CliError::data(format!("{source}: duplicate column `{h}`")));
            }
        }
        let mut rows = Vec::new();
        for rec in r.records() {
            let rec = rec.map_err(|e| CliError::data(format!("{source}: {e}")))?;
            if rec.iter().all(str::is_empty) {
                continue;
            }
            let line = rec.position().map(|p| p.line() as usize).unwrap_or(0);
            rows.push((line, rec.iter().map(str::to_string).collect()));
        }
        if rows.is_empty() {
            return Err(CliError::data(format!("{source}: no data rows")));
        }
        Ok(Table { source: source.into(), headers, index, rows })
    }

    pub fn headers(&self) -> &[String] {
        &self.headers
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn require(&self, names: &[&str]) -> CliResult<()> {
        for n in names {
            self.column_index(n)?;
        }
        Ok(())
    }

    fn column_index(&self, name: &str) -> CliResult<usize> {
        self.index.get(name).copied().ok_or_else(|| {
            CliError::data(format!(
                "{}: missing column `{name}` (found: {})",
                self.source,
                self.headers.join(", ")
            ))
        })
    }

    fn cells(&self, name: &str) -> CliResult<impl Iterator<Item = (usize, usize, &str)>> {
        let j = self.column_index(name)?;
        Ok(self
            .rows
            .iter()
            .enumerate()
            .map(move |(i, (line, rec))| (i + 1, *line, rec.get(j).map(String::as_str).unwrap_or(""))))
    }

    fn bad(&self, row: usize, line: usize, name: &str, raw: &str, what: &str) -> CliError {
        CliError::data(format!(
            "{}: row {row} (line {line}), column `{name}`: `{raw}` is not {what}",
            self.source
        ))
    }

    pub fn text(&self, name: &str) -> CliResult<Vec<String>> {
        Ok(self.cells(name)?.map(|(_, _, v)| v.to_string()).collect())
    }

    pub fn numbers(&self, name: &str) -> CliResult<Vec<f64>> {
        self.cells(name)?
            .map(|(row, line, raw)| match raw.parse::<f64>() {
                Ok(v) if v.is_finite() => Ok(v),
                _ => Err(self.bad(row, line, name, raw, "a finite number")),
            })
            .collect()
    }

    pub fn counts(&self, name: &str) -> CliResult<Vec<u64>> {
        self.cells(name)?
            .map(|(row, line, raw)| {
                raw.parse::<u64>().map_err(|_| self.bad(row, line, name, raw, "a nonnegative integer"))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(text: &str) -> CliResult<Table> {
        Table::from_reader(text.as_bytes(), "t.csv")
    }

    #[test]
    fn reads_group_counts() {
        let t = table("group,y,n\na,1,10\nb,9,10\n").unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.counts("y").unwrap(), vec![1, 9]);
        assert_eq!(t.text("group").unwrap(), vec!["a", "b"]);
    }

    #[test]
    fn missing_column_is_named() {
        let t = table("group,y\na,1\n").unwrap();
        let e = t.require(&["group", "y", "n"]).unwrap_err();
        assert_eq!(e.code(), 2);
        assert!(e.to_string().contains("missing column `n`"), "{e}");
    }

    #[test]
    fn bad_cell_cites_the_row() {
        let t = table("y,n\n1,10\n2,10\nabc,10\n").unwrap();
        let e = t.numbers("y").unwrap_err().to_string();
        assert!(e.contains("row 3 (line 4)") && e.contains("`abc`"), "{e}");
        let t = table("y\n2.5\n").unwrap();
        assert!(t.counts("y").unwrap_err().to_string().contains("nonnegative integer"));
    }

    #[test]
    fn empty_inputs() {
        assert!(table("").unwrap_err().to_string().contains("empty file"));
        assert!(table("y,n\n").unwrap_err().to_string().contains("no data rows"));
        assert!(table("y,y\n1,2\n").is_err());
    }
}
