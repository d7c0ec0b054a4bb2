use std::io::{self, Write};

use serde_json::{Map, Number, Value};

/// Version of the column layout, written in the CSV comment line.
pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(u64),
    Text(String),
}

impl From<f64> for Cell {
    fn from(x: f64) -> Self {
        Cell::Num(x)
    }
}

impl From<usize> for Cell {
    fn from(x: usize) -> Self {
        Cell::Int(x as u64)
    }
}

impl From<u64> for Cell {
    fn from(x: u64) -> Self {
        Cell::Int(x)
    }
}

impl From<bool> for Cell {
    fn from(x: bool) -> Self {
        Cell::Text(x.to_string())
    }
}

impl From<&str> for Cell {
    fn from(x: &str) -> Self {
        Cell::Text(x.to_string())
    }
}

impl Cell {
    fn csv(&self) -> String {
        match self {
            Cell::Num(x) if x.is_nan() => "nan".into(),
            Cell::Num(x) if x.is_infinite() => if *x > 0.0 { "inf" } else { "-inf" }.into(),
            Cell::Num(x) => format!("{x:?}"),
            Cell::Int(x) => x.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Num(x) => Number::from_f64(*x).map_or(Value::Null, Value::Number),
            Cell::Int(x) => Value::Number((*x).into()),
            Cell::Text(s) => Value::String(s.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// Rows of one command's output.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub name: &'static str,
    pub columns: Vec<&'static str>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &'static str, columns: &[&'static str]) -> Self {
        Table {
            name,
            columns: columns.to_vec(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        assert_eq!(row.len(), self.columns.len(), "row width");
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| *c == name)
    }

    pub fn write<W: Write>(&self, out: &mut W, format: Format) -> io::Result<()> {
        match format {
            Format::Csv => self.write_csv(out),
            Format::Jsonl => self.write_jsonl(out),
        }
    }

    /// A `#` comment naming the table and schema version, a header row, then
    /// one line per row.
    pub fn write_csv<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "# bdht {} schema {SCHEMA_VERSION}", self.name)?;
        writeln!(out, "{}", self.columns.join(","))?;
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::csv).collect();
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    /// One JSON object per row, keyed by the CSV headers. Non-finite numbers
    /// become `null`.
    pub fn write_jsonl<W: Write>(&self, out: &mut W) -> io::Result<()> {
        for row in &self.rows {
            let obj: Map<String, Value> = self
                .columns
                .iter()
                .zip(row)
                .map(|(k, v)| (k.to_string(), v.json()))
                .collect();
            writeln!(out, "{}", Value::Object(obj))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_jsonl_share_columns() {
        let mut t = Table::new("demo", &["scheme", "n", "e0"]);
        t.push(vec!["theorem1".into(), 23usize.into(), 0.25.into()]);
        t.push(vec!["baseline".into(), 15usize.into(), f64::INFINITY.into()]);
        let mut csv = Vec::new();
        t.write_csv(&mut csv).unwrap();
        let csv = String::from_utf8(csv).unwrap();
        assert_eq!(
            csv,
            "# bdht demo schema 1\nscheme,n,e0\ntheorem1,23,0.25\nbaseline,15,inf\n"
        );
        let mut js = Vec::new();
        t.write_jsonl(&mut js).unwrap();
        let js = String::from_utf8(js).unwrap();
        assert_eq!(
            js,
            "{\"scheme\":\"theorem1\",\"n\":23,\"e0\":0.25}\n{\"scheme\":\"baseline\",\"n\":15,\"e0\":null}\n"
        );
    }
}
