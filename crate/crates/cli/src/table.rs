//! Tables written as TSV or canonical JSON.

use std::fmt::Write as _;
use std::io::{self, Write};

use serde_json::{Map, Value};

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Int(u64),
    Float(f64),
    Text(String),
}

impl From<u64> for Cell {
    fn from(v: u64) -> Self {
        Cell::Int(v)
    }
}

impl From<u32> for Cell {
    fn from(v: u32) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<usize> for Cell {
    fn from(v: usize) -> Self {
        Cell::Int(v as u64)
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Float(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

impl From<String> for Cell {
    fn from(v: String) -> Self {
        Cell::Text(v)
    }
}

impl Cell {
    fn tsv(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            // Debug formatting is the shortest string that parses back to the same value.
            Cell::Float(v) => format!("{v:?}"),
            Cell::Text(s) => s.clone(),
        }
    }

    fn json(&self) -> Value {
        match self {
            Cell::Int(v) => Value::from(*v),
            Cell::Float(v) => Value::from(*v),
            Cell::Text(s) => Value::from(s.as_str()),
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Table {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
    pub meta: Vec<(String, Cell)>,
}

impl Table {
    pub fn new(columns: &[&str]) -> Self {
        Table {
            columns: columns.iter().map(|c| c.to_string()).collect(),
            ..Default::default()
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn meta(&mut self, key: &str, value: impl Into<Cell>) {
        self.meta.push((key.to_string(), value.into()));
    }

    pub fn column(&self, name: &str) -> Option<impl Iterator<Item = &Cell>> {
        let i = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(move |r| &r[i]))
    }

    /// Meta lines as `# key<TAB>value`, then a header and the rows.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (k, v) in &self.meta {
            writeln!(out, "# {k}\t{}", v.tsv()).unwrap();
        }
        writeln!(out, "{}", self.columns.join("\t")).unwrap();
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(Cell::tsv).collect();
            writeln!(out, "{}", cells.join("\t")).unwrap();
        }
        out
    }

    fn meta_json(&self) -> Value {
        Value::Object(self.meta.iter().map(|(k, v)| (k.clone(), v.json())).collect())
    }

    /// A one-column table of `values` without materializing its rows. The
    /// header is written as a comment so the output reads back as a dataset.
    pub fn write_tsv_stream(&self, w: &mut dyn Write, values: &[f64]) -> io::Result<()> {
        for (k, v) in &self.meta {
            writeln!(w, "# {k}\t{}", v.tsv())?;
        }
        writeln!(w, "# {}", self.columns.join("\t"))?;
        for x in values {
            writeln!(w, "{x:?}")?;
        }
        Ok(())
    }

    /// Streams the same bytes that [`Table::to_json`] produces for a
    /// one-column table of `values`.
    pub fn write_json_stream(&self, w: &mut dyn Write, values: &[f64]) -> io::Result<()> {
        let columns = Value::from(self.columns.clone());
        write!(w, "{{\"columns\":{columns},\"meta\":{},\"rows\":[", self.meta_json())?;
        for (i, &x) in values.iter().enumerate() {
            if i > 0 {
                w.write_all(b",")?;
            }
            write!(w, "[{}]", Value::from(x))?;
        }
        w.write_all(b"]}\n")
    }

    /// `{"columns": [...], "meta": {...}, "rows": [[...], ...]}` with keys
    /// sorted and no whitespace.
    pub fn to_json(&self) -> String {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| Value::Array(r.iter().map(Cell::json).collect()))
            .collect();
        let mut doc = Map::new();
        doc.insert("columns".into(), Value::from(self.columns.clone()));
        doc.insert("meta".into(), self.meta_json());
        doc.insert("rows".into(), Value::Array(rows));
        let mut s = Value::Object(doc).to_string();
        s.push('\n');
        s
    }
}
