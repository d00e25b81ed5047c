use std::io::BufRead;
use std::path::Path;

use crate::error::{Error, Result};

/// Positive finite observations. Anything else offered at construction is
/// dropped and counted.
#[derive(Clone, Debug, PartialEq)]
pub struct Dataset {
    values: Vec<f64>,
    label: String,
    dropped: usize,
}

impl Dataset {
    pub fn from_values(label: impl Into<String>, values: impl IntoIterator<Item = f64>) -> Self {
        let mut dropped = 0;
        let values = values
            .into_iter()
            .filter(|&x| {
                let ok = x > 0.0 && x.is_finite();
                dropped += usize::from(!ok);
                ok
            })
            .collect();
        Dataset {
            values,
            label: label.into(),
            dropped,
        }
    }

    /// Reads one value per line, or the 1-based `column` of lines split on
    /// commas, tabs, semicolons or whitespace. Blank lines and lines starting
    /// with `#` are skipped; fields that do not parse count as dropped.
    pub fn from_reader(reader: impl BufRead, label: impl Into<String>, column: Option<usize>) -> Result<Self> {
        if column == Some(0) {
            return Err(Error::invalid("columns are numbered from 1"));
        }
        let mut values = Vec::new();
        let mut dropped = 0;
        for line in reader.lines() {
            let line = line?;
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let field = match column {
                None => Some(line),
                Some(c) => line
                    .split(|ch: char| ch == ',' || ch == ';' || ch.is_whitespace())
                    .filter(|f| !f.is_empty())
                    .nth(c - 1),
            };
            match field.and_then(|f| f.trim().parse::<f64>().ok()) {
                Some(x) if x > 0.0 && x.is_finite() => values.push(x),
                _ => dropped += 1,
            }
        }
        Ok(Dataset {
            values,
            label: label.into(),
            dropped,
        })
    }

    pub fn from_path(path: &Path, column: Option<usize>) -> Result<Self> {
        let file = std::fs::File::open(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_reader(std::io::BufReader::new(file), path.display().to_string(), column)
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn dropped(&self) -> usize {
        self.dropped
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}
