//! CSV reports: `#` config echo, a header row, numeric rows, `#` trailer.

use std::fmt::Write as _;
use std::io::Write;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    columns: Vec<&'static str>,
    rows: Vec<Vec<f64>>,
    trailer: Vec<String>,
}

impl Report {
    pub fn new(columns: &[&'static str]) -> Self {
        Self {
            columns: columns.to_vec(),
            rows: Vec::new(),
            trailer: Vec::new(),
        }
    }

    /// Appends a row. All values must be finite.
    pub fn push(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(Error::Invariant(format!(
                "row has {} values for {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("report row"));
        }
        self.rows.push(row);
        Ok(())
    }

    /// Adds a `# ...` line written after the rows.
    pub fn note(&mut self, line: impl Into<String>) {
        self.trailer.push(line.into());
    }

    pub fn columns(&self) -> &[&'static str] {
        &self.columns
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn notes(&self) -> &[String] {
        &self.trailer
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let i = self.columns.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r[i]).collect())
    }

    /// Appends the rows and notes of `other`, which must share the columns.
    pub fn extend(&mut self, other: Report) -> Result<()> {
        if other.columns != self.columns {
            return Err(Error::Invariant("reports have different columns".into()));
        }
        self.rows.extend(other.rows);
        self.trailer.extend(other.trailer);
        Ok(())
    }

    /// Header and rows only.
    pub fn body(&self) -> String {
        let mut out = self.columns.join(",");
        out.push('\n');
        for row in &self.rows {
            let cells: Vec<String> = row.iter().map(|v| format!("{v:.16e}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }

    pub fn to_csv(&self, echo: &str) -> String {
        let mut out = String::from(echo);
        out.push_str(&self.body());
        for line in &self.trailer {
            let _ = writeln!(out, "# {line}");
        }
        out
    }

    pub fn write_to(&self, echo: &str, w: &mut impl Write) -> Result<()> {
        w.write_all(self.to_csv(echo).as_bytes())?;
        w.flush()?;
        Ok(())
    }
}

/// Data lines of a CSV text: everything that is not a `#` comment.
pub fn csv_body(text: &str) -> String {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .map(|l| format!("{l}\n"))
        .collect()
}
