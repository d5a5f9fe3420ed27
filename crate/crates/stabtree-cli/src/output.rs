//! CSV report assembly: a `#`-prefixed header block recording the full
//! configuration, then a column header row and data rows. Identical
//! configurations render byte-identical reports, so the files double as
//! regression fixtures.

use std::fmt::Display;
use std::fmt::Write as _;
use std::path::Path;

/// Formats a float with 12 significant digits, the fixed width every data
/// column uses.
pub fn float(x: f64) -> String {
    format!("{x:.11e}")
}

/// A report under assembly: configuration lines land in the header block in
/// insertion order, rows in emission order.
pub struct Report {
    header: Vec<(String, String)>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    text_body: Option<String>,
}

impl Report {
    pub fn new(subcommand: &str) -> Report {
        Report {
            header: vec![("subcommand".into(), subcommand.into())],
            columns: Vec::new(),
            rows: Vec::new(),
            text_body: None,
        }
    }

    /// Records one configuration key in the header block.
    pub fn config(&mut self, key: &str, value: impl Display) {
        self.header.push((key.into(), value.to_string()));
    }

    /// Sets the column header row.
    pub fn columns(&mut self, cols: &[&'static str]) {
        self.columns = cols.to_vec();
    }

    /// Appends one data row; the cell count must match the columns.
    pub fn row(&mut self, cells: Vec<String>) {
        assert_eq!(cells.len(), self.columns.len(), "row shape mismatch");
        self.rows.push(cells);
    }

    /// Replaces the CSV body with verbatim text (used by `codes show`,
    /// whose output is the code file format rather than a table).
    pub fn set_text_body(&mut self, body: String) {
        self.text_body = Some(body);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "# stabtree {}", env!("CARGO_PKG_VERSION"));
        for (k, v) in &self.header {
            let _ = writeln!(out, "# {k}: {v}");
        }
        if let Some(body) = &self.text_body {
            out.push_str(body);
            return out;
        }
        let _ = writeln!(out, "{}", self.columns.join(","));
        for row in &self.rows {
            let _ = writeln!(out, "{}", row.join(","));
        }
        out
    }

    /// Writes the report to `path`, or to stdout when no path is given.
    pub fn emit(&self, path: Option<&Path>) -> anyhow::Result<()> {
        let rendered = self.render();
        match path {
            Some(p) => std::fs::write(p, rendered)
                .map_err(|e| anyhow::anyhow!("cannot write {}: {e}", p.display()))?,
            None => print!("{rendered}"),
        }
        Ok(())
    }
}
