use repstab_core::rational::to_pq;
use repstab_core::symcomb::{CharacterPolynomial, ClassFunction, MultiplicityTable};
use serde_json::{Map, Value};

use crate::config::Format;
use crate::CliError;

/// Flat rows for CSV and text output.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let err = |e: csv::Error| CliError::Io(e.to_string());
        w.write_record(&self.headers).map_err(err)?;
        for r in &self.rows {
            w.write_record(r).map_err(err)?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| CliError::Io(e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(String::len).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let line = |cells: &[String]| {
            let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
            padded.join("  ").trim_end().to_string()
        };
        let mut out = line(&self.headers);
        out.push('\n');
        out.push_str(&line(&widths.iter().map(|&w| "-".repeat(w)).collect::<Vec<_>>()));
        out.push('\n');
        for r in &self.rows {
            out.push_str(&line(r));
            out.push('\n');
        }
        out
    }
}

/// A command's result: the JSON document and its flattened table.
#[derive(Clone, Debug)]
pub struct Document {
    pub json: Value,
    pub table: Table,
    /// False when a checked claim failed to reproduce.
    pub passed: bool,
}

impl Document {
    pub fn render(&self, format: Format) -> Result<String, CliError> {
        match format {
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).map_err(|e| CliError::Io(e.to_string()))?;
                s.push('\n');
                Ok(s)
            }
            Format::Csv => self.table.to_csv(),
            Format::Text => Ok(self.table.to_text()),
        }
    }
}

/// `{cycle type: "p/q"}` in the standard order of cycle types.
pub fn character_json(chi: &ClassFunction) -> Value {
    let mut m = Map::new();
    for (mu, v) in chi.iter() {
        m.insert(mu.to_string(), Value::String(to_pq(v)));
    }
    Value::Object(m)
}

/// `{partition: multiplicity}` keyed by unpadded partitions.
pub fn multiplicities_json(t: &MultiplicityTable) -> Value {
    let mut m = Map::new();
    for (lam, &k) in t.entries() {
        m.insert(lam.to_string(), Value::from(k));
    }
    Value::Object(m)
}

/// `{monomial: "p/q"}`, constant term under `"1"`.
pub fn char_poly_json(p: &CharacterPolynomial) -> Value {
    let mut m = Map::new();
    for (exps, c) in p.terms() {
        let name = if exps.is_empty() {
            "1".to_string()
        } else {
            CharacterPolynomial::monomial(exps.clone(), repstab_core::rational::int(1)).to_string()
        };
        m.insert(name, Value::String(to_pq(c)));
    }
    Value::Object(m)
}

pub fn yes(b: bool) -> String {
    if b { "true" } else { "false" }.to_string()
}
