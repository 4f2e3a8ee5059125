use std::io::{self, Write};

use clap::ValueEnum;
use serde_json::Value;

use qtorus::ColumnOp;

use crate::CliError;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

/// A result with a JSON document and a flat table view for `--format csv`.
pub struct Table {
    json: Value,
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn single(json: Value, header: &[&str], row: Vec<String>) -> Self {
        Self {
            json,
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: vec![row],
        }
    }

    /// Table rows from JSON objects; the header is the key list of the first one.
    pub fn from_records(json: Value, records: Vec<Value>) -> Self {
        let header: Vec<String> = match records.first() {
            Some(Value::Object(m)) => m.keys().cloned().collect(),
            _ => Vec::new(),
        };
        let rows = records
            .iter()
            .map(|r| header.iter().map(|k| cell(&r[k.as_str()])).collect())
            .collect();
        Self { json, header, rows }
    }

    pub fn with_header(mut self, header: &[&str]) -> Self {
        if self.header.is_empty() {
            self.header = header.iter().map(|s| s.to_string()).collect();
        }
        self
    }

    pub fn emit(&self, format: Format) -> Result<(), CliError> {
        let stdout = io::stdout();
        let mut out = stdout.lock();
        match format {
            Format::Json => {
                serde_json::to_writer(&mut out, &self.json)?;
                out.write_all(b"\n")?;
            }
            Format::Csv => {
                let mut w = csv::Writer::from_writer(out);
                w.write_record(&self.header)?;
                for row in &self.rows {
                    w.write_record(row)?;
                }
                w.flush()?;
            }
        }
        Ok(())
    }
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Array(items) if items.iter().all(|x| !x.is_object() && !x.is_array()) => {
            items.iter().map(cell).collect::<Vec<_>>().join(" ")
        }
        other => other.to_string(),
    }
}

/// `"1 0;0 1"` for an integer matrix given by rows.
pub fn int_rows(rows: &[Vec<i64>]) -> String {
    rows.iter()
        .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(" "))
        .collect::<Vec<_>>()
        .join(";")
}

pub fn ops(ops: &[ColumnOp]) -> String {
    ops.iter().map(ColumnOp::to_string).collect::<Vec<_>>().join(" ")
}
