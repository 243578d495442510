use std::fmt;

use abideal_core::{CheckRecord, VerificationReport};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::config::Format;

/// A command-line usage problem; exits with status 2.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

pub fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Rows for CSV output.
#[derive(Debug, Default)]
pub struct Table {
    pub header: Vec<&'static str>,
    pub rows: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct Output {
    pub rank: usize,
    pub command: &'static str,
    pub checks: Vec<CheckRecord>,
    pub data: Map<String, Value>,
    #[serde(skip)]
    pub table: Option<Table>,
}

impl Output {
    pub fn new(command: &'static str, report: VerificationReport) -> Self {
        Output {
            rank: report.rank,
            command,
            checks: report.checks,
            data: report.data,
            table: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn set(&mut self, key: &str, value: Value) {
        self.data.insert(key.to_string(), value);
    }

    pub fn render(&self, format: Format) -> anyhow::Result<Vec<u8>> {
        match format {
            Format::Json => {
                let mut bytes = serde_json::to_vec_pretty(self)?;
                bytes.push(b'\n');
                Ok(bytes)
            }
            Format::Csv => {
                let table = self
                    .table
                    .as_ref()
                    .ok_or_else(|| usage(format!("{} has no CSV form", self.command)))?;
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(&table.header)?;
                for row in &table.rows {
                    w.write_record(row)?;
                }
                Ok(w.into_inner()?)
            }
        }
    }
}
