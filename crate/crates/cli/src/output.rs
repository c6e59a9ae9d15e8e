//! Machine-readable output records.
//!
//! Every subcommand produces one [`OutputRecord`]: a fixed column list plus
//! string-valued rows (numbers are rendered to explicit precision upstream,
//! so emission is locale-free and byte-reproducible). JSON carries the full
//! record under the versioned `composition-runs/v1` schema; CSV carries the
//! header and rows only.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub const SCHEMA_ID: &str = "composition-runs/v1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Meta {
    pub version: String,
    pub precision_digits: u32,
    pub timestamp: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    pub schema: String,
    pub command: String,
    pub params: BTreeMap<String, String>,
    pub meta: Meta,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

impl OutputRecord {
    pub fn new(
        command: &str,
        params: BTreeMap<String, String>,
        precision_digits: u32,
        timestamp: Option<String>,
        columns: &[&str],
    ) -> Self {
        OutputRecord {
            schema: SCHEMA_ID.to_string(),
            command: command.to_string(),
            params,
            meta: Meta {
                version: env!("CARGO_PKG_VERSION").to_string(),
                precision_digits,
                timestamp,
            },
            columns: columns.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("record serializes");
        s.push('\n');
        s
    }

    /// Inverse of [`Self::to_json`]; emitted files parse back losslessly.
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn from_json(s: &str) -> Result<Self, String> {
        let rec: OutputRecord = serde_json::from_str(s).map_err(|e| e.to_string())?;
        if rec.schema != SCHEMA_ID {
            return Err(format!("unexpected schema id {:?}", rec.schema));
        }
        for row in &rec.rows {
            if row.len() != rec.columns.len() {
                return Err("row width does not match columns".into());
            }
        }
        Ok(rec)
    }

    /// CSV with the fixed header; cells are guarded against the delimiter so
    /// no quoting is ever needed.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for row in &self.rows {
            for cell in row {
                debug_assert!(
                    !cell.contains(',') && !cell.contains('\n'),
                    "cell {cell:?} would need quoting"
                );
            }
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }

    /// Parses our own CSV back into (columns, rows).
    #[cfg_attr(not(test), allow(dead_code))]
    pub fn parse_csv(s: &str) -> Result<(Vec<String>, Vec<Vec<String>>), String> {
        let mut lines = s.lines();
        let header = lines.next().ok_or("empty csv")?;
        let columns: Vec<String> = header.split(',').map(|c| c.to_string()).collect();
        let mut rows = Vec::new();
        for line in lines {
            let row: Vec<String> = line.split(',').map(|c| c.to_string()).collect();
            if row.len() != columns.len() {
                return Err(format!("row width {} != {}", row.len(), columns.len()));
            }
            rows.push(row);
        }
        Ok((columns, rows))
    }
}
