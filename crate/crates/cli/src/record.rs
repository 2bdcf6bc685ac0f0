use std::io::Write;

use serde::Serialize;
use serde_json::{Map, Value};

use crate::args::Format;

#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub command: &'static str,
    pub version: &'static str,
    pub parameters: Value,
    pub worker_count: usize,
    pub result: Value,
    /// Excluded from the determinism contract.
    pub timing: Timing,
}

#[derive(Debug, Default, Serialize)]
pub struct Timing {
    pub elapsed_ms: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes_explored: Option<u64>,
}

impl RunRecord {
    pub fn write(&self, format: Format, out: &mut impl Write) -> std::io::Result<()> {
        let value = serde_json::to_value(self).map_err(std::io::Error::other)?;
        match format {
            Format::Json => writeln!(out, "{value}"),
            Format::Csv => {
                let mut rows = Vec::new();
                flatten("", &value, &mut rows);
                let mut w = csv::Writer::from_writer(out);
                w.write_record(["path", "value"])?;
                for (path, v) in rows {
                    w.write_record([path, v])?;
                }
                w.flush()
            }
        }
    }
}

fn join(prefix: &str, key: &str) -> String {
    if prefix.is_empty() {
        key.to_string()
    } else {
        format!("{prefix}.{key}")
    }
}

/// Leaves of `value` as `(dotted path, scalar)` rows; array indices become
/// path segments.
fn flatten(prefix: &str, value: &Value, rows: &mut Vec<(String, String)>) {
    match value {
        Value::Object(map) => flatten_map(prefix, map, rows),
        Value::Array(items) => {
            for (i, v) in items.iter().enumerate() {
                flatten(&join(prefix, &i.to_string()), v, rows);
            }
        }
        Value::String(s) => rows.push((prefix.to_string(), s.clone())),
        Value::Null => rows.push((prefix.to_string(), String::new())),
        other => rows.push((prefix.to_string(), other.to_string())),
    }
}

fn flatten_map(prefix: &str, map: &Map<String, Value>, rows: &mut Vec<(String, String)>) {
    for (k, v) in map {
        flatten(&join(prefix, k), v, rows);
    }
}
