//! CSV tables. Each file starts with `# tvqe schema=<n> table=<name>`,
//! followed by a header row. Floats are written in shortest round-trip form,
//! so parsing a table back reproduces every value bit for bit.

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{HarnessError, Result};

pub const SCHEMA_VERSION: u32 = 1;

/// One recorded optimizer iterate of one state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub system: String,
    pub method: String,
    pub bond_length: Option<f64>,
    pub state: String,
    pub iteration: usize,
    pub phase: String,
    pub energy: f64,
    pub exact: Option<f64>,
    pub log_error: Option<f64>,
    pub tangent_norm: f64,
    /// The iterate at which the tangent phase started.
    pub tv_start: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceSummaryRow {
    pub system: String,
    pub method: String,
    pub bond_length: Option<f64>,
    pub state: String,
    pub final_energy: f64,
    pub exact: Option<f64>,
    pub final_log_error: Option<f64>,
    pub tangent_start: Option<usize>,
    pub iterations: usize,
    pub local_minimum_suspect: bool,
    pub terminations: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScatterSummaryRow {
    pub system: String,
    pub state: String,
    pub tangent_points: usize,
    pub spearman: Option<f64>,
}

/// One method, state and bond length of a scan. `energy` is empty for a
/// level the method does not produce.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanRow {
    pub method: String,
    pub bond_length: f64,
    pub state: String,
    pub energy: Option<f64>,
    pub exact: Option<f64>,
    pub log_error: Option<f64>,
    /// Log error at the end of the energy phase (TVVQE only).
    pub phase1_log_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanSummaryRow {
    pub method: String,
    pub state: String,
    pub points: usize,
    pub mean_log_error: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GradientRow {
    pub system: String,
    pub draw: usize,
    pub variable: usize,
    pub analytic: f64,
    pub fdm: f64,
    pub abs_diff: f64,
}

fn header_line(table: &str) -> String {
    format!("# tvqe schema={SCHEMA_VERSION} table={table}\n")
}

pub fn write_table<T: Serialize>(table: &str, rows: &[T]) -> Result<String> {
    let mut writer = csv::WriterBuilder::new().has_headers(true).from_writer(Vec::new());
    for row in rows {
        writer.serialize(row)?;
    }
    let body = writer.into_inner().map_err(|e| HarnessError::Invalid(e.to_string()))?;
    let body = String::from_utf8(body).map_err(|e| HarnessError::Invalid(e.to_string()))?;
    Ok(header_line(table) + &body)
}

/// Parses a table written by [`write_table`], checking schema and name.
pub fn read_table<T: DeserializeOwned>(table: &str, text: &str) -> Result<Vec<T>> {
    let first = text.lines().next().unwrap_or_default();
    if format!("{first}\n") != header_line(table) {
        return Err(HarnessError::Invalid(format!(
            "expected `{}`, found `{first}`",
            header_line(table).trim_end()
        )));
    }
    let mut reader = csv::ReaderBuilder::new().comment(Some(b'#')).from_reader(text.as_bytes());
    reader.deserialize().map(|r| r.map_err(HarnessError::from)).collect()
}
