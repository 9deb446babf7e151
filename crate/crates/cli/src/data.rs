//! Data-file ingestion and emission: headered CSV of `unit_id,t` rows plus
//! a JSON sidecar of true component weights for generated collections.

use std::fs;
use std::path::Path;

use histlda::{Collection, Range};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

/// Writes the observation table. Values round-trip exactly through their
/// shortest decimal representation.
pub fn write_data_csv(path: &Path, rows: &[(String, f64)]) -> CliResult<()> {
    let mut out = String::from("unit_id,t\n");
    for (unit_id, t) in rows {
        out.push_str(unit_id);
        out.push(',');
        out.push_str(&t.to_string());
        out.push('\n');
    }
    fs::write(path, out)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

/// Reads the observation table, reporting the offending 1-based data row on
/// failure.
pub fn read_data_csv(path: &Path) -> CliResult<Vec<(String, f64)>> {
    let raw = fs::read_to_string(path)
        .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_reader(raw.as_bytes());
    {
        let headers = reader
            .headers()
            .map_err(|e| CliError::data(format!("{}: bad header: {e}", path.display())))?;
        if headers.len() < 2 || &headers[0] != "unit_id" || &headers[1] != "t" {
            return Err(CliError::data(format!(
                "{}: expected header `unit_id,t`, got `{}`",
                path.display(),
                headers.iter().collect::<Vec<_>>().join(",")
            )));
        }
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 1;
        let record = record
            .map_err(|e| CliError::data(format!("{}: row {row}: {e}", path.display())))?;
        if record.len() != 2 {
            return Err(CliError::data(format!(
                "{}: row {row}: expected 2 fields, got {}",
                path.display(),
                record.len()
            )));
        }
        let t: f64 = record[1].parse().map_err(|_| {
            CliError::data(format!(
                "{}: row {row}: `{}` is not a number",
                path.display(),
                &record[1]
            ))
        })?;
        rows.push((record[0].to_string(), t));
    }
    Ok(rows)
}

/// Maps opaque unit ids to contiguous indices (first-appearance order) and
/// validates every value against the half-open range, naming the offending
/// row otherwise.
pub fn build_collection(rows: &[(String, f64)], range: Range) -> CliResult<(Collection, Vec<String>)> {
    let mut unit_ids: Vec<String> = Vec::new();
    let mut observations = Vec::with_capacity(rows.len());
    for (i, (unit_id, t)) in rows.iter().enumerate() {
        if !range.contains(*t) {
            return Err(CliError::data(format!(
                "row {}: value {t} of unit `{unit_id}` outside half-open range [{}, {})",
                i + 1,
                range.lower(),
                range.upper()
            )));
        }
        let unit = match unit_ids.iter().position(|u| u == unit_id) {
            Some(idx) => idx,
            None => {
                unit_ids.push(unit_id.clone());
                unit_ids.len() - 1
            }
        };
        observations.push((unit, *t));
    }
    if observations.is_empty() {
        return Err(CliError::data("data file contains no observations"));
    }
    let collection = Collection::new(range, unit_ids.len(), observations)
        .map_err(|e| CliError::data(e.to_string()))?;
    Ok((collection, unit_ids))
}

/// Sidecar written next to generated data: the component weights each unit
/// actually drew, for scoring estimates against the truth later.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightsFile {
    pub schema: u32,
    pub range: [f64; 2],
    pub seed: u64,
    pub unit_ids: Vec<String>,
    pub weights: Vec<[f64; 3]>,
}

pub fn write_weights_json(path: &Path, weights: &WeightsFile) -> CliResult<()> {
    let mut s = serde_json::to_string_pretty(weights).expect("weights serialize");
    s.push('\n');
    fs::write(path, s)
        .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}
