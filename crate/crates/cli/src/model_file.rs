//! Persisted fit results. Numbers serialize with full round-trip precision,
//! so `load(save(x)) == x` bit-exactly.

use std::fs;
use std::path::Path;

use histlda::{FitConfig, FitResult, Histogram, MixtureDensity, Range};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

pub const MODEL_SCHEMA: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelFile {
    pub schema: u32,
    pub range: [f64; 2],
    pub k: usize,
    /// Fitted bin count of each basis.
    pub bin_counts: Vec<usize>,
    /// Fitted bin masses per basis (row `k` has `bin_counts[k]` entries).
    pub masses: Vec<Vec<f64>>,
    /// Opaque unit identifiers, index-aligned with `weights`.
    pub unit_ids: Vec<String>,
    /// Per-unit mixture weights over the bases.
    pub weights: Vec<Vec<f64>>,
    pub alpha: f64,
    pub beta: f64,
    /// Echo of the configuration that produced the fit (includes the seed).
    pub config: FitConfig,
    pub seed: u64,
}

impl ModelFile {
    pub fn from_fit(
        result: &FitResult,
        range: Range,
        unit_ids: Vec<String>,
        config: &FitConfig,
    ) -> Self {
        Self {
            schema: MODEL_SCHEMA,
            range: [range.lower(), range.upper()],
            k: result.bases.len(),
            bin_counts: result.bases.iter().map(|b| b.bin_count()).collect(),
            masses: result.bases.iter().map(|b| b.masses().to_vec()).collect(),
            unit_ids,
            weights: result.unit_weights.clone(),
            alpha: result.alpha,
            beta: result.beta,
            config: config.clone(),
            seed: config.seed,
        }
    }

    pub fn to_json_string(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("model serializes");
        s.push('\n');
        s
    }

    pub fn save(&self, path: &Path) -> CliResult<()> {
        fs::write(path, self.to_json_string())
            .map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
    }

    pub fn load(path: &Path) -> CliResult<Self> {
        let raw = fs::read_to_string(path)
            .map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
        let model: ModelFile = serde_json::from_str(&raw)
            .map_err(|e| CliError::data(format!("{}: not a model file: {e}", path.display())))?;
        if model.schema != MODEL_SCHEMA {
            return Err(CliError::data(format!(
                "{}: unsupported schema {} (expected {MODEL_SCHEMA})",
                path.display(),
                model.schema
            )));
        }
        Ok(model)
    }

    pub fn range(&self) -> CliResult<Range> {
        Range::new(self.range[0], self.range[1]).map_err(|e| CliError::data(e.to_string()))
    }

    /// Rebuilds the fitted density of the unit at `index`.
    pub fn unit_density(&self, index: usize) -> CliResult<MixtureDensity> {
        let range = self.range()?;
        let bases: Vec<Histogram> = self
            .masses
            .iter()
            .map(|m| Histogram::new(range, m.clone()))
            .collect::<histlda::Result<_>>()
            .map_err(|e| CliError::data(e.to_string()))?;
        let weights = self
            .weights
            .get(index)
            .ok_or_else(|| CliError::data(format!("unit index {index} out of range")))?
            .clone();
        MixtureDensity::new(bases, weights).map_err(|e| CliError::data(e.to_string()))
    }
}
