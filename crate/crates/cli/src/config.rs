use std::path::{Path, PathBuf};

use fss_core::{default_variable_specs, Combiner, ComparisonMode, DatasetSchema, VariableSpec};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum DataSource {
    BuiltinTable1,
    Csv {
        path: PathBuf,
        schema: DatasetSchema,
        /// 1-based row positions to keep; all rows when absent.
        select: Option<Vec<usize>>,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "path")]
pub enum SpecSource {
    Defaults,
    File(PathBuf),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ReductionMode {
    PerVariable,
    Off,
}

impl std::str::FromStr for ReductionMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "per-variable" => Ok(ReductionMode::PerVariable),
            "off" => Ok(ReductionMode::Off),
            other => Err(format!("unknown reduction `{other}` (expected per-variable or off)")),
        }
    }
}

/// Everything a pipeline run depends on. The defaults reproduce the
/// published ten-patient analysis.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineConfig {
    pub data: DataSource,
    pub specs: SpecSource,
    pub combiner: Combiner,
    pub mode: ComparisonMode,
    pub reduction: ReductionMode,
    pub threshold: f64,
    #[serde(skip)]
    pub out_dir: PathBuf,
    /// Decimals in aligned-text tables.
    pub round: usize,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            data: DataSource::BuiltinTable1,
            specs: SpecSource::Defaults,
            combiner: Combiner::Max,
            mode: ComparisonMode::Count,
            reduction: ReductionMode::PerVariable,
            threshold: 0.0,
            out_dir: PathBuf::from("out"),
            round: 2,
        }
    }
}

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if !self.threshold.is_finite() {
            return Err(CliError::Config(format!("threshold {} is not finite", self.threshold)));
        }
        Ok(())
    }

    /// Hex SHA-256 over the serialized config, input file contents and tool
    /// version. The output directory does not participate.
    pub fn hash(&self) -> Result<String, CliError> {
        let mut h = Sha256::new();
        h.update(TOOL_VERSION.as_bytes());
        h.update(serde_json::to_vec(self).map_err(|e| CliError::Internal(e.to_string()))?);
        if let DataSource::Csv { path, .. } = &self.data {
            h.update(read_bytes(path).map_err(CliError::Data)?);
        }
        if let SpecSource::File(path) = &self.specs {
            h.update(read_bytes(path).map_err(CliError::Config)?);
        }
        Ok(hex::encode(h.finalize()))
    }
}

fn read_bytes(path: &Path) -> Result<Vec<u8>, String> {
    std::fs::read(path).map_err(|e| format!("{}: {e}", path.display()))
}

pub fn load_specs(source: &SpecSource) -> Result<Vec<VariableSpec>, CliError> {
    match source {
        SpecSource::Defaults => Ok(default_variable_specs()),
        SpecSource::File(path) => {
            let text = read_bytes(path).map_err(CliError::Config)?;
            let specs: Vec<VariableSpec> = serde_json::from_slice(&text)
                .map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
            if specs.is_empty() {
                return Err(CliError::Config(format!("{}: no variables defined", path.display())));
            }
            Ok(specs)
        }
    }
}

pub fn load_schema(path: &Path) -> Result<DatasetSchema, CliError> {
    let text = read_bytes(path).map_err(CliError::Config)?;
    serde_json::from_slice(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))
}
