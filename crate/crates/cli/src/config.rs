use std::path::{Path, PathBuf};

use mhw_core::calib::{Bounds, OptimizerSettings};
use mhw_core::curves::BootstrapConventions;
use mhw_core::mhw::MhwParams;
use mhw_core::oracle::McConfig;
use mhw_core::temporal::Date;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Everything a run needs besides the command itself.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub value_date: Date,
    pub data_dir: PathBuf,
    pub conventions: BootstrapConventions,
    pub calibration: CalibrationConfig,
    pub oracle: McConfig,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CalibrationConfig {
    pub bounds: Bounds,
    pub settings: OptimizerSettings,
    /// Uniform random starts drawn in addition to `starts`.
    pub random_starts: usize,
    pub seed: u64,
    pub starts: Vec<MhwParams<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub json: Option<PathBuf>,
    /// Market vs model prices of the calibration instruments, as CSV.
    pub fit_csv: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            value_date: Date::from_ymd_opt(2015, 9, 10).expect("valid date"),
            data_dir: PathBuf::from("data"),
            conventions: BootstrapConventions::default(),
            calibration: CalibrationConfig::default(),
            oracle: McConfig::default(),
            output: OutputConfig::default(),
        }
    }
}

impl Default for CalibrationConfig {
    fn default() -> Self {
        Self { bounds: Bounds::default(), settings: OptimizerSettings::default(), random_starts: 10, seed: 20150910, starts: vec![] }
    }
}

impl RunConfig {
    /// Reads a TOML file; relative paths inside it resolve against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let mut cfg: RunConfig = toml::from_str(&text).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        let base = path.parent().unwrap_or(Path::new("."));
        let anchor = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        anchor(&mut cfg.data_dir);
        cfg.output.json.as_mut().map(anchor);
        cfg.output.fit_csv.as_mut().map(anchor);
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if !self.data_dir.is_dir() {
            return Err(CliError::Input(format!("data directory {} does not exist", self.data_dir.display())));
        }
        self.calibration.bounds.validate().map_err(|e| CliError::Config(e.to_string()))?;
        for s in &self.calibration.starts {
            s.validate().map_err(|e| CliError::Config(format!("calibration start: {e}")))?;
        }
        if self.calibration.starts.is_empty() && self.calibration.random_starts == 0 {
            return Err(CliError::Config("calibration needs at least one start".into()));
        }
        self.oracle.validate().map_err(|e| CliError::Config(e.to_string()))
    }
}
