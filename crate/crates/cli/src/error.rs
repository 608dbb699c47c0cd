use mhw_core::calib::CalibrationError;
use mhw_core::curves::CurveError;
use mhw_core::market::MarketError;
use mhw_core::mhw::ModelError;
use mhw_core::oracle::OracleError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config: {0}")]
    Config(String),
    #[error("input: {0}")]
    Input(String),
    #[error("bootstrap: {0}")]
    Curve(CurveError),
    #[error("market: {0}")]
    Market(MarketError),
    #[error("calibration: {0}")]
    Calibration(#[from] CalibrationError),
    #[error("pricing: {0}")]
    Model(#[from] ModelError),
    #[error("oracle: {0}")]
    Oracle(#[from] OracleError),
    #[error("validation: {0} of {1} swaptions outside 3 standard errors")]
    ValidationFailed(usize, usize),
    #[error("output: {0}")]
    Output(String),
}

impl From<CurveError> for CliError {
    fn from(e: CurveError) -> Self {
        match e {
            CurveError::MissingInput(_) | CurveError::QuoteFormat { .. } | CurveError::Quotes(_) => CliError::Input(e.to_string()),
            e => CliError::Curve(e),
        }
    }
}

impl From<MarketError> for CliError {
    fn from(e: MarketError) -> Self {
        match e {
            MarketError::Curve(c) => c.into(),
            e => CliError::Market(e),
        }
    }
}

impl CliError {
    /// Process exit code; 2 is left to argument parsing.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) => 3,
            CliError::Input(_) => 4,
            CliError::Curve(_) => 5,
            CliError::Market(_) => 6,
            CliError::Calibration(_) => 7,
            CliError::Model(_) => 8,
            CliError::Oracle(_) => 9,
            CliError::ValidationFailed(..) => 10,
            CliError::Output(_) => 11,
        }
    }
}
