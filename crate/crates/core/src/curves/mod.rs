//! Discount and pseudo-discount term structures, spreads, swap algebra and
//! the dual-curve bootstrap.

mod bootstrap;
mod curve;
mod quotes;
mod swap;

use std::path::PathBuf;

use thiserror::Error;

pub use bootstrap::{
    bootstrap_discount, bootstrap_pseudo, ois_residuals, pseudo_residuals, BootstrapConventions, InstrumentResidual,
};
pub use curve::{act365, forward_discount, spread, spread_between, Curve, Interpolation, PseudoCurve};
pub use quotes::{fill_annual_gaps, FraQuote, QuoteSet, RateQuote, DEPO_FILE, FRA_FILE, OIS_FILE, SWAP_FILE};
pub use swap::{bpv, floating_leg_value, swap_rate, SwapConventions};

pub(crate) use quotes::read_csv_rows;
pub(crate) use swap::check_same_span;

use crate::temporal::{Date, TemporalError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CurveError {
    #[error("date {date} is before the curve reference date {reference}")]
    BeforeReference { date: Date, reference: Date },
    #[error("invalid curve: {0}")]
    Invalid(String),
    #[error("bootstrap failed at {instrument}: {reason}")]
    Bootstrap { instrument: String, reason: String },
    #[error(transparent)]
    Temporal(#[from] TemporalError),
    #[error("missing market data file {}", .0.display())]
    MissingInput(PathBuf),
    #[error("{}:{line}: {message}", file.display())]
    QuoteFormat { file: PathBuf, line: u64, message: String },
    #[error("invalid quotes: {0}")]
    Quotes(String),
}
