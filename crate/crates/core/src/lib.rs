//! Dual-curve bootstrap, closed-form swaption pricing and calibration for a
//! parsimonious multicurve Hull-White model.
//!
//! The numerical core is generic over [`Real`] (`f64` or `f32`); the aliases
//! below fix it to `f64`, which is what calibration and the Monte Carlo
//! oracles run on.

pub mod calib;
pub mod curves;
pub mod market;
pub mod mhw;
pub mod oracle;
pub mod roots;
pub mod scalar;
pub mod snapshot;
pub mod temporal;

use thiserror::Error;

pub use scalar::Real;

pub type Curve = curves::Curve<f64>;
pub type PseudoCurve = curves::PseudoCurve<f64>;
pub type QuoteSet = curves::QuoteSet<f64>;
pub type LegSchedule = temporal::LegSchedule<f64>;
pub type MhwParams = mhw::MhwParams<f64>;
pub type SwaptionSpec = mhw::SwaptionSpec<f64>;
pub type PayoffTerms = mhw::PayoffTerms<f64>;
pub type NormalQuote = market::NormalQuote<f64>;

/// Any failure from the library, grouped by stage.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Temporal(#[from] temporal::TemporalError),
    #[error(transparent)]
    Curve(#[from] curves::CurveError),
    #[error(transparent)]
    Model(#[from] mhw::ModelError),
    #[error(transparent)]
    Market(#[from] market::MarketError),
    #[error(transparent)]
    Calibration(#[from] calib::CalibrationError),
    #[error(transparent)]
    Oracle(#[from] oracle::OracleError),
}
