//! The three-parameter multicurve Hull-White model: volatilities, the
//! exercise-boundary function and the closed-form swaption price.

mod params;
mod payoff;
mod pricer;
mod spec;

use thiserror::Error;

pub use params::{extended_vols, vol_v, zeta, ExtendedVols, MhwParams};
pub use payoff::{eval_f, find_xi_star, payoff_terms, ExpTerm, PayoffTerms, EXPONENT_CLAMP};
pub use pricer::{price_swaption, price_swaption_detailed, ExerciseBoundary, SwaptionPrice};
pub use spec::{Side, SwaptionSpec};

use crate::curves::CurveError;
use crate::roots::RootError;
use crate::temporal::TemporalError;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModelError {
    #[error("invalid model parameters: {0}")]
    InvalidParams(String),
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("invalid swaption: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Temporal(#[from] TemporalError),
    #[error(transparent)]
    Root(#[from] RootError),
    #[error("exercise boundary lies beyond the search cap ({} {bound})", if *.above { "above" } else { "below" })]
    RootBeyondBracket { above: bool, bound: f64 },
    #[error("no exercise boundary: {0}")]
    NoExerciseBoundary(String),
    #[error("exponent overflow while bracketing at xi = {xi}")]
    ExponentOverflow { xi: f64 },
}
