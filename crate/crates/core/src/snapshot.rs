//! Market data loaded from a directory and the curves bootstrapped from it.

use std::path::Path;

use crate::calib::{atm_instruments, CalibrationError, CalibrationProblem};
use crate::curves::{bootstrap_discount, bootstrap_pseudo, BootstrapConventions, Curve, CurveError, PseudoCurve, QuoteSet};
use crate::market::{read_normal_quotes, MarketError, NormalQuote, SWAPTION_VOL_FILE};
use crate::temporal::Date;

#[derive(Debug, Clone)]
pub struct MarketSnapshot {
    pub value_date: Date,
    pub spot: Date,
    pub conventions: BootstrapConventions,
    pub quotes: QuoteSet<f64>,
    pub disc: Curve<f64>,
    pub pseudo: PseudoCurve<f64>,
}

impl MarketSnapshot {
    /// Reads the linear-instrument CSVs in `dir` and bootstraps both curves.
    pub fn load(dir: impl AsRef<Path>, value_date: Date, conventions: BootstrapConventions) -> Result<Self, CurveError> {
        let quotes = QuoteSet::from_dir(dir)?;
        Self::from_quotes(quotes, value_date, conventions)
    }

    pub fn from_quotes(quotes: QuoteSet<f64>, value_date: Date, conventions: BootstrapConventions) -> Result<Self, CurveError> {
        let disc = bootstrap_discount(&quotes, value_date, &conventions)?;
        let pseudo = bootstrap_pseudo(&quotes, &disc, value_date, &conventions)?;
        Ok(Self { value_date, spot: conventions.spot_date(value_date), conventions, quotes, disc, pseudo })
    }

    /// Swaption vol quotes from `dir`.
    pub fn read_vols(dir: impl AsRef<Path>) -> Result<Vec<NormalQuote<f64>>, MarketError> {
        read_normal_quotes(dir.as_ref().join(SWAPTION_VOL_FILE))
    }

    /// ATM receivers on the quoted grid, with Normal-formula market prices.
    pub fn calibration_problem(&self, vols: &[NormalQuote<f64>]) -> Result<CalibrationProblem, CalibrationError> {
        let instruments = atm_instruments(&self.disc, &self.pseudo, self.spot, vols, &self.conventions.swap)?;
        CalibrationProblem::new(self.disc.clone(), self.pseudo.clone(), instruments)
    }
}
