use std::fmt::Write as _;
use std::path::Path;

use mhw_core::calib::Diagnostics;
use mhw_core::curves::InstrumentResidual;
use mhw_core::mhw::{ExerciseBoundary, MhwParams, Side};
use mhw_core::oracle::McConfig;
use mhw_core::temporal::Date;
use serde::Serialize;

use crate::error::CliError;

pub const VALUE_DATE_NOTE: &str = "Value date follows the quote tables (10 September 2015, consistent with negative EONIA \
quotes); a 2010 date that appears alongside the same data is treated as a typo.";

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub value_date: Date,
    pub spot_date: Date,
    pub note: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub curves: Option<CurvesReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub calibration: Option<CalibrationReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub price: Option<PriceReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub validation: Option<ValidationReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PillarRow {
    pub date: Date,
    /// ACT/365 from the curve reference date.
    pub time: f64,
    pub discount_factor: f64,
    /// Continuously compounded.
    pub zero_rate: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CurvesReport {
    pub discount: Vec<PillarRow>,
    pub pseudo_discount: Vec<PillarRow>,
    pub residuals: Vec<InstrumentResidual>,
    pub max_abs_residual: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FitRow {
    pub label: String,
    pub expiry_years: f64,
    pub tenor_years: f64,
    pub strike: f64,
    pub market_vol: f64,
    pub model_vol: f64,
    pub market_price: f64,
    pub model_price: f64,
    pub relative_error: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CalibrationReport {
    pub params: MhwParams<f64>,
    pub err: f64,
    pub err2: f64,
    pub starts: usize,
    pub failed_starts: usize,
    pub instruments: Vec<FitRow>,
    pub diagnostics: Diagnostics,
}

#[derive(Debug, Clone, Serialize)]
pub struct PriceReport {
    pub label: String,
    pub side: Side,
    pub expiry: Date,
    pub maturity: Date,
    pub strike: f64,
    pub forward_swap_rate: f64,
    /// `B(t0, t_α) · BPV`.
    pub annuity: f64,
    pub params: MhwParams<f64>,
    pub price: f64,
    /// Normal-model vol implied by `price`.
    pub normal_vol: f64,
    pub exercise_boundary: ExerciseBoundary<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationRow {
    pub label: String,
    pub closed_form: f64,
    pub price: f64,
    pub se: f64,
    pub draws: u64,
    pub seed: u64,
    /// `(price − closed_form) / se`.
    pub z: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ValidationReport {
    pub params: MhwParams<f64>,
    pub config: McConfig,
    pub rows: Vec<ValidationRow>,
    pub passed: usize,
}

fn bps(x: f64) -> f64 {
    1e4 * x
}

fn params_line(p: &MhwParams<f64>) -> String {
    format!("a = {:.4}%  sigma = {:.4}%  gamma = {:.4}%", 100.0 * p.a, 100.0 * p.sigma, 100.0 * p.gamma)
}

impl Report {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{}  value date {}  spot {}", self.command, self.value_date, self.spot_date);
        let _ = writeln!(out, "note: {}", self.note);
        if let Some(c) = &self.curves {
            for (name, rows) in [("discount (OIS)", &c.discount), ("pseudo-discount (Euribor 6m)", &c.pseudo_discount)] {
                let _ = writeln!(out, "\n{name}\n{:<12} {:>8} {:>14} {:>10}", "pillar", "t", "DF", "zero %");
                for r in rows {
                    let _ = writeln!(out, "{:<12} {:>8.4} {:>14.10} {:>10.5}", r.date, r.time, r.discount_factor, 100.0 * r.zero_rate);
                }
            }
            let _ = writeln!(out, "\n{} instruments repriced, max |npv| {:.3e}", c.residuals.len(), c.max_abs_residual);
        }
        if let Some(c) = &self.calibration {
            let _ = writeln!(out, "\ncalibration: {}", params_line(&c.params));
            let _ = writeln!(out, "Err = {:.6e}  ({} starts, {} failed)", c.err, c.starts, c.failed_starts);
            let _ = writeln!(
                out,
                "{:<6} {:>10} {:>10} {:>12} {:>12} {:>9}",
                "", "mkt vol", "mdl vol", "mkt (bps)", "mdl (bps)", "err %"
            );
            for r in &c.instruments {
                let _ = writeln!(
                    out,
                    "{:<6} {:>10.2} {:>10.2} {:>12.3} {:>12.3} {:>9.2}",
                    r.label,
                    bps(r.market_vol),
                    bps(r.model_vol),
                    bps(r.market_price),
                    bps(r.model_price),
                    100.0 * r.relative_error
                );
            }
        }
        if let Some(p) = &self.price {
            let _ = writeln!(out, "\n{} {:?} strike {:.5}%  forward {:.5}%", p.label, p.side, 100.0 * p.strike, 100.0 * p.forward_swap_rate);
            let _ = writeln!(out, "{}", params_line(&p.params));
            let _ = writeln!(out, "price {:.6} bps  normal vol {:.4} bps  boundary {:?}", bps(p.price), bps(p.normal_vol), p.exercise_boundary);
        }
        if let Some(v) = &self.validation {
            let _ = writeln!(
                out,
                "\nvalidation at {}; {} draws, seed {}, antithetic {}",
                params_line(&v.params),
                v.config.draws,
                v.config.seed,
                v.config.antithetic
            );
            let _ = writeln!(out, "{:<6} {:>14} {:>14} {:>12} {:>7} {:>5}", "", "closed (bps)", "MC (bps)", "SE (bps)", "z", "");
            for r in &v.rows {
                let _ = writeln!(
                    out,
                    "{:<6} {:>14.6} {:>14.6} {:>12.6} {:>7.2} {:>5}",
                    r.label,
                    bps(r.closed_form),
                    bps(r.price),
                    bps(r.se),
                    r.z,
                    if r.pass { "ok" } else { "FAIL" }
                );
            }
            let _ = writeln!(out, "{} of {} within 3 SE", v.passed, v.rows.len());
        }
        out
    }

    pub fn write_json(&self, path: &Path) -> Result<(), CliError> {
        let mut text = serde_json::to_string_pretty(self).map_err(|e| CliError::Output(e.to_string()))?;
        text.push('\n');
        std::fs::write(path, text).map_err(|e| CliError::Output(format!("{}: {e}", path.display())))
    }
}

/// Plot-ready market vs model prices of the calibration instruments.
pub fn write_fit_csv(path: &Path, rows: &[FitRow]) -> Result<(), CliError> {
    let fail = |e: &dyn std::fmt::Display| CliError::Output(format!("{}: {e}", path.display()));
    let mut w = csv::Writer::from_path(path).map_err(|e| fail(&e))?;
    w.write_record(["swaption", "expiry_years", "tenor_years", "market_price_bps", "model_price_bps"]).map_err(|e| fail(&e))?;
    for r in rows {
        w.write_record([
            r.label.clone(),
            r.expiry_years.to_string(),
            r.tenor_years.to_string(),
            format!("{:.6}", bps(r.market_price)),
            format!("{:.6}", bps(r.model_price)),
        ])
        .map_err(|e| fail(&e))?;
    }
    w.flush().map_err(|e| fail(&e))
}
