use mhw_core::calib::{calibrate_multi_start, random_starts, CalibrationProblem, CalibrationResult};
use mhw_core::curves::{ois_residuals, pseudo_residuals, Curve};
use mhw_core::market::{atm_swaption, implied_normal_vol, NormalInputs, NormalQuote};
use mhw_core::mhw::{price_swaption, price_swaption_detailed, MhwParams, Side};
use mhw_core::oracle::{mc_price_exact, McConfig};
use mhw_core::snapshot::MarketSnapshot;
use mhw_core::temporal::Tenor;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::{
    CalibrationReport, CurvesReport, FitRow, PillarRow, PriceReport, Report, ValidationReport, ValidationRow, VALUE_DATE_NOTE,
};

pub struct Session {
    pub cfg: RunConfig,
    pub snap: MarketSnapshot,
}

impl Session {
    pub fn open(cfg: RunConfig) -> Result<Self, CliError> {
        cfg.validate()?;
        let snap = MarketSnapshot::load(&cfg.data_dir, cfg.value_date, cfg.conventions)?;
        Ok(Self { cfg, snap })
    }

    fn report(&self, command: &str) -> Report {
        Report {
            command: command.to_string(),
            value_date: self.snap.value_date,
            spot_date: self.snap.spot,
            note: VALUE_DATE_NOTE.to_string(),
            curves: None,
            calibration: None,
            price: None,
            validation: None,
        }
    }

    fn vols(&self) -> Result<Vec<NormalQuote<f64>>, CliError> {
        Ok(MarketSnapshot::read_vols(&self.cfg.data_dir)?)
    }

    fn problem(&self) -> Result<CalibrationProblem, CliError> {
        let mut prob = self.snap.calibration_problem(&self.vols()?)?;
        prob.bounds = self.cfg.calibration.bounds;
        prob.settings = self.cfg.calibration.settings;
        Ok(prob)
    }
}

fn pillars(curve: &Curve<f64>) -> Result<Vec<PillarRow>, CliError> {
    curve
        .pillars()
        .iter()
        .zip(curve.discount_factors())
        .map(|(&date, &df)| {
            let time = curve.time(date)?;
            Ok(PillarRow { date, time, discount_factor: df, zero_rate: 0.0 - df.ln() / time })
        })
        .collect()
}

pub fn bootstrap(s: &Session) -> Result<Report, CliError> {
    let snap = &s.snap;
    let mut residuals = ois_residuals(&snap.disc, &snap.quotes, snap.value_date, &snap.conventions)?;
    residuals.extend(pseudo_residuals(&snap.disc, &snap.pseudo, &snap.quotes, snap.value_date, &snap.conventions)?);
    let max_abs_residual = residuals.iter().map(|r| r.npv.abs()).fold(0.0, f64::max);
    let mut report = s.report("bootstrap");
    report.curves = Some(CurvesReport {
        discount: pillars(&snap.disc)?,
        pseudo_discount: pillars(snap.pseudo.as_curve())?,
        residuals,
        max_abs_residual,
    });
    Ok(report)
}

fn years(t: Tenor) -> f64 {
    t.in_months().map_or(t.approx_days() as f64 / 365.0, |m| m as f64 / 12.0)
}

/// Multi-start fit plus the per-instrument table.
pub fn calibration(s: &Session) -> Result<(CalibrationResult, CalibrationReport), CliError> {
    let prob = s.problem()?;
    let c = &s.cfg.calibration;
    let mut starts = c.starts.clone();
    starts.extend(random_starts(&prob.bounds, c.random_starts, c.seed));
    let out = calibrate_multi_start(&prob, &starts)?;
    let fit = out.best;
    let quotes = s.vols()?;
    let instruments = prob
        .instruments
        .iter()
        .zip(&fit.instruments)
        .zip(&quotes)
        .map(|((inst, f), q)| {
            let model_vol = implied_normal_vol(&prob.disc, &prob.pseudo, &inst.spec, f.model)?;
            Ok(FitRow {
                label: inst.label.clone(),
                expiry_years: years(q.expiry),
                tenor_years: years(q.tenor),
                strike: inst.spec.strike(),
                market_vol: q.vol,
                model_vol,
                market_price: f.market,
                model_price: f.model,
                relative_error: (f.model - f.market) / f.market,
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let report = CalibrationReport {
        params: fit.params,
        err: fit.err(),
        err2: fit.err2,
        starts: starts.len(),
        failed_starts: out.runs.iter().filter(|r| r.is_err()).count(),
        instruments,
        diagnostics: fit.diagnostics.clone(),
    };
    Ok((fit, report))
}

pub fn calibrate(s: &Session) -> Result<Report, CliError> {
    let (_, cal) = calibration(s)?;
    let mut report = s.report("calibrate");
    report.calibration = Some(cal);
    Ok(report)
}

/// Explicit parameters, or a fresh calibration when none are given.
fn resolve_params(s: &Session, given: [Option<f64>; 3], report: &mut Report) -> Result<MhwParams<f64>, CliError> {
    match given {
        [Some(a), Some(sigma), Some(gamma)] => Ok(MhwParams::new(a, sigma, gamma)?),
        [None, None, None] => {
            let (fit, cal) = calibration(s)?;
            report.calibration = Some(cal);
            Ok(fit.params)
        }
        _ => Err(CliError::Config("give all of --a, --sigma and --gamma, or none to calibrate first".into())),
    }
}

pub struct PriceArgs {
    pub expiry: Tenor,
    pub tenor: Tenor,
    pub strike: Option<f64>,
    pub side: Side,
    pub params: [Option<f64>; 3],
}

pub fn price(s: &Session, args: &PriceArgs) -> Result<Report, CliError> {
    let snap = &s.snap;
    let mut report = s.report("price");
    let params = resolve_params(s, args.params, &mut report)?;
    let atm = atm_swaption(&snap.disc, &snap.pseudo, snap.spot, args.expiry, args.tenor, &snap.conventions.swap)?;
    let spec = atm.with_strike(args.strike.unwrap_or(atm.strike())).with_side(args.side);
    let detailed = price_swaption_detailed(&params, &snap.disc, &snap.pseudo, &spec)?;
    let inputs = NormalInputs::from_spec(&snap.disc, &snap.pseudo, &spec)?;
    report.price = Some(PriceReport {
        label: format!("{}{}", args.expiry, args.tenor),
        side: args.side,
        expiry: spec.expiry(),
        maturity: spec.fixed().end(),
        strike: spec.strike(),
        forward_swap_rate: inputs.forward,
        annuity: inputs.annuity,
        params,
        price: detailed.price,
        normal_vol: inputs.implied_vol(detailed.price)?,
        exercise_boundary: detailed.boundary,
    });
    Ok(report)
}

pub fn validate(s: &Session, given: [Option<f64>; 3]) -> Result<Report, CliError> {
    let snap = &s.snap;
    let mut report = s.report("validate");
    let params = resolve_params(s, given, &mut report)?;
    let cfg: McConfig = s.cfg.oracle;
    let prob = s.problem()?;
    let rows = prob
        .instruments
        .iter()
        .map(|inst| {
            let closed_form = price_swaption(&params, &snap.disc, &snap.pseudo, &inst.spec)?;
            let mc = mc_price_exact(&params, &snap.disc, &snap.pseudo, &inst.spec, &cfg)?;
            let z = if mc.std_error > 0.0 { (mc.price - closed_form) / mc.std_error } else { 0.0 };
            Ok(ValidationRow {
                label: inst.label.clone(),
                closed_form,
                price: mc.price,
                se: mc.std_error,
                draws: mc.draws,
                seed: mc.seed,
                z,
                pass: mc.contains(closed_form, 3.0),
            })
        })
        .collect::<Result<Vec<_>, CliError>>()?;
    let passed = rows.iter().filter(|r| r.pass).count();
    report.validation = Some(ValidationReport { params, config: cfg, rows, passed });
    Ok(report)
}
