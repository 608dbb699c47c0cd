//! Fit of `(a, σ, γ)` to swaption prices by least squares in price space,
//! searched in `(a, σ̃ = σ/a, γ)` coordinates.

mod optimizer;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{Curve, PseudoCurve, SwapConventions};
use crate::market::{atm_swaption, normal_receiver, MarketError, NormalQuote};
use crate::mhw::{price_swaption, ModelError, MhwParams, SwaptionSpec};
use crate::temporal::Date;

pub use optimizer::{levenberg_marquardt, nelder_mead, LmOutcome, NmOutcome};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CalibrationError {
    #[error("calibration needs at least one instrument")]
    NoInstruments,
    #[error("market price of {label} must be positive and finite, got {price}")]
    BadMarketPrice { label: String, price: f64 },
    #[error("invalid bounds: {0}")]
    Bounds(String),
    #[error(transparent)]
    Market(#[from] MarketError),
    #[error("pricing {label} failed: {source}")]
    Pricing { label: String, source: ModelError },
    #[error("no convergence after {iterations} iterations; last Err² = {err2:e}; trace: {trace:?}")]
    NoConvergence { iterations: usize, err2: f64, trace: Vec<f64> },
}

/// One calibration target.
#[derive(Debug, Clone)]
pub struct CalibrationInstrument {
    pub label: String,
    pub spec: SwaptionSpec<f64>,
    pub market_price: f64,
}

/// ATM receivers for each quote, priced with the Normal formula at the quoted vol.
pub fn atm_instruments(
    disc: &Curve<f64>,
    pseudo: &PseudoCurve<f64>,
    spot: Date,
    quotes: &[NormalQuote<f64>],
    conv: &SwapConventions,
) -> Result<Vec<CalibrationInstrument>, CalibrationError> {
    quotes
        .iter()
        .map(|q| {
            let spec = atm_swaption(disc, pseudo, spot, q.expiry, q.tenor, conv)?;
            let market_price = normal_receiver(disc, pseudo, &spec, q)?;
            Ok(CalibrationInstrument { label: format!("{}{}", q.expiry, q.tenor), spec, market_price })
        })
        .collect()
}

/// Box constraints in the search coordinates `(a, σ̃, γ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Bounds {
    pub a: (f64, f64),
    pub sigma_over_a: (f64, f64),
    pub gamma: (f64, f64),
}

impl Default for Bounds {
    fn default() -> Self {
        Self { a: (1e-8, 2.0), sigma_over_a: (1e-8, 1.0), gamma: (0.0, 1.0) }
    }
}

impl Bounds {
    pub fn lower(&self) -> [f64; 3] {
        [self.a.0, self.sigma_over_a.0, self.gamma.0]
    }

    pub fn upper(&self) -> [f64; 3] {
        [self.a.1, self.sigma_over_a.1, self.gamma.1]
    }

    pub fn validate(&self) -> Result<(), CalibrationError> {
        let (lo, hi) = (self.lower(), self.upper());
        let ok = lo.iter().zip(&hi).all(|(l, h)| l.is_finite() && h.is_finite() && l < h)
            && lo[0] > 0.0
            && lo[1] > 0.0
            && lo[2] >= 0.0
            && hi[2] <= 1.0;
        if ok {
            Ok(())
        } else {
            Err(CalibrationError::Bounds(format!("{self:?}")))
        }
    }

    pub fn contains(&self, x: &[f64; 3]) -> bool {
        let (lo, hi) = (self.lower(), self.upper());
        (0..3).all(|i| x[i] >= lo[i] && x[i] <= hi[i])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct OptimizerSettings {
    pub max_simplex_iterations: usize,
    /// Simplex stops when the spread of Err² over its vertices falls below
    /// `simplex_f_tol · (1 + best Err²/scale)`.
    pub simplex_f_tol: f64,
    /// Initial simplex edge as a fraction of each bound width.
    pub simplex_step: f64,
    pub max_lm_iterations: usize,
    /// Relative step size in normalized coordinates at which the polish stops.
    pub x_tol: f64,
    /// Relative Err² decrease below which the polish stops.
    pub f_tol: f64,
    /// Finite-difference step in normalized coordinates.
    pub fd_step: f64,
}

impl Default for OptimizerSettings {
    fn default() -> Self {
        Self {
            max_simplex_iterations: 2000,
            simplex_f_tol: 1e-14,
            simplex_step: 0.1,
            max_lm_iterations: 200,
            x_tol: 1e-12,
            f_tol: 1e-14,
            fd_step: 1e-6,
        }
    }
}

pub struct CalibrationProblem {
    pub disc: Curve<f64>,
    pub pseudo: PseudoCurve<f64>,
    pub instruments: Vec<CalibrationInstrument>,
    pub bounds: Bounds,
    pub settings: OptimizerSettings,
}

/// Model and market price of one instrument at the fitted parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InstrumentFit {
    pub label: String,
    pub model: f64,
    pub market: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub start: MhwParams<f64>,
    pub simplex_iterations: usize,
    pub lm_iterations: usize,
    pub objective_evaluations: usize,
    /// Err² after the simplex stage and after every accepted polish step.
    pub trace: Vec<f64>,
    /// `2 Jᵀ r` in `(a, σ̃, γ)` coordinates at the fitted point.
    pub gradient: [f64; 3],
    /// Gradient components with active bounds removed.
    pub projected_gradient: [f64; 3],
    pub active_bounds: [bool; 3],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CalibrationResult {
    pub params: MhwParams<f64>,
    pub err2: f64,
    pub instruments: Vec<InstrumentFit>,
    pub diagnostics: Diagnostics,
}

impl CalibrationResult {
    /// `Err = √Err²`, in price units.
    pub fn err(&self) -> f64 {
        self.err2.sqrt()
    }
}

/// `(a, σ̃, γ) → (a, σ, γ)`.
pub fn params_from_search(x: &[f64; 3]) -> MhwParams<f64> {
    MhwParams { a: x[0], sigma: x[0] * x[1], gamma: x[2] }
}

pub fn search_from_params(p: &MhwParams<f64>) -> [f64; 3] {
    [p.a, p.sigma / p.a, p.gamma]
}

impl CalibrationProblem {
    pub fn new(
        disc: Curve<f64>,
        pseudo: PseudoCurve<f64>,
        instruments: Vec<CalibrationInstrument>,
    ) -> Result<Self, CalibrationError> {
        let prob = Self { disc, pseudo, instruments, bounds: Bounds::default(), settings: OptimizerSettings::default() };
        prob.validate()?;
        Ok(prob)
    }

    pub fn validate(&self) -> Result<(), CalibrationError> {
        if self.instruments.is_empty() {
            return Err(CalibrationError::NoInstruments);
        }
        for inst in &self.instruments {
            if !(inst.market_price.is_finite() && inst.market_price > 0.0) {
                return Err(CalibrationError::BadMarketPrice { label: inst.label.clone(), price: inst.market_price });
            }
        }
        self.bounds.validate()
    }

    /// Model prices in instrument order.
    pub fn model_prices(&self, p: &MhwParams<f64>) -> Result<Vec<f64>, CalibrationError> {
        self.instruments
            .par_iter()
            .map(|inst| {
                price_swaption(p, &self.disc, &self.pseudo, &inst.spec)
                    .map_err(|source| CalibrationError::Pricing { label: inst.label.clone(), source })
            })
            .collect()
    }

    /// Model minus market, in instrument order.
    pub fn residuals(&self, p: &MhwParams<f64>) -> Result<Vec<f64>, CalibrationError> {
        let model = self.model_prices(p)?;
        Ok(model.iter().zip(&self.instruments).map(|(m, i)| m - i.market_price).collect())
    }

    /// Instrument prices generated by `p`, e.g. for a synthetic market.
    pub fn with_market_from(mut self, p: &MhwParams<f64>) -> Result<Self, CalibrationError> {
        let prices = self.model_prices(p)?;
        for (inst, px) in self.instruments.iter_mut().zip(prices) {
            inst.market_price = px;
        }
        self.validate()?;
        Ok(self)
    }
}

/// `Err²(p) = Σ (model − market)²`.
pub fn objective(p: &MhwParams<f64>, prob: &CalibrationProblem) -> Result<f64, CalibrationError> {
    Ok(prob.residuals(p)?.iter().map(|r| r * r).sum())
}

/// Err² as a function of the search coordinates `(a, σ̃, γ)`.
pub fn objective_search(x: &[f64; 3], prob: &CalibrationProblem) -> Result<f64, CalibrationError> {
    objective(&params_from_search(x), prob)
}

/// Gradient of Err² in `(a, σ̃, γ)` at `p`, estimated as `2 Jᵀ r` with the
/// same finite-difference Jacobian the polish stage uses.
pub fn objective_gradient(prob: &CalibrationProblem, p: &MhwParams<f64>) -> Result<[f64; 3], CalibrationError> {
    prob.validate()?;
    let (lo, hi) = (prob.bounds.lower(), prob.bounds.upper());
    let width = [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]];
    let x0 = search_from_params(p);
    let u0: [f64; 3] = std::array::from_fn(|i| ((x0[i] - lo[i]) / width[i]).clamp(0.0, 1.0));
    let mut failure = None;
    let mut r = |u: &[f64; 3]| {
        let x: [f64; 3] = std::array::from_fn(|i| lo[i] + width[i] * u[i].clamp(0.0, 1.0));
        prob.residuals(&params_from_search(&x)).map_err(|e| failure = Some(e)).ok()
    };
    let s = prob.settings;
    match levenberg_marquardt(&mut r, u0, 0, s.x_tol, s.f_tol, s.fd_step) {
        Some(out) => Ok(std::array::from_fn(|i| out.gradient[i] / width[i])),
        None => Err(failure.unwrap_or(CalibrationError::NoInstruments)),
    }
}

/// Local fit from `start`: bounded Nelder-Mead on `(a, σ̃, γ)` rescaled to
/// the unit cube, then a bounded Levenberg-Marquardt polish on the residuals.
pub fn calibrate(prob: &CalibrationProblem, start: &MhwParams<f64>) -> Result<CalibrationResult, CalibrationError> {
    prob.validate()?;
    let s = prob.settings;
    let (lo, hi) = (prob.bounds.lower(), prob.bounds.upper());
    let width = [hi[0] - lo[0], hi[1] - lo[1], hi[2] - lo[2]];
    let to_x = |u: &[f64; 3]| -> [f64; 3] { std::array::from_fn(|i| lo[i] + width[i] * u[i].clamp(0.0, 1.0)) };
    let x0 = search_from_params(start);
    let u0: [f64; 3] = std::array::from_fn(|i| ((x0[i] - lo[i]) / width[i]).clamp(0.0, 1.0));

    let mut evaluations = 0usize;
    let mut first_error = None;
    let nm = {
        let mut f = |u: &[f64; 3]| {
            evaluations += 1;
            match objective_search(&to_x(u), prob) {
                Ok(v) => v,
                Err(e) => {
                    first_error.get_or_insert(e);
                    f64::INFINITY
                }
            }
        };
        let scale = prob.instruments.iter().map(|i| i.market_price * i.market_price).sum::<f64>();
        nelder_mead(&mut f, u0, s.simplex_step, s.max_simplex_iterations, s.simplex_f_tol * scale)
    };
    if !nm.value.is_finite() {
        return Err(first_error.unwrap_or(CalibrationError::NoConvergence {
            iterations: nm.iterations,
            err2: nm.value,
            trace: vec![],
        }));
    }

    let mut residual_error = None;
    let lm = {
        let mut r = |u: &[f64; 3]| -> Option<Vec<f64>> {
            evaluations += 1;
            match prob.residuals(&params_from_search(&to_x(u))) {
                Ok(v) => Some(v),
                Err(e) => {
                    residual_error.get_or_insert(e);
                    None
                }
            }
        };
        levenberg_marquardt(&mut r, nm.point, s.max_lm_iterations, s.x_tol, s.f_tol, s.fd_step)
    };
    let lm = match lm {
        Some(lm) => lm,
        None => {
            return Err(residual_error.unwrap_or(CalibrationError::NoConvergence {
                iterations: nm.iterations,
                err2: nm.value,
                trace: vec![nm.value],
            }))
        }
    };

    let mut trace = vec![nm.value];
    trace.extend(&lm.trace);
    if !lm.converged {
        return Err(CalibrationError::NoConvergence {
            iterations: nm.iterations + lm.iterations,
            err2: lm.value,
            trace,
        });
    }

    let x = to_x(&lm.point);
    let params = params_from_search(&x);
    let model = prob.model_prices(&params)?;
    let instruments: Vec<InstrumentFit> = prob
        .instruments
        .iter()
        .zip(&model)
        .map(|(i, &m)| InstrumentFit { label: i.label.clone(), model: m, market: i.market_price })
        .collect();
    let err2 = instruments.iter().map(|f| (f.model - f.market).powi(2)).sum();
    let gradient: [f64; 3] = std::array::from_fn(|i| lm.gradient[i] / width[i]);
    let active_bounds: [bool; 3] = std::array::from_fn(|i| {
        (lm.point[i] <= 0.0 && gradient[i] > 0.0) || (lm.point[i] >= 1.0 && gradient[i] < 0.0)
    });
    let projected_gradient = std::array::from_fn(|i| if active_bounds[i] { 0.0 } else { gradient[i] });
    Ok(CalibrationResult {
        params,
        err2,
        instruments,
        diagnostics: Diagnostics {
            start: *start,
            simplex_iterations: nm.iterations,
            lm_iterations: lm.iterations,
            objective_evaluations: evaluations,
            trace,
            gradient,
            projected_gradient,
            active_bounds,
        },
    })
}

/// Result of [`calibrate_multi_start`]: the best fit and every local fit.
#[derive(Debug, Clone)]
pub struct MultiStartResult {
    pub best: CalibrationResult,
    pub runs: Vec<Result<CalibrationResult, CalibrationError>>,
}

/// Runs [`calibrate`] from every start and keeps the lowest Err².
pub fn calibrate_multi_start(
    prob: &CalibrationProblem,
    starts: &[MhwParams<f64>],
) -> Result<MultiStartResult, CalibrationError> {
    let runs: Vec<_> = starts.iter().map(|s| calibrate(prob, s)).collect();
    let best = runs
        .iter()
        .filter_map(|r| r.as_ref().ok())
        .min_by(|a, b| a.err2.total_cmp(&b.err2))
        .cloned();
    match best {
        Some(best) => Ok(MultiStartResult { best, runs }),
        None => Err(runs.into_iter().find_map(Result::err).unwrap_or(CalibrationError::NoInstruments)),
    }
}

/// `n` admissible starting points drawn uniformly in the search box (γ over
/// its full range, `a` and `σ̃` over `[lower, min(upper, cap)]`).
pub fn random_starts(bounds: &Bounds, n: usize, seed: u64) -> Vec<MhwParams<f64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (lo, hi) = (bounds.lower(), bounds.upper());
    // Keep starts inside the region where swaption prices are of market size.
    let caps = [0.5, 0.2, 1.0];
    (0..n)
        .map(|_| {
            let x: [f64; 3] = std::array::from_fn(|i| {
                let top = hi[i].min(caps[i]).max(lo[i]);
                lo[i] + (top - lo[i]) * rng.random::<f64>()
            });
            params_from_search(&x)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mhw::Side;
    use crate::temporal::{Date, Tenor};
    use crate::curves::SwapConventions;

    fn toy_problem() -> CalibrationProblem {
        let t0 = Date::from_ymd_opt(2015, 9, 14).unwrap();
        let disc = Curve::flat(t0, 0.005);
        let pseudo = PseudoCurve::from_discount(Curve::flat(t0, 0.008), Tenor::months(6));
        let instruments = (1..=4)
            .map(|e| {
                let spec = SwaptionSpec::forward_starting(
                    t0,
                    Tenor::years(e),
                    Tenor::years(5 - e),
                    0.009,
                    Side::Receiver,
                    &SwapConventions::default(),
                )
                .unwrap();
                CalibrationInstrument { label: format!("{e}y{}y", 5 - e), spec, market_price: 1.0 }
            })
            .collect();
        CalibrationProblem::new(disc, pseudo, instruments).unwrap()
    }

    #[test]
    fn objective_is_zero_at_generating_params() {
        let p = MhwParams::new(0.1, 0.01, 0.2).unwrap();
        let prob = toy_problem().with_market_from(&p).unwrap();
        assert_eq!(objective(&p, &prob).unwrap(), 0.0);
    }

    #[test]
    fn single_residual_squares() {
        let p = MhwParams::new(0.1, 0.01, 0.2).unwrap();
        let mut prob = toy_problem().with_market_from(&p).unwrap();
        prob.instruments.truncate(1);
        prob.instruments[0].market_price -= 1e-4;
        assert!((objective(&p, &prob).unwrap() - 1e-8).abs() < 1e-20);
    }

    #[test]
    fn change_of_variables_is_exact() {
        let prob = toy_problem();
        let x = [0.13, 0.0127 / 0.13, 0.05];
        let p = params_from_search(&x);
        assert_eq!(objective_search(&x, &prob).unwrap(), objective(&p, &prob).unwrap());
    }

    #[test]
    fn rejects_empty_and_nonpositive_markets() {
        let mut prob = toy_problem();
        prob.instruments[2].market_price = 0.0;
        assert!(matches!(prob.validate(), Err(CalibrationError::BadMarketPrice { .. })));
        prob.instruments.clear();
        assert!(matches!(prob.validate(), Err(CalibrationError::NoInstruments)));
    }

    #[test]
    fn recovers_toy_parameters() {
        let truth = MhwParams::new(0.08, 0.009, 0.3).unwrap();
        let prob = toy_problem().with_market_from(&truth).unwrap();
        let fit = calibrate(&prob, &MhwParams::new(0.2, 0.02, 0.5).unwrap()).unwrap();
        assert!((fit.params.a - truth.a).abs() < 1e-5, "{:?}", fit.params);
        assert!((fit.params.sigma - truth.sigma).abs() < 1e-6);
        assert!((fit.params.gamma - truth.gamma).abs() < 1e-5);
    }

    #[test]
    fn random_starts_are_reproducible_and_admissible() {
        let b = Bounds::default();
        let s1 = random_starts(&b, 10, 7);
        assert_eq!(s1, random_starts(&b, 10, 7));
        for p in &s1 {
            assert!(b.contains(&search_from_params(p)));
        }
    }
}
