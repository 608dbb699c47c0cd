//! Monte Carlo validators for the closed-form pricer.
//!
//! Both samplers rebuild the expiry curves from the time-`t0` curves on their
//! own and evaluate the payoff as `K·BPV(t_α) + B(t_α,t_ω) + Σ B(t_α,t'_ι)(1 − β_ι(t_α)) − 1`,
//! without going through the pricer's exponential-sum representation.

mod exact;
mod path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{act365, CurveError};
use crate::mhw::{MhwParams, ModelError};

pub use exact::{lognormal_factor_means, mc_price_exact};
pub use path::{martingale_check, mc_price_path, MartingaleReport, MartingaleStat};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OracleError {
    #[error("invalid Monte Carlo configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct McConfig {
    /// Number of standard normal draws; with antithetics each draw is paired
    /// with its mirror and the pair average is one sample.
    pub draws: u64,
    pub seed: u64,
    pub antithetic: bool,
    /// Time steps of the path simulator.
    pub steps: usize,
    /// Draws per independent random stream; part of the reproducibility contract.
    pub batch_size: u64,
}

impl Default for McConfig {
    fn default() -> Self {
        Self { draws: 1_000_000, seed: 20150910, antithetic: true, steps: 50, batch_size: 1 << 16 }
    }
}

impl McConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.draws == 0 {
            return Err(OracleError::Config("draws must be at least 1".into()));
        }
        if self.steps == 0 {
            return Err(OracleError::Config("steps must be at least 1".into()));
        }
        if self.batch_size == 0 {
            return Err(OracleError::Config("batch_size must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub price: f64,
    /// Sample standard deviation over `√samples`; infinite for one sample.
    pub std_error: f64,
    pub draws: u64,
    pub seed: u64,
}

impl McEstimate {
    /// Whether `value` lies within `k` standard errors of the estimate.
    pub fn contains(&self, value: f64, k: f64) -> bool {
        (value - self.price).abs() <= k * self.std_error
    }
}

/// Running first and second moments of a vector of observables.
#[derive(Debug, Clone)]
pub(crate) struct Moments {
    pub n: u64,
    pub sum: Vec<f64>,
    pub sum_sq: Vec<f64>,
}

impl Moments {
    pub fn new(dim: usize) -> Self {
        Self { n: 0, sum: vec![0.0; dim], sum_sq: vec![0.0; dim] }
    }

    pub fn push(&mut self, x: &[f64]) {
        self.n += 1;
        for ((s, q), v) in self.sum.iter_mut().zip(self.sum_sq.iter_mut()).zip(x) {
            *s += v;
            *q += v * v;
        }
    }

    pub fn merge(mut self, other: &Self) -> Self {
        self.n += other.n;
        for i in 0..self.sum.len() {
            self.sum[i] += other.sum[i];
            self.sum_sq[i] += other.sum_sq[i];
        }
        self
    }

    /// Mean and standard error of component `i`. A single sample carries no
    /// variance information, so its standard error is infinite.
    pub fn mean_se(&self, i: usize) -> (f64, f64) {
        let n = self.n as f64;
        let mean = self.sum[i] / n;
        if self.n < 2 {
            return (mean, f64::INFINITY);
        }
        let var = ((self.sum_sq[i] - n * mean * mean) / (n - 1.0)).max(0.0);
        (mean, (var / n).sqrt())
    }
}

/// Runs `body` over `draws` split in batches, each with its own ChaCha
/// stream, and merges the batch moments in batch order so the result does
/// not depend on thread scheduling.
pub(crate) fn run_batches<F>(cfg: &McConfig, dim: usize, body: F) -> Moments
where
    F: Fn(&mut ChaCha8Rng, u64, &mut Moments) + Sync,
{
    let n_batches = cfg.draws.div_ceil(cfg.batch_size);
    let parts: Vec<Moments> = (0..n_batches)
        .into_par_iter()
        .map(|b| {
            let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
            rng.set_stream(b);
            let count = cfg.batch_size.min(cfg.draws - b * cfg.batch_size);
            let mut m = Moments::new(dim);
            body(&mut rng, count, &mut m);
            m
        })
        .collect();
    parts.iter().fold(Moments::new(dim), |acc, m| acc.merge(m))
}

/// Expiry-time quantities shared by both samplers, computed directly from the
/// curves and the volatility function.
#[derive(Debug, Clone)]
pub(crate) struct ExpirySetup {
    /// `B(t0, t_α)`.
    pub expiry_discount: f64,
    pub zeta: f64,
    /// Fixed leg: year fraction, forward discount `B(t0; t_α, t_j)`, `(1−γ)v(t_α, t_j)`.
    pub fixed: Vec<(f64, f64, f64)>,
    /// Floating dates `t'_0 .. t'_n`: forward discount and `(1−γ)v`.
    pub float_nodes: Vec<(f64, f64)>,
    /// Raw `v(t_α, t'_ι)` at the floating dates.
    pub float_v: Vec<f64>,
    /// `β_ι(t0)` per floating period.
    pub spreads: Vec<f64>,
    pub strike: f64,
    pub gamma: f64,
    pub a: f64,
    pub tau: f64,
}

pub(crate) fn hw_vol(p: &MhwParams<f64>, tau: f64) -> f64 {
    if p.a == 0.0 {
        p.sigma * tau
    } else {
        p.sigma * (1.0 - (-p.a * tau).exp()) / p.a
    }
}

/// `∫_s^e e^{−2a(t_α−u)} du` for `s <= e <= t_α` (times measured to expiry).
pub(crate) fn integrated_variance(a: f64, to_expiry_start: f64, to_expiry_end: f64) -> f64 {
    if a == 0.0 {
        to_expiry_start - to_expiry_end
    } else {
        ((-2.0 * a * to_expiry_end).exp() - (-2.0 * a * to_expiry_start).exp()) / (2.0 * a)
    }
}

impl ExpirySetup {
    pub fn new(
        p: &MhwParams<f64>,
        disc: &crate::curves::Curve<f64>,
        pseudo: &crate::curves::PseudoCurve<f64>,
        spec: &crate::mhw::SwaptionSpec<f64>,
    ) -> Result<Self, OracleError> {
        p.validate()?;
        let ta = spec.expiry();
        let tau = disc.time(ta)?;
        let zeta = integrated_variance(p.a, tau, 0.0).sqrt();
        let b_ta = disc.discount(ta)?;
        let one_minus_gamma = 1.0 - p.gamma;
        let fwd = |d| -> Result<f64, OracleError> { Ok(disc.discount(d)? / b_ta) };
        let fixed = spec
            .fixed()
            .periods()
            .map(|(_, e, yf)| Ok((yf, fwd(e)?, one_minus_gamma * hw_vol(p, act365(ta, e)))))
            .collect::<Result<Vec<_>, OracleError>>()?;
        let dates: Vec<_> = spec.floating().all_dates().collect();
        let float_v: Vec<f64> = dates.iter().map(|&d| hw_vol(p, act365(ta, d))).collect();
        let float_nodes = dates
            .iter()
            .zip(&float_v)
            .map(|(&d, &v)| Ok((fwd(d)?, one_minus_gamma * v)))
            .collect::<Result<Vec<_>, OracleError>>()?;
        let spreads = dates
            .windows(2)
            .map(|w| {
                let b = disc.discount(w[1])? / disc.discount(w[0])?;
                let bh = pseudo.discount(w[1])? / pseudo.discount(w[0])?;
                Ok(b / bh)
            })
            .collect::<Result<Vec<_>, OracleError>>()?;
        Ok(Self {
            expiry_discount: b_ta,
            zeta,
            fixed,
            float_nodes,
            float_v,
            spreads,
            strike: spec.strike(),
            gamma: p.gamma,
            a: p.a,
            tau,
        })
    }

    /// Receiver payoff at expiry from expiry curves: `bf[j]` forward discounts
    /// to the fixed dates, `bl[ι]` to the floating dates, `betas[ι]` spreads.
    pub fn receiver_payoff(&self, bf: &[f64], bl: &[f64], betas: &[f64]) -> f64 {
        let annuity: f64 = self.fixed.iter().zip(bf).map(|(f, b)| f.0 * b).sum();
        let n = betas.len();
        let basis: f64 = (0..n).map(|i| bl[i] * (1.0 - betas[i])).sum();
        self.strike * annuity + bl[n] + basis - 1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::{Curve, PseudoCurve, SwapConventions};
    use crate::mhw::{price_swaption, Side, SwaptionSpec};
    use crate::temporal::{Date, Tenor};

    fn setup() -> (Curve<f64>, PseudoCurve<f64>, SwaptionSpec<f64>) {
        let t0 = Date::from_ymd_opt(2015, 9, 14).unwrap();
        let disc = Curve::flat(t0, 0.004);
        let pseudo = PseudoCurve::from_discount(Curve::flat(t0, 0.007), Tenor::months(6));
        let spec = SwaptionSpec::forward_starting(t0, Tenor::years(2), Tenor::years(3), 0.008, Side::Receiver, &SwapConventions::default())
            .unwrap();
        (disc, pseudo, spec)
    }

    #[test]
    fn zero_vol_has_zero_variance() {
        let (disc, pseudo, spec) = setup();
        let p = MhwParams::new(0.1, 0.0, 0.3).unwrap();
        let cfg = McConfig { draws: 1000, ..McConfig::default() };
        for side in [Side::Receiver, Side::Payer] {
            let s = spec.with_side(side);
            let mc = mc_price_exact(&p, &disc, &pseudo, &s, &cfg).unwrap();
            let cf = price_swaption(&p, &disc, &pseudo, &s).unwrap();
            assert_eq!(mc.std_error, 0.0);
            assert!((mc.price - cf).abs() < 1e-14, "{side:?} {} {cf}", mc.price);
        }
    }

    #[test]
    fn fixed_seed_is_reproducible() {
        let (disc, pseudo, spec) = setup();
        let p = MhwParams::new(0.1, 0.01, 0.3).unwrap();
        let cfg = McConfig { draws: 10_000, batch_size: 777, ..McConfig::default() };
        let a = mc_price_exact(&p, &disc, &pseudo, &spec, &cfg).unwrap();
        let b = mc_price_exact(&p, &disc, &pseudo, &spec, &cfg).unwrap();
        assert_eq!(a, b);
        let c = mc_price_exact(&p, &disc, &pseudo, &spec, &McConfig { seed: 1, ..cfg }).unwrap();
        assert_ne!(a.price, c.price);
    }

    #[test]
    fn single_step_path_matches_exact_sampler() {
        let (disc, pseudo, spec) = setup();
        let p = MhwParams::new(0.1, 0.01, 0.3).unwrap();
        let cfg = McConfig { draws: 5_000, steps: 1, ..McConfig::default() };
        let a = mc_price_exact(&p, &disc, &pseudo, &spec, &cfg).unwrap();
        let b = mc_price_path(&p, &disc, &pseudo, &spec, &cfg).unwrap();
        assert!((a.price - b.price).abs() < 1e-14 * a.price);
    }

    #[test]
    fn lognormal_factors_have_unit_mean() {
        let cfg = McConfig { draws: 200_000, antithetic: false, ..McConfig::default() };
        for (mean, se) in lognormal_factor_means(0.9, &[0.0, 0.01, 0.05, -0.03, 0.2], &cfg).unwrap() {
            assert!((mean - 1.0).abs() <= 3.0 * se + 1e-15, "{mean} {se}");
        }
    }

    #[test]
    fn one_draw_and_bad_config() {
        let (disc, pseudo, spec) = setup();
        let p = MhwParams::new(0.1, 0.01, 0.3).unwrap();
        let one = mc_price_exact(&p, &disc, &pseudo, &spec, &McConfig { draws: 1, ..McConfig::default() }).unwrap();
        assert_eq!(one.std_error, f64::INFINITY);
        assert!(one.contains(1e3, 3.0));
        assert!(mc_price_exact(&p, &disc, &pseudo, &spec, &McConfig { draws: 0, ..McConfig::default() }).is_err());
        assert!(mc_price_path(&p, &disc, &pseudo, &spec, &McConfig { steps: 0, ..McConfig::default() }).is_err());
    }

    #[test]
    fn integrated_variance_adds_up() {
        let whole = integrated_variance(0.13, 3.0, 0.0);
        let split = integrated_variance(0.13, 3.0, 1.2) + integrated_variance(0.13, 1.2, 0.0);
        assert!((whole - split).abs() < 1e-15);
        assert!((integrated_variance(0.0, 3.0, 1.0) - 2.0).abs() < 1e-15);
    }
}
