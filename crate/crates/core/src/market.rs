//! Normal (Bachelier) swaption formulas, implied-volatility inversion and the
//! swaption volatility quotes.

use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::curves::{act365, bpv, read_csv_rows, swap_rate, Curve, CurveError, PseudoCurve, SwapConventions};
use crate::mhw::{ModelError, Side, SwaptionSpec};
use crate::scalar::{norm_cdf, norm_pdf, Real};
use crate::temporal::{Date, Tenor};

pub const SWAPTION_VOL_FILE: &str = "swaption_vols.csv";

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MarketError {
    #[error("price {price} is below the intrinsic value {intrinsic}")]
    BelowIntrinsic { price: f64, intrinsic: f64 },
    #[error("invalid market input: {0}")]
    Invalid(String),
    #[error("implied volatility did not converge after {iterations} iterations (residual {residual})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Normal volatility quote for an `expiry × tenor` swaption (decimal, so
/// 64.70 bps is `0.006470`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormalQuote<T> {
    pub expiry: Tenor,
    pub tenor: Tenor,
    pub vol: T,
}

#[derive(Deserialize)]
struct VolRow {
    expiry_years: u32,
    tenor_years: u32,
    vol_bps: f64,
}

/// Reads `expiry_years,tenor_years,vol_bps` rows.
pub fn read_normal_quotes<T: Real>(path: impl AsRef<Path>) -> Result<Vec<NormalQuote<T>>, MarketError> {
    let path = path.as_ref();
    let rows = read_csv_rows::<VolRow>(path)?;
    let mut out = Vec::with_capacity(rows.len());
    for (line, r) in rows {
        if !(r.vol_bps.is_finite() && r.vol_bps >= 0.0) || r.expiry_years == 0 || r.tenor_years == 0 {
            return Err(CurveError::QuoteFormat {
                file: path.to_path_buf(),
                line,
                message: format!("bad swaption quote {}y{}y at {} bps", r.expiry_years, r.tenor_years, r.vol_bps),
            }
            .into());
        }
        out.push(NormalQuote {
            expiry: Tenor::years(r.expiry_years),
            tenor: Tenor::years(r.tenor_years),
            vol: T::lit(r.vol_bps * 1e-4),
        });
    }
    Ok(out)
}

/// Bachelier receiver value `A·{(K−S)N(−d) + σ√τ φ(d)}`, `d = (S−K)/(σ√τ)`,
/// where `A = B(t0,t_α)·BPV` is the discounted annuity.
pub fn bachelier_receiver<T: Real>(annuity: T, forward: T, strike: T, vol: T, tau: T) -> T {
    let x = strike - forward;
    let s = vol * tau.max(T::zero()).sqrt();
    if s <= T::zero() {
        return annuity * x.max(T::zero());
    }
    let d = -x / s;
    annuity * (x * norm_cdf(-d) + s * norm_pdf(d))
}

pub fn bachelier_payer<T: Real>(annuity: T, forward: T, strike: T, vol: T, tau: T) -> T {
    let x = forward - strike;
    let s = vol * tau.max(T::zero()).sqrt();
    if s <= T::zero() {
        return annuity * x.max(T::zero());
    }
    let d = x / s;
    annuity * (x * norm_cdf(d) + s * norm_pdf(d))
}

/// ATM value `A·σ·√(τ/2π)`, identical for both sides.
pub fn bachelier_atm<T: Real>(annuity: T, vol: T, tau: T) -> T {
    annuity * vol * (tau.max(T::zero()) / (T::lit(2.0) * T::PI())).sqrt()
}

/// Inputs of the Normal formula for a swaption on the given curves.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NormalInputs<T> {
    /// `B(t0, t_α)·BPV`.
    pub annuity: T,
    pub forward: T,
    pub strike: T,
    /// ACT/365 time from the curve reference date to expiry.
    pub tau: T,
    pub side: Side,
}

impl<T: Real> NormalInputs<T> {
    pub fn from_spec(disc: &Curve<T>, pseudo: &PseudoCurve<T>, spec: &SwaptionSpec<T>) -> Result<Self, MarketError> {
        let expiry = spec.expiry();
        let annuity = disc.discount(expiry)? * bpv(disc, spec.fixed())?;
        let forward = swap_rate(disc, pseudo, spec.fixed(), spec.floating())?;
        Ok(Self {
            annuity,
            forward,
            strike: spec.strike(),
            tau: act365(disc.reference_date(), expiry),
            side: spec.side(),
        })
    }

    pub fn price(&self, vol: T) -> T {
        match self.side {
            Side::Receiver => bachelier_receiver(self.annuity, self.forward, self.strike, vol, self.tau),
            Side::Payer => bachelier_payer(self.annuity, self.forward, self.strike, vol, self.tau),
        }
    }

    pub fn intrinsic(&self) -> T {
        let x = match self.side {
            Side::Receiver => self.strike - self.forward,
            Side::Payer => self.forward - self.strike,
        };
        self.annuity * x.max(T::zero())
    }

    pub fn vega(&self, vol: T) -> T {
        let sq = self.tau.sqrt();
        let s = vol * sq;
        if s <= T::zero() {
            return T::zero();
        }
        self.annuity * sq * norm_pdf((self.forward - self.strike) / s)
    }

    /// Normal volatility reproducing `price`.
    ///
    /// Safeguarded Newton on the time value, started from the ATM inversion
    /// and falling back to bisection whenever a step leaves the bracket.
    pub fn implied_vol(&self, price: T) -> Result<T, MarketError> {
        if !(price.is_finite() && self.annuity > T::zero() && self.tau > T::zero()) {
            return Err(MarketError::Invalid(format!(
                "need finite price, positive annuity and expiry; got price {price}, annuity {}, tau {}",
                self.annuity, self.tau
            )));
        }
        let intrinsic = self.intrinsic();
        let tol = T::lit(1e-15) * self.annuity.max(price);
        if price < intrinsic - tol {
            return Err(MarketError::BelowIntrinsic { price: price.to_f64_lossy(), intrinsic: intrinsic.to_f64_lossy() });
        }
        // Time value lost in rounding: any vol that small is not identifiable.
        if price <= intrinsic + tol {
            return Ok(T::zero());
        }
        let target = price;
        let sq = self.tau.sqrt();
        // Time value peaks at the money, so inverting the ATM formula gives a
        // lower bound and the bracket only has to grow upward.
        let mut guess = (price - intrinsic) / self.annuity * (T::lit(2.0) * T::PI()).sqrt() / sq;
        let mut lo = T::zero();
        let mut hi = guess.max(T::lit(1e-12));
        let mut n = 0;
        while self.price(hi) < target {
            lo = hi;
            hi = hi * T::lit(2.0);
            n += 1;
            if n > 200 {
                return Err(MarketError::NoConvergence { iterations: n, residual: (self.price(hi) - target).to_f64_lossy() });
            }
        }
        guess = guess.max(lo).min(hi);
        const MAX_ITER: usize = 200;
        for _ in 0..MAX_ITER {
            let diff = self.price(guess) - target;
            if diff == T::zero() {
                return Ok(guess);
            }
            if diff > T::zero() {
                hi = guess;
            } else {
                lo = guess;
            }
            let vega = self.vega(guess);
            let newton = guess - diff / vega;
            let next = if vega > T::zero() && newton > lo && newton < hi {
                newton
            } else {
                T::lit(0.5) * (lo + hi)
            };
            if (next - guess).abs() <= T::epsilon() * guess || hi - lo <= T::epsilon() * hi {
                return Ok(next);
            }
            guess = next;
        }
        Err(MarketError::NoConvergence { iterations: MAX_ITER, residual: (self.price(guess) - target).to_f64_lossy() })
    }
}

/// Normal-model value of `spec` at volatility `vol`, for either side.
pub fn normal_price<T: Real>(
    disc: &Curve<T>,
    pseudo: &PseudoCurve<T>,
    spec: &SwaptionSpec<T>,
    vol: T,
) -> Result<T, MarketError> {
    if vol < T::zero() {
        return Err(MarketError::Invalid(format!("negative volatility {vol}")));
    }
    Ok(NormalInputs::from_spec(disc, pseudo, spec)?.price(vol))
}

/// Normal-model receiver value at the quoted volatility.
pub fn normal_receiver<T: Real>(
    disc: &Curve<T>,
    pseudo: &PseudoCurve<T>,
    spec: &SwaptionSpec<T>,
    quote: &NormalQuote<T>,
) -> Result<T, MarketError> {
    normal_price(disc, pseudo, &spec.with_side(Side::Receiver), quote.vol)
}

pub fn implied_normal_vol<T: Real>(
    disc: &Curve<T>,
    pseudo: &PseudoCurve<T>,
    spec: &SwaptionSpec<T>,
    price: T,
) -> Result<T, MarketError> {
    NormalInputs::from_spec(disc, pseudo, spec)?.implied_vol(price)
}

/// ATM receiver on `expiry × tenor` forward from `spot`, strike set to the
/// forward swap rate.
pub fn atm_swaption<T: Real>(
    disc: &Curve<T>,
    pseudo: &PseudoCurve<T>,
    spot: Date,
    expiry: Tenor,
    tenor: Tenor,
    conv: &SwapConventions,
) -> Result<SwaptionSpec<T>, MarketError> {
    let spec = SwaptionSpec::forward_starting(spot, expiry, tenor, T::zero(), Side::Receiver, conv)?;
    let k = swap_rate(disc, pseudo, spec.fixed(), spec.floating())?;
    Ok(spec.with_strike(k))
}
