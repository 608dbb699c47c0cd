//! The exercise-boundary function `f(ξ)`: the receiver payoff at expiry as
//! a finite sum of exponentials of the Gaussian state `ξ ~ N(0, ζ²)`.

use super::params::{extended_vols, zeta, MhwParams};
use super::spec::SwaptionSpec;
use super::ModelError;
use crate::curves::{spread_between, Curve, PseudoCurve};
use crate::roots::brent;
use crate::scalar::Real;

/// Largest exponent magnitude evaluated before clamping.
pub const EXPONENT_CLAMP: f64 = 700.0;

/// One addend `weight · exp(−vol ξ − vol² ζ² / 2)` with `weight >= 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpTerm<T> {
    pub weight: T,
    pub vol: T,
}

impl<T: Real> ExpTerm<T> {
    #[inline]
    fn exponent(&self, xi: T, half_zeta2: T) -> T {
        -self.vol * xi - self.vol * self.vol * half_zeta2
    }
}

/// Coefficients of `f`, grouped as
/// (a) fixed flows `c_j B_{αj}` with `ς_{αj}`,
/// (b) floating notionals `B_{α'ι}` with `ς_{α'ι}` (interior dates),
/// (c) spread-weighted discounts `β_ι B_{α'ι}` with `ν_{α'ι}`, entering with a minus sign.
#[derive(Debug, Clone, PartialEq)]
pub struct PayoffTerms<T> {
    pub fixed: Vec<ExpTerm<T>>,
    pub floating: Vec<ExpTerm<T>>,
    pub spread: Vec<ExpTerm<T>>,
    pub zeta: T,
}

impl<T: Real> PayoffTerms<T> {
    fn positive_terms(&self) -> impl Iterator<Item = &ExpTerm<T>> {
        self.fixed.iter().chain(self.floating.iter())
    }

    /// `Σ |coefficients|`, the scale for residual tolerances on `f`.
    pub fn abs_weight_sum(&self) -> T {
        self.positive_terms().chain(self.spread.iter()).map(|t| t.weight.abs()).sum()
    }

    /// Signed coefficient sum `K·BPV − 𝒩`: the forward intrinsic value,
    /// equal to `E[f(ξ)]` because every term is mean-one in `ξ`.
    pub fn forward_intrinsic(&self) -> T {
        let pos: T = self.positive_terms().map(|t| t.weight).sum();
        let neg: T = self.spread.iter().map(|t| t.weight).sum();
        pos - neg
    }

    /// True when no term depends on `ξ` (zero volatility).
    pub fn is_deterministic(&self) -> bool {
        self.zeta == T::zero()
            || self.positive_terms().chain(self.spread.iter()).all(|t| t.vol == T::zero())
    }

    /// `f(ξ)` and whether any exponent had to be clamped.
    pub fn eval_checked(&self, xi: T) -> (T, bool) {
        let half_zeta2 = T::lit(0.5) * self.zeta * self.zeta;
        let clamp = T::lit(EXPONENT_CLAMP);
        let mut clamped = false;
        let mut term = |t: &ExpTerm<T>| {
            let x = t.exponent(xi, half_zeta2);
            if x.abs() > clamp {
                clamped = true;
            }
            t.weight * x.max(-clamp).min(clamp).exp()
        };
        let pos: T = self.fixed.iter().chain(self.floating.iter()).map(&mut term).sum();
        let neg: T = self.spread.iter().map(&mut term).sum();
        (pos - neg, clamped)
    }
}

/// `f(ξ)`; exponents are clamped to ±700.
pub fn eval_f<T: Real>(terms: &PayoffTerms<T>, xi: T) -> T {
    terms.eval_checked(xi).0
}

/// Builds the terms of `f` for `spec` on the time-`t0` curves.
pub fn payoff_terms<T: Real>(
    p: &MhwParams<T>,
    disc: &Curve<T>,
    pseudo: &PseudoCurve<T>,
    spec: &SwaptionSpec<T>,
) -> Result<PayoffTerms<T>, ModelError> {
    let vols = extended_vols(p, spec)?;
    let t_alpha = spec.expiry();
    let zeta = zeta(p, T::zero(), disc.time(t_alpha)?)?;
    let k = spec.strike();

    let fixed_leg = spec.fixed();
    let last = fixed_leg.len() - 1;
    let mut fixed = Vec::with_capacity(fixed_leg.len());
    for (j, ((_, end, yf), &vol)) in fixed_leg.periods().zip(&vols.fixed).enumerate() {
        let c = if j == last { T::one() + yf * k } else { yf * k };
        fixed.push(ExpTerm { weight: c * disc.forward_discount(t_alpha, end)?, vol });
    }

    let float_dates: Vec<_> = spec.floating().all_dates().collect();
    let n = float_dates.len() - 1;
    let mut floating = Vec::with_capacity(n.saturating_sub(1));
    for i in 1..n {
        floating.push(ExpTerm { weight: disc.forward_discount(t_alpha, float_dates[i])?, vol: vols.floating[i] });
    }
    let mut spread = Vec::with_capacity(n);
    for i in 0..n {
        let beta = spread_between(disc, pseudo, float_dates[i], float_dates[i + 1])?;
        spread.push(ExpTerm { weight: beta * disc.forward_discount(t_alpha, float_dates[i])?, vol: vols.nu[i] });
    }
    Ok(PayoffTerms { fixed, floating, spread, zeta })
}

/// Initial bracket half-width and cap, in units of ζ.
const BRACKET_START: f64 = 4.0;
const BRACKET_CAP: f64 = 64.0;

/// Unique root `ξ*` of `f`, with `f > 0` to its left.
///
/// Brackets geometrically from `±4ζ` up to `±64ζ`, then refines with Brent.
/// A root beyond the cap is reported as [`ModelError::RootBeyondBracket`];
/// no sign change with `f <= 0` on the left means the terms violate the
/// shape guaranteed for admissible inputs (e.g. negative fixed coefficients).
pub fn find_xi_star<T: Real>(terms: &PayoffTerms<T>) -> Result<T, ModelError> {
    if terms.is_deterministic() {
        return Err(ModelError::NoExerciseBoundary("f does not depend on the state (zero volatility)".into()));
    }
    let unit = if terms.zeta > T::zero() { terms.zeta } else { T::one() };
    let cap = T::lit(BRACKET_CAP) * unit;
    let eval = |xi: T| -> Result<T, ModelError> {
        let (v, clamped) = terms.eval_checked(xi);
        if clamped {
            return Err(ModelError::ExponentOverflow { xi: xi.to_f64_lossy() });
        }
        Ok(v)
    };

    let mut lo = -T::lit(BRACKET_START) * unit;
    let mut f_lo = eval(lo)?;
    while f_lo <= T::zero() && lo > -cap {
        lo = (lo * T::lit(2.0)).max(-cap);
        f_lo = eval(lo)?;
    }
    let mut hi = T::lit(BRACKET_START) * unit;
    let mut f_hi = eval(hi)?;
    while f_hi >= T::zero() && hi < cap {
        hi = (hi * T::lit(2.0)).min(cap);
        f_hi = eval(hi)?;
    }
    match (f_lo > T::zero(), f_hi < T::zero()) {
        (true, true) => {}
        (true, false) => return Err(ModelError::RootBeyondBracket { above: true, bound: hi.to_f64_lossy() }),
        (false, true) => {
            // f <= 0 at the left cap: either the root lies further left or f
            // never turns positive. Only the former is consistent with f > 0
            // for ξ → −∞, which the leading fixed term guarantees when c_ω > 0.
            if terms.fixed.iter().all(|t| t.weight >= T::zero()) && f_lo < T::zero() && left_tail_positive(terms) {
                return Err(ModelError::RootBeyondBracket { above: false, bound: lo.to_f64_lossy() });
            }
            return Err(ModelError::NoExerciseBoundary(format!(
                "f({}) = {} <= 0 on the left of the bracket",
                lo.to_f64_lossy(),
                f_lo.to_f64_lossy()
            )));
        }
        (false, false) => {
            return Err(ModelError::NoExerciseBoundary(format!(
                "no sign change: f({}) = {}, f({}) = {}",
                lo.to_f64_lossy(),
                f_lo.to_f64_lossy(),
                hi.to_f64_lossy(),
                f_hi.to_f64_lossy()
            )))
        }
    }
    let solved = brent(|xi| terms.eval_checked(xi).0, lo, hi, 300)?;
    // Brent returns the bracket end with smaller |f|; keep the left-positive side on ties.
    Ok(solved.root)
}

/// Whether the term with the most negative exponent slope is a positive one,
/// i.e. `f → +∞` as `ξ → −∞`.
fn left_tail_positive<T: Real>(terms: &PayoffTerms<T>) -> bool {
    let lead = |it: &mut dyn Iterator<Item = &ExpTerm<T>>| {
        it.filter(|t| t.weight > T::zero()).map(|t| t.vol).fold(T::neg_infinity(), T::max)
    };
    let pos = lead(&mut terms.fixed.iter().chain(terms.floating.iter()));
    let neg = lead(&mut terms.spread.iter());
    pos > neg
}
