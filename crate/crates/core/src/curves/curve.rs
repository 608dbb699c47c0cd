use std::ops::Deref;

use serde::{Deserialize, Serialize};

use super::CurveError;
use crate::scalar::Real;
use crate::temporal::{Date, DayCount, RollRule, Tenor};

/// Interpolation between pillars.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Interpolation {
    /// Linear in log discount factor on ACT/365 time (piecewise flat
    /// instantaneous forwards); the last forward is extended flat.
    #[default]
    LogLinear,
}

/// Discount-factor term structure `B(t0, T)` anchored at its reference date.
///
/// The reference date is an implicit node with discount factor 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<T> {
    reference: Date,
    pillars: Vec<Date>,
    discount_factors: Vec<T>,
    // Node arrays include the reference node at index 0.
    times: Vec<T>,
    log_dfs: Vec<T>,
    interpolation: Interpolation,
}

/// Model time in years (ACT/365) between two dates.
pub fn act365<T: Real>(from: Date, to: Date) -> T {
    T::from_i64((to - from).num_days()).expect("day count fits scalar") / T::lit(365.0)
}

impl<T: Real> Curve<T> {
    pub fn new(reference: Date, pillars: Vec<Date>, discount_factors: Vec<T>) -> Result<Self, CurveError> {
        if pillars.len() != discount_factors.len() {
            return Err(CurveError::Invalid(format!(
                "{} pillars but {} discount factors",
                pillars.len(),
                discount_factors.len()
            )));
        }
        let mut prev = reference;
        for (&d, &df) in pillars.iter().zip(&discount_factors) {
            if d <= prev {
                return Err(CurveError::Invalid(format!("pillar {d} not after {prev}")));
            }
            if !(df > T::zero()) || !df.is_finite() {
                return Err(CurveError::Invalid(format!("discount factor {df} at {d} is not positive")));
            }
            prev = d;
        }
        let mut times = Vec::with_capacity(pillars.len() + 1);
        let mut log_dfs = Vec::with_capacity(pillars.len() + 1);
        times.push(T::zero());
        log_dfs.push(T::zero());
        for (&d, &df) in pillars.iter().zip(&discount_factors) {
            times.push(act365(reference, d));
            log_dfs.push(df.ln());
        }
        Ok(Self { reference, pillars, discount_factors, times, log_dfs, interpolation: Interpolation::LogLinear })
    }

    /// Curve with a constant continuously compounded zero rate.
    pub fn flat(reference: Date, zero_rate: T) -> Self {
        let end = Tenor::years(100).add_to(reference);
        let t: T = act365(reference, end);
        Self::new(reference, vec![end], vec![(-zero_rate * t).exp()]).expect("flat curve is valid")
    }

    pub fn reference_date(&self) -> Date {
        self.reference
    }

    pub fn pillars(&self) -> &[Date] {
        &self.pillars
    }

    pub fn discount_factors(&self) -> &[T] {
        &self.discount_factors
    }

    pub fn interpolation(&self) -> Interpolation {
        self.interpolation
    }

    /// ACT/365 time from the reference date.
    pub fn time(&self, date: Date) -> Result<T, CurveError> {
        if date < self.reference {
            return Err(CurveError::BeforeReference { date, reference: self.reference });
        }
        Ok(act365(self.reference, date))
    }

    pub fn discount(&self, date: Date) -> Result<T, CurveError> {
        let t = self.time(date)?;
        Ok(self.discount_at_time(t))
    }

    /// `B(t0, t0 + t)` for `t >= 0` in ACT/365 years.
    pub fn discount_at_time(&self, t: T) -> T {
        let n = self.times.len();
        if n == 1 {
            return T::one();
        }
        let idx = self.times.partition_point(|&x| x <= t);
        let (i0, i1) = if idx >= n { (n - 2, n - 1) } else { (idx - 1, idx) };
        let (t0, t1) = (self.times[i0], self.times[i1]);
        let (l0, l1) = (self.log_dfs[i0], self.log_dfs[i1]);
        let w = (t - t0) / (t1 - t0);
        (l0 + w * (l1 - l0)).exp()
    }

    /// Instantaneous forward rate on the segment containing `t`.
    pub fn forward_rate_at_time(&self, t: T) -> T {
        let n = self.times.len();
        if n == 1 {
            return T::zero();
        }
        let idx = self.times.partition_point(|&x| x <= t).clamp(1, n - 1);
        -(self.log_dfs[idx] - self.log_dfs[idx - 1]) / (self.times[idx] - self.times[idx - 1])
    }

    /// `B(t0; T1, T2) = B(t0, T2) / B(t0, T1)`.
    pub fn forward_discount(&self, t1: Date, t2: Date) -> Result<T, CurveError> {
        if t1 < self.reference {
            return Err(CurveError::BeforeReference { date: t1, reference: self.reference });
        }
        if t2 < t1 {
            return Err(CurveError::Invalid(format!("forward discount end {t2} before start {t1}")));
        }
        if t1 == t2 {
            return Ok(T::one());
        }
        Ok(self.discount(t2)? / self.discount(t1)?)
    }

    /// Copy with a pillar appended (or the last pillar replaced when it
    /// has the same date). Used while bootstrapping.
    pub(crate) fn with_last_pillar(&self, date: Date, df: T) -> Result<Self, CurveError> {
        let mut pillars = self.pillars.clone();
        let mut dfs = self.discount_factors.clone();
        if pillars.last() == Some(&date) {
            pillars.pop();
            dfs.pop();
        }
        pillars.push(date);
        dfs.push(df);
        Self::new(self.reference, pillars, dfs)
    }
}

/// Free-function form of [`Curve::forward_discount`].
pub fn forward_discount<T: Real>(curve: &Curve<T>, t1: Date, t2: Date) -> Result<T, CurveError> {
    curve.forward_discount(t1, t2)
}

/// Pseudo-discount curve `B̂` attached to a Libor tenor (e.g. 6m).
#[derive(Debug, Clone, PartialEq)]
pub struct PseudoCurve<T> {
    curve: Curve<T>,
    tenor: Tenor,
    day_count: DayCount,
    roll: RollRule,
}

impl<T: Real> PseudoCurve<T> {
    pub fn new(curve: Curve<T>, tenor: Tenor, day_count: DayCount, roll: RollRule) -> Self {
        Self { curve, tenor, day_count, roll }
    }

    /// Single-curve degeneracy: pseudo-discounts equal the discounts.
    pub fn from_discount(curve: Curve<T>, tenor: Tenor) -> Self {
        Self::new(curve, tenor, DayCount::Act360, RollRule::default())
    }

    pub fn tenor(&self) -> Tenor {
        self.tenor
    }

    pub fn day_count(&self) -> DayCount {
        self.day_count
    }

    pub fn as_curve(&self) -> &Curve<T> {
        &self.curve
    }

    /// Rolled end date `T + Δ` of the Libor period starting at `start`.
    pub fn period_end(&self, start: Date) -> Date {
        self.roll.apply(self.tenor.add_to(start))
    }

    /// Forward Libor implied by `B̂(t0; start, end) = 1 / (1 + δ L)`.
    pub fn forward_rate(&self, start: Date, end: Date) -> Result<T, CurveError> {
        let delta: T = self.day_count.year_fraction(start, end)?;
        Ok((T::one() / self.curve.forward_discount(start, end)? - T::one()) / delta)
    }
}

impl<T> Deref for PseudoCurve<T> {
    type Target = Curve<T>;
    fn deref(&self) -> &Curve<T> {
        &self.curve
    }
}

/// Spread `β(t0; start, end) = B(t0; start, end) / B̂(t0; start, end)`.
pub fn spread_between<T: Real>(
    disc: &Curve<T>,
    pseudo: &PseudoCurve<T>,
    start: Date,
    end: Date,
) -> Result<T, CurveError> {
    Ok(disc.forward_discount(start, end)? / pseudo.forward_discount(start, end)?)
}

/// Spread over the pseudo-curve tenor starting at `start`.
pub fn spread<T: Real>(disc: &Curve<T>, pseudo: &PseudoCurve<T>, start: Date) -> Result<T, CurveError> {
    spread_between(disc, pseudo, start, pseudo.period_end(start))
}
