use serde::{Deserialize, Serialize};

use super::curve::{spread_between, Curve, PseudoCurve};
use super::CurveError;
use crate::scalar::Real;
use crate::temporal::{build_schedule, Date, DayCount, LegSchedule, RollRule, TemporalError};

/// Leg conventions of a fixed-vs-Libor swap.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct SwapConventions {
    pub fixed_frequency_months: u32,
    pub fixed_day_count: DayCount,
    pub float_frequency_months: u32,
    pub float_day_count: DayCount,
    pub roll: RollRule,
}

impl Default for SwapConventions {
    /// EUR swap vs Euribor 6m: annual 30/360 fixed, semiannual ACT/360 floating.
    fn default() -> Self {
        Self {
            fixed_frequency_months: 12,
            fixed_day_count: DayCount::Thirty360,
            float_frequency_months: 6,
            float_day_count: DayCount::Act360,
            roll: RollRule::default(),
        }
    }
}

impl SwapConventions {
    pub fn fixed_leg<T: Real>(&self, start: Date, end: Date) -> Result<LegSchedule<T>, TemporalError> {
        build_schedule(start, end, self.fixed_frequency_months, self.fixed_day_count, self.roll)
    }

    pub fn floating_leg<T: Real>(&self, start: Date, end: Date) -> Result<LegSchedule<T>, TemporalError> {
        build_schedule(start, end, self.float_frequency_months, self.float_day_count, self.roll)
    }
}

/// Forward basis point value `Σ δ_j B(t0; t_α, t_{j+1})`, discounting on `disc`.
pub fn bpv<T: Real>(disc: &Curve<T>, fixed: &LegSchedule<T>) -> Result<T, CurveError> {
    let start = fixed.start();
    fixed
        .periods()
        .map(|(_, end, yf)| Ok(yf * disc.forward_discount(start, end)?))
        .sum()
}

/// Forward value at `t_α` of the floating leg:
/// `1 − B(t0; t_α, t_ω) + Σ_ι B(t0; t_α, t'_ι) [β_ι − 1]`.
pub fn floating_leg_value<T: Real>(
    disc: &Curve<T>,
    pseudo: &PseudoCurve<T>,
    floating: &LegSchedule<T>,
) -> Result<T, CurveError> {
    let start = floating.start();
    let mut value = T::one() - disc.forward_discount(start, floating.end())?;
    for (s, e, _) in floating.periods() {
        let beta = spread_between(disc, pseudo, s, e)?;
        value = value + disc.forward_discount(start, s)? * (beta - T::one());
    }
    Ok(value)
}

/// Forward swap rate `𝒩 / BPV`.
pub fn swap_rate<T: Real>(
    disc: &Curve<T>,
    pseudo: &PseudoCurve<T>,
    fixed: &LegSchedule<T>,
    floating: &LegSchedule<T>,
) -> Result<T, CurveError> {
    check_same_span(fixed, floating)?;
    Ok(floating_leg_value(disc, pseudo, floating)? / bpv(disc, fixed)?)
}

pub(crate) fn check_same_span<T: Real>(fixed: &LegSchedule<T>, floating: &LegSchedule<T>) -> Result<(), CurveError> {
    if fixed.start() != floating.start() || fixed.end() != floating.end() {
        return Err(CurveError::Invalid(format!(
            "legs do not share start/end: fixed {}..{}, floating {}..{}",
            fixed.start(),
            fixed.end(),
            floating.start(),
            floating.end()
        )));
    }
    Ok(())
}
