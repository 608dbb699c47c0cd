use chrono::Datelike;
use serde::{Deserialize, Serialize};

use super::calendar::RollRule;
use super::daycount::DayCount;
use super::tenor::{add_months, sub_months};
use super::{Date, TemporalError};
use crate::scalar::Real;

/// Payment dates of one swap leg with their accrual fractions.
///
/// `start` is the first accrual start; `dates[i]` closes period `i` whose
/// fraction is `year_fractions[i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LegSchedule<T> {
    start: Date,
    dates: Vec<Date>,
    year_fractions: Vec<T>,
    day_count: DayCount,
}

impl<T: Real> LegSchedule<T> {
    /// Builds a schedule from explicit (already adjusted) dates.
    pub fn from_dates(start: Date, dates: Vec<Date>, day_count: DayCount) -> Result<Self, TemporalError> {
        if dates.is_empty() {
            return Err(TemporalError::Schedule("schedule needs at least one payment date".into()));
        }
        let mut prev = start;
        let mut year_fractions = Vec::with_capacity(dates.len());
        for &d in &dates {
            if d <= prev {
                return Err(TemporalError::Schedule(format!(
                    "payment dates must be strictly increasing ({prev} then {d})"
                )));
            }
            let yf: T = day_count.year_fraction(prev, d)?;
            if yf <= T::zero() {
                return Err(TemporalError::Schedule(format!("non-positive accrual between {prev} and {d}")));
            }
            year_fractions.push(yf);
            prev = d;
        }
        Ok(Self { start, dates, year_fractions, day_count })
    }

    pub fn start(&self) -> Date {
        self.start
    }

    pub fn end(&self) -> Date {
        *self.dates.last().expect("non-empty schedule")
    }

    pub fn payment_dates(&self) -> &[Date] {
        &self.dates
    }

    pub fn year_fractions(&self) -> &[T] {
        &self.year_fractions
    }

    pub fn day_count(&self) -> DayCount {
        self.day_count
    }

    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    /// Start date followed by every payment date.
    pub fn all_dates(&self) -> impl Iterator<Item = Date> + '_ {
        std::iter::once(self.start).chain(self.dates.iter().copied())
    }

    /// `(accrual start, accrual end, fraction)` per period.
    pub fn periods(&self) -> impl Iterator<Item = (Date, Date, T)> + '_ {
        self.all_dates()
            .zip(self.dates.iter().copied())
            .zip(self.year_fractions.iter().copied())
            .map(|((s, e), yf)| (s, e, yf))
    }
}

fn month_span(start: Date, end: Date) -> i64 {
    12 * (end.year() as i64 - start.year() as i64) + end.month() as i64 - start.month() as i64
}

/// Generates a regular schedule backward from `end` in steps of
/// `frequency_months`, then rolls every date with `roll`.
///
/// `end - start` must be a whole number of periods before rolling.
pub fn build_schedule<T: Real>(
    start: Date,
    end: Date,
    frequency_months: u32,
    day_count: DayCount,
    roll: RollRule,
) -> Result<LegSchedule<T>, TemporalError> {
    if start >= end {
        return Err(TemporalError::Ordering { start, end });
    }
    if frequency_months == 0 {
        return Err(TemporalError::Schedule("frequency must be at least one month".into()));
    }
    let months = month_span(start, end);
    if months <= 0 || months % frequency_months as i64 != 0 || add_months(start, months as u32) != end {
        return Err(TemporalError::Schedule(format!(
            "{start} to {end} is not a whole number of {frequency_months}-month periods"
        )));
    }
    let periods = (months / frequency_months as i64) as u32;
    let dates: Vec<Date> = (0..periods)
        .rev()
        .map(|k| roll.apply(sub_months(end, k * frequency_months)))
        .collect();
    LegSchedule::from_dates(roll.apply(start), dates, day_count)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::temporal::{BusinessDayConvention, Calendar};

    fn ymd(y: i32, m: u32, d: u32) -> Date {
        Date::from_ymd_opt(y, m, d).unwrap()
    }

    #[test]
    fn single_annual_period() {
        let s: LegSchedule<f64> =
            build_schedule(ymd(2015, 9, 14), ymd(2016, 9, 14), 12, DayCount::Thirty360, RollRule::default())
                .unwrap();
        assert_eq!(s.payment_dates(), &[ymd(2016, 9, 14)]);
        assert_eq!(s.year_fractions(), &[1.0]);
    }

    #[test]
    fn nine_year_semiannual_has_eighteen_dates() {
        let s: LegSchedule<f64> =
            build_schedule(ymd(2016, 9, 14), ymd(2025, 9, 14), 6, DayCount::Act360, RollRule::default()).unwrap();
        assert_eq!(s.len(), 18);
        assert_eq!(s.start(), ymd(2016, 9, 14));
        assert_eq!(s.end(), ymd(2025, 9, 15)); // 14 Sep 2025 is a Sunday
    }

    #[test]
    fn non_integral_period_count_rejected() {
        let r = build_schedule::<f64>(ymd(2015, 9, 14), ymd(2016, 3, 1), 6, DayCount::Act360, RollRule::default());
        assert!(matches!(r, Err(TemporalError::Schedule(_))));
        let r = build_schedule::<f64>(ymd(2015, 9, 14), ymd(2016, 9, 14), 5, DayCount::Act360, RollRule::default());
        assert!(r.is_err());
        let r = build_schedule::<f64>(ymd(2016, 9, 14), ymd(2015, 9, 14), 6, DayCount::Act360, RollRule::default());
        assert!(matches!(r, Err(TemporalError::Ordering { .. })));
    }

    #[test]
    fn unadjusted_rule_keeps_weekend_dates() {
        let roll = RollRule::new(BusinessDayConvention::Unadjusted, Calendar::Target);
        let s: LegSchedule<f64> =
            build_schedule(ymd(2016, 9, 14), ymd(2025, 9, 14), 12, DayCount::Thirty360, roll).unwrap();
        assert_eq!(s.end(), ymd(2025, 9, 14));
        assert!(s.year_fractions().iter().all(|&y| y == 1.0));
    }
}
