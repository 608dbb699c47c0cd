use chrono::Datelike;
use serde::{Deserialize, Serialize};

use super::{Date, TemporalError};
use crate::scalar::Real;

/// Day-count conventions used by the quoted instruments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum DayCount {
    #[serde(rename = "ACT/360")]
    Act360,
    #[serde(rename = "ACT/365")]
    Act365,
    /// 30/360 bond basis (ISDA).
    #[serde(rename = "30/360")]
    Thirty360,
}

impl DayCount {
    /// Day-count numerator: actual days for ACT conventions, 30/360 days otherwise.
    pub fn day_count(self, d1: Date, d2: Date) -> i64 {
        match self {
            DayCount::Act360 | DayCount::Act365 => (d2 - d1).num_days(),
            DayCount::Thirty360 => {
                let dd1 = d1.day().min(30) as i64;
                let dd2 = if dd1 == 30 { d2.day().min(30) } else { d2.day() } as i64;
                360 * (d2.year() - d1.year()) as i64
                    + 30 * (d2.month() as i64 - d1.month() as i64)
                    + (dd2 - dd1)
            }
        }
    }

    fn denominator(self) -> f64 {
        match self {
            DayCount::Act360 | DayCount::Thirty360 => 360.0,
            DayCount::Act365 => 365.0,
        }
    }

    pub fn year_fraction<T: Real>(self, d1: Date, d2: Date) -> Result<T, TemporalError> {
        if d1 > d2 {
            return Err(TemporalError::Ordering { start: d1, end: d2 });
        }
        let days = T::from_i64(self.day_count(d1, d2)).expect("day count fits scalar");
        Ok(days / T::lit(self.denominator()))
    }
}

/// Accrual fraction between `d1 <= d2` under `dc`.
pub fn year_fraction<T: Real>(d1: Date, d2: Date, dc: DayCount) -> Result<T, TemporalError> {
    dc.year_fraction(d1, d2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::Days;

    fn ymd(y: i32, m: u32, d: u32) -> Date {
        Date::from_ymd_opt(y, m, d).unwrap()
    }

    #[test]
    fn identical_dates_give_zero() {
        let d = ymd(2015, 9, 14);
        for dc in [DayCount::Act360, DayCount::Act365, DayCount::Thirty360] {
            assert_eq!(year_fraction::<f64>(d, d, dc).unwrap(), 0.0);
        }
    }

    #[test]
    fn leap_spanning_act360_matches_enumeration() {
        let (a, b) = (ymd(2015, 9, 14), ymd(2016, 9, 14));
        // Walk the calendar one day at a time.
        let mut days = 0;
        let mut d = a;
        while d < b {
            d = d + Days::new(1);
            days += 1;
        }
        assert_eq!(days, 366);
        let yf: f64 = year_fraction(a, b, DayCount::Act360).unwrap();
        assert_eq!(yf, days as f64 / 360.0);
        assert!((yf - 1.016_667).abs() < 1e-6);
    }

    #[test]
    fn whole_year_thirty_360() {
        let yf: f64 = year_fraction(ymd(2015, 9, 14), ymd(2016, 9, 14), DayCount::Thirty360).unwrap();
        assert_eq!(yf, 1.0);
    }

    #[test]
    fn thirty_360_end_of_month_rules() {
        assert_eq!(DayCount::Thirty360.day_count(ymd(2015, 1, 31), ymd(2015, 3, 31)), 60);
        assert_eq!(DayCount::Thirty360.day_count(ymd(2015, 1, 30), ymd(2015, 2, 28)), 28);
        assert_eq!(DayCount::Thirty360.day_count(ymd(2015, 1, 15), ymd(2015, 3, 31)), 76);
    }

    #[test]
    fn reversed_dates_rejected() {
        let err = year_fraction::<f64>(ymd(2016, 1, 2), ymd(2016, 1, 1), DayCount::Act360);
        assert!(matches!(err, Err(TemporalError::Ordering { .. })));
    }
}
