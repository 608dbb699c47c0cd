//! Calendar arithmetic, day counts and swap-leg schedules.
//!
//! Dates are plain calendar days (`chrono::NaiveDate`), serialized as
//! ISO-8601 `YYYY-MM-DD`. Holidays follow the TARGET calendar.

mod calendar;
mod daycount;
mod schedule;
mod tenor;

pub use calendar::{easter_sunday, BusinessDayConvention, Calendar, RollRule};
pub use daycount::{year_fraction, DayCount};
pub use schedule::{build_schedule, LegSchedule};
pub use tenor::{Tenor, TenorUnit};

use thiserror::Error;

/// Calendar date without time of day.
pub type Date = chrono::NaiveDate;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TemporalError {
    #[error("dates out of order: {start} is after {end}")]
    Ordering { start: Date, end: Date },
    #[error("invalid schedule: {0}")]
    Schedule(String),
    #[error("cannot parse tenor `{0}`")]
    BadTenor(String),
    #[error("cannot parse date `{0}` (expected YYYY-MM-DD)")]
    BadDate(String),
}

/// Parses an ISO-8601 calendar date.
pub fn parse_date(s: &str) -> Result<Date, TemporalError> {
    Date::parse_from_str(s.trim(), "%Y-%m-%d").map_err(|_| TemporalError::BadDate(s.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn iso_dates() {
        let d = parse_date("2015-09-10").unwrap();
        assert_eq!(d.to_string(), "2015-09-10");
        assert!(parse_date("10/09/2015").is_err());
        assert!(parse_date("2015-02-30").is_err());
    }
}
