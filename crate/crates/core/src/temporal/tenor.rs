use std::fmt;
use std::str::FromStr;

use chrono::{Days, Months};
use serde::{Deserialize, Serialize};

use super::{Date, TemporalError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum TenorUnit {
    Day,
    Week,
    Month,
    Year,
}

/// Market tenor such as `1w`, `6m` or `10y`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct Tenor {
    pub count: u32,
    pub unit: TenorUnit,
}

impl Tenor {
    pub const fn new(count: u32, unit: TenorUnit) -> Self {
        Self { count, unit }
    }

    pub const fn months(count: u32) -> Self {
        Self::new(count, TenorUnit::Month)
    }

    pub const fn years(count: u32) -> Self {
        Self::new(count, TenorUnit::Year)
    }

    /// Length in whole months, `None` for day/week tenors.
    pub fn in_months(&self) -> Option<u32> {
        match self.unit {
            TenorUnit::Month => Some(self.count),
            TenorUnit::Year => Some(12 * self.count),
            TenorUnit::Day | TenorUnit::Week => None,
        }
    }

    /// Approximate length in days, used only for ordering quotes.
    pub fn approx_days(&self) -> u32 {
        match self.unit {
            TenorUnit::Day => self.count,
            TenorUnit::Week => 7 * self.count,
            TenorUnit::Month => 30 * self.count + self.count / 2,
            TenorUnit::Year => 365 * self.count,
        }
    }

    /// Unadjusted date `date + self`; month arithmetic clamps to month end.
    pub fn add_to(&self, date: Date) -> Date {
        match self.unit {
            TenorUnit::Day => date + Days::new(self.count as u64),
            TenorUnit::Week => date + Days::new(7 * self.count as u64),
            TenorUnit::Month | TenorUnit::Year => add_months(date, self.in_months().unwrap_or(0)),
        }
    }
}

pub(crate) fn add_months(date: Date, months: u32) -> Date {
    date.checked_add_months(Months::new(months)).expect("date within chrono range")
}

pub(crate) fn sub_months(date: Date, months: u32) -> Date {
    date.checked_sub_months(Months::new(months)).expect("date within chrono range")
}

impl fmt::Display for Tenor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let unit = match self.unit {
            TenorUnit::Day => 'd',
            TenorUnit::Week => 'w',
            TenorUnit::Month => 'm',
            TenorUnit::Year => 'y',
        };
        write!(f, "{}{}", self.count, unit)
    }
}

impl FromStr for Tenor {
    type Err = TemporalError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || TemporalError::BadTenor(s.to_string());
        let (digits, unit) = s.split_at(s.len().checked_sub(1).ok_or_else(bad)?);
        let count: u32 = digits.parse().map_err(|_| bad())?;
        let unit = match unit.to_ascii_lowercase().as_str() {
            "d" => TenorUnit::Day,
            "w" => TenorUnit::Week,
            "m" => TenorUnit::Month,
            "y" => TenorUnit::Year,
            _ => return Err(bad()),
        };
        if count == 0 {
            return Err(bad());
        }
        Ok(Tenor::new(count, unit))
    }
}

impl TryFrom<String> for Tenor {
    type Error = TemporalError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

impl From<Tenor> for String {
    fn from(t: Tenor) -> String {
        t.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for s in ["1w", "2w", "1m", "6m", "1y", "15y", "3d"] {
            assert_eq!(s.parse::<Tenor>().unwrap().to_string(), s);
        }
        assert_eq!("10Y".parse::<Tenor>().unwrap(), Tenor::years(10));
        assert!("y".parse::<Tenor>().is_err());
        assert!("0m".parse::<Tenor>().is_err());
        assert!("5q".parse::<Tenor>().is_err());
    }

    #[test]
    fn month_arithmetic_clamps() {
        let d = Date::from_ymd_opt(2015, 8, 31).unwrap();
        assert_eq!(Tenor::months(6).add_to(d), Date::from_ymd_opt(2016, 2, 29).unwrap());
        assert_eq!(Tenor::years(1).in_months(), Some(12));
        assert_eq!("2w".parse::<Tenor>().unwrap().add_to(d), Date::from_ymd_opt(2015, 9, 14).unwrap());
    }
}
