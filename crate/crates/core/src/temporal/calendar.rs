use chrono::{Datelike, Days, Weekday};
use serde::{Deserialize, Serialize};

use super::Date;

/// Holiday calendars known to the library.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Calendar {
    /// Euro-area TARGET2 settlement calendar.
    #[default]
    Target,
    /// Saturdays and Sundays only.
    WeekendsOnly,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BusinessDayConvention {
    Unadjusted,
    Following,
    #[default]
    ModifiedFollowing,
    Preceding,
}

/// Business-day rule applied to every generated date.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(default)]
pub struct RollRule {
    pub convention: BusinessDayConvention,
    pub calendar: Calendar,
}

impl RollRule {
    pub fn new(convention: BusinessDayConvention, calendar: Calendar) -> Self {
        Self { convention, calendar }
    }

    pub fn apply(&self, date: Date) -> Date {
        self.calendar.adjust(date, self.convention)
    }
}

fn is_weekend(date: Date) -> bool {
    matches!(date.weekday(), Weekday::Sat | Weekday::Sun)
}

/// Easter Sunday (Gregorian), anonymous computus.
pub fn easter_sunday(year: i32) -> Date {
    let a = year % 19;
    let b = year / 100;
    let c = year % 100;
    let d = b / 4;
    let e = b % 4;
    let f = (b + 8) / 25;
    let g = (b - f + 1) / 3;
    let h = (19 * a + b - d - g + 15) % 30;
    let i = c / 4;
    let k = c % 4;
    let l = (32 + 2 * e + 2 * i - h - k) % 7;
    let m = (a + 11 * h + 22 * l) / 451;
    let month = (h + l - 7 * m + 114) / 31;
    let day = (h + l - 7 * m + 114) % 31 + 1;
    Date::from_ymd_opt(year, month as u32, day as u32).expect("computus yields a valid date")
}

fn is_target_holiday(date: Date) -> bool {
    let (m, d) = (date.month(), date.day());
    if (m == 1 && d == 1) || (m == 5 && d == 1) || (m == 12 && (d == 25 || d == 26)) {
        return true;
    }
    let easter = easter_sunday(date.year());
    date == easter - Days::new(2) || date == easter + Days::new(1)
}

impl Calendar {
    pub fn is_business_day(&self, date: Date) -> bool {
        if is_weekend(date) {
            return false;
        }
        match self {
            Calendar::Target => !is_target_holiday(date),
            Calendar::WeekendsOnly => true,
        }
    }

    fn next_business_day(&self, mut date: Date) -> Date {
        while !self.is_business_day(date) {
            date = date + Days::new(1);
        }
        date
    }

    fn previous_business_day(&self, mut date: Date) -> Date {
        while !self.is_business_day(date) {
            date = date - Days::new(1);
        }
        date
    }

    pub fn adjust(&self, date: Date, convention: BusinessDayConvention) -> Date {
        match convention {
            BusinessDayConvention::Unadjusted => date,
            BusinessDayConvention::Following => self.next_business_day(date),
            BusinessDayConvention::Preceding => self.previous_business_day(date),
            BusinessDayConvention::ModifiedFollowing => {
                let next = self.next_business_day(date);
                if next.month() == date.month() {
                    next
                } else {
                    self.previous_business_day(date)
                }
            }
        }
    }

    /// Moves forward by `n` business days (the start date itself does not count).
    pub fn add_business_days(&self, mut date: Date, n: u32) -> Date {
        for _ in 0..n {
            date = self.next_business_day(date + Days::new(1));
        }
        date
    }
}
