//! Local wall-clock values with minute precision.
//!
//! Dates are `chrono::NaiveDate`; times of day and timestamps are small
//! newtypes so the interchange text forms (`HH:MM`, `YYYY-MM-DD`,
//! `YYYY-MM-DDTHH:MM`) are parsed strictly and printed identically.

use alloc::string::String;
use core::fmt;
use core::str::FromStr;

use chrono::{Datelike, NaiveDate};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("invalid {what}: expected {expected}")]
pub struct TimeFormatError {
    what: &'static str,
    expected: &'static str,
}

/// A time of day, `00:00` to `23:59`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimeOfDay(u16);

impl TimeOfDay {
    pub fn new(hour: u8, minute: u8) -> Option<Self> {
        (hour < 24 && minute < 60).then(|| TimeOfDay(hour as u16 * 60 + minute as u16))
    }

    pub fn hour(self) -> u8 {
        (self.0 / 60) as u8
    }

    pub fn minute(self) -> u8 {
        (self.0 % 60) as u8
    }

    pub fn minutes_since_midnight(self) -> u16 {
        self.0
    }
}

impl fmt::Display for TimeOfDay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:02}:{:02}", self.hour(), self.minute())
    }
}

fn two_digits(b: &[u8]) -> Option<u8> {
    match b {
        [h, l] if h.is_ascii_digit() && l.is_ascii_digit() => Some((h - b'0') * 10 + (l - b'0')),
        _ => None,
    }
}

impl FromStr for TimeOfDay {
    type Err = TimeFormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = TimeFormatError { what: "time of day", expected: "HH:MM" };
        let b = s.as_bytes();
        if b.len() != 5 || b[2] != b':' {
            return Err(err);
        }
        let hour = two_digits(&b[0..2]).ok_or(err)?;
        let minute = two_digits(&b[3..5]).ok_or(err)?;
        TimeOfDay::new(hour, minute).ok_or(err)
    }
}

/// Parses a `YYYY-MM-DD` calendar date.
pub fn parse_date(s: &str) -> Result<NaiveDate, TimeFormatError> {
    let err = TimeFormatError { what: "date", expected: "YYYY-MM-DD" };
    let b = s.as_bytes();
    if b.len() != 10 || b[4] != b'-' || b[7] != b'-' {
        return Err(err);
    }
    let year = two_digits(&b[0..2]).ok_or(err)? as i32 * 100 + two_digits(&b[2..4]).ok_or(err)? as i32;
    let month = two_digits(&b[5..7]).ok_or(err)?;
    let day = two_digits(&b[8..10]).ok_or(err)?;
    NaiveDate::from_ymd_opt(year, month as u32, day as u32).ok_or(err)
}

/// Formats a date as `YYYY-MM-DD`. Years outside 0..=9999 cannot be parsed back.
pub fn format_date(date: NaiveDate) -> DateDisplay {
    DateDisplay(date)
}

pub struct DateDisplay(NaiveDate);

impl fmt::Display for DateDisplay {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04}-{:02}-{:02}", self.0.year(), self.0.month(), self.0.day())
    }
}

/// Whole days from `from` to `to` (negative when `to` is earlier).
pub fn days_between(from: NaiveDate, to: NaiveDate) -> i64 {
    (to - from).num_days()
}

/// A local timestamp, `YYYY-MM-DDTHH:MM`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp {
    pub date: NaiveDate,
    pub time: TimeOfDay,
}

impl Timestamp {
    pub fn new(date: NaiveDate, time: TimeOfDay) -> Self {
        Timestamp { date, time }
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}T{}", format_date(self.date), self.time)
    }
}

impl FromStr for Timestamp {
    type Err = TimeFormatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = TimeFormatError { what: "timestamp", expected: "YYYY-MM-DDTHH:MM" };
        if s.len() != 16 || s.as_bytes()[10] != b'T' || !s.is_ascii() {
            return Err(err);
        }
        let date = parse_date(&s[..10]).map_err(|_| err)?;
        let time = s[11..].parse().map_err(|_| err)?;
        Ok(Timestamp { date, time })
    }
}

fn deserialize_via_str<'de, D, T>(deserializer: D) -> Result<T, D::Error>
where
    D: Deserializer<'de>,
    T: FromStr,
    T::Err: fmt::Display,
{
    let s = String::deserialize(deserializer)?;
    s.parse().map_err(serde::de::Error::custom)
}

impl Serialize for TimeOfDay {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for TimeOfDay {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserialize_via_str(deserializer)
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        deserialize_via_str(deserializer)
    }
}

/// `#[serde(with = "date_format")]` for `NaiveDate` fields.
pub mod date_format {
    use super::*;

    pub fn serialize<S: Serializer>(date: &NaiveDate, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&format_date(*date))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<NaiveDate, D::Error> {
        let s = String::deserialize(deserializer)?;
        parse_date(&s).map_err(serde::de::Error::custom)
    }
}

/// `#[serde(with = "opt_date_format")]` for `Option<NaiveDate>` fields.
pub mod opt_date_format {
    use super::*;

    pub fn serialize<S: Serializer>(date: &Option<NaiveDate>, serializer: S) -> Result<S::Ok, S::Error> {
        match date {
            Some(d) => serializer.collect_str(&format_date(*d)),
            None => serializer.serialize_none(),
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Option<NaiveDate>, D::Error> {
        let s = Option::<String>::deserialize(deserializer)?;
        s.map(|s| parse_date(&s).map_err(serde::de::Error::custom)).transpose()
    }
}
