use std::cmp::Ordering;

use crate::GnssError;

pub const SECONDS_PER_WEEK: f64 = 604_800.0;

/// GPS time as (week number, seconds of week).
///
/// `tow` is kept in `[0, 604800)`; arithmetic normalizes across week
/// rollovers. Ordering is total and consistent with `(week, tow)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GnssTime {
    pub week: i32,
    pub tow: f64,
}

impl GnssTime {
    pub fn new(week: i32, tow: f64) -> Result<Self, GnssError> {
        if !(0.0..SECONDS_PER_WEEK).contains(&tow) {
            return Err(GnssError::TimeOutOfRange(tow));
        }
        Ok(Self { week, tow })
    }

    /// Build from a possibly out-of-range seconds-of-week, normalizing the
    /// week number.
    pub fn normalized(week: i32, tow: f64) -> Self {
        let mut week = week;
        let mut tow = tow;
        while tow < 0.0 {
            tow += SECONDS_PER_WEEK;
            week -= 1;
        }
        while tow >= SECONDS_PER_WEEK {
            tow -= SECONDS_PER_WEEK;
            week += 1;
        }
        Self { week, tow }
    }

    /// Seconds from `other` to `self` (positive when `self` is later).
    pub fn seconds_since(&self, other: &GnssTime) -> f64 {
        f64::from(self.week - other.week) * SECONDS_PER_WEEK + (self.tow - other.tow)
    }

    pub fn add_seconds(&self, dt: f64) -> Self {
        Self::normalized(self.week, self.tow + dt)
    }
}

impl Eq for GnssTime {}

impl PartialOrd for GnssTime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for GnssTime {
    fn cmp(&self, other: &Self) -> Ordering {
        self.week
            .cmp(&other.week)
            .then(self.tow.partial_cmp(&other.tow).unwrap_or(Ordering::Equal))
    }
}
