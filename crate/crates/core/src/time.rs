use std::fmt;

pub const MINUTES_PER_DAY: i64 = 1440;

/// Simulation time in whole minutes since transplanting (day 0, 00:00).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct SimTime(pub i64);

impl SimTime {
    pub fn at(day: i64, clock_min: i64) -> Self {
        SimTime(day * MINUTES_PER_DAY + clock_min)
    }

    pub fn minutes(self) -> i64 {
        self.0
    }

    pub fn day(self) -> i64 {
        self.0.div_euclid(MINUTES_PER_DAY)
    }

    /// Minutes since local midnight.
    pub fn clock(self) -> i64 {
        self.0.rem_euclid(MINUTES_PER_DAY)
    }

    pub fn plus(self, minutes: i64) -> Self {
        SimTime(self.0 + minutes)
    }

    pub fn age_days(self) -> f64 {
        self.0 as f64 / MINUTES_PER_DAY as f64
    }
}

impl fmt::Display for SimTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "day {} {}", self.day(), format_clock(self.clock()))
    }
}

/// Formats minutes-since-midnight as `HH:MM`.
pub fn format_clock(clock_min: i64) -> String {
    format!("{:02}:{:02}", clock_min / 60, clock_min % 60)
}

/// Parses `HH:MM` (24:00 allowed as end of day) into minutes since midnight.
pub fn parse_clock(s: &str) -> Option<i64> {
    let (h, m) = s.trim().split_once(':')?;
    let h: i64 = h.parse().ok()?;
    let m: i64 = m.parse().ok()?;
    if !(0..60).contains(&m) || !(0..=24).contains(&h) || (h == 24 && m != 0) {
        return None;
    }
    Some(h * 60 + m)
}

/// Half-open time-of-day interval `[start, end)` in minutes since midnight.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DayWindow {
    pub start_min: i64,
    pub end_min: i64,
}

impl DayWindow {
    pub const DAYTIME: DayWindow = DayWindow {
        start_min: 8 * 60,
        end_min: 17 * 60,
    };

    pub fn new(start_min: i64, end_min: i64) -> crate::Result<Self> {
        if !(0..MINUTES_PER_DAY).contains(&start_min)
            || !(1..=MINUTES_PER_DAY).contains(&end_min)
            || start_min >= end_min
        {
            return Err(crate::Error::invalid(format!(
                "day window {}-{} must satisfy 00:00 <= start < end <= 24:00",
                format_clock(start_min),
                format_clock(end_min)
            )));
        }
        Ok(DayWindow { start_min, end_min })
    }

    pub fn contains(&self, clock_min: i64) -> bool {
        (self.start_min..self.end_min).contains(&clock_min)
    }

    pub fn len_min(&self) -> i64 {
        self.end_min - self.start_min
    }

    pub fn midpoint(&self) -> f64 {
        (self.start_min + self.end_min) as f64 / 2.0
    }
}
