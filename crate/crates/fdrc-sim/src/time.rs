//! Simulation clock types.
//!
//! Time is stored as whole nanoseconds in a `u64`. Every arithmetic step the
//! simulator performs is exact, so two runs with the same inputs produce the
//! same event order and the same output bytes. Seconds enter the picture only
//! at the edges (configuration values, CSV columns), via rounded conversions
//! and an exact decimal text form.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Sub, SubAssign};
use std::str::FromStr;

const NANOS_PER_SEC: u64 = 1_000_000_000;

/// A non-negative span of simulation time.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Duration(u64);

impl Duration {
    pub const ZERO: Duration = Duration(0);
    /// Smallest representable span; used as a floor where a zero interval
    /// would stall the simulation.
    pub const NANOSECOND: Duration = Duration(1);

    pub const fn from_nanos(nanos: u64) -> Self {
        Duration(nanos)
    }

    pub const fn from_secs(secs: u64) -> Self {
        Duration(secs * NANOS_PER_SEC)
    }

    /// Rounds to the nearest nanosecond.
    ///
    /// Panics if `secs` is negative, NaN, or too large for the clock; config
    /// validation rejects such values before they reach here.
    pub fn from_secs_f64(secs: f64) -> Self {
        assert!(
            secs.is_finite() && secs >= 0.0,
            "duration must be a non-negative finite number of seconds, got {secs}"
        );
        let nanos = secs * NANOS_PER_SEC as f64;
        assert!(nanos <= u64::MAX as f64, "duration {secs}s overflows the clock");
        Duration(nanos.round() as u64)
    }

    pub const fn as_nanos(self) -> u64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / NANOS_PER_SEC as f64
    }

    pub const fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub const fn saturating_sub(self, rhs: Duration) -> Duration {
        Duration(self.0.saturating_sub(rhs.0))
    }

    pub const fn saturating_mul(self, rhs: u64) -> Duration {
        Duration(self.0.saturating_mul(rhs))
    }
}

impl Add for Duration {
    type Output = Duration;
    fn add(self, rhs: Duration) -> Duration {
        Duration(self.0.checked_add(rhs.0).expect("duration overflow"))
    }
}

impl AddAssign for Duration {
    fn add_assign(&mut self, rhs: Duration) {
        *self = *self + rhs;
    }
}

impl Sub for Duration {
    type Output = Duration;
    fn sub(self, rhs: Duration) -> Duration {
        Duration(self.0.checked_sub(rhs.0).expect("duration underflow"))
    }
}

impl SubAssign for Duration {
    fn sub_assign(&mut self, rhs: Duration) {
        *self = *self - rhs;
    }
}

impl Mul<u64> for Duration {
    type Output = Duration;
    fn mul(self, rhs: u64) -> Duration {
        Duration(self.0.checked_mul(rhs).expect("duration overflow"))
    }
}

impl fmt::Display for Duration {
    /// Exact decimal seconds: `3600`, `2.5`, `0.000000001`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let secs = self.0 / NANOS_PER_SEC;
        let frac = self.0 % NANOS_PER_SEC;
        if frac == 0 {
            write!(f, "{secs}")
        } else {
            let digits = format!("{frac:09}");
            write!(f, "{secs}.{}", digits.trim_end_matches('0'))
        }
    }
}

/// Error produced when parsing a decimal-seconds string.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid duration `{input}`: {reason}")]
pub struct ParseDurationError {
    input: String,
    reason: &'static str,
}

impl ParseDurationError {
    fn new(input: &str, reason: &'static str) -> Self {
        ParseDurationError { input: input.to_string(), reason }
    }
}

impl FromStr for Duration {
    type Err = ParseDurationError;

    /// Parses exact decimal seconds with at most nanosecond precision.
    /// Round-trips with `Display`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(ParseDurationError::new(s, "empty"));
        }
        let secs: u64 = if int_part.is_empty() {
            0
        } else {
            int_part
                .parse()
                .map_err(|_| ParseDurationError::new(s, "not a decimal number"))?
        };
        if frac_part.len() > 9 {
            return Err(ParseDurationError::new(s, "more than nanosecond precision"));
        }
        let mut nanos: u64 = 0;
        if !frac_part.is_empty() {
            let padded = format!("{frac_part:0<9}");
            nanos = padded
                .parse()
                .map_err(|_| ParseDurationError::new(s, "not a decimal number"))?;
        }
        secs.checked_mul(NANOS_PER_SEC)
            .and_then(|n| n.checked_add(nanos))
            .map(Duration)
            .ok_or_else(|| ParseDurationError::new(s, "overflows the clock"))
    }
}

/// An instant on the simulation timeline, measured from the scenario start.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TimePoint(u64);

impl TimePoint {
    pub const ZERO: TimePoint = TimePoint(0);

    pub const fn from_nanos(nanos: u64) -> Self {
        TimePoint(nanos)
    }

    pub const fn from_secs(secs: u64) -> Self {
        TimePoint(secs * NANOS_PER_SEC)
    }

    pub fn from_secs_f64(secs: f64) -> Self {
        TimePoint(Duration::from_secs_f64(secs).as_nanos())
    }

    pub const fn as_nanos(self) -> u64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / NANOS_PER_SEC as f64
    }

    /// Time elapsed since `earlier`. Panics if `earlier` is later than `self`.
    pub fn since(self, earlier: TimePoint) -> Duration {
        Duration(self.0.checked_sub(earlier.0).expect("time went backwards"))
    }

    pub fn checked_since(self, earlier: TimePoint) -> Option<Duration> {
        self.0.checked_sub(earlier.0).map(Duration)
    }

    /// Elapsed time since the scenario start.
    pub const fn elapsed(self) -> Duration {
        Duration(self.0)
    }
}

impl Add<Duration> for TimePoint {
    type Output = TimePoint;
    fn add(self, rhs: Duration) -> TimePoint {
        TimePoint(self.0.checked_add(rhs.as_nanos()).expect("time overflow"))
    }
}

impl AddAssign<Duration> for TimePoint {
    fn add_assign(&mut self, rhs: Duration) {
        *self = *self + rhs;
    }
}

impl Sub<TimePoint> for TimePoint {
    type Output = Duration;
    fn sub(self, rhs: TimePoint) -> Duration {
        self.since(rhs)
    }
}

impl fmt::Display for TimePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Duration(self.0).fmt(f)
    }
}

impl FromStr for TimePoint {
    type Err = ParseDurationError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.parse::<Duration>().map(|d| TimePoint(d.as_nanos()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn display_trims_trailing_zeros() {
        assert_eq!(Duration::from_secs(3600).to_string(), "3600");
        assert_eq!(Duration::from_secs_f64(2.5).to_string(), "2.5");
        assert_eq!(Duration::from_nanos(1).to_string(), "0.000000001");
        assert_eq!(Duration::ZERO.to_string(), "0");
    }

    #[test]
    fn parse_round_trips_display() {
        for nanos in [0u64, 1, 999_999_999, 1_000_000_000, 2_500_000_000, 86_400_000_000_000] {
            let d = Duration::from_nanos(nanos);
            assert_eq!(d.to_string().parse::<Duration>().unwrap(), d);
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("".parse::<Duration>().is_err());
        assert!("abc".parse::<Duration>().is_err());
        assert!("1.0000000001".parse::<Duration>().is_err());
        assert!("-1".parse::<Duration>().is_err());
    }

    #[test]
    fn from_secs_f64_rounds_to_nanos() {
        assert_eq!(Duration::from_secs_f64(1.0).as_nanos(), 1_000_000_000);
        assert_eq!(Duration::from_secs_f64(0.1).as_nanos(), 100_000_000);
    }

    #[test]
    fn timepoint_arithmetic() {
        let t = TimePoint::from_secs(10) + Duration::from_secs(5);
        assert_eq!(t, TimePoint::from_secs(15));
        assert_eq!(t.since(TimePoint::from_secs(10)), Duration::from_secs(5));
        assert_eq!(t.checked_since(TimePoint::from_secs(20)), None);
    }
}
