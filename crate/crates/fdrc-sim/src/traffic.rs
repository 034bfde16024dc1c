//! Packet-arrival models.
//!
//! Two kinds of traffic drive the simulation: periodic on-off bursts
//! (predictable flows) and sparse seeded random arrivals (unpredictable
//! flows). Both are immutable descriptions; arrival sequences are pure
//! functions of the model, so replaying a flow always yields the same
//! packet times.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::time::{Duration, TimePoint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TrafficError {
    #[error("active duration must satisfy 0 < active <= period")]
    InvalidActive,
    #[error("phase must lie in [0, period)")]
    InvalidPhase,
    #[error("packet rate must be positive and finite")]
    InvalidRate,
    #[error("horizon must be positive")]
    InvalidHorizon,
}

/// On-off periodic traffic: active for `active` seconds at the start of each
/// `period`-long cycle, silent for the rest. Cycle `n` begins at
/// `phase + n * period`. Packets inside a burst sit on a fixed grid spaced
/// `1/rate` apart, the first exactly at the burst start; a packet exists at
/// time `x` iff `x` falls in the half-open window `[start, start + active)`.
#[derive(Debug, Clone, PartialEq)]
pub struct PeriodicModel {
    period: Duration,
    active: Duration,
    phase: Duration,
    rate: f64,
    step: Duration,
}

impl PeriodicModel {
    pub fn new(
        period: Duration,
        active: Duration,
        phase: Duration,
        rate: f64,
    ) -> Result<Self, TrafficError> {
        if active.is_zero() || active > period {
            return Err(TrafficError::InvalidActive);
        }
        if phase >= period {
            return Err(TrafficError::InvalidPhase);
        }
        if !(rate.is_finite() && rate > 0.0) {
            return Err(TrafficError::InvalidRate);
        }
        // Grid spacing, floored to one nanosecond so a burst always advances.
        let step = Duration::from_secs_f64(1.0 / rate).max(Duration::NANOSECOND);
        Ok(PeriodicModel { period, active, phase, rate, step })
    }

    pub fn period(&self) -> Duration {
        self.period
    }

    pub fn active(&self) -> Duration {
        self.active
    }

    pub fn phase(&self) -> Duration {
        self.phase
    }

    pub fn rate(&self) -> f64 {
        self.rate
    }

    /// Grid spacing between packets inside a burst.
    pub fn step(&self) -> Duration {
        self.step
    }

    /// Start of cycle `n`.
    pub fn cycle_start(&self, n: u64) -> TimePoint {
        TimePoint::ZERO + self.phase + self.period * n
    }

    /// The earliest packet time strictly greater than `t`.
    pub fn next_arrival(&self, t: TimePoint) -> TimePoint {
        let phase_start = TimePoint::ZERO + self.phase;
        if t < phase_start {
            return phase_start;
        }
        let since = (t - phase_start).as_nanos();
        let period = self.period.as_nanos();
        let n = since / period;
        let offset = since - n * period;
        if offset < self.active.as_nanos() {
            let k = offset / self.step.as_nanos() + 1;
            let grid = k * self.step.as_nanos();
            if grid < self.active.as_nanos() {
                return self.cycle_start(n) + Duration::from_nanos(grid);
            }
        }
        self.cycle_start(n + 1)
    }

    /// Infinite iterator over packet times, starting at the first packet
    /// at or after `from`.
    pub fn arrivals_from(&self, from: TimePoint) -> PeriodicArrivals<'_> {
        let (n, k) = if from <= self.cycle_start(0) {
            (0, 0)
        } else {
            let since = (from - self.cycle_start(0)).as_nanos();
            let period = self.period.as_nanos();
            let n = since / period;
            let offset = since - n * period;
            let step = self.step.as_nanos();
            // First grid index at or after the offset; may land past the
            // burst, which the iterator resolves by rolling to cycle n+1.
            (n, offset.div_ceil(step))
        };
        PeriodicArrivals { model: self, n, k }
    }

    pub fn arrivals(&self, from: TimePoint, until: TimePoint) -> Vec<TimePoint> {
        self.arrivals_from(from).take_while(|t| *t < until).collect()
    }
}

/// Iterator state over a periodic model's packet grid.
#[derive(Debug, Clone)]
pub struct PeriodicArrivals<'a> {
    model: &'a PeriodicModel,
    n: u64,
    k: u64,
}

impl Iterator for PeriodicArrivals<'_> {
    type Item = TimePoint;

    fn next(&mut self) -> Option<TimePoint> {
        let step = self.model.step.as_nanos();
        if self.k * step >= self.model.active.as_nanos() {
            self.n += 1;
            self.k = 0;
        }
        let t = self.model.cycle_start(self.n) + Duration::from_nanos(self.k * step);
        self.k += 1;
        Some(t)
    }
}

/// Sparse random traffic: successive inter-arrival gaps drawn uniformly from
/// `(0, horizon)` by a generator owned by the flow. The sequence is a pure
/// function of `(seed, horizon)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomModel {
    seed: u64,
    horizon: Duration,
}

impl RandomModel {
    pub fn new(seed: u64, horizon: Duration) -> Result<Self, TrafficError> {
        if horizon.is_zero() {
            return Err(TrafficError::InvalidHorizon);
        }
        Ok(RandomModel { seed, horizon })
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn horizon(&self) -> Duration {
        self.horizon
    }

    /// Infinite iterator over packet times, replayed from time zero.
    pub fn arrivals_iter(&self) -> RandomArrivals {
        RandomArrivals {
            rng: ChaCha8Rng::seed_from_u64(self.seed),
            horizon_secs: self.horizon.as_secs_f64(),
            at: TimePoint::ZERO,
        }
    }

    pub fn arrivals(&self, from: TimePoint, until: TimePoint) -> Vec<TimePoint> {
        self.arrivals_iter()
            .take_while(|t| *t < until)
            .filter(|t| *t >= from)
            .collect()
    }
}

/// Iterator over a random model's arrivals.
pub struct RandomArrivals {
    rng: ChaCha8Rng,
    horizon_secs: f64,
    at: TimePoint,
}

impl Iterator for RandomArrivals {
    type Item = TimePoint;

    fn next(&mut self) -> Option<TimePoint> {
        let gap_secs: f64 = self.rng.random_range(0.0..self.horizon_secs);
        // Floor the gap at one nanosecond so arrivals stay strictly increasing.
        let gap = Duration::from_secs_f64(gap_secs).max(Duration::NANOSECOND);
        self.at += gap;
        Some(self.at)
    }
}

/// A flow's traffic description; periodic flows are the predictable ones.
#[derive(Debug, Clone, PartialEq)]
pub enum TrafficModel {
    Periodic(PeriodicModel),
    Random(RandomModel),
}

impl TrafficModel {
    pub fn is_periodic(&self) -> bool {
        matches!(self, TrafficModel::Periodic(_))
    }

    /// Packet times in `[from, until)`, strictly increasing.
    pub fn arrivals(&self, from: TimePoint, until: TimePoint) -> Vec<TimePoint> {
        assert!(from <= until, "arrival window is reversed");
        match self {
            TrafficModel::Periodic(m) => m.arrivals(from, until),
            TrafficModel::Random(m) => m.arrivals(from, until),
        }
    }

    /// Infinite arrival stream from time zero.
    pub fn arrivals_iter(&self) -> ArrivalIter<'_> {
        match self {
            TrafficModel::Periodic(m) => ArrivalIter::Periodic(m.arrivals_from(TimePoint::ZERO)),
            TrafficModel::Random(m) => ArrivalIter::Random(m.arrivals_iter()),
        }
    }
}

pub enum ArrivalIter<'a> {
    Periodic(PeriodicArrivals<'a>),
    Random(RandomArrivals),
}

impl Iterator for ArrivalIter<'_> {
    type Item = TimePoint;

    fn next(&mut self) -> Option<TimePoint> {
        match self {
            ArrivalIter::Periodic(it) => it.next(),
            ArrivalIter::Random(it) => it.next(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn secs(s: f64) -> Duration {
        Duration::from_secs_f64(s)
    }

    fn at(s: f64) -> TimePoint {
        TimePoint::from_secs_f64(s)
    }

    fn sample_model() -> PeriodicModel {
        // period 10s, active 2s, phase 0, rate 1 pkt/s
        PeriodicModel::new(secs(10.0), secs(2.0), secs(0.0), 1.0).unwrap()
    }

    #[test]
    fn periodic_arrivals_enumerate_bursts() {
        let m = sample_model();
        let got = m.arrivals(at(0.0), at(25.0));
        let want: Vec<TimePoint> = [0.0, 1.0, 10.0, 11.0, 20.0, 21.0].iter().map(|s| at(*s)).collect();
        assert_eq!(got, want);
    }

    #[test]
    fn periodic_silent_interval_is_empty() {
        let m = sample_model();
        assert!(m.arrivals(at(2.0), at(10.0)).is_empty());
    }

    #[test]
    fn periodic_window_is_half_open() {
        let m = sample_model();
        // packet at the burst start, none at start+active
        assert_eq!(m.arrivals(at(10.0), at(12.0)), vec![at(10.0), at(11.0)]);
        assert_eq!(m.arrivals(at(12.0), at(20.0)), vec![]);
    }

    #[test]
    fn next_arrival_matches_schedule() {
        let m = sample_model();
        assert_eq!(m.next_arrival(at(0.5)), at(1.0));
        assert_eq!(m.next_arrival(at(5.0)), at(10.0));
        assert_eq!(m.next_arrival(at(11.0)), at(20.0));
        // strictly greater than t even when t is on the grid
        assert_eq!(m.next_arrival(at(0.0)), at(1.0));
        // before the first cycle starts
        let shifted = PeriodicModel::new(secs(10.0), secs(2.0), secs(3.0), 1.0).unwrap();
        assert_eq!(shifted.next_arrival(at(1.0)), at(3.0));
    }

    #[test]
    fn next_arrival_agrees_with_enumeration() {
        let m = PeriodicModel::new(secs(7.0), secs(2.5), secs(1.25), 2.0).unwrap();
        let all = m.arrivals(at(0.0), at(100.0));
        for i in 0..2000 {
            let t = TimePoint::from_nanos(i * 37_000_000 + 13);
            let want = all.iter().copied().find(|a| *a > t).unwrap();
            assert_eq!(m.next_arrival(t), want, "at t={t}");
        }
    }

    #[test]
    fn periodicity_shift_is_exact() {
        let m = PeriodicModel::new(secs(12.5), secs(3.25), secs(4.0), 3.0).unwrap();
        let period = m.period();
        for cycle in 0..20u64 {
            let from = TimePoint::ZERO + period * cycle;
            let a: Vec<_> = m
                .arrivals(from, from + period)
                .into_iter()
                .map(|t| t + period)
                .collect();
            let b = m.arrivals(from + period, from + period * 2);
            assert_eq!(a, b, "cycle {cycle}");
        }
    }

    #[test]
    fn periodic_density_is_consistent() {
        // count over [0, kT) is k * packets-per-burst when phase = 0
        let m = PeriodicModel::new(secs(10.0), secs(3.0), secs(0.0), 2.0).unwrap();
        let per_burst = m.arrivals(at(0.0), at(10.0)).len() as u64;
        assert_eq!(per_burst, 6); // 3s at 2 pkt/s
        for k in 1..=20u64 {
            let count = m.arrivals(TimePoint::ZERO, TimePoint::ZERO + m.period() * k).len() as u64;
            assert_eq!(count, per_burst * k);
        }
    }

    #[test]
    fn random_arrivals_are_reproducible() {
        let m = RandomModel::new(42, secs(3600.0)).unwrap();
        let a = m.arrivals(at(0.0), at(3600.0));
        let b = m.arrivals(at(0.0), at(3600.0));
        assert_eq!(a, b);
        let other = RandomModel::new(43, secs(3600.0)).unwrap();
        assert_ne!(a, other.arrivals(at(0.0), at(3600.0)));
    }

    #[test]
    fn random_arrivals_strictly_increase() {
        let m = RandomModel::new(7, secs(10.0)).unwrap();
        let ts: Vec<_> = m.arrivals_iter().take(1000).collect();
        for w in ts.windows(2) {
            assert!(w[0] < w[1]);
        }
    }

    #[test]
    fn invalid_models_are_rejected() {
        assert_eq!(
            PeriodicModel::new(secs(10.0), secs(0.0), secs(0.0), 1.0),
            Err(TrafficError::InvalidActive)
        );
        assert_eq!(
            PeriodicModel::new(secs(10.0), secs(11.0), secs(0.0), 1.0),
            Err(TrafficError::InvalidActive)
        );
        assert_eq!(
            PeriodicModel::new(secs(10.0), secs(2.0), secs(10.0), 1.0),
            Err(TrafficError::InvalidPhase)
        );
        assert_eq!(
            PeriodicModel::new(secs(10.0), secs(2.0), secs(0.0), 0.0),
            Err(TrafficError::InvalidRate)
        );
        assert_eq!(RandomModel::new(1, Duration::ZERO), Err(TrafficError::InvalidHorizon));
    }
}
