//! Simulation clock in integer nanoseconds.
//!
//! Event times are compared exactly, so the clock is kept in integers end to
//! end; floating point only appears when statistics are reported.

use std::fmt;

/// An instant on the simulation clock, in nanoseconds since scenario start.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SimTime(u64);

impl SimTime {
    pub const ZERO: SimTime = SimTime(0);

    pub const fn from_nanos(nanos: u64) -> Self {
        SimTime(nanos)
    }

    pub const fn as_nanos(self) -> u64 {
        self.0
    }

    pub fn as_secs_f64(self) -> f64 {
        self.0 as f64 / 1e9
    }

    pub const fn plus_nanos(self, nanos: u64) -> SimTime {
        SimTime(self.0 + nanos)
    }

    /// Nanoseconds elapsed since `earlier`, saturating at zero.
    pub const fn nanos_since(self, earlier: SimTime) -> u64 {
        self.0.saturating_sub(earlier.0)
    }
}

impl fmt::Display for SimTime {
    /// Seconds with nanosecond precision, e.g. `1.234567890`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{:09}", self.0 / 1_000_000_000, self.0 % 1_000_000_000)
    }
}
