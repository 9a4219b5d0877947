//! Stopping criteria. Each one is a pure decision over what a run has
//! recorded so far; none of them alters the run itself.
//!
//! * `sp` - stabilizing predictions: windowed mean kappa between consecutive
//!   models on the stop set reaches the intensity cutoff.
//! * `sc2000` - margin exhaustion: no unlabeled example left inside the SVM
//!   margin.
//! * `zwh2008` - min-err with a no-change gate: batch accuracy at or above a
//!   rising threshold and no prediction changes on the unlabeled pool.
//! * `ls2008` - least-squares slope of query confidence over a window falls
//!   below a threshold.
//! * `v2008` - confidence on the unlabeled pool drops three times in a row.
//! * `minerr` - bare min-err, reported only on request.

mod confidence;
mod margin;
mod minerr;
mod sp;
mod suite;

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub use confidence::{least_squares_slope, ls2008_decide, v2008_decide, Ls2008Config, SlopeEstimator, V2008_DROPS};
pub use margin::{sc2000_decide, sc2000_from_count};
pub use minerr::{min_err_decide, zwh2008_decide, ZwhConfig, ZwhState};
pub use sp::{sp_decide, AgreementWindow, SpConfig};
pub use suite::{CriteriaSuite, Observation, StopPoint, StoppingConfig};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Criterion {
    Sp,
    V2008,
    Sc2000,
    Zwh2008,
    Ls2008,
    MinErr,
}

impl Criterion {
    /// Criteria reported by default, in table order.
    pub const DEFAULT: [Criterion; 5] = [
        Criterion::Sp,
        Criterion::V2008,
        Criterion::Sc2000,
        Criterion::Zwh2008,
        Criterion::Ls2008,
    ];

    pub const ALL: [Criterion; 6] = [
        Criterion::Sp,
        Criterion::V2008,
        Criterion::Sc2000,
        Criterion::Zwh2008,
        Criterion::Ls2008,
        Criterion::MinErr,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::Sp => "sp",
            Criterion::V2008 => "v2008",
            Criterion::Sc2000 => "sc2000",
            Criterion::Zwh2008 => "zwh2008",
            Criterion::Ls2008 => "ls2008",
            Criterion::MinErr => "minerr",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Criterion::Sp => "SP",
            Criterion::V2008 => "V2008",
            Criterion::Sc2000 => "SC2000",
            Criterion::Zwh2008 => "ZWH2008",
            Criterion::Ls2008 => "LS2008",
            Criterion::MinErr => "MinErr",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = Error;

    /// Case-insensitive; `-` and `_` are ignored, so `min-err` works.
    fn from_str(s: &str) -> Result<Self> {
        let key: String = s.trim().chars().filter(|c| !matches!(c, '-' | '_')).collect();
        Criterion::ALL
            .into_iter()
            .find(|c| c.name().eq_ignore_ascii_case(&key))
            .ok_or_else(|| Error::Config(format!("unknown criterion {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StopReason {
    Continue,
    Fired,
    PoolExhausted,
    NotApplicable,
    InsufficientHistory,
    /// Never fired and the run ended before the pool was exhausted.
    Censored,
}

impl StopReason {
    pub fn as_str(self) -> &'static str {
        match self {
            StopReason::Continue => "continue",
            StopReason::Fired => "fired",
            StopReason::PoolExhausted => "pool-exhausted",
            StopReason::NotApplicable => "not-applicable",
            StopReason::InsufficientHistory => "insufficient-history",
            StopReason::Censored => "censored",
        }
    }
}

impl fmt::Display for StopReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StopReason {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "continue" => StopReason::Continue,
            "fired" => StopReason::Fired,
            "pool-exhausted" => StopReason::PoolExhausted,
            "not-applicable" => StopReason::NotApplicable,
            "insufficient-history" => StopReason::InsufficientHistory,
            "censored" => StopReason::Censored,
            other => return Err(Error::Trace(format!("unknown stop reason {other:?}"))),
        })
    }
}

/// Outcome of evaluating one criterion at one iteration.
#[derive(Clone, Debug, PartialEq)]
pub struct StopDecision<T> {
    pub stop: bool,
    pub criterion: Criterion,
    pub iteration: usize,
    pub reason: StopReason,
    /// The statistic compared against the threshold (window mean, slope,
    /// batch accuracy, inside-margin count ...), when there is one.
    pub value: Option<T>,
    pub threshold: Option<T>,
}

impl<T: Scalar> StopDecision<T> {
    pub(crate) fn new(criterion: Criterion, iteration: usize, stop: bool) -> Self {
        StopDecision {
            stop,
            criterion,
            iteration,
            reason: if stop { StopReason::Fired } else { StopReason::Continue },
            value: None,
            threshold: None,
        }
    }

    pub(crate) fn with_reason(mut self, reason: StopReason) -> Self {
        self.reason = reason;
        self
    }

    pub(crate) fn with_value(mut self, value: T) -> Self {
        self.value = Some(value);
        self
    }

    pub(crate) fn with_threshold(mut self, threshold: T) -> Self {
        self.threshold = Some(threshold);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn criterion_names_round_trip() {
        for c in Criterion::ALL {
            assert_eq!(c.name().parse::<Criterion>().unwrap(), c);
        }
        assert_eq!("SP".parse::<Criterion>().unwrap(), Criterion::Sp);
        assert!("ertekin".parse::<Criterion>().is_err());
    }
}
