use std::collections::VecDeque;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Criterion, StopDecision, StopReason};

#[derive(Clone, Debug, PartialEq)]
pub struct SpConfig<T> {
    /// Intensity: the kappa level the windowed mean must reach.
    pub cutoff: T,
    /// Longevity: how many consecutive-model agreements are averaged.
    pub window: usize,
    pub stop_set_size: usize,
}

impl<T: Scalar> Default for SpConfig<T> {
    fn default() -> Self {
        SpConfig {
            cutoff: T::of(0.99),
            window: 3,
            stop_set_size: 2000,
        }
    }
}

impl<T: Scalar> SpConfig<T> {
    pub fn validate(&self) -> Result<()> {
        if !(self.cutoff > T::zero() && self.cutoff <= T::one()) {
            return Err(Error::Config(format!("kappa cutoff {} outside (0, 1]", self.cutoff)));
        }
        if self.window == 0 {
            return Err(Error::Config("SP window must be at least 1".into()));
        }
        if self.stop_set_size == 0 {
            return Err(Error::Config("stop set size must be at least 1".into()));
        }
        Ok(())
    }
}

/// The `k` most recent kappa values between consecutive models.
#[derive(Clone, Debug, PartialEq)]
pub struct AgreementWindow<T> {
    capacity: usize,
    values: VecDeque<T>,
}

impl<T: Scalar> AgreementWindow<T> {
    pub fn new(capacity: usize) -> Self {
        AgreementWindow {
            capacity,
            values: VecDeque::with_capacity(capacity),
        }
    }

    pub fn from_values(capacity: usize, values: &[T]) -> Self {
        let mut w = Self::new(capacity);
        for &v in values {
            w.push(v);
        }
        w
    }

    /// Appends a value, evicting the oldest once full.
    pub fn push(&mut self, kappa: T) {
        if self.values.len() == self.capacity {
            self.values.pop_front();
        }
        self.values.push_back(kappa);
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.values.len() == self.capacity
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn mean(&self) -> Option<T> {
        if self.values.is_empty() {
            None
        } else {
            Some(self.values.iter().copied().sum::<T>() / T::of_usize(self.values.len()))
        }
    }
}

/// Stop iff the window holds exactly `k` values and their mean reaches the
/// cutoff.
pub fn sp_decide<T: Scalar>(window: &AgreementWindow<T>, config: &SpConfig<T>, iteration: usize) -> StopDecision<T> {
    let full = window.len() == config.window;
    let mean = window.mean();
    let stop = full && mean.is_some_and(|m| m >= config.cutoff);
    let mut d = StopDecision::new(Criterion::Sp, iteration, stop).with_threshold(config.cutoff);
    if let Some(m) = mean {
        d = d.with_value(m);
    }
    if !full {
        d = d.with_reason(StopReason::InsufficientHistory);
    }
    d
}
