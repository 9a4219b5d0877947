use crate::corpus::SparseExample;
use crate::learners::TrainedModel;
use crate::scalar::Scalar;

use super::{Criterion, StopDecision, StopReason};

#[derive(Clone, Debug, PartialEq)]
pub struct ZwhConfig<T> {
    pub initial_threshold: T,
    /// Amount the accuracy threshold rises when it is met but predictions on
    /// the unlabeled pool still changed.
    pub step: T,
    pub cap: T,
}

impl<T: Scalar> Default for ZwhConfig<T> {
    fn default() -> Self {
        ZwhConfig {
            initial_threshold: T::of(0.9),
            step: T::of(0.01),
            cap: T::one(),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ZwhState<T> {
    pub threshold: T,
    pub config: ZwhConfig<T>,
}

impl<T: Scalar> ZwhState<T> {
    pub fn new(config: ZwhConfig<T>) -> Self {
        ZwhState {
            threshold: config.initial_threshold,
            config,
        }
    }

    /// One min-err/no-change step.
    ///
    /// `batch_accuracy` is the accuracy, against the newly revealed gold
    /// labels, of the model that selected the batch; `changes` counts
    /// remaining unlabeled examples whose predicted label differs between the
    /// previous and current model.
    pub fn decide(&self, batch_accuracy: T, changes: usize, iteration: usize) -> (StopDecision<T>, ZwhState<T>) {
        let mut next = self.clone();
        let met = batch_accuracy >= self.threshold;
        let stop = met && changes == 0;
        if met && changes > 0 {
            next.threshold = (self.threshold + self.config.step).min(self.config.cap);
        }
        let d = StopDecision::new(Criterion::Zwh2008, iteration, stop)
            .with_value(batch_accuracy)
            .with_threshold(self.threshold);
        (d, next)
    }
}

/// Zhu, Wang and Hovy's multi-criteria stop on models and data: the accuracy
/// of `model_prev` (the model that chose `batch`) on the batch's gold labels,
/// and the predictions of `model_prev` versus `model_curr` on `remaining`.
pub fn zwh2008_decide<T: Scalar>(
    state: &ZwhState<T>,
    batch: &[&SparseExample<T>],
    model_prev: &TrainedModel<T>,
    model_curr: &TrainedModel<T>,
    remaining: &[&SparseExample<T>],
    iteration: usize,
) -> (StopDecision<T>, ZwhState<T>) {
    if batch.is_empty() {
        let d = StopDecision::new(Criterion::Zwh2008, iteration, false)
            .with_reason(StopReason::InsufficientHistory)
            .with_threshold(state.threshold);
        return (d, state.clone());
    }
    let correct = batch
        .iter()
        .filter(|x| x.label == Some(model_prev.predict(x)))
        .count();
    let accuracy = T::of_usize(correct) / T::of_usize(batch.len());
    let changes = remaining
        .iter()
        .filter(|x| model_prev.predict(x) != model_curr.predict(x))
        .count();
    state.decide(accuracy, changes, iteration)
}

/// Bare min-err: batch accuracy at or above a fixed threshold.
pub fn min_err_decide<T: Scalar>(batch_accuracy: T, threshold: T, iteration: usize) -> StopDecision<T> {
    StopDecision::new(Criterion::MinErr, iteration, batch_accuracy >= threshold)
        .with_value(batch_accuracy)
        .with_threshold(threshold)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::Label;
    use crate::learners::LearnerKind;

    #[test]
    fn accurate_and_stable_stops() {
        let s = ZwhState::<f64>::new(ZwhConfig::default());
        let (d, next) = s.decide(19.0 / 20.0, 0, 4);
        assert!(d.stop);
        assert_eq!(next.threshold, 0.9);
    }

    #[test]
    fn accurate_but_changing_raises_threshold() {
        let s = ZwhState::<f64>::new(ZwhConfig::default());
        let (d, next) = s.decide(0.95, 3, 4);
        assert!(!d.stop);
        assert!((next.threshold - 0.91).abs() < 1e-12);
    }

    #[test]
    fn inaccurate_keeps_threshold() {
        let s = ZwhState::<f64>::new(ZwhConfig::default());
        let (d, next) = s.decide(0.85, 0, 4);
        assert!(!d.stop);
        assert_eq!(next.threshold, 0.9);
    }

    #[test]
    fn threshold_caps_at_one() {
        let mut s = ZwhState::<f64>::new(ZwhConfig::default());
        for _ in 0..50 {
            s = s.decide(1.0, 5, 0).1;
        }
        assert_eq!(s.threshold, 1.0);
    }

    #[test]
    fn model_form_counts_batch_and_changes() {
        // prev predicts + everywhere, curr predicts - everywhere.
        let mut prev = TrainedModel::<f64>::zero(LearnerKind::Svm, 1);
        prev.bias = 1.0;
        let mut curr = prev.clone();
        curr.bias = -1.0;
        let batch: Vec<SparseExample<f64>> = (0..20)
            .map(|i| {
                let label = if i == 0 { Label::Neg } else { Label::Pos };
                SparseExample::new(i, vec![], Some(label)).unwrap()
            })
            .collect();
        let refs: Vec<_> = batch.iter().collect();
        let s = ZwhState::new(ZwhConfig::default());
        let (d, next) = zwh2008_decide(&s, &refs, &prev, &prev, &[], 1);
        assert!(d.stop);
        assert_eq!(d.value, Some(0.95));
        let (d, next2) = zwh2008_decide(&next, &refs, &prev, &curr, &refs[..3], 2);
        assert!(!d.stop);
        assert!((next2.threshold - 0.91).abs() < 1e-12);
    }
}
