use crate::corpus::SparseExample;
use crate::learners::{LearnerKind, TrainedModel};
use crate::scalar::Scalar;

use super::{Criterion, StopDecision, StopReason};

/// Margin exhaustion from a precomputed count of unlabeled examples inside
/// the margin. `None` means the learner has no margin (maxent): the criterion
/// never fires.
pub fn sc2000_from_count<T: Scalar>(inside: Option<usize>, remaining: usize, iteration: usize) -> StopDecision<T> {
    match inside {
        None => StopDecision::new(Criterion::Sc2000, iteration, false).with_reason(StopReason::NotApplicable),
        Some(_) if remaining == 0 => StopDecision::new(Criterion::Sc2000, iteration, true)
            .with_reason(StopReason::PoolExhausted)
            .with_value(T::zero()),
        Some(count) => StopDecision::new(Criterion::Sc2000, iteration, count == 0).with_value(T::of_usize(count)),
    }
}

/// Stop iff no remaining unlabeled example lies strictly inside the margin.
pub fn sc2000_decide<T: Scalar>(
    model: &TrainedModel<T>,
    remaining: &[&SparseExample<T>],
    iteration: usize,
) -> StopDecision<T> {
    let inside = match model.kind {
        LearnerKind::Svm => Some(
            remaining
                .iter()
                .filter(|x| model.score(x).abs() < T::one())
                .count(),
        ),
        LearnerKind::Maxent => None,
    };
    sc2000_from_count(inside, remaining.len(), iteration)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pool(scores: &[f64]) -> (TrainedModel<f64>, Vec<SparseExample<f64>>) {
        // One feature per example whose weight equals the desired score.
        let mut model = TrainedModel::zero(LearnerKind::Svm, scores.len());
        model.weights.copy_from_slice(scores);
        let xs = (0..scores.len())
            .map(|i| SparseExample::new(i, vec![(i as u32, 1.0)], None).unwrap())
            .collect();
        (model, xs)
    }

    #[test]
    fn all_outside_margin_stops() {
        let (m, xs) = pool(&[1.5, -2.0, 1.0]);
        let refs: Vec<_> = xs.iter().collect();
        let d = sc2000_decide(&m, &refs, 3);
        assert!(d.stop);
        assert_eq!(d.reason, StopReason::Fired);
    }

    #[test]
    fn point_inside_margin_continues() {
        let (m, xs) = pool(&[1.5, 0.2]);
        let refs: Vec<_> = xs.iter().collect();
        let d = sc2000_decide(&m, &refs, 3);
        assert!(!d.stop);
        assert_eq!(d.value, Some(1.0));
    }

    #[test]
    fn empty_pool_stops() {
        let (m, _) = pool(&[]);
        let d = sc2000_decide(&m, &[], 9);
        assert!(d.stop);
        assert_eq!(d.reason, StopReason::PoolExhausted);
    }

    #[test]
    fn maxent_is_not_applicable() {
        let m = TrainedModel::<f64>::zero(LearnerKind::Maxent, 1);
        let d = sc2000_decide(&m, &[], 0);
        assert!(!d.stop);
        assert_eq!(d.reason, StopReason::NotApplicable);
    }
}
