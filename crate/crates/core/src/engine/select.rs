use std::cmp::Ordering;

use crate::corpus::SparseExample;
use crate::error::{Error, Result};
use crate::learners::TrainedModel;
use crate::scalar::Scalar;

/// The `batch_size` candidates with the smallest uncertainty key, ties
/// broken by ascending id. `candidates` holds `(id, key)` pairs.
pub fn select_by_key<T: Scalar>(candidates: &mut [(usize, T)], batch_size: usize) -> Vec<usize> {
    let cmp = |a: &(usize, T), b: &(usize, T)| a.1.partial_cmp(&b.1).unwrap_or(Ordering::Equal).then(a.0.cmp(&b.0));
    let take = batch_size.min(candidates.len());
    if take == 0 {
        return Vec::new();
    }
    if take < candidates.len() {
        candidates.select_nth_unstable_by(take - 1, cmp);
    }
    let head = &mut candidates[..take];
    head.sort_unstable_by(cmp);
    head.iter().map(|&(id, _)| id).collect()
}

/// Uncertainty sampling: the pool examples closest to the decision boundary.
pub fn select_batch<T: Scalar>(
    model: &TrainedModel<T>,
    pool: &[&SparseExample<T>],
    batch_size: usize,
) -> Result<Vec<usize>> {
    if pool.is_empty() {
        return Err(Error::Empty("unlabeled pool"));
    }
    let mut keyed: Vec<(usize, T)> = pool.iter().map(|x| (x.id, model.uncertainty(x))).collect();
    Ok(select_by_key(&mut keyed, batch_size))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::learners::LearnerKind;

    fn fixture(scores: &[(usize, f64)]) -> (TrainedModel<f64>, Vec<SparseExample<f64>>) {
        let mut m = TrainedModel::zero(LearnerKind::Svm, scores.len());
        let xs = scores
            .iter()
            .enumerate()
            .map(|(slot, &(id, s))| {
                m.weights[slot] = s;
                SparseExample::new(id, vec![(slot as u32, 1.0)], None).unwrap()
            })
            .collect();
        (m, xs)
    }

    #[test]
    fn closest_to_hyperplane_first() {
        let (m, xs) = fixture(&[(1, 0.5), (2, -0.1), (3, 2.0)]);
        let refs: Vec<_> = xs.iter().collect();
        assert_eq!(select_batch(&m, &refs, 2).unwrap(), vec![2, 1]);
    }

    #[test]
    fn ties_go_to_smaller_id() {
        let (m, xs) = fixture(&[(9, 0.3), (4, -0.3)]);
        let refs: Vec<_> = xs.iter().collect();
        assert_eq!(select_batch(&m, &refs, 1).unwrap(), vec![4]);
    }

    #[test]
    fn small_pool_returns_everything() {
        let (m, xs) = fixture(&[(0, 1.0), (1, 2.0), (2, 3.0), (3, 4.0), (4, 5.0)]);
        let refs: Vec<_> = xs.iter().collect();
        assert_eq!(select_batch(&m, &refs, 20).unwrap().len(), 5);
    }

    #[test]
    fn empty_pool_errors() {
        let m = TrainedModel::<f64>::zero(LearnerKind::Svm, 0);
        assert!(select_batch(&m, &[], 3).is_err());
    }
}
