use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Binary class label. `Pos` is +1, `Neg` is -1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Label {
    Neg,
    Pos,
}

impl Label {
    /// Sign of a decision value. A score of exactly zero maps to `Pos`.
    #[inline]
    pub fn from_score<T: Scalar>(score: T) -> Self {
        if score >= T::zero() {
            Label::Pos
        } else {
            Label::Neg
        }
    }

    #[inline]
    pub fn sign<T: Scalar>(self) -> T {
        match self {
            Label::Pos => T::one(),
            Label::Neg => -T::one(),
        }
    }

    #[inline]
    pub fn flip(self) -> Self {
        match self {
            Label::Pos => Label::Neg,
            Label::Neg => Label::Pos,
        }
    }

    pub fn as_char(self) -> char {
        match self {
            Label::Pos => '+',
            Label::Neg => '-',
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Label::Pos => "+1",
            Label::Neg => "-1",
        })
    }
}

/// One example: a sparse feature vector with strictly increasing indices and
/// an optional gold label.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseExample<T> {
    pub id: usize,
    features: Vec<(u32, T)>,
    pub label: Option<Label>,
}

impl<T: Scalar> SparseExample<T> {
    pub fn new(id: usize, features: Vec<(u32, T)>, label: Option<Label>) -> Result<Self> {
        for pair in features.windows(2) {
            if pair[1].0 <= pair[0].0 {
                return Err(Error::InvalidExample {
                    id,
                    message: format!("index {} follows {}", pair[1].0, pair[0].0),
                });
            }
        }
        if let Some((idx, _)) = features.iter().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidExample {
                id,
                message: format!("non-finite value at index {idx}"),
            });
        }
        Ok(SparseExample {
            id,
            features,
            label,
        })
    }

    /// Binary example over the given (already sorted, deduplicated) indices.
    pub(crate) fn binary(id: usize, indices: impl IntoIterator<Item = u32>, label: Option<Label>) -> Self {
        SparseExample {
            id,
            features: indices.into_iter().map(|i| (i, T::one())).collect(),
            label,
        }
    }

    pub fn features(&self) -> &[(u32, T)] {
        &self.features
    }

    pub fn nnz(&self) -> usize {
        self.features.len()
    }

    /// Largest feature index plus one, or zero for an empty vector.
    pub fn dimension(&self) -> usize {
        self.features.last().map_or(0, |&(i, _)| i as usize + 1)
    }

    /// Dot product against a dense vector; indices past its end contribute 0.
    #[inline]
    pub fn dot(&self, dense: &[T]) -> T {
        let mut acc = T::zero();
        for &(i, v) in &self.features {
            if let Some(&w) = dense.get(i as usize) {
                acc += w * v;
            }
        }
        acc
    }

    pub fn squared_norm(&self) -> T {
        self.features.iter().map(|&(_, v)| v * v).sum()
    }

    pub fn with_id(mut self, id: usize) -> Self {
        self.id = id;
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_unsorted_and_duplicate_indices() {
        assert!(SparseExample::<f64>::new(0, vec![(7, 1.0), (3, 1.0)], None).is_err());
        assert!(SparseExample::<f64>::new(0, vec![(3, 1.0), (3, 1.0)], None).is_err());
        assert!(SparseExample::<f64>::new(0, vec![(3, f64::NAN)], None).is_err());
        assert!(SparseExample::<f64>::new(0, vec![], Some(Label::Neg)).is_ok());
    }

    #[test]
    fn dot_ignores_out_of_range_indices() {
        let x = SparseExample::new(0, vec![(1, 2.0), (9, 5.0)], None).unwrap();
        assert_eq!(x.dot(&[1.0, 3.0]), 6.0);
        assert_eq!(x.dimension(), 10);
    }

    #[test]
    fn zero_score_ties_to_positive() {
        assert_eq!(Label::from_score(0.0f64), Label::Pos);
        assert_eq!(Label::from_score(-0.0f64), Label::Pos);
        assert_eq!(Label::from_score(-1e-300f64), Label::Neg);
    }
}
