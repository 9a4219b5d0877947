use crate::corpus::Label;
use crate::scalar::Scalar;

/// Confusion counts with respect to the positive class.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ConfusionCounts {
    pub tp: usize,
    pub fp: usize,
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionCounts {
    pub fn from_predictions(pairs: impl IntoIterator<Item = (Label, Label)>) -> Self {
        let mut c = ConfusionCounts::default();
        for (gold, predicted) in pairs {
            match (gold, predicted) {
                (Label::Pos, Label::Pos) => c.tp += 1,
                (Label::Neg, Label::Pos) => c.fp += 1,
                (Label::Pos, Label::Neg) => c.fn_ += 1,
                (Label::Neg, Label::Neg) => c.tn += 1,
            }
        }
        c
    }

    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    /// `tp / (tp + fp)`, or 0 with no positive predictions.
    pub fn precision<T: Scalar>(&self) -> T {
        ratio(self.tp, self.tp + self.fp)
    }

    /// `tp / (tp + fn)`, or 0 with no positive gold labels.
    pub fn recall<T: Scalar>(&self) -> T {
        ratio(self.tp, self.tp + self.fn_)
    }
}

fn ratio<T: Scalar>(num: usize, den: usize) -> T {
    if den == 0 {
        T::zero()
    } else {
        T::of_usize(num) / T::of_usize(den)
    }
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f_measure<T: Scalar>(c: &ConfusionCounts) -> T {
    let p: T = c.precision();
    let r: T = c.recall();
    if p + r == T::zero() {
        T::zero()
    } else {
        T::two() * p * r / (p + r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn textbook_example() {
        let c = ConfusionCounts {
            tp: 8,
            fp: 2,
            fn_: 4,
            tn: 0,
        };
        assert!((c.precision::<f64>() - 0.8).abs() < 1e-15);
        assert!((c.recall::<f64>() - 2.0 / 3.0).abs() < 1e-15);
        assert!((f_measure::<f64>(&c) - 0.727_272_727_272_727_3).abs() < 1e-12);
    }

    #[test]
    fn zero_denominators() {
        assert_eq!(f_measure::<f64>(&ConfusionCounts::default()), 0.0);
        let all_negative = ConfusionCounts {
            tp: 0,
            fp: 0,
            fn_: 5,
            tn: 7,
        };
        assert_eq!(f_measure::<f64>(&all_negative), 0.0);
    }

    #[test]
    fn equal_precision_and_recall() {
        let c = ConfusionCounts {
            tp: 3,
            fp: 1,
            fn_: 1,
            tn: 9,
        };
        assert!((f_measure::<f64>(&c) - 0.75).abs() < 1e-15);
    }

    fn brute_force(pairs: &[(bool, bool)]) -> f64 {
        let tp = pairs.iter().filter(|&&(g, p)| g && p).count() as f64;
        let predicted = pairs.iter().filter(|&&(_, p)| p).count() as f64;
        let actual = pairs.iter().filter(|&&(g, _)| g).count() as f64;
        if tp == 0.0 {
            0.0
        } else {
            2.0 * tp / (predicted + actual)
        }
    }

    proptest! {
        #[test]
        fn matches_count_formula_and_ignores_order(mut pairs in prop::collection::vec((any::<bool>(), any::<bool>()), 0..60)) {
            let to_label = |b: bool| if b { Label::Pos } else { Label::Neg };
            let f = |ps: &[(bool, bool)]| {
                f_measure::<f64>(&ConfusionCounts::from_predictions(ps.iter().map(|&(g, p)| (to_label(g), to_label(p)))))
            };
            let forward = f(&pairs);
            prop_assert!((forward - brute_force(&pairs)).abs() < 1e-12);
            pairs.reverse();
            prop_assert_eq!(forward, f(&pairs));
        }
    }
}
