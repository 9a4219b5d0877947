//! Agreement between two models' predictions on the same ordered examples:
//! observed agreement and Cohen's kappa,
//!
//! ```text
//! kappa = (A_o - A_e) / (1 - A_e),   A_e = sum_k P(k | p1) * P(k | p2)
//! ```
//!
//! where `P(k | p)` is the fraction of positions that `p` labels `k`.

use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Labels predicted by one model over the stop set, in stop-set order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PredictionVector {
    pub generation: usize,
    pub labels: Vec<Label>,
}

impl PredictionVector {
    pub fn new(generation: usize, labels: Vec<Label>) -> Self {
        PredictionVector { generation, labels }
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn positives(&self) -> usize {
        self.labels.iter().filter(|&&l| l == Label::Pos).count()
    }

    /// `+`/`-` string, one character per position.
    pub fn encode(&self) -> String {
        self.labels.iter().map(|l| l.as_char()).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AgreementValue<T> {
    pub observed: T,
    pub expected: T,
    pub kappa: T,
    /// Chance agreement was exactly 1 and kappa came from the fallback rule.
    pub degenerate: bool,
}

fn check(p1: &[Label], p2: &[Label]) -> Result<usize> {
    if p1.len() != p2.len() {
        return Err(Error::LengthMismatch {
            left: p1.len(),
            right: p2.len(),
        });
    }
    if p1.is_empty() {
        return Err(Error::Empty("prediction vectors"));
    }
    Ok(p1.len())
}

/// Fraction of positions where both vectors carry the same label.
pub fn percent_agreement<T: Scalar>(p1: &[Label], p2: &[Label]) -> Result<T> {
    let n = check(p1, p2)?;
    let same = p1.iter().zip(p2).filter(|(a, b)| a == b).count();
    Ok(T::of_usize(same) / T::of_usize(n))
}

/// Cohen's kappa.
///
/// When both vectors are constant and identical in class distribution,
/// chance agreement is 1 and the ratio is undefined; kappa is then 1 if the
/// vectors agree everywhere and 0 otherwise, and `degenerate` is set.
pub fn kappa<T: Scalar>(p1: &[Label], p2: &[Label]) -> Result<AgreementValue<T>> {
    let n = check(p1, p2)?;
    let same = p1.iter().zip(p2).filter(|(a, b)| a == b).count();
    let pos1 = p1.iter().filter(|&&l| l == Label::Pos).count();
    let pos2 = p2.iter().filter(|&&l| l == Label::Pos).count();
    // Chance agreement numerator over n^2, kept in integers so the
    // degenerate case is detected exactly.
    let chance = (pos1 as u128) * (pos2 as u128) + ((n - pos1) as u128) * ((n - pos2) as u128);
    let total = (n as u128) * (n as u128);

    let nf = T::of_usize(n);
    let observed = T::of_usize(same) / nf;
    let expected = T::from_u128(chance).expect("finite") / T::from_u128(total).expect("finite");
    if chance == total {
        let kappa = if same == n { T::one() } else { T::zero() };
        return Ok(AgreementValue {
            observed,
            expected,
            kappa,
            degenerate: true,
        });
    }
    let kappa = (observed - expected) / (T::one() - expected);
    Ok(AgreementValue {
        observed,
        expected,
        kappa: kappa.max(-T::one()).min(T::one()),
        degenerate: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use Label::{Neg as N, Pos as P};

    #[test]
    fn percent_agreement_examples() {
        assert_eq!(percent_agreement::<f64>(&[P, N, P], &[P, N, P]).unwrap(), 1.0);
        assert_eq!(percent_agreement::<f64>(&[P, P, N, N], &[P, N, N, N]).unwrap(), 0.75);
        assert_eq!(percent_agreement::<f64>(&[P, P], &[N, N]).unwrap(), 0.0);
        assert!(matches!(
            percent_agreement::<f64>(&[P], &[P, N]),
            Err(Error::LengthMismatch { left: 1, right: 2 })
        ));
    }

    #[test]
    fn kappa_examples() {
        let k = kappa::<f64>(&[P, P, N, N], &[P, N, N, N]).unwrap();
        assert_eq!((k.observed, k.expected, k.kappa), (0.75, 0.5, 0.5));

        let k = kappa::<f64>(&[P, N, P, N], &[P, N, P, N]).unwrap();
        assert_eq!((k.observed, k.expected, k.kappa), (1.0, 0.5, 1.0));

        let k = kappa::<f64>(&[P, P, N, N], &[N, N, P, P]).unwrap();
        assert_eq!((k.observed, k.expected, k.kappa), (0.0, 0.5, -1.0));

        let k = kappa::<f64>(&[P, P, P], &[P, P, P]).unwrap();
        assert!(k.degenerate);
        assert_eq!((k.expected, k.kappa), (1.0, 1.0));
    }

    #[test]
    fn kappa_rejects_mismatch() {
        assert!(kappa::<f64>(&[P, N], &[P]).is_err());
        assert!(kappa::<f64>(&[], &[]).is_err());
    }

    #[test]
    fn opposite_constants_are_not_degenerate() {
        // A_e = 0 here: all + against all -.
        let k = kappa::<f64>(&[P, P], &[N, N]).unwrap();
        assert!(!k.degenerate);
        assert_eq!(k.kappa, 0.0);
    }

    fn labels(len: usize) -> impl Strategy<Value = Vec<Label>> {
        prop::collection::vec(prop::bool::ANY.prop_map(|b| if b { P } else { N }), len)
    }

    fn pair() -> impl Strategy<Value = (Vec<Label>, Vec<Label>)> {
        (1usize..50).prop_flat_map(|n| (labels(n), labels(n)))
    }

    proptest! {
        #[test]
        fn symmetric_and_bounded((a, b) in pair()) {
            let ab = kappa::<f64>(&a, &b).unwrap();
            let ba = kappa::<f64>(&b, &a).unwrap();
            prop_assert_eq!(ab, ba);
            prop_assert!((-1.0..=1.0).contains(&ab.kappa));
            prop_assert_eq!(ab.kappa == 1.0, ab.observed == 1.0);
        }

        #[test]
        fn label_swap_invariant((a, b) in pair()) {
            let fa: Vec<_> = a.iter().map(|l| l.flip()).collect();
            let fb: Vec<_> = b.iter().map(|l| l.flip()).collect();
            let k = kappa::<f64>(&a, &b).unwrap();
            let f = kappa::<f64>(&fa, &fb).unwrap();
            prop_assert_eq!(k.observed, f.observed);
            prop_assert!((k.expected - f.expected).abs() < 1e-15);
            prop_assert!((k.kappa - f.kappa).abs() < 1e-12);
        }
    }
}
