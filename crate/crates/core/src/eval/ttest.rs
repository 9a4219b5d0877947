use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::ttable::{T90, T95, T99};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TTest<T> {
    /// `mean(d) / (sd(d) / sqrt(n))` for `d = a - b`; infinite when the
    /// differences are constant and nonzero, 0 when they are all zero.
    pub t: T,
    pub df: usize,
    pub critical: f64,
    pub mean_difference: T,
    pub significant: bool,
}

/// Two-sided critical value of Student's t at `confidence` (0.90, 0.95 or
/// 0.99). Degrees of freedom above 200 use a four-term Cornish-Fisher
/// expansion around the normal quantile.
pub fn critical_value(confidence: f64, df: usize) -> Result<f64> {
    let (table, z) = match confidence {
        c if (c - 0.90).abs() < 1e-9 => (&T90, 1.6448536269514722),
        c if (c - 0.95).abs() < 1e-9 => (&T95, 1.959963984540054),
        c if (c - 0.99).abs() < 1e-9 => (&T99, 2.5758293035489004),
        c => {
            return Err(Error::Config(format!(
                "no critical values for confidence {c}; use 0.90, 0.95 or 0.99"
            )))
        }
    };
    if df == 0 {
        return Err(Error::Config("t test needs at least one degree of freedom".into()));
    }
    if let Some(&v) = table.get(df - 1) {
        return Ok(v);
    }
    let nu = df as f64;
    let z2 = z * z;
    let g1 = (z2 + 1.0) * z / 4.0;
    let g2 = ((5.0 * z2 + 16.0) * z2 + 3.0) * z / 96.0;
    let g3 = (((3.0 * z2 + 19.0) * z2 + 17.0) * z2 - 15.0) * z / 384.0;
    let g4 = ((((79.0 * z2 + 776.0) * z2 + 1482.0) * z2 - 1920.0) * z2 - 945.0) * z / 92160.0;
    Ok(z + g1 / nu + g2 / nu.powi(2) + g3 / nu.powi(3) + g4 / nu.powi(4))
}

/// Two-sided matched-pairs t-test on `a[i] - b[i]` with `n - 1` degrees of
/// freedom.
pub fn matched_pairs_ttest<T: Scalar>(a: &[T], b: &[T], confidence: f64) -> Result<TTest<T>> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    if n < 2 {
        return Err(Error::Config("matched-pairs t test needs at least two pairs".into()));
    }
    let df = n - 1;
    let critical = critical_value(confidence, df)?;
    let diffs: Vec<T> = a.iter().zip(b).map(|(&x, &y)| x - y).collect();
    let nf = T::of_usize(n);
    let mean = diffs.iter().copied().sum::<T>() / nf;
    let var = diffs.iter().map(|&d| (d - mean) * (d - mean)).sum::<T>() / T::of_usize(df);
    let (t, significant) = if var == T::zero() {
        if mean == T::zero() {
            (T::zero(), false)
        } else {
            (mean.signum() * T::infinity(), true)
        }
    } else {
        let t = mean / (var / nf).sqrt();
        (t, t.abs().as_f64() > critical)
    };
    Ok(TTest {
        t,
        df,
        critical,
        mean_difference: mean,
        significant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use statrs::distribution::{ContinuousCDF, StudentsT};

    #[test]
    fn identical_samples_are_not_significant() {
        let a = [0.9f64, 0.8, 0.95];
        let r = matched_pairs_ttest(&a, &a, 0.95).unwrap();
        assert_eq!(r.t, 0.0);
        assert!(!r.significant);
    }

    #[test]
    fn constant_nonzero_difference_is_significant() {
        let a = [2.0f64, 3.0, 4.0, 5.0];
        let b = [1.0f64, 2.0, 3.0, 4.0];
        let r = matched_pairs_ttest(&a, &b, 0.95).unwrap();
        assert!(r.significant);
        assert!(r.t.is_infinite() && r.t > 0.0);
    }

    #[test]
    fn textbook_statistic() {
        let d = [2.1f64, 1.9, 2.0, 2.2, 1.8];
        let zeros = [0.0f64; 5];
        let r = matched_pairs_ttest(&d, &zeros, 0.95).unwrap();
        // Independent arithmetic: mean 2.0, sample sd sqrt(0.1 / 4).
        let sd = (0.1f64 / 4.0).sqrt();
        let expected = 2.0 / (sd / 5f64.sqrt());
        assert!((r.t - expected).abs() < 1e-9, "{} vs {expected}", r.t);
        assert_eq!(r.df, 4);
        assert!(r.significant);
    }

    #[test]
    fn swapping_negates() {
        let a = [0.91f64, 0.93, 0.88, 0.95, 0.9];
        let b = [0.9f64, 0.94, 0.85, 0.91, 0.89];
        let ab = matched_pairs_ttest(&a, &b, 0.95).unwrap();
        let ba = matched_pairs_ttest(&b, &a, 0.95).unwrap();
        assert_eq!(ab.t, -ba.t);
        assert_eq!(ab.significant, ba.significant);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            matched_pairs_ttest(&[1.0f64, 2.0], &[1.0], 0.95),
            Err(Error::LengthMismatch { .. })
        ));
    }

    #[test]
    fn table_agrees_with_inverse_cdf() {
        for &conf in &[0.90, 0.95, 0.99] {
            for df in (1..=400).chain([1000, 5000]) {
                let dist = StudentsT::new(0.0, 1.0, df as f64).unwrap();
                let exact = dist.inverse_cdf(1.0 - (1.0 - conf) / 2.0);
                let ours = critical_value(conf, df).unwrap();
                let tol = if df <= 200 { 1e-9 } else { 1e-7 };
                assert!((ours - exact).abs() < tol * exact, "conf {conf} df {df}: {ours} vs {exact}");
            }
        }
    }

    #[test]
    fn unsupported_confidence() {
        assert!(critical_value(0.8, 3).is_err());
    }
}
