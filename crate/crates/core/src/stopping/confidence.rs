use crate::scalar::Scalar;

use super::{Criterion, StopDecision, StopReason};

/// Consecutive strict decreases V2008 waits for.
pub const V2008_DROPS: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SlopeEstimator {
    LeastSquares,
    /// `(last - first) / (window - 1)`.
    Endpoints,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Ls2008Config<T> {
    pub window: usize,
    pub threshold: T,
    pub estimator: SlopeEstimator,
}

impl<T: Scalar> Default for Ls2008Config<T> {
    fn default() -> Self {
        Ls2008Config {
            window: 100,
            threshold: T::of(0.00005),
            estimator: SlopeEstimator::LeastSquares,
        }
    }
}

/// Ordinary least-squares slope of `values` against `0, 1, ..`. Zero for
/// fewer than two points.
pub fn least_squares_slope<T: Scalar>(values: &[T]) -> T {
    let n = values.len();
    if n < 2 {
        return T::zero();
    }
    let nf = T::of_usize(n);
    let x_mean = T::of_usize(n - 1) / T::two();
    let y_mean = values.iter().copied().sum::<T>() / nf;
    let mut sxy = T::zero();
    let mut sxx = T::zero();
    for (i, &y) in values.iter().enumerate() {
        let dx = T::of_usize(i) - x_mean;
        sxy += dx * (y - y_mean);
        sxx += dx * dx;
    }
    sxy / sxx
}

/// Stop once the slope of the last `window` confidence entries (one entry per
/// queried instance) falls below the threshold.
pub fn ls2008_decide<T: Scalar>(history: &[T], config: &Ls2008Config<T>, iteration: usize) -> StopDecision<T> {
    if history.len() < config.window || config.window < 2 {
        return StopDecision::new(Criterion::Ls2008, iteration, false)
            .with_reason(StopReason::InsufficientHistory)
            .with_threshold(config.threshold);
    }
    let tail = &history[history.len() - config.window..];
    let slope = match config.estimator {
        SlopeEstimator::LeastSquares => least_squares_slope(tail),
        SlopeEstimator::Endpoints => (tail[tail.len() - 1] - tail[0]) / T::of_usize(tail.len() - 1),
    };
    StopDecision::new(Criterion::Ls2008, iteration, slope < config.threshold)
        .with_value(slope)
        .with_threshold(config.threshold)
}

/// Stop when the aggregate confidence has strictly dropped three times in a
/// row.
pub fn v2008_decide<T: Scalar>(history: &[T], iteration: usize) -> StopDecision<T> {
    if history.len() < V2008_DROPS + 1 {
        return StopDecision::new(Criterion::V2008, iteration, false).with_reason(StopReason::InsufficientHistory);
    }
    let tail = &history[history.len() - V2008_DROPS - 1..];
    let drops = tail.windows(2).filter(|w| w[1] < w[0]).count();
    StopDecision::new(Criterion::V2008, iteration, drops == V2008_DROPS)
        .with_value(history[history.len() - 1])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flat_series_stops() {
        let h = vec![0.7f64; 100];
        let d = ls2008_decide(&h, &Ls2008Config::default(), 5);
        assert!(d.stop);
        assert_eq!(d.value, Some(0.0));
    }

    #[test]
    fn rising_line_continues() {
        let h: Vec<f64> = (0..100).map(|i| 0.2 + 0.01 * i as f64).collect();
        let d = ls2008_decide(&h, &Ls2008Config::default(), 5);
        assert!(!d.stop);
        assert!((d.value.unwrap() - 0.01).abs() < 1e-12);
    }

    #[test]
    fn short_history_continues() {
        let h = vec![0.5f64; 99];
        let d = ls2008_decide(&h, &Ls2008Config::default(), 5);
        assert!(!d.stop);
        assert_eq!(d.reason, StopReason::InsufficientHistory);
    }

    #[test]
    fn only_the_last_window_counts() {
        let mut h: Vec<f64> = (0..50).map(|i| i as f64).collect();
        h.extend(std::iter::repeat_n(3.0, 100));
        assert!(ls2008_decide(&h, &Ls2008Config::default(), 0).stop);
    }

    #[test]
    fn endpoint_estimator() {
        let cfg = Ls2008Config {
            window: 3,
            threshold: 0.1,
            estimator: SlopeEstimator::Endpoints,
        };
        let d = ls2008_decide(&[0.0f64, 5.0, 0.4], &cfg, 0);
        assert!((d.value.unwrap() - 0.2).abs() < 1e-12);
        assert!(!d.stop);
    }

    #[test]
    fn three_drops_stop() {
        assert!(v2008_decide(&[0.8f64, 0.79, 0.78, 0.77], 3).stop);
        assert!(!v2008_decide(&[0.8f64, 0.79, 0.80, 0.79], 3).stop);
        let d = v2008_decide(&[0.8f64, 0.79, 0.78], 2);
        assert!(!d.stop);
        assert_eq!(d.reason, StopReason::InsufficientHistory);
        assert!(!v2008_decide(&[0.8f64, 0.79, 0.79, 0.78], 3).stop);
    }
}
