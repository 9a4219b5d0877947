use rand::seq::index;

use crate::seeds;

/// Fixed, ordered list of pool example ids whose predictions are compared
/// between consecutive models. Members stay in the set even after they are
/// queried and labeled.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StopSet {
    pub ids: Vec<usize>,
    pub requested: usize,
}

impl StopSet {
    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn clamped(&self) -> bool {
        self.ids.len() < self.requested
    }
}

/// Uniform sample without replacement, in random (then frozen) order. A
/// request larger than the pool is clamped to the whole pool.
pub fn draw_stop_set(pool_ids: &[usize], size: usize, seed: u64) -> StopSet {
    let mut sorted = pool_ids.to_vec();
    sorted.sort_unstable();
    let take = size.min(sorted.len());
    if take < size {
        log::warn!(
            "stop set of {size} requested from a pool of {}; using the whole pool",
            sorted.len()
        );
    }
    let mut rng = seeds::rng(seed);
    let ids = index::sample(&mut rng, sorted.len(), take)
        .into_iter()
        .map(|i| sorted[i])
        .collect();
    StopSet { ids, requested: size }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_pool_when_sizes_match() {
        let ids: Vec<usize> = (0..10).collect();
        let s = draw_stop_set(&ids, 10, 3);
        let mut sorted = s.ids.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, ids);
        assert!(!s.clamped());
    }

    #[test]
    fn deterministic() {
        let ids: Vec<usize> = (0..5000).collect();
        let a = draw_stop_set(&ids, 2000, 11);
        let b = draw_stop_set(&ids, 2000, 11);
        assert_eq!(a, b);
        let mut u = a.ids.clone();
        u.sort_unstable();
        u.dedup();
        assert_eq!(u.len(), 2000);
    }

    #[test]
    fn oversize_is_clamped() {
        let ids: Vec<usize> = (0..100).collect();
        let s = draw_stop_set(&ids, 2000, 1);
        assert_eq!(s.len(), 100);
        assert!(s.clamped());
    }
}
