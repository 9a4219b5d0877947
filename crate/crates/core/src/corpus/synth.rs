//! Seeded synthetic two-class data with text-like sparsity.
//!
//! Each example draws a latent vector `z ~ N(mu_c, I)` where the class mean
//! `mu_c` is zero except on the informative coordinates: the first half of
//! them are shifted up for positives and the second half for negatives.
//! Feature `j` is present (value 1) iff `z_j > cutoff`, which makes the data
//! sparse and binary like bag-of-words vectors. The classes overlap, so the
//! task is not separable; `label_noise` optionally flips a fraction of labels
//! on top of that.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::scalar::Scalar;
use crate::seeds;

use super::{Label, SparseExample};

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticConfig {
    pub examples: usize,
    pub dimensions: usize,
    pub informative: usize,
    pub shift: f64,
    pub cutoff: f64,
    pub positive_fraction: f64,
    pub label_noise: f64,
    pub seed: u64,
}

impl Default for SyntheticConfig {
    /// 5,556 examples, i.e. a 5,000-example pool per fold under 10-fold
    /// cross validation.
    fn default() -> Self {
        SyntheticConfig {
            examples: 5556,
            dimensions: 1000,
            informative: 60,
            shift: 1.0,
            cutoff: 2.0,
            positive_fraction: 0.4,
            label_noise: 0.0,
            seed: 20090531,
        }
    }
}

pub fn generate<T: Scalar>(config: &SyntheticConfig) -> Vec<SparseExample<T>> {
    let mut rng = seeds::rng(config.seed);
    let half = config.informative / 2;
    (0..config.examples)
        .map(|id| {
            let class = if rng.random::<f64>() < config.positive_fraction {
                Label::Pos
            } else {
                Label::Neg
            };
            let indices: Vec<u32> = (0..config.dimensions)
                .filter(|&j| {
                    let boosted = match class {
                        Label::Pos => j < half,
                        Label::Neg => j >= half && j < config.informative,
                    };
                    let mean = if boosted { config.shift } else { 0.0 };
                    let z: f64 = rng.sample(StandardNormal);
                    z + mean > config.cutoff
                })
                .map(|j| j as u32)
                .collect();
            let label = if rng.random::<f64>() < config.label_noise {
                class.flip()
            } else {
                class
            };
            SparseExample::binary(id, indices, Some(label))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeded_and_binary() {
        let cfg = SyntheticConfig {
            examples: 200,
            ..SyntheticConfig::default()
        };
        let a: Vec<SparseExample<f64>> = generate(&cfg);
        let b: Vec<SparseExample<f64>> = generate(&cfg);
        assert_eq!(a, b);
        assert_eq!(a.len(), 200);
        assert!(a.iter().all(|x| x.features().iter().all(|&(_, v)| v == 1.0)));
        let pos = a.iter().filter(|x| x.label == Some(Label::Pos)).count();
        assert!(pos > 40 && pos < 120, "{pos}");
        let mean_nnz = a.iter().map(|x| x.nnz()).sum::<usize>() as f64 / 200.0;
        assert!(mean_nnz > 10.0 && mean_nnz < 60.0, "{mean_nnz}");
    }
}
