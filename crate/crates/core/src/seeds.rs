//! Sub-seed derivation.
//!
//! Every random draw in a run is keyed by a path of labels hanging off one
//! master seed: `derive_seed(parent, "fold-3")`, then
//! `derive_seed(fold_seed, "stop-set")`, and so on. The child seed is the
//! first eight bytes (little endian) of `SHA-256("{parent}/{key}")`.
//! Draws made under different keys are independent, so adding a consumer
//! never shifts the stream seen by another one.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use sha2::{Digest, Sha256};

pub const STOP_SET: &str = "stop-set";
pub const SEED_SET: &str = "seed-set";
pub const TRAIN: &str = "train";
pub const FOLDS: &str = "folds";

pub fn derive_seed(parent: u64, key: &str) -> u64 {
    let digest = Sha256::digest(format!("{parent}/{key}").as_bytes());
    let mut bytes = [0u8; 8];
    bytes.copy_from_slice(&digest[..8]);
    u64::from_le_bytes(bytes)
}

pub fn fold_seed(master: u64, fold: usize) -> u64 {
    derive_seed(master, &format!("fold-{fold}"))
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
