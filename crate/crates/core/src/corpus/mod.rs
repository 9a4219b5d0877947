//! Datasets: sparse examples, bag-of-words featurization, the svmlight line
//! format, directory-per-class text corpora, a seeded synthetic generator and
//! cross-validation folds.

mod example;
mod folds;
pub mod svmlight;
pub mod synth;
mod textdir;
mod vocab;

pub use example::{Label, SparseExample};
pub use folds::{make_folds, read_fold_manifest, write_fold_manifest, FoldPlan};
pub use textdir::{load_text_dir, RawDocument};
pub use vocab::{tokenize, tokenize_and_binarize, Vocabulary, DEFAULT_MIN_COUNT};
