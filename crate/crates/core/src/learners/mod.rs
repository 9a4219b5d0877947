//! Binary linear classifiers: an L1-loss soft-margin SVM trained by dual
//! coordinate descent and an L2-regularized maximum-entropy (logistic
//! regression) model trained by L-BFGS.

mod maxent;
mod svm;

use std::fmt;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::corpus::{Label, SparseExample};
use crate::error::{Error, Result};
use crate::scalar::{logistic, Scalar};

pub use maxent::{maxent_objective, maxent_objective_and_gradient};
pub use svm::{svm_dual_objective, svm_primal_objective};

/// Bias given to the constant classifier returned for a single-class SVM
/// training set, scaled by the label's sign.
pub const CONSTANT_BIAS: f64 = 1e6;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum LearnerKind {
    Svm,
    Maxent,
}

impl fmt::Display for LearnerKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            LearnerKind::Svm => "svm",
            LearnerKind::Maxent => "maxent",
        })
    }
}

impl FromStr for LearnerKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "svm" => Ok(LearnerKind::Svm),
            "maxent" => Ok(LearnerKind::Maxent),
            other => Err(Error::Config(format!("unknown learner {other:?} (expected svm or maxent)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainConfig<T> {
    pub kind: LearnerKind,
    /// SVM cost `C`, multiplying the summed hinge losses.
    pub cost: T,
    /// Maxent L2 strength `lambda`, against the mean log loss.
    pub lambda: T,
    /// SVM: relative duality gap. Maxent: infinity norm of the gradient.
    pub tolerance: T,
    /// SVM: passes over the data. Maxent: L-BFGS iterations.
    pub max_iterations: usize,
    pub seed: u64,
}

impl<T: Scalar> TrainConfig<T> {
    pub fn new(kind: LearnerKind) -> Self {
        TrainConfig {
            kind,
            cost: T::one(),
            lambda: T::of(1e-4),
            tolerance: T::of(1e-6),
            max_iterations: 10_000,
            seed: 0,
        }
    }

    pub fn svm() -> Self {
        Self::new(LearnerKind::Svm)
    }

    pub fn maxent() -> Self {
        Self::new(LearnerKind::Maxent)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.tolerance > T::zero()) {
            return Err(Error::Config("tolerance must be positive".into()));
        }
        if self.max_iterations == 0 {
            return Err(Error::Config("max_iterations must be at least 1".into()));
        }
        if !(self.cost > T::zero()) || !(self.lambda > T::zero()) {
            return Err(Error::Config("regularization parameters must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrainerMeta<T> {
    /// Final duality gap (SVM) or gradient norm (maxent).
    pub achieved: T,
    pub iterations: usize,
    pub objective: T,
    /// Constant classifier returned for single-class input.
    pub constant: bool,
    /// SVM dual variables in training-set order; empty otherwise.
    pub dual: Vec<T>,
}

/// Linear decision function `score(x) = w . x + b`.
#[derive(Clone, Debug, PartialEq)]
pub struct TrainedModel<T> {
    pub weights: Vec<T>,
    pub bias: T,
    pub kind: LearnerKind,
    pub meta: TrainerMeta<T>,
}

impl<T: Scalar> TrainedModel<T> {
    pub fn zero(kind: LearnerKind, dimension: usize) -> Self {
        TrainedModel {
            weights: vec![T::zero(); dimension],
            bias: T::zero(),
            kind,
            meta: TrainerMeta {
                achieved: T::zero(),
                iterations: 0,
                objective: T::zero(),
                constant: true,
                dual: Vec::new(),
            },
        }
    }

    /// Features beyond the model's weight vector contribute nothing.
    #[inline]
    pub fn score(&self, x: &SparseExample<T>) -> T {
        x.dot(&self.weights) + self.bias
    }

    #[inline]
    pub fn probability(&self, x: &SparseExample<T>) -> T {
        logistic(self.score(x))
    }

    /// `sign(score)`, with a zero score predicted as +1.
    #[inline]
    pub fn predict(&self, x: &SparseExample<T>) -> Label {
        Label::from_score(self.score(x))
    }

    /// Ordering key for uncertainty sampling; smaller is more uncertain.
    pub fn uncertainty(&self, x: &SparseExample<T>) -> T {
        self.uncertainty_of_score(self.score(x))
    }

    /// `|s|` for SVMs, `|logistic(s) - 0.5|` for maxent.
    pub fn uncertainty_of_score(&self, score: T) -> T {
        match self.kind {
            LearnerKind::Svm => score.abs(),
            LearnerKind::Maxent => (logistic(score) - T::half()).abs(),
        }
    }

    /// `|score|` for SVMs, `max(p, 1 - p)` for maxent.
    pub fn confidence(&self, x: &SparseExample<T>) -> T {
        self.confidence_of_score(self.score(x))
    }

    pub fn confidence_of_score(&self, score: T) -> T {
        match self.kind {
            LearnerKind::Svm => score.abs(),
            LearnerKind::Maxent => {
                let p = logistic(score);
                p.max(T::one() - p)
            }
        }
    }

    /// `|score| < 1`; a point exactly on the margin counts as outside.
    pub fn inside_margin(&self, x: &SparseExample<T>) -> Result<bool> {
        match self.kind {
            LearnerKind::Svm => Ok(self.score(x).abs() < T::one()),
            LearnerKind::Maxent => Err(Error::MarginUndefined),
        }
    }

    /// Text dump: `bias <v>` then `w <idx> <v>` for each nonzero weight.
    pub fn dump<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "bias {}", self.bias)?;
        for (i, w) in self.weights.iter().enumerate() {
            if *w != T::zero() {
                writeln!(out, "w {i} {w}")?;
            }
        }
        Ok(())
    }

    pub fn load_dump<R: BufRead>(input: R, kind: LearnerKind) -> Result<Self> {
        let mut model = Self::zero(kind, 0);
        for (no, line) in input.lines().enumerate() {
            let line = line?;
            let bad = |message: &str| Error::Parse {
                line: no + 1,
                message: format!("{message}: {line:?}"),
            };
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks.as_slice() {
                [] => {}
                ["bias", v] => model.bias = v.parse().map_err(|_| bad("bad bias"))?,
                ["w", i, v] => {
                    let i: usize = i.parse().map_err(|_| bad("bad index"))?;
                    if model.weights.len() <= i {
                        model.weights.resize(i + 1, T::zero());
                    }
                    model.weights[i] = v.parse().map_err(|_| bad("bad weight"))?;
                }
                _ => return Err(bad("unrecognized line")),
            }
        }
        Ok(model)
    }
}

/// Trains a model on labeled examples.
///
/// An SVM given a single class returns a constant classifier (zero weights,
/// bias `+-1e6`) instead of failing; maxent requires both classes.
pub fn train<T: Scalar>(examples: &[&SparseExample<T>], config: &TrainConfig<T>) -> Result<TrainedModel<T>> {
    train_warm(examples, config, None)
}

/// Like [`train`], but an SVM starts from `initial_dual` (one value per
/// example, e.g. a previous model's `meta.dual` extended with zeros).
/// Ignored by maxent and when the length does not match.
pub fn train_warm<T: Scalar>(
    examples: &[&SparseExample<T>],
    config: &TrainConfig<T>,
    initial_dual: Option<&[T]>,
) -> Result<TrainedModel<T>> {
    config.validate()?;
    if examples.is_empty() {
        return Err(Error::Empty("training set"));
    }
    let labels = examples
        .iter()
        .map(|x| x.label.ok_or(Error::MissingLabel { id: x.id }))
        .collect::<Result<Vec<Label>>>()?;
    let dimension = examples.iter().map(|x| x.dimension()).max().unwrap_or(0);

    let first = labels[0];
    if labels.iter().all(|&l| l == first) {
        return match config.kind {
            LearnerKind::Svm => {
                let mut model = TrainedModel::zero(LearnerKind::Svm, dimension);
                model.bias = first.sign::<T>() * T::of(CONSTANT_BIAS);
                Ok(model)
            }
            LearnerKind::Maxent => Err(Error::SingleClass(first)),
        };
    }

    let ys: Vec<T> = labels.iter().map(|l| l.sign()).collect();
    match config.kind {
        LearnerKind::Svm => svm::train(examples, &ys, dimension, config, initial_dual),
        LearnerKind::Maxent => maxent::train(examples, &ys, dimension, config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ex(id: usize, feats: &[(u32, f64)], label: Label) -> SparseExample<f64> {
        SparseExample::new(id, feats.to_vec(), Some(label)).unwrap()
    }

    /// x = +1 is encoded as feature 0 = 1, x = -1 as feature 0 = -1.
    fn separable_pair() -> Vec<SparseExample<f64>> {
        vec![ex(0, &[(0, 1.0)], Label::Pos), ex(1, &[(0, -1.0)], Label::Neg)]
    }

    #[test]
    fn svm_separates_pair_with_unit_margin() {
        let data = separable_pair();
        let refs: Vec<_> = data.iter().collect();
        let cfg = TrainConfig {
            cost: 100.0,
            ..TrainConfig::svm()
        };
        let m = train(&refs, &cfg).unwrap();
        assert_eq!(m.predict(&data[0]), Label::Pos);
        assert_eq!(m.predict(&data[1]), Label::Neg);
        assert!(m.score(&data[0]) >= 1.0 - 1e-6);
        assert!(m.score(&data[1]) <= -1.0 + 1e-6);
    }

    #[test]
    fn single_class_svm_is_constant() {
        let data = [ex(0, &[(0, 1.0)], Label::Neg), ex(1, &[(2, 1.0)], Label::Neg)];
        let refs: Vec<_> = data.iter().collect();
        let m = train(&refs, &TrainConfig::svm()).unwrap();
        assert!(m.meta.constant);
        assert!(m.weights.iter().all(|&w| w == 0.0));
        assert_eq!(m.bias, -CONSTANT_BIAS);
        assert_eq!(m.predict(&ex(5, &[(1, 1.0)], Label::Pos)), Label::Neg);
    }

    #[test]
    fn single_class_maxent_errors() {
        let data = [ex(0, &[(0, 1.0)], Label::Pos)];
        let refs: Vec<_> = data.iter().collect();
        assert!(matches!(train(&refs, &TrainConfig::maxent()), Err(Error::SingleClass(Label::Pos))));
    }

    #[test]
    fn maxent_orders_probabilities() {
        let data = separable_pair();
        let refs: Vec<_> = data.iter().collect();
        let m = train(&refs, &TrainConfig::maxent()).unwrap();
        assert!(m.probability(&data[0]) > 0.5);
        assert!(m.probability(&data[1]) < 0.5);
    }

    #[test]
    fn missing_label_is_rejected() {
        let x = SparseExample::new(3, vec![(0, 1.0)], None).unwrap();
        assert!(matches!(train(&[&x], &TrainConfig::<f64>::svm()), Err(Error::MissingLabel { id: 3 })));
    }

    #[test]
    fn score_examples() {
        let zero = TrainedModel::<f64>::zero(LearnerKind::Svm, 4);
        assert_eq!(zero.score(&ex(0, &[(1, 3.0)], Label::Pos)), 0.0);

        let mut m = TrainedModel::<f64>::zero(LearnerKind::Svm, 4);
        m.weights[3] = 2.0;
        m.bias = -1.0;
        assert_eq!(m.score(&ex(0, &[(3, 1.0)], Label::Pos)), 1.0);
        assert_eq!(m.score(&ex(0, &[(10, 1.0), (20, 4.0)], Label::Pos)), -1.0);
    }

    fn svm_with_bias(bias: f64) -> TrainedModel<f64> {
        let mut m = TrainedModel::zero(LearnerKind::Svm, 0);
        m.bias = bias;
        m
    }

    #[test]
    fn uncertainty_and_margin() {
        let x = ex(0, &[], Label::Pos);
        assert_eq!(svm_with_bias(0.0).uncertainty(&x), 0.0);
        assert_eq!(svm_with_bias(-2.0).uncertainty(&x), 2.0);
        assert_eq!(svm_with_bias(1.0).uncertainty(&x), 1.0);
        assert!(svm_with_bias(0.99).inside_margin(&x).unwrap());
        assert!(!svm_with_bias(1.0).inside_margin(&x).unwrap());
        assert!(!svm_with_bias(-3.0).inside_margin(&x).unwrap());

        let maxent = TrainedModel::<f64>::zero(LearnerKind::Maxent, 0);
        assert_eq!(maxent.uncertainty(&x), 0.0);
        assert_eq!(maxent.confidence(&x), 0.5);
        assert!(matches!(maxent.inside_margin(&x), Err(Error::MarginUndefined)));
    }

    #[test]
    fn dump_round_trip() {
        let mut m = TrainedModel::<f64>::zero(LearnerKind::Svm, 6);
        m.weights[1] = 0.25;
        m.weights[5] = -3.5;
        m.bias = 0.125;
        let mut buf = Vec::new();
        m.dump(&mut buf).unwrap();
        assert_eq!(String::from_utf8(buf.clone()).unwrap(), "bias 0.125\nw 1 0.25\nw 5 -3.5\n");
        let back = TrainedModel::<f64>::load_dump(buf.as_slice(), LearnerKind::Svm).unwrap();
        assert_eq!(back.weights, m.weights);
        assert_eq!(back.bias, m.bias);
    }

    #[test]
    fn config_validation() {
        let mut cfg = TrainConfig::<f64>::svm();
        cfg.tolerance = 0.0;
        assert!(cfg.validate().is_err());
        cfg.tolerance = 1e-6;
        cfg.max_iterations = 0;
        assert!(cfg.validate().is_err());
    }
}
