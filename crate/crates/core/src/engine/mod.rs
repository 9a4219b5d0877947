//! The pool-based active learning loop.
//!
//! Gold labels on the pool play the annotator. Each iteration trains a model,
//! records everything the stopping criteria need, and queries the next batch
//! by uncertainty. Criteria only observe: the loop always runs until the pool
//! is empty (or `max_iterations` batches were queried), so every criterion
//! is measured on the same trajectory.

mod select;
mod stopset;
mod trace;

use std::collections::{BTreeSet, HashMap};

use rand::seq::index;
use sha2::{Digest, Sha256};

use crate::agreement::{kappa, PredictionVector};
use crate::corpus::{Label, SparseExample};
use crate::error::{Error, Result};
use crate::eval::{f_measure, ConfusionCounts};
use crate::learners::{train_warm, LearnerKind, TrainConfig, TrainedModel};
use crate::scalar::Scalar;
use crate::seeds;
use crate::stopping::{CriteriaSuite, Criterion, Observation, StoppingConfig};

pub use select::{select_batch, select_by_key};
pub use stopset::{draw_stop_set, StopSet};
pub use trace::{stop_points_from_decisions, RunTrace, TraceRow};

/// Datasets with at least this many examples get the large batch and seed
/// defaults.
pub const LARGE_DATASET: usize = 50_000;

/// Attempts at drawing a seed set that contains both classes.
pub const SEED_DRAWS: usize = 10;

#[derive(Clone, Debug, PartialEq)]
pub struct ALConfig<T> {
    pub batch_size: usize,
    pub seed_size: usize,
    pub train: TrainConfig<T>,
    pub stopping: StoppingConfig<T>,
    pub criteria: Vec<Criterion>,
    /// Maximum number of batches to query; `None` runs to pool exhaustion.
    pub max_iterations: Option<usize>,
    pub rng_seed: u64,
    /// Keep every model's stop-set predictions in the trace.
    pub keep_predictions: bool,
    /// Start each SVM from the previous model's dual solution. Models then
    /// agree with cold-started ones only to within the solver tolerance.
    pub warm_start: bool,
}

impl<T: Scalar> ALConfig<T> {
    /// Batch 20 and seed 100 below 50,000 total examples, 200 and 1,000 from
    /// there on.
    pub fn for_dataset_size(total_examples: usize, kind: LearnerKind) -> Self {
        let (batch_size, seed_size) = if total_examples < LARGE_DATASET {
            (20, 100)
        } else {
            (200, 1000)
        };
        ALConfig {
            batch_size,
            seed_size,
            train: TrainConfig::new(kind),
            stopping: StoppingConfig::default(),
            criteria: Criterion::DEFAULT.to_vec(),
            max_iterations: None,
            rng_seed: 0,
            keep_predictions: false,
            warm_start: true,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        if self.seed_size < 2 {
            return Err(Error::Config("seed set must hold at least 2 examples".into()));
        }
        self.train.validate()?;
        self.stopping.sp.validate()
    }
}

/// Hex SHA-256 of the `+`/`-` encoding of a prediction vector.
pub fn prediction_digest(labels: &[Label]) -> String {
    let encoded: String = labels.iter().map(|l| l.as_char()).collect();
    hex::encode(Sha256::digest(encoded.as_bytes()))
}

fn draw_seed_set<T: Scalar>(pool: &[SparseExample<T>], size: usize, seed: u64) -> (Vec<usize>, bool) {
    let mut rng = seeds::rng(seed);
    let mut draw = Vec::new();
    for _ in 0..SEED_DRAWS {
        draw = index::sample(&mut rng, pool.len(), size).into_vec();
        let first = pool[draw[0]].label;
        if draw.iter().any(|&p| pool[p].label != first) {
            return (draw, true);
        }
    }
    (draw, false)
}

/// Runs active learning on `pool` (gold labels act as the oracle) and
/// evaluates each model on `test`.
pub fn run_active_learning<T: Scalar>(
    pool: &[SparseExample<T>],
    test: &[SparseExample<T>],
    config: &ALConfig<T>,
) -> Result<RunTrace<T>> {
    config.validate()?;
    if pool.len() <= config.seed_size {
        return Err(Error::Config(format!(
            "pool of {} examples must be larger than the seed set ({})",
            pool.len(),
            config.seed_size
        )));
    }
    if test.is_empty() {
        return Err(Error::Empty("test set"));
    }
    let gold = |x: &SparseExample<T>| x.label.ok_or(Error::MissingLabel { id: x.id });
    let pool_gold = pool.iter().map(gold).collect::<Result<Vec<Label>>>()?;
    let test_gold = test.iter().map(gold).collect::<Result<Vec<Label>>>()?;

    let mut position: HashMap<usize, usize> = HashMap::with_capacity(pool.len());
    for (p, x) in pool.iter().enumerate() {
        if position.insert(x.id, p).is_some() {
            return Err(Error::Config(format!("duplicate example id {} in pool", x.id)));
        }
    }

    let pool_ids: Vec<usize> = pool.iter().map(|x| x.id).collect();
    let stop_set = draw_stop_set(
        &pool_ids,
        config.stopping.sp.stop_set_size,
        seeds::derive_seed(config.rng_seed, seeds::STOP_SET),
    );
    let stop_positions: Vec<usize> = stop_set.ids.iter().map(|id| position[id]).collect();

    let (seed_positions, mixed) = draw_seed_set(
        pool,
        config.seed_size,
        seeds::derive_seed(config.rng_seed, seeds::SEED_SET),
    );
    if !mixed {
        if config.train.kind == LearnerKind::Maxent {
            return Err(Error::SingleClass(pool_gold[seed_positions[0]]));
        }
        log::warn!("seed set is single-class after {SEED_DRAWS} draws; starting from a constant classifier");
    }

    let mut train_config = config.train.clone();
    train_config.seed = seeds::derive_seed(config.rng_seed, seeds::TRAIN);
    // Dual variables of the last SVM, indexed by pool position.
    let mut dual = vec![T::zero(); pool.len()];
    let mut fit = |labeled: &BTreeSet<usize>| -> Result<TrainedModel<T>> {
        let xs: Vec<&SparseExample<T>> = labeled.iter().map(|&p| &pool[p]).collect();
        let initial: Vec<T> = labeled.iter().map(|&p| dual[p]).collect();
        let warm = config.warm_start && initial.iter().any(|&a| a != T::zero());
        let model = train_warm(&xs, &train_config, warm.then_some(initial.as_slice()))?;
        if config.warm_start && model.meta.dual.len() == labeled.len() {
            for (&p, &a) in labeled.iter().zip(&model.meta.dual) {
                dual[p] = a;
            }
        }
        Ok(model)
    };

    let mut labeled: BTreeSet<usize> = seed_positions.iter().copied().collect();
    let mut unlabeled: Vec<usize> = (0..pool.len()).filter(|p| !labeled.contains(p)).collect();
    let mut model = fit(&labeled)?;
    let mut suite = CriteriaSuite::new(&config.criteria, config.stopping.clone());

    let mut rows = Vec::new();
    let mut predictions = Vec::new();
    let mut prev_stop: Option<Vec<Label>> = None;
    // Scores of the previous model, indexed by pool position.
    let mut prev_scores: Vec<T> = Vec::new();
    let mut queried: Vec<usize> = Vec::new();
    let mut batch_stats: Option<(T, T)> = None;

    for iteration in 0.. {
        let stop_labels: Vec<Label> = stop_positions.iter().map(|&p| model.predict(&pool[p])).collect();
        let agreement = match &prev_stop {
            Some(prev) => Some(kappa::<T>(prev, &stop_labels)?),
            None => None,
        };

        let scores: Vec<(usize, T)> = unlabeled.iter().map(|&p| (p, model.score(&pool[p]))).collect();
        let prediction_changes = (iteration > 0).then(|| {
            scores
                .iter()
                .filter(|&&(p, s)| Label::from_score(prev_scores[p]) != Label::from_score(s))
                .count()
        });
        let pool_confidence = if scores.is_empty() {
            None
        } else {
            let total: T = scores.iter().map(|&(_, s)| model.confidence_of_score(s)).sum();
            Some(total / T::of_usize(scores.len()))
        };
        let inside_margin = match model.kind {
            LearnerKind::Svm => Some(scores.iter().filter(|&&(_, s)| s.abs() < T::one()).count()),
            LearnerKind::Maxent => None,
        };
        let confusion = ConfusionCounts::from_predictions(test.iter().zip(&test_gold).map(|(x, &g)| (g, model.predict(x))));

        let observation = Observation {
            iteration,
            labeled: labeled.len(),
            queried: queried.len(),
            kappa: agreement.map(|a| a.kappa),
            batch_accuracy: batch_stats.map(|(acc, _)| acc),
            batch_confidence: batch_stats.map(|(_, conf)| conf),
            pool_confidence,
            inside_margin,
            remaining: unlabeled.len(),
            prediction_changes,
        };
        let decisions = suite.observe(&observation);
        rows.push(TraceRow {
            observation,
            queried_ids: queried.iter().map(|&p| pool[p].id).collect(),
            stop_set_digest: prediction_digest(&stop_labels),
            agreement,
            confusion,
            f_measure: f_measure(&confusion),
            decisions,
        });
        if config.keep_predictions {
            predictions.push(PredictionVector::new(iteration, stop_labels.clone()));
        }

        if unlabeled.is_empty() || config.max_iterations == Some(iteration) {
            break;
        }

        let mut keyed: Vec<(usize, T)> = scores
            .iter()
            .map(|&(p, s)| (pool[p].id, model.uncertainty_of_score(s)))
            .collect();
        let batch: Vec<usize> = select_by_key(&mut keyed, config.batch_size)
            .into_iter()
            .map(|id| position[&id])
            .collect();

        let score_of: HashMap<usize, T> = scores.iter().copied().collect();
        let correct = batch
            .iter()
            .filter(|&&p| Label::from_score(score_of[&p]) == pool_gold[p])
            .count();
        let confidence: T = batch.iter().map(|&p| model.confidence_of_score(score_of[&p])).sum();
        let size = T::of_usize(batch.len());
        batch_stats = Some((T::of_usize(correct) / size, confidence / size));

        prev_scores.clear();
        prev_scores.resize(pool.len(), T::nan());
        for &(p, s) in &scores {
            prev_scores[p] = s;
        }
        prev_stop = Some(stop_labels);

        let chosen: BTreeSet<usize> = batch.iter().copied().collect();
        unlabeled.retain(|p| !chosen.contains(p));
        labeled.extend(batch.iter().copied());
        queried = batch;
        model = fit(&labeled)?;
    }

    Ok(RunTrace {
        criteria: config.criteria.clone(),
        rows,
        stop_points: suite.stop_points(),
        stop_set: Some(stop_set),
        predictions,
    })
}
