use std::collections::BTreeMap;

use crate::scalar::Scalar;

use super::{
    ls2008_decide, min_err_decide, sc2000_from_count, sp_decide, v2008_decide, AgreementWindow, Criterion,
    Ls2008Config, SpConfig, StopDecision, StopReason, ZwhConfig, ZwhState,
};

#[derive(Clone, Debug, PartialEq)]
pub struct StoppingConfig<T> {
    pub sp: SpConfig<T>,
    pub zwh: ZwhConfig<T>,
    pub ls: Ls2008Config<T>,
}

impl<T: Scalar> Default for StoppingConfig<T> {
    fn default() -> Self {
        StoppingConfig {
            sp: SpConfig::default(),
            zwh: ZwhConfig::default(),
            ls: Ls2008Config::default(),
        }
    }
}

/// Everything the criteria look at for one trained model `M_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct Observation<T> {
    pub iteration: usize,
    /// Labels revealed so far, seed set included.
    pub labeled: usize,
    /// Size of the batch whose labels produced this model (0 for `M_0`).
    pub queried: usize,
    /// Kappa between `M_{n-1}` and `M_n` on the stop set.
    pub kappa: Option<T>,
    /// Accuracy of `M_{n-1}` on the batch it selected.
    pub batch_accuracy: Option<T>,
    /// Mean confidence of `M_{n-1}` on the batch it selected.
    pub batch_confidence: Option<T>,
    /// Mean confidence of `M_n` over the remaining unlabeled pool.
    pub pool_confidence: Option<T>,
    /// Unlabeled examples with `|score| < 1` under `M_n`; `None` for maxent.
    pub inside_margin: Option<usize>,
    pub remaining: usize,
    /// Remaining unlabeled examples whose label flips from `M_{n-1}` to `M_n`.
    pub prediction_changes: Option<usize>,
}

/// Where a criterion would have stopped the run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StopPoint {
    pub criterion: Criterion,
    pub iteration: Option<usize>,
    pub reason: StopReason,
}

/// Feeds observations, one per model in order, through every criterion.
///
/// Replaying a recorded sequence of observations reproduces the decisions
/// made live, since this is the only place decisions are computed.
#[derive(Clone, Debug)]
pub struct CriteriaSuite<T> {
    criteria: Vec<Criterion>,
    config: StoppingConfig<T>,
    window: AgreementWindow<T>,
    zwh: ZwhState<T>,
    ls_history: Vec<T>,
    v_history: Vec<T>,
    first: BTreeMap<Criterion, (usize, StopReason)>,
    not_applicable: bool,
    last: Option<(usize, usize)>,
}

impl<T: Scalar> CriteriaSuite<T> {
    pub fn new(criteria: &[Criterion], config: StoppingConfig<T>) -> Self {
        CriteriaSuite {
            criteria: criteria.to_vec(),
            window: AgreementWindow::new(config.sp.window),
            zwh: ZwhState::new(config.zwh.clone()),
            config,
            ls_history: Vec::new(),
            v_history: Vec::new(),
            first: BTreeMap::new(),
            not_applicable: false,
            last: None,
        }
    }

    pub fn criteria(&self) -> &[Criterion] {
        &self.criteria
    }

    pub fn config(&self) -> &StoppingConfig<T> {
        &self.config
    }

    /// Current ZWH2008 accuracy threshold.
    pub fn zwh_threshold(&self) -> T {
        self.zwh.threshold
    }

    /// Decisions for `M_n`, one per configured criterion in configured order.
    pub fn observe(&mut self, obs: &Observation<T>) -> Vec<StopDecision<T>> {
        let n = obs.iteration;
        if let Some(k) = obs.kappa {
            self.window.push(k);
        }
        if let Some(c) = obs.batch_confidence {
            self.ls_history.extend(std::iter::repeat_n(c, obs.queried));
        }
        if let Some(c) = obs.pool_confidence {
            self.v_history.push(c);
        }
        self.not_applicable = obs.inside_margin.is_none();
        self.last = Some((n, obs.remaining));

        let sp = sp_decide(&self.window, &self.config.sp, n);
        let sc = sc2000_from_count(obs.inside_margin, obs.remaining, n);
        let ls = ls2008_decide(&self.ls_history, &self.config.ls, n);
        let v = v2008_decide(&self.v_history, n);
        let (zwh, minerr) = match (obs.batch_accuracy, obs.prediction_changes) {
            (Some(acc), Some(changes)) => {
                let (d, next) = self.zwh.decide(acc, changes, n);
                self.zwh = next;
                (d, min_err_decide(acc, self.config.zwh.initial_threshold, n))
            }
            _ => (
                StopDecision::new(Criterion::Zwh2008, n, false)
                    .with_reason(StopReason::InsufficientHistory)
                    .with_threshold(self.zwh.threshold),
                StopDecision::new(Criterion::MinErr, n, false)
                    .with_reason(StopReason::InsufficientHistory)
                    .with_threshold(self.config.zwh.initial_threshold),
            ),
        };

        let all = [sp, v, sc, zwh, ls, minerr];
        let mut out = Vec::with_capacity(self.criteria.len());
        for c in &self.criteria {
            let d = all.iter().find(|d| d.criterion == *c).expect("every criterion decided").clone();
            if d.stop {
                self.first.entry(*c).or_insert((n, d.reason));
            }
            out.push(d);
        }
        out
    }

    /// First stop per configured criterion. Criteria that never fired stop
    /// at the final iteration when the pool ran out, and are censored
    /// otherwise.
    pub fn stop_points(&self) -> Vec<StopPoint> {
        self.criteria
            .iter()
            .map(|&criterion| {
                if let Some(&(iteration, reason)) = self.first.get(&criterion) {
                    return StopPoint {
                        criterion,
                        iteration: Some(iteration),
                        reason,
                    };
                }
                if criterion == Criterion::Sc2000 && self.not_applicable {
                    return StopPoint {
                        criterion,
                        iteration: None,
                        reason: StopReason::NotApplicable,
                    };
                }
                match self.last {
                    Some((iteration, 0)) => StopPoint {
                        criterion,
                        iteration: Some(iteration),
                        reason: StopReason::PoolExhausted,
                    },
                    _ => StopPoint {
                        criterion,
                        iteration: None,
                        reason: StopReason::Censored,
                    },
                }
            })
            .collect()
    }

    /// Feeds a whole recorded sequence and returns the stop points.
    pub fn replay<'a>(
        criteria: &[Criterion],
        config: StoppingConfig<T>,
        observations: impl IntoIterator<Item = &'a Observation<T>>,
    ) -> Vec<StopPoint> {
        let mut suite = Self::new(criteria, config);
        for obs in observations {
            suite.observe(obs);
        }
        suite.stop_points()
    }
}
