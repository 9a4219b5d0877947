//! Pool-based active learning with stopping criteria.
//!
//! The engine simulates annotation on a labeled pool: it trains a linear
//! model on a random seed set, repeatedly queries the examples closest to the
//! decision boundary, and records per-iteration statistics in a [`RunTrace`].
//! Stopping criteria ([`stopping`]) are evaluated on that record without
//! influencing it, so one run yields the stop point of every criterion.
//!
//! The numeric code is generic over [`Scalar`] (`f32` or `f64`); the aliases
//! at the crate root fix it to `f64`.

pub mod agreement;
pub mod corpus;
pub mod engine;
pub mod error;
pub mod eval;
pub mod learners;
pub mod scalar;
pub mod seeds;
pub mod stopping;

pub use corpus::{Label, SparseExample};
pub use engine::{run_active_learning, ALConfig, RunTrace};
pub use error::{Error, Result};
pub use learners::{train, LearnerKind, TrainConfig, TrainedModel};
pub use scalar::Scalar;
pub use stopping::{Criterion, StopPoint, StopReason};

pub type Example = SparseExample<f64>;
pub type Model = TrainedModel<f64>;
pub type Trace = RunTrace<f64>;
pub type Config = ALConfig<f64>;
pub type Trainer = TrainConfig<f64>;
pub type Stopping = stopping::StoppingConfig<f64>;
pub type Summary = eval::Summary<f64>;

pub type Example32 = SparseExample<f32>;
pub type Model32 = TrainedModel<f32>;
pub type Trace32 = RunTrace<f32>;
