//! F-measure, matched-pairs t-tests, cross-validation summaries and
//! learning-curve plots.

mod fmeasure;
mod plot;
mod summary;
mod ttable;
mod ttest;

pub use fmeasure::{f_measure, ConfusionCounts};
pub use plot::{average_curve, render_learning_curve, CurvePoint, StopMarker};
pub use summary::{summarize, CriterionSummary, FoldOutcome, Summary, ALL_COLUMN};
pub use ttest::{critical_value, matched_pairs_ttest, TTest};
