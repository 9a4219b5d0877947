use std::fmt::Write as _;
use std::io::Write;

use crate::engine::RunTrace;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::stopping::{Criterion, StopReason};

use super::{matched_pairs_ttest, TTest};

/// Name of the pseudo-criterion for training on the whole pool.
pub const ALL_COLUMN: &str = "All";

#[derive(Clone, Debug, PartialEq)]
pub struct FoldOutcome<T> {
    pub fold: usize,
    pub annotations: Option<usize>,
    pub f_measure: Option<T>,
    pub reason: StopReason,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CriterionSummary<T> {
    pub name: String,
    /// `None` for the "All" row.
    pub criterion: Option<Criterion>,
    pub folds: Vec<FoldOutcome<T>>,
    pub mean_annotations: Option<T>,
    pub mean_f: Option<T>,
    pub censored: usize,
    pub not_applicable: bool,
    pub annotations_vs_sp: Option<TTest<T>>,
    pub f_vs_sp: Option<TTest<T>>,
}

impl<T: Scalar> CriterionSummary<T> {
    pub fn used(&self) -> usize {
        self.folds.iter().filter(|f| f.annotations.is_some()).count()
    }

    pub fn annotations_significant(&self) -> bool {
        self.annotations_vs_sp.is_some_and(|t| t.significant)
    }

    pub fn f_significant(&self) -> bool {
        self.f_vs_sp.is_some_and(|t| t.significant)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary<T> {
    pub rows: Vec<CriterionSummary<T>>,
    pub confidence: f64,
}

fn outcome<T: Scalar>(fold: usize, trace: &RunTrace<T>, criterion: Criterion) -> FoldOutcome<T> {
    match trace.stop_point(criterion) {
        Some(p) => {
            let hit = p.iteration.and_then(|it| trace.row(it));
            FoldOutcome {
                fold,
                annotations: hit.map(|r| r.labeled()),
                f_measure: hit.map(|r| r.f_measure),
                reason: p.reason,
            }
        }
        None => FoldOutcome {
            fold,
            annotations: None,
            f_measure: None,
            reason: StopReason::Censored,
        },
    }
}

fn build_row<T: Scalar>(name: String, criterion: Option<Criterion>, folds: Vec<FoldOutcome<T>>) -> CriterionSummary<T> {
    let annotations: Vec<T> = folds.iter().filter_map(|f| f.annotations.map(T::of_usize)).collect();
    let fs: Vec<T> = folds.iter().filter_map(|f| f.f_measure).collect();
    let censored = folds.iter().filter(|f| f.reason == StopReason::Censored).count();
    if censored > 0 {
        log::warn!("{name}: {censored} censored fold(s) excluded from the means");
    }
    CriterionSummary {
        not_applicable: !folds.is_empty() && folds.iter().all(|f| f.reason == StopReason::NotApplicable),
        mean_annotations: crate::scalar::mean(&annotations),
        mean_f: crate::scalar::mean(&fs),
        censored,
        name,
        criterion,
        folds,
        annotations_vs_sp: None,
        f_vs_sp: None,
    }
}

fn paired<T: Scalar>(a: &[FoldOutcome<T>], b: &[FoldOutcome<T>], pick: impl Fn(&FoldOutcome<T>) -> Option<T>) -> (Vec<T>, Vec<T>) {
    a.iter()
        .zip(b)
        .filter_map(|(x, y)| Some((pick(x)?, pick(y)?)))
        .unzip()
}

/// Per-criterion means over folds plus the "All" row (final model of each
/// fold that exhausted its pool). Each criterion is compared with SP by
/// matched-pairs t-tests on annotations and on F, over the folds where both
/// have a stop point.
pub fn summarize<T: Scalar>(traces: &[RunTrace<T>], confidence: f64) -> Result<Summary<T>> {
    let first = traces.first().ok_or(Error::Empty("no traces to summarize"))?;
    if traces.iter().any(|t| t.criteria != first.criteria) {
        return Err(Error::Trace("traces disagree on the criterion set".into()));
    }
    let mut rows: Vec<CriterionSummary<T>> = first
        .criteria
        .iter()
        .map(|&c| {
            let folds = traces.iter().enumerate().map(|(i, t)| outcome(i, t, c)).collect();
            build_row(c.display_name().to_string(), Some(c), folds)
        })
        .collect();

    let all = traces
        .iter()
        .enumerate()
        .map(|(fold, t)| match t.final_row().filter(|_| t.pool_exhausted()) {
            Some(r) => FoldOutcome {
                fold,
                annotations: Some(r.labeled()),
                f_measure: Some(r.f_measure),
                reason: StopReason::PoolExhausted,
            },
            None => FoldOutcome {
                fold,
                annotations: None,
                f_measure: None,
                reason: StopReason::Censored,
            },
        })
        .collect();
    rows.push(build_row(ALL_COLUMN.to_string(), None, all));

    if let Some(sp) = rows.iter().position(|r| r.criterion == Some(Criterion::Sp)) {
        let sp_folds = rows[sp].folds.clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == sp || row.criterion.is_none() {
                continue;
            }
            let (a, b) = paired(&row.folds, &sp_folds, |f| f.annotations.map(T::of_usize));
            if a.len() >= 2 {
                row.annotations_vs_sp = Some(matched_pairs_ttest(&a, &b, confidence)?);
            }
            let (a, b) = paired(&row.folds, &sp_folds, |f| f.f_measure);
            if a.len() >= 2 {
                row.f_vs_sp = Some(matched_pairs_ttest(&a, &b, confidence)?);
            }
        }
    }
    Ok(Summary { rows, confidence })
}

impl<T: Scalar> Summary<T> {
    pub fn row(&self, name: &str) -> Option<&CriterionSummary<T>> {
        self.rows.iter().find(|r| r.name.eq_ignore_ascii_case(name))
    }

    pub fn criterion(&self, c: Criterion) -> Option<&CriterionSummary<T>> {
        self.rows.iter().find(|r| r.criterion == Some(c))
    }

    /// Aligned plain-text table: mean annotations and mean F (in points) per
    /// criterion. `*` marks a mean significantly different from SP's.
    pub fn render_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<10} {:>12} {:>10} {:>6} {:>9}", "Criterion", "Annotations", "F-Measure", "Folds", "Censored");
        for r in &self.rows {
            let (ann, f) = if r.not_applicable {
                ("n/a".to_string(), "n/a".to_string())
            } else {
                let mark = |sig: bool| if sig { "*" } else { " " };
                (
                    r.mean_annotations
                        .map_or("-".into(), |m| format!("{:.0}{}", m.as_f64(), mark(r.annotations_significant()))),
                    r.mean_f
                        .map_or("-".into(), |m| format!("{:.2}{}", 100.0 * m.as_f64(), mark(r.f_significant()))),
                )
            };
            let _ = writeln!(out, "{:<10} {:>12} {:>10} {:>6} {:>9}", r.name, ann, f, r.used(), r.censored);
        }
        let _ = writeln!(
            out,
            "* significantly different from SP (two-sided matched-pairs t-test, {:.0}% confidence)",
            100.0 * self.confidence
        );
        out
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(
            out,
            "criterion,mean_annotations,mean_f_measure,folds_used,folds_censored,not_applicable,\
             annotations_t,annotations_significant,f_t,f_significant"
        )?;
        let cell = |v: Option<T>| v.map(|v| v.to_string()).unwrap_or_default();
        for r in &self.rows {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{},{},{}",
                r.name,
                cell(r.mean_annotations),
                cell(r.mean_f),
                r.used(),
                r.censored,
                u8::from(r.not_applicable),
                cell(r.annotations_vs_sp.map(|t| t.t)),
                u8::from(r.annotations_significant()),
                cell(r.f_vs_sp.map(|t| t.t)),
                u8::from(r.f_significant()),
            )?;
        }
        Ok(())
    }
}
