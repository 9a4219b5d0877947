//! Per-iteration run record and its CSV form.
//!
//! Column order is fixed:
//!
//! ```text
//! iteration,labeled,queried,remaining,queried_ids,stop_set_digest,
//! kappa,agreement_observed,agreement_expected,kappa_degenerate,
//! batch_accuracy,batch_confidence,pool_confidence,inside_margin,
//! prediction_changes,tp,fp,fn,tn,f_measure
//! ```
//!
//! followed by `<c>_stop,<c>_reason,<c>_value,<c>_threshold` for each
//! configured criterion `c`. Empty cells are absent values; queried ids are
//! `;`-separated. Floats are written in shortest round-trip form, so a
//! trace read back from CSV is identical to the one written.

use std::fmt::Display;
use std::io::{BufRead, Write};
use std::str::FromStr;

use crate::agreement::{AgreementValue, PredictionVector};
use crate::error::{Error, Result};
use crate::eval::ConfusionCounts;
use crate::scalar::Scalar;
use crate::stopping::{CriteriaSuite, Criterion, Observation, StopDecision, StopPoint, StopReason, StoppingConfig};

use super::StopSet;

const BASE_COLUMNS: [&str; 20] = [
    "iteration",
    "labeled",
    "queried",
    "remaining",
    "queried_ids",
    "stop_set_digest",
    "kappa",
    "agreement_observed",
    "agreement_expected",
    "kappa_degenerate",
    "batch_accuracy",
    "batch_confidence",
    "pool_confidence",
    "inside_margin",
    "prediction_changes",
    "tp",
    "fp",
    "fn",
    "tn",
    "f_measure",
];

const DECISION_SUFFIXES: [&str; 4] = ["stop", "reason", "value", "threshold"];

#[derive(Clone, Debug, PartialEq)]
pub struct TraceRow<T> {
    pub observation: Observation<T>,
    pub queried_ids: Vec<usize>,
    pub stop_set_digest: String,
    pub agreement: Option<AgreementValue<T>>,
    pub confusion: ConfusionCounts,
    pub f_measure: T,
    pub decisions: Vec<StopDecision<T>>,
}

impl<T: Scalar> TraceRow<T> {
    pub fn iteration(&self) -> usize {
        self.observation.iteration
    }

    pub fn labeled(&self) -> usize {
        self.observation.labeled
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunTrace<T> {
    pub criteria: Vec<Criterion>,
    pub rows: Vec<TraceRow<T>>,
    pub stop_points: Vec<StopPoint>,
    /// Only known for traces produced in-process.
    pub stop_set: Option<StopSet>,
    /// Stop-set predictions per model, when requested.
    pub predictions: Vec<PredictionVector>,
}

fn opt<V: Display>(v: Option<V>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl<T: Scalar> RunTrace<T> {
    pub fn header(criteria: &[Criterion]) -> String {
        let mut cols: Vec<String> = BASE_COLUMNS.iter().map(|s| s.to_string()).collect();
        for c in criteria {
            for suffix in DECISION_SUFFIXES {
                cols.push(format!("{}_{suffix}", c.name()));
            }
        }
        cols.join(",")
    }

    pub fn final_row(&self) -> Option<&TraceRow<T>> {
        self.rows.last()
    }

    pub fn pool_exhausted(&self) -> bool {
        self.final_row().is_some_and(|r| r.observation.remaining == 0)
    }

    pub fn row(&self, iteration: usize) -> Option<&TraceRow<T>> {
        self.rows.get(iteration).filter(|r| r.iteration() == iteration)
    }

    pub fn stop_point(&self, criterion: Criterion) -> Option<&StopPoint> {
        self.stop_points.iter().find(|p| p.criterion == criterion)
    }

    /// `(annotations, F)` where `criterion` stopped, if it did.
    pub fn outcome(&self, criterion: Criterion) -> Option<(usize, T)> {
        let it = self.stop_point(criterion)?.iteration?;
        self.row(it).map(|r| (r.labeled(), r.f_measure))
    }

    pub fn kappas(&self) -> Vec<T> {
        self.rows.iter().filter_map(|r| r.observation.kappa).collect()
    }

    pub fn observations(&self) -> impl Iterator<Item = &Observation<T>> {
        self.rows.iter().map(|r| &r.observation)
    }

    /// Re-decides every criterion over the recorded observations.
    pub fn replay(&self, criteria: &[Criterion], config: StoppingConfig<T>) -> Vec<StopPoint> {
        CriteriaSuite::replay(criteria, config, self.observations())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        writeln!(out, "{}", Self::header(&self.criteria))?;
        for row in &self.rows {
            let o = &row.observation;
            let ids: Vec<String> = row.queried_ids.iter().map(|i| i.to_string()).collect();
            let mut cells = vec![
                o.iteration.to_string(),
                o.labeled.to_string(),
                o.queried.to_string(),
                o.remaining.to_string(),
                ids.join(";"),
                row.stop_set_digest.clone(),
                opt(o.kappa),
                opt(row.agreement.map(|a| a.observed)),
                opt(row.agreement.map(|a| a.expected)),
                opt(row.agreement.map(|a| u8::from(a.degenerate))),
                opt(o.batch_accuracy),
                opt(o.batch_confidence),
                opt(o.pool_confidence),
                opt(o.inside_margin),
                opt(o.prediction_changes),
                row.confusion.tp.to_string(),
                row.confusion.fp.to_string(),
                row.confusion.fn_.to_string(),
                row.confusion.tn.to_string(),
                row.f_measure.to_string(),
            ];
            for d in &row.decisions {
                cells.push(u8::from(d.stop).to_string());
                cells.push(d.reason.to_string());
                cells.push(opt(d.value));
                cells.push(opt(d.threshold));
            }
            writeln!(out, "{}", cells.join(","))?;
        }
        Ok(())
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("CSV is UTF-8")
    }

    /// Parses a trace CSV. Stop points come from the recorded decision
    /// columns.
    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut lines = input.lines().enumerate();
        let (_, header) = lines.next().ok_or(Error::Trace("empty trace file".into()))?;
        let header = header?;
        let cols: Vec<&str> = header.split(',').collect();
        if cols.len() < BASE_COLUMNS.len() || cols[..BASE_COLUMNS.len()] != BASE_COLUMNS {
            return Err(Error::Trace("unexpected trace header".into()));
        }
        let extra = &cols[BASE_COLUMNS.len()..];
        if !extra.len().is_multiple_of(DECISION_SUFFIXES.len()) {
            return Err(Error::Trace("decision columns come in groups of four".into()));
        }
        let criteria = extra
            .chunks(DECISION_SUFFIXES.len())
            .map(|group| {
                let name = group[0]
                    .strip_suffix("_stop")
                    .ok_or_else(|| Error::Trace(format!("bad decision column {}", group[0])))?;
                name.parse::<Criterion>()
            })
            .collect::<Result<Vec<_>>>()?;

        let mut rows = Vec::new();
        for (no, line) in lines {
            let line = line?;
            if line.trim().is_empty() {
                continue;
            }
            rows.push(parse_row(&line, no + 1, &criteria, cols.len())?);
        }
        let stop_points = stop_points_from_decisions(&criteria, &rows);
        Ok(RunTrace {
            criteria,
            rows,
            stop_points,
            stop_set: None,
            predictions: Vec::new(),
        })
    }

    /// One `<generation>\t<+/- string>` line per model.
    pub fn write_predictions<W: Write>(&self, mut out: W) -> Result<()> {
        for p in &self.predictions {
            writeln!(out, "{}\t{}", p.generation, p.encode())?;
        }
        Ok(())
    }
}

/// Stop points implied by recorded per-iteration decisions: the first row
/// where a criterion said stop; otherwise not-applicable, pool-exhausted at
/// the final row, or censored.
pub fn stop_points_from_decisions<T: Scalar>(criteria: &[Criterion], rows: &[TraceRow<T>]) -> Vec<StopPoint> {
    let last = rows.last();
    criteria
        .iter()
        .enumerate()
        .map(|(slot, &criterion)| {
            let fired = rows.iter().find_map(|r| {
                let d = &r.decisions[slot];
                d.stop.then_some((r.iteration(), d.reason))
            });
            if let Some((iteration, reason)) = fired {
                return StopPoint {
                    criterion,
                    iteration: Some(iteration),
                    reason,
                };
            }
            match last {
                Some(r) if r.decisions[slot].reason == StopReason::NotApplicable => StopPoint {
                    criterion,
                    iteration: None,
                    reason: StopReason::NotApplicable,
                },
                Some(r) if r.observation.remaining == 0 => StopPoint {
                    criterion,
                    iteration: Some(r.iteration()),
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

fn parse_row<T: Scalar>(line: &str, line_no: usize, criteria: &[Criterion], width: usize) -> Result<TraceRow<T>> {
    let cells: Vec<&str> = line.split(',').collect();
    let bad = |what: &str, cell: &str| Error::Parse {
        line: line_no,
        message: format!("bad {what} {cell:?}"),
    };
    if cells.len() != width {
        return Err(Error::Parse {
            line: line_no,
            message: format!("expected {width} cells, found {}", cells.len()),
        });
    }
    fn req<V: FromStr>(cell: &str) -> Option<V> {
        cell.parse().ok()
    }
    fn maybe<V: FromStr>(cell: &str) -> std::result::Result<Option<V>, ()> {
        if cell.is_empty() {
            Ok(None)
        } else {
            cell.parse().map(Some).map_err(|_| ())
        }
    }
    macro_rules! required {
        ($i:expr, $what:expr) => {
            req(cells[$i]).ok_or_else(|| bad($what, cells[$i]))?
        };
    }
    macro_rules! optional {
        ($i:expr, $what:expr) => {
            maybe(cells[$i]).map_err(|_| bad($what, cells[$i]))?
        };
    }

    let queried_ids = if cells[4].is_empty() {
        Vec::new()
    } else {
        cells[4]
            .split(';')
            .map(|s| s.parse().map_err(|_| bad("queried id", s)))
            .collect::<Result<Vec<usize>>>()?
    };
    let kappa: Option<T> = optional!(6, "kappa");
    let observed: Option<T> = optional!(7, "observed agreement");
    let expected: Option<T> = optional!(8, "expected agreement");
    let degenerate: Option<u8> = optional!(9, "degenerate flag");
    let agreement = match (kappa, observed, expected, degenerate) {
        (Some(kappa), Some(observed), Some(expected), Some(flag)) => Some(AgreementValue {
            observed,
            expected,
            kappa,
            degenerate: flag == 1,
        }),
        (None, None, None, None) => None,
        _ => return Err(bad("agreement cells", line)),
    };
    let observation = Observation {
        iteration: required!(0, "iteration"),
        labeled: required!(1, "labeled count"),
        queried: required!(2, "queried count"),
        remaining: required!(3, "remaining count"),
        kappa,
        batch_accuracy: optional!(10, "batch accuracy"),
        batch_confidence: optional!(11, "batch confidence"),
        pool_confidence: optional!(12, "pool confidence"),
        inside_margin: optional!(13, "inside-margin count"),
        prediction_changes: optional!(14, "prediction changes"),
    };
    let confusion = ConfusionCounts {
        tp: required!(15, "tp"),
        fp: required!(16, "fp"),
        fn_: required!(17, "fn"),
        tn: required!(18, "tn"),
    };
    let f_measure: T = required!(19, "f_measure");

    let mut decisions = Vec::with_capacity(criteria.len());
    for (slot, &criterion) in criteria.iter().enumerate() {
        let base = BASE_COLUMNS.len() + slot * DECISION_SUFFIXES.len();
        let stop: u8 = required!(base, "stop flag");
        let reason: StopReason = required!(base + 1, "stop reason");
        decisions.push(StopDecision {
            stop: stop == 1,
            criterion,
            iteration: observation.iteration,
            reason,
            value: optional!(base + 2, "decision value"),
            threshold: optional!(base + 3, "decision threshold"),
        });
    }
    Ok(TraceRow {
        observation,
        queried_ids,
        stop_set_digest: cells[5].to_string(),
        agreement,
        confusion,
        f_measure,
        decisions,
    })
}
