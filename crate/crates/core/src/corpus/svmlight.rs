//! svmlight-style sparse lines: `<label> <idx>:<val> <idx>:<val> ...`.
//!
//! Labels parse as numbers; positive values map to +1 and everything else
//! to -1. Indices must be strictly increasing within a line. Text after `#`
//! is ignored. Example ids are 0-based line numbers; blank lines are skipped
//! but still consume an id.

use std::fs::File;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Label, SparseExample};

pub fn parse_line<T: Scalar>(line: &str, line_no: usize) -> Result<Option<SparseExample<T>>> {
    let body = line.split('#').next().unwrap_or("").trim();
    if body.is_empty() {
        return Ok(None);
    }
    let parse_err = |message: String| Error::Parse {
        line: line_no + 1,
        message,
    };
    let mut tokens = body.split_whitespace();
    let label_tok = tokens.next().expect("non-empty line has a token");
    let label_val: f64 = label_tok
        .parse()
        .map_err(|_| parse_err(format!("bad label {label_tok:?}")))?;
    let label = if label_val > 0.0 { Label::Pos } else { Label::Neg };

    let mut features: Vec<(u32, T)> = Vec::new();
    for tok in tokens {
        let (idx, val) = tok
            .split_once(':')
            .ok_or_else(|| parse_err(format!("expected <index>:<value>, got {tok:?}")))?;
        let idx: u32 = idx
            .parse()
            .map_err(|_| parse_err(format!("bad feature index {idx:?}")))?;
        let val: T = val
            .parse()
            .map_err(|_| parse_err(format!("bad feature value {val:?}")))?;
        if !val.is_finite() {
            return Err(parse_err(format!("non-finite value at index {idx}")));
        }
        if let Some(&(prev, _)) = features.last() {
            if idx <= prev {
                return Err(Error::NonAscendingIndex {
                    line: line_no + 1,
                    previous: prev,
                    next: idx,
                });
            }
        }
        features.push((idx, val));
    }
    SparseExample::new(line_no, features, Some(label)).map(Some)
}

pub fn read<T: Scalar, R: BufRead>(reader: R) -> Result<Vec<SparseExample<T>>> {
    let mut out = Vec::new();
    for (no, line) in reader.lines().enumerate() {
        if let Some(x) = parse_line(&line?, no)? {
            out.push(x);
        }
    }
    Ok(out)
}

pub fn load<T: Scalar>(path: &Path) -> Result<Vec<SparseExample<T>>> {
    let file = File::open(path).map_err(|e| Error::Layout {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    read(BufReader::new(file))
}

/// Writes one line per example. Unlabeled examples are written as `0`, which
/// reads back as -1.
pub fn write<T: Scalar, W: Write>(examples: &[SparseExample<T>], mut out: W) -> Result<()> {
    for x in examples {
        match x.label {
            Some(l) => write!(out, "{l}")?,
            None => write!(out, "0")?,
        }
        for (i, v) in x.features() {
            write!(out, " {i}:{v}")?;
        }
        writeln!(out)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_labelled_line() {
        let x = parse_line::<f64>("+1 3:1 7:1", 0).unwrap().unwrap();
        assert_eq!(x.label, Some(Label::Pos));
        assert_eq!(x.features(), &[(3, 1.0), (7, 1.0)]);
    }

    #[test]
    fn empty_feature_list_is_legal() {
        let x = parse_line::<f64>("-1", 4).unwrap().unwrap();
        assert_eq!(x.label, Some(Label::Neg));
        assert_eq!(x.nnz(), 0);
        assert_eq!(x.id, 4);
    }

    #[test]
    fn non_ascending_is_rejected() {
        let err = parse_line::<f64>("+1 7:1 3:1", 2).unwrap_err();
        assert!(matches!(err, Error::NonAscendingIndex { line: 3, .. }));
    }

    #[test]
    fn malformed_line_reports_line_number() {
        let data = "+1 1:1\n-1 2:1\n+1 oops\n";
        let err = read::<f64, _>(data.as_bytes()).unwrap_err();
        assert!(err.to_string().starts_with("line 3:"), "{err}");
    }

    #[test]
    fn comments_and_blank_lines() {
        let data = "# header\n+1 1:0.5 # trailing\n\n-1 2:3\n";
        let xs = read::<f64, _>(data.as_bytes()).unwrap();
        assert_eq!(xs.len(), 2);
        assert_eq!(xs[0].id, 1);
        assert_eq!(xs[1].id, 3);
    }

    proptest! {
        #[test]
        fn write_then_read_round_trips(
            rows in prop::collection::vec(
                (any::<bool>(), prop::collection::btree_map(0u32..500, 0.001f64..1e6, 0..20)),
                1..30,
            )
        ) {
            let xs: Vec<SparseExample<f64>> = rows
                .into_iter()
                .enumerate()
                .map(|(i, (pos, feats))| {
                    let label = if pos { Label::Pos } else { Label::Neg };
                    SparseExample::new(i, feats.into_iter().collect(), Some(label)).unwrap()
                })
                .collect();
            let mut buf = Vec::new();
            write(&xs, &mut buf).unwrap();
            let back = read::<f64, _>(buf.as_slice()).unwrap();
            prop_assert_eq!(back, xs);
        }
    }
}
