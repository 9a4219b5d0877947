use std::collections::BTreeMap;
use std::io::{BufRead, Write};

use rand::seq::SliceRandom;

use crate::error::{Error, Result};
use crate::seeds;

use super::SparseExample;

/// Assignment of example ids to `k` cross-validation folds.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FoldPlan {
    pub k: usize,
    pub seed: u64,
    assignments: BTreeMap<usize, usize>,
}

/// Shuffles the (sorted) ids with `seed`, then deals them round-robin, so fold
/// sizes differ by at most one.
pub fn make_folds(ids: impl IntoIterator<Item = usize>, k: usize, seed: u64) -> Result<FoldPlan> {
    let mut ids: Vec<usize> = ids.into_iter().collect();
    ids.sort_unstable();
    ids.dedup();
    if k < 2 || k > ids.len() {
        return Err(Error::InvalidFolds {
            k,
            examples: ids.len(),
        });
    }
    ids.shuffle(&mut seeds::rng(seed));
    let assignments = ids.into_iter().enumerate().map(|(pos, id)| (id, pos % k)).collect();
    Ok(FoldPlan { k, seed, assignments })
}

impl FoldPlan {
    pub fn fold_of(&self, id: usize) -> Option<usize> {
        self.assignments.get(&id).copied()
    }

    pub fn assignments(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.assignments.iter().map(|(&id, &f)| (id, f))
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.k];
        for &f in self.assignments.values() {
            sizes[f] += 1;
        }
        sizes
    }

    /// `(pool, test)` for `fold`: the fold itself is held out.
    pub fn split<T: Clone>(&self, examples: &[SparseExample<T>], fold: usize) -> (Vec<SparseExample<T>>, Vec<SparseExample<T>>) {
        examples
            .iter()
            .cloned()
            .partition(|x| self.fold_of(x.id) != Some(fold))
    }
}

/// CSV with header `example_id,fold_index`.
pub fn write_fold_manifest<W: Write>(plan: &FoldPlan, mut out: W) -> Result<()> {
    writeln!(out, "example_id,fold_index")?;
    for (id, f) in plan.assignments() {
        writeln!(out, "{id},{f}")?;
    }
    Ok(())
}

pub fn read_fold_manifest<R: BufRead>(input: R, seed: u64) -> Result<FoldPlan> {
    let mut assignments = BTreeMap::new();
    for (no, line) in input.lines().enumerate() {
        let line = line?;
        if no == 0 || line.trim().is_empty() {
            continue;
        }
        let bad = || Error::Parse {
            line: no + 1,
            message: format!("expected <example_id>,<fold_index>, got {line:?}"),
        };
        let (id, f) = line.split_once(',').ok_or_else(bad)?;
        let id: usize = id.trim().parse().map_err(|_| bad())?;
        let f: usize = f.trim().parse().map_err(|_| bad())?;
        assignments.insert(id, f);
    }
    let k = assignments.values().max().map_or(0, |m| m + 1);
    Ok(FoldPlan { k, seed, assignments })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_per_fold() {
        let plan = make_folds(0..10, 10, 99).unwrap();
        assert_eq!(plan.sizes(), vec![1; 10]);
    }

    #[test]
    fn sizes_for_103_examples() {
        let plan = make_folds(0..103, 10, 5).unwrap();
        let mut sizes = plan.sizes();
        sizes.sort_unstable();
        assert_eq!(sizes, [10, 10, 10, 10, 10, 10, 10, 11, 11, 11]);
    }

    #[test]
    fn deterministic_for_seed() {
        let a = make_folds((0..50).rev(), 5, 17).unwrap();
        let b = make_folds(0..50, 5, 17).unwrap();
        assert_eq!(a, b);
        let c = make_folds(0..50, 5, 18).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn too_many_folds() {
        assert!(matches!(make_folds(0..3, 4, 0), Err(Error::InvalidFolds { k: 4, examples: 3 })));
        assert!(make_folds(0..3, 1, 0).is_err());
    }

    #[test]
    fn manifest_round_trip() {
        let plan = make_folds(0..23, 4, 1).unwrap();
        let mut buf = Vec::new();
        write_fold_manifest(&plan, &mut buf).unwrap();
        assert!(buf.starts_with(b"example_id,fold_index\n"));
        assert_eq!(read_fold_manifest(buf.as_slice(), 1).unwrap(), plan);
    }
}
