use std::collections::{BTreeMap, BTreeSet};
use std::io::{self, Write};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

use super::{Label, SparseExample};

/// Minimum number of occurrences for a term to become a feature.
pub const DEFAULT_MIN_COUNT: usize = 3;

/// Lowercases and splits on runs of non-alphanumeric characters.
pub fn tokenize(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|t| !t.is_empty())
        .map(str::to_lowercase)
}

/// Term to feature-index map built from a set of training documents.
///
/// A term qualifies when its total number of occurrences (not documents)
/// reaches `min_count`. Indices are assigned in lexicographic term order, so
/// the same documents always give the same map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vocabulary {
    terms: BTreeMap<String, u32>,
    min_count: usize,
    documents: usize,
}

impl Vocabulary {
    pub fn build<'a>(docs: impl IntoIterator<Item = &'a str>, min_count: usize) -> Result<Self> {
        if min_count == 0 {
            return Err(Error::Config("vocabulary threshold must be at least 1".into()));
        }
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        let mut documents = 0;
        for doc in docs {
            documents += 1;
            for tok in tokenize(doc) {
                *counts.entry(tok).or_default() += 1;
            }
        }
        if documents == 0 {
            return Err(Error::Empty("no documents to build a vocabulary from"));
        }
        let terms: BTreeMap<String, u32> = counts
            .into_iter()
            .filter(|&(_, c)| c >= min_count)
            .enumerate()
            .map(|(i, (t, _))| (t, i as u32))
            .collect();
        if terms.is_empty() {
            return Err(Error::EmptyVocabulary {
                threshold: min_count,
            });
        }
        Ok(Vocabulary {
            terms,
            min_count,
            documents,
        })
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn min_count(&self) -> usize {
        self.min_count
    }

    pub fn documents(&self) -> usize {
        self.documents
    }

    pub fn index_of(&self, term: &str) -> Option<u32> {
        self.terms.get(term).copied()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&str, u32)> {
        self.terms.iter().map(|(t, &i)| (t.as_str(), i))
    }

    /// Binary bag-of-words vector; out-of-vocabulary tokens are dropped.
    pub fn featurize<T: Scalar>(&self, id: usize, text: &str, label: Option<Label>) -> SparseExample<T> {
        let indices: BTreeSet<u32> = tokenize(text).filter_map(|t| self.index_of(&t)).collect();
        SparseExample::binary(id, indices, label)
    }

    /// One `term<TAB>index` line per entry, in index order.
    pub fn write_to<W: Write>(&self, mut out: W) -> io::Result<()> {
        for (term, idx) in self.terms() {
            writeln!(out, "{term}\t{idx}")?;
        }
        Ok(())
    }
}

/// Builds a vocabulary from `documents` and maps each of them onto it.
/// Example ids are the positions in `documents`.
pub fn tokenize_and_binarize<T: Scalar, S: AsRef<str>>(
    documents: &[(S, Option<Label>)],
    min_count: usize,
) -> Result<(Vocabulary, Vec<SparseExample<T>>)> {
    if documents.is_empty() {
        return Err(Error::Empty("no documents"));
    }
    let vocab = Vocabulary::build(documents.iter().map(|(d, _)| d.as_ref()), min_count)?;
    let examples = documents
        .iter()
        .enumerate()
        .map(|(i, (d, l))| vocab.featurize(i, d.as_ref(), *l))
        .collect();
    Ok((vocab, examples))
}
