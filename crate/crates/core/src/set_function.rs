//! Cut-offs induced by item subsets, and a marginal-gain checker showing the
//! induced set function is neither submodular nor supermodular.

use std::collections::BTreeSet;

use crate::bucket::{bucket_histogram, BucketHistogram, Scheme};
use crate::cutoffs::CutoffValues;
use crate::error::{Error, Result};
use crate::scores::ScoreMatrix;

/// A set of items, by 0-based row position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ItemSubset(BTreeSet<usize>);

impl ItemSubset {
    pub fn new(items: impl IntoIterator<Item = usize>) -> Self {
        Self(items.into_iter().collect())
    }

    /// From 1-based row numbers; `0` is rejected.
    pub fn from_one_based(rows: &[usize]) -> Result<Self> {
        rows.iter()
            .map(|&r| {
                r.checked_sub(1)
                    .ok_or_else(|| Error::Precondition("row numbers start at 1".into()))
            })
            .collect::<Result<BTreeSet<_>>>()
            .map(Self)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, item: usize) -> bool {
        self.0.contains(&item)
    }

    pub fn is_subset(&self, other: &ItemSubset) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn with(&self, item: usize) -> Self {
        let mut s = self.0.clone();
        s.insert(item);
        Self(s)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    fn check(&self, scores: &ScoreMatrix) -> Result<()> {
        if self.is_empty() {
            return Err(Error::EmptySubset);
        }
        match self.0.last() {
            Some(&i) if i >= scores.n() => Err(Error::Precondition(format!(
                "item {i} is out of range for {} items",
                scores.n()
            ))),
            _ => Ok(()),
        }
    }
}

/// Componentwise minimum of the subset's scores; every member clears all of them.
pub fn induced_cutoffs(scores: &ScoreMatrix, subset: &ItemSubset) -> Result<CutoffValues> {
    subset.check(scores)?;
    Ok(CutoffValues(
        (0..scores.m())
            .map(|j| {
                subset
                    .iter()
                    .map(|i| scores.get(i, j))
                    .fold(f64::INFINITY, f64::min)
            })
            .collect(),
    ))
}

/// Whether a score equal to its cut-off counts as clearing it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Crossing {
    /// `score >= cutoff`; every member of the subset clears its own cut-offs.
    #[default]
    Inclusive,
    /// `score > cutoff`; the subset's minima sit just below the cut.
    Strict,
}

/// Sum of squared bucket counts under the subset's induced cut-offs.
pub fn set_value(scores: &ScoreMatrix, subset: &ItemSubset) -> Result<u64> {
    set_value_with(scores, subset, Crossing::Inclusive)
}

pub fn set_value_with(
    scores: &ScoreMatrix,
    subset: &ItemSubset,
    crossing: Crossing,
) -> Result<u64> {
    let c = induced_cutoffs(scores, subset)?;
    let hist = match crossing {
        Crossing::Inclusive => bucket_histogram(scores, &c, Scheme::Count)?,
        Crossing::Strict => {
            let ids: Vec<usize> = scores
                .rows()
                .map(|row| row.iter().zip(c.as_slice()).filter(|(s, c)| s > c).count())
                .collect();
            BucketHistogram::from_ids(&ids, scores.m() + 1)
        }
    };
    Ok(hist.sum_of_squares())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModularityReport {
    /// `f(A + x) - f(A)`
    pub marginal_a: i64,
    /// `f(B + x) - f(B)`
    pub marginal_b: i64,
    pub submodular_violated: bool,
    pub supermodular_violated: bool,
}

/// Compares marginal gains of `x` on `A ⊆ B`.
pub fn check_modularity(
    scores: &ScoreMatrix,
    a: &ItemSubset,
    b: &ItemSubset,
    x: usize,
) -> Result<ModularityReport> {
    check_modularity_with(scores, a, b, x, Crossing::Inclusive)
}

pub fn check_modularity_with(
    scores: &ScoreMatrix,
    a: &ItemSubset,
    b: &ItemSubset,
    x: usize,
    crossing: Crossing,
) -> Result<ModularityReport> {
    if !a.is_subset(b) {
        return Err(Error::Precondition("A must be a subset of B".into()));
    }
    if b.contains(x) {
        return Err(Error::Precondition(format!(
            "item {x} already belongs to B"
        )));
    }
    if x >= scores.n() {
        return Err(Error::Precondition(format!("item {x} is out of range")));
    }
    let f = |s: &ItemSubset| set_value_with(scores, s, crossing).map(|v| v as i64);
    let marginal_a = f(&a.with(x))? - f(a)?;
    let marginal_b = f(&b.with(x))? - f(b)?;
    Ok(ModularityReport {
        marginal_a,
        marginal_b,
        submodular_violated: marginal_a < marginal_b,
        supermodular_violated: marginal_a > marginal_b,
    })
}

/// How item numbers in a worked example are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Indexing {
    OneBased,
    ZeroBased,
}

/// [`check_modularity`] with sets given as printed row numbers.
pub fn check_modularity_numbered(
    scores: &ScoreMatrix,
    a: &[usize],
    b: &[usize],
    x: usize,
    indexing: Indexing,
    crossing: Crossing,
) -> Result<ModularityReport> {
    let shift = |rows: &[usize]| match indexing {
        Indexing::OneBased => ItemSubset::from_one_based(rows),
        Indexing::ZeroBased => Ok(ItemSubset::new(rows.iter().copied())),
    };
    let x = match indexing {
        Indexing::OneBased => x
            .checked_sub(1)
            .ok_or_else(|| Error::Precondition("row numbers start at 1".into()))?,
        Indexing::ZeroBased => x,
    };
    check_modularity_with(scores, &shift(a)?, &shift(b)?, x, crossing)
}
