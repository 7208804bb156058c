//! Bucketing of items and the distinguishability metric.

use serde::Serialize;

use crate::cutoffs::CutoffValues;
use crate::error::{Error, Result};
use crate::scores::ScoreMatrix;

/// Largest score count accepted by subset bucketing when building histograms.
pub const MAX_SUBSET_SCORES: usize = 20;

/// How crossings map to a bucket.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Scheme {
    /// Bucket = number of cut-offs cleared; `m + 1` buckets.
    Count,
    /// Bucket = exact set of cut-offs cleared, as a bitmask; `2^m` buckets.
    Subset,
}

impl Scheme {
    pub fn bucket_count(self, m: usize) -> usize {
        match self {
            Scheme::Count => m + 1,
            Scheme::Subset => 1 << m,
        }
    }
}

#[inline]
fn crosses(score: f64, cutoff: f64) -> bool {
    score >= cutoff
}

fn check_len(scores: &ScoreMatrix, cutoffs: &CutoffValues) -> Result<()> {
    if cutoffs.len() != scores.m() {
        return Err(Error::DimensionMismatch {
            expected: scores.m(),
            found: cutoffs.len(),
        });
    }
    Ok(())
}

/// Number of cut-offs each item clears (`score >= cutoff`).
pub fn crossings(scores: &ScoreMatrix, cutoffs: &CutoffValues) -> Result<Vec<usize>> {
    check_len(scores, cutoffs)?;
    Ok(scores
        .rows()
        .map(|row| {
            row.iter()
                .zip(cutoffs.as_slice())
                .filter(|(&s, &c)| crosses(s, c))
                .count()
        })
        .collect())
}

/// Bucket id of every item under `scheme`.
pub fn bucket_ids(
    scores: &ScoreMatrix,
    cutoffs: &CutoffValues,
    scheme: Scheme,
) -> Result<Vec<usize>> {
    match scheme {
        Scheme::Count => crossings(scores, cutoffs),
        Scheme::Subset => {
            check_len(scores, cutoffs)?;
            if scores.m() > MAX_SUBSET_SCORES {
                return Err(Error::SubsetCapacity {
                    m: scores.m(),
                    max: MAX_SUBSET_SCORES,
                });
            }
            Ok(scores
                .rows()
                .map(|row| {
                    row.iter()
                        .zip(cutoffs.as_slice())
                        .enumerate()
                        .filter(|(_, (&s, &c))| crosses(s, c))
                        .fold(0usize, |id, (j, _)| id | (1 << j))
                })
                .collect())
        }
    }
}

/// Item counts per bucket.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(transparent)]
pub struct BucketHistogram {
    counts: Vec<usize>,
}

impl BucketHistogram {
    pub fn from_counts(counts: Vec<usize>) -> Self {
        Self { counts }
    }

    pub fn from_ids(ids: &[usize], buckets: usize) -> Self {
        let mut counts = vec![0; buckets];
        for &b in ids {
            counts[b] += 1;
        }
        Self { counts }
    }

    pub fn counts(&self) -> &[usize] {
        &self.counts
    }

    pub fn total(&self) -> usize {
        self.counts.iter().sum()
    }

    pub fn sum_of_squares(&self) -> u64 {
        self.counts.iter().map(|&c| (c as u64) * (c as u64)).sum()
    }

    /// `max - min` over all buckets.
    pub fn range(&self) -> usize {
        let max = self.counts.iter().copied().max().unwrap_or(0);
        let min = self.counts.iter().copied().min().unwrap_or(0);
        max - min
    }
}

pub fn bucket_histogram(
    scores: &ScoreMatrix,
    cutoffs: &CutoffValues,
    scheme: Scheme,
) -> Result<BucketHistogram> {
    let ids = bucket_ids(scores, cutoffs, scheme)?;
    Ok(BucketHistogram::from_ids(
        &ids,
        scheme.bucket_count(scores.m()),
    ))
}

/// Fraction of ordered pairs of distinct items that sit in different buckets,
/// kept as the exact integer ratio.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Distinguishability {
    pub different_pairs: u64,
    pub total_pairs: u64,
}

impl Distinguishability {
    pub fn value(&self) -> f64 {
        self.different_pairs as f64 / self.total_pairs as f64
    }
}

impl Serialize for Distinguishability {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_f64(self.value())
    }
}

fn total_pairs(n: usize) -> Result<u64> {
    if n < 2 {
        return Err(Error::UndefinedMetric { n });
    }
    Ok(n as u64 * (n as u64 - 1))
}

/// `(n^2 - sum of squared bucket counts) / (n (n - 1))`.
pub fn distinguishability(hist: &BucketHistogram) -> Result<Distinguishability> {
    let n = hist.total();
    let total_pairs = total_pairs(n)?;
    let n2 = (n as u64) * (n as u64);
    Ok(Distinguishability {
        different_pairs: n2 - hist.sum_of_squares(),
        total_pairs,
    })
}

/// Same metric by counting item pairs directly.
pub fn distinguishability_by_pairs(
    scores: &ScoreMatrix,
    cutoffs: &CutoffValues,
    scheme: Scheme,
) -> Result<Distinguishability> {
    let total_pairs = total_pairs(scores.n())?;
    let ids = bucket_ids(scores, cutoffs, scheme)?;
    let mut different = 0u64;
    for (a, &ba) in ids.iter().enumerate() {
        for &bb in &ids[a + 1..] {
            if ba != bb {
                different += 2;
            }
        }
    }
    Ok(Distinguishability {
        different_pairs: different,
        total_pairs,
    })
}
