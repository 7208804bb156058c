//! Discrete cut indices and their real-valued realizations.

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::scores::{ScoreMatrix, SortedColumn, SortedScoreIndex};

/// Per-score cut index: the items at sorted ranks `k_j..n` (0-based) cross
/// cut-off `j`, so `k_j = 0` means every item crosses and `k_j = n` none.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CutIndexVector(pub Vec<usize>);

impl CutIndexVector {
    pub fn zeros(m: usize) -> Self {
        Self(vec![0; m])
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    /// Checks range and the no-split-tie rule against `index`.
    pub fn validate(&self, index: &SortedScoreIndex) -> Result<()> {
        if self.0.len() != index.m() {
            return Err(Error::DimensionMismatch {
                expected: index.m(),
                found: self.0.len(),
            });
        }
        for (j, &k) in self.0.iter().enumerate() {
            if k > index.n() || !index.column(j).is_valid_cut(k) {
                return Err(Error::InvalidCutIndex { score: j, index: k });
            }
        }
        Ok(())
    }

    /// The cut-offs at the midpoints (or sentinels) named by this vector.
    pub fn realize(&self, index: &SortedScoreIndex) -> Result<CutoffValues> {
        self.validate(index)?;
        Ok(CutoffValues(
            self.0
                .iter()
                .enumerate()
                .map(|(j, &k)| realize_one(index.column(j), k))
                .collect(),
        ))
    }
}

/// Cut-off value for a single valid cut index.
pub(crate) fn realize_one(col: &SortedColumn, k: usize) -> f64 {
    let n = col.values.len();
    if k == 0 {
        return f64::NEG_INFINITY;
    }
    if k == n {
        return f64::INFINITY;
    }
    let (lo, hi) = (col.values[k - 1], col.values[k]);
    let mut mid = (lo + hi) / 2.0;
    if !mid.is_finite() {
        mid = lo / 2.0 + hi / 2.0;
    }
    // adjacent floats have no strict midpoint; `hi` gives the same crossing set
    if mid <= lo {
        hi
    } else {
        mid
    }
}

/// Real cut-off per score; `-inf` and `+inf` are the "everyone crosses" and
/// "nobody crosses" sentinels.
#[derive(Debug, Clone, PartialEq)]
pub struct CutoffValues(pub Vec<f64>);

impl CutoffValues {
    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// The cut index vector inducing exactly the same crossing sets
    /// (items with score `>=` the cut-off cross).
    pub fn equivalent_indices(&self, index: &SortedScoreIndex) -> CutIndexVector {
        CutIndexVector(
            self.0
                .iter()
                .enumerate()
                .map(|(j, &c)| index.column(j).count_below(c))
                .collect(),
        )
    }

    /// JSON-compatible values: finite numbers, or the strings `"-inf"` / `"inf"`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(self.0.iter().map(|&c| cutoff_json(c)).collect())
    }
}

pub(crate) fn cutoff_json(c: f64) -> serde_json::Value {
    if c == f64::NEG_INFINITY {
        "-inf".into()
    } else if c == f64::INFINITY {
        "inf".into()
    } else {
        c.into()
    }
}

impl Serialize for CutoffValues {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

/// Statistical median of a slice (mean of the two central order statistics for even length).
pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        (v[n / 2 - 1] + v[n / 2]) / 2.0
    }
}

/// Each cut-off at the median of its score.
pub fn median_cutoffs(scores: &ScoreMatrix) -> CutoffValues {
    CutoffValues((0..scores.m()).map(|j| median(&scores.column(j))).collect())
}

/// The median start snapped into index space: `floor(n/2)` moved down to the
/// nearest valid cut, so a tie group straddling the median crosses together.
pub fn median_start_indices(index: &SortedScoreIndex) -> CutIndexVector {
    let half = index.n() / 2;
    CutIndexVector(
        index
            .columns()
            .iter()
            .map(|col| (0..=half).rev().find(|&k| col.is_valid_cut(k)).unwrap_or(0))
            .collect(),
    )
}
