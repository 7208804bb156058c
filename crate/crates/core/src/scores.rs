//! Score matrix and per-score sorted views.

use crate::error::{Error, Result};

/// An `n x m` matrix of finite scores, one row per item.
///
/// Rows keep their insertion order; every operation in the crate refers to
/// items by their 0-based row position.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreMatrix {
    ids: Vec<String>,
    values: Vec<f64>,
    n: usize,
    m: usize,
}

impl ScoreMatrix {
    /// Builds a matrix from rows, labelling items `1..=n`.
    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Self> {
        let ids = (1..=rows.len()).map(|i| i.to_string()).collect();
        Self::with_ids(ids, rows)
    }

    pub fn with_ids(ids: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::InvalidMatrix("at least one item is required".into()));
        }
        if ids.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: ids.len(),
            });
        }
        let m = rows[0].len();
        if m == 0 {
            return Err(Error::InvalidMatrix(
                "at least one score is required".into(),
            ));
        }
        let mut values = Vec::with_capacity(n * m);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != m {
                return Err(Error::InvalidMatrix(format!(
                    "row {} has {} scores, expected {m}",
                    i + 1,
                    row.len()
                )));
            }
            if let Some(j) = row.iter().position(|v| !v.is_finite()) {
                return Err(Error::InvalidMatrix(format!(
                    "score {} of row {} is not finite",
                    j + 1,
                    i + 1
                )));
            }
            values.extend(row);
        }
        Ok(Self { ids, values, n, m })
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn get(&self, item: usize, score: usize) -> f64 {
        self.values[item * self.m + score]
    }

    pub fn row(&self, item: usize) -> &[f64] {
        &self.values[item * self.m..(item + 1) * self.m]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.m)
    }

    pub fn column(&self, score: usize) -> Vec<f64> {
        self.rows().map(|r| r[score]).collect()
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }
}

/// One score's items in ascending order.
#[derive(Debug, Clone, PartialEq)]
pub struct SortedColumn {
    /// `order[r]` is the item at sorted rank `r` (0-based).
    pub order: Vec<usize>,
    /// `values[r]` is the score of `order[r]`; non-decreasing.
    pub values: Vec<f64>,
}

impl SortedColumn {
    fn build(scores: &ScoreMatrix, j: usize) -> Self {
        let mut order: Vec<usize> = (0..scores.n()).collect();
        // stable sort keeps ascending item index within ties
        order.sort_by(|&a, &b| scores.get(a, j).total_cmp(&scores.get(b, j)));
        let values = order.iter().map(|&i| scores.get(i, j)).collect();
        Self { order, values }
    }

    /// Whether cutting after the first `k` sorted items keeps every tie group intact.
    #[inline]
    pub fn is_valid_cut(&self, k: usize) -> bool {
        let n = self.values.len();
        k == 0 || k == n || (k < n && self.values[k - 1] < self.values[k])
    }

    /// All tie-respecting cut indices in ascending order; always includes `0` and `n`.
    pub fn valid_cuts(&self) -> Vec<usize> {
        (0..=self.values.len())
            .filter(|&k| self.is_valid_cut(k))
            .collect()
    }

    /// Number of items strictly below `value`; always a valid cut index.
    pub fn count_below(&self, value: f64) -> usize {
        self.values.partition_point(|&v| v < value)
    }
}

/// Per-score sorted orderings of a [`ScoreMatrix`].
#[derive(Debug, Clone, PartialEq)]
pub struct SortedScoreIndex {
    columns: Vec<SortedColumn>,
    n: usize,
}

impl SortedScoreIndex {
    pub fn new(scores: &ScoreMatrix) -> Self {
        let columns = (0..scores.m())
            .map(|j| SortedColumn::build(scores, j))
            .collect();
        Self {
            columns,
            n: scores.n(),
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.columns.len()
    }

    #[inline]
    pub fn column(&self, j: usize) -> &SortedColumn {
        &self.columns[j]
    }

    pub fn columns(&self) -> &[SortedColumn] {
        &self.columns
    }

    pub fn valid_cut_indices(&self, j: usize) -> Vec<usize> {
        self.columns[j].valid_cuts()
    }
}
