//! Exact search over the grid of tie-respecting cut indices.
//!
//! The grid holds at most `(n + 1)^m` points and always contains an optimum,
//! so exhaustive enumeration solves the quadratic program exactly. The walk
//! is incremental: advancing the innermost score by one valid step moves only
//! the tie group that changes side, and the running sum of squared bucket
//! counts is updated in O(1) per moved item.

use std::time::Instant;

use crate::bucket::Scheme;
use crate::cutoffs::CutIndexVector;
use crate::error::{Error, Result};
use crate::report::{Method, SolveReport};
use crate::scores::{ScoreMatrix, SortedScoreIndex};

/// Default cap on the number of grid points a solver may visit.
pub const DEFAULT_BUDGET: u128 = 1_000_000_000;

/// Largest score count the subset-bucketing solver accepts.
pub const MAX_EXACT_SUBSET_SCORES: usize = 12;

/// State at one visited grid point.
#[derive(Debug, Clone, Copy)]
pub struct GridPoint<'a> {
    pub indices: &'a [usize],
    pub counts: &'a [usize],
    pub sum_of_squares: u64,
}

impl GridPoint<'_> {
    pub fn range(&self) -> usize {
        let (mut lo, mut hi) = (usize::MAX, 0);
        for &c in self.counts {
            lo = lo.min(c);
            hi = hi.max(c);
        }
        hi - lo
    }
}

/// Number of grid points for `index`, saturating.
pub fn grid_size(index: &SortedScoreIndex) -> u128 {
    (0..index.m())
        .map(|j| index.valid_cut_indices(j).len() as u128)
        .fold(1u128, |acc, s| acc.saturating_mul(s))
}

/// Backtracking walker over every valid cut index vector, in lexicographic
/// order with score `0` outermost.
#[derive(Debug, Clone)]
pub struct GridWalker<'a> {
    index: &'a SortedScoreIndex,
    scheme: Scheme,
    cuts: Vec<Vec<usize>>,
    bucket: Vec<usize>,
    counts: Vec<usize>,
    sum_sq: u64,
    k: Vec<usize>,
}

impl<'a> GridWalker<'a> {
    /// Starts at `k = 0` everywhere: every item crosses every cut-off.
    pub fn new(index: &'a SortedScoreIndex, scheme: Scheme) -> Result<Self> {
        let (n, m) = (index.n(), index.m());
        if scheme == Scheme::Subset && m > MAX_EXACT_SUBSET_SCORES {
            return Err(Error::SubsetCapacity {
                m,
                max: MAX_EXACT_SUBSET_SCORES,
            });
        }
        let top = match scheme {
            Scheme::Count => m,
            Scheme::Subset => (1 << m) - 1,
        };
        let mut counts = vec![0; scheme.bucket_count(m)];
        counts[top] = n;
        Ok(Self {
            index,
            scheme,
            cuts: (0..m).map(|j| index.valid_cut_indices(j)).collect(),
            bucket: vec![top; n],
            counts,
            sum_sq: (n as u64) * (n as u64),
            k: vec![0; m],
        })
    }

    pub fn grid_size(&self) -> u128 {
        self.cuts
            .iter()
            .fold(1u128, |acc, c| acc.saturating_mul(c.len() as u128))
    }

    /// True when the walker's state equals its freshly constructed state.
    pub fn is_at_start(&self) -> bool {
        let fresh = Self::new(self.index, self.scheme).expect("constructed before");
        self.bucket == fresh.bucket
            && self.counts == fresh.counts
            && self.sum_sq == fresh.sum_sq
            && self.k == fresh.k
    }

    /// Visits every grid point, returning how many were visited.
    pub fn walk<F: FnMut(GridPoint<'_>)>(&mut self, mut visit: F) -> u64 {
        let mut visited = 0;
        self.descend(0, &mut visit, &mut visited);
        visited
    }

    fn descend<F: FnMut(GridPoint<'_>)>(&mut self, j: usize, visit: &mut F, visited: &mut u64) {
        let n = self.index.n();
        let last = j + 1 == self.k.len();
        for t in 0..self.cuts[j].len() {
            if t > 0 {
                let (from, to) = (self.cuts[j][t - 1], self.cuts[j][t]);
                for r in from..to {
                    let item = self.index.column(j).order[r];
                    self.set_crossing(item, j, false);
                }
                self.k[j] = to;
            }
            if last {
                *visited += 1;
                visit(GridPoint {
                    indices: &self.k,
                    counts: &self.counts,
                    sum_of_squares: self.sum_sq,
                });
            } else {
                self.descend(j + 1, visit, visited);
            }
        }
        // the last valid cut is n: nobody crosses j, so everyone moves back
        for r in 0..n {
            let item = self.index.column(j).order[r];
            self.set_crossing(item, j, true);
        }
        self.k[j] = 0;
    }

    #[inline]
    fn set_crossing(&mut self, item: usize, j: usize, cross: bool) {
        let from = self.bucket[item];
        let to = match (self.scheme, cross) {
            (Scheme::Count, true) => from + 1,
            (Scheme::Count, false) => from - 1,
            (Scheme::Subset, true) => from | (1 << j),
            (Scheme::Subset, false) => from & !(1 << j),
        };
        // (c - 1)^2 - c^2 = 1 - 2c ; (c + 1)^2 - c^2 = 2c + 1
        let cf = self.counts[from] as u64;
        self.sum_sq = self.sum_sq + 1 - 2 * cf;
        self.counts[from] -= 1;
        let ct = self.counts[to] as u64;
        self.sum_sq += 2 * ct + 1;
        self.counts[to] += 1;
        self.bucket[item] = to;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExactOptions {
    /// Maximum number of grid points to evaluate.
    pub budget: u128,
}

impl Default for ExactOptions {
    fn default() -> Self {
        Self {
            budget: DEFAULT_BUDGET,
        }
    }
}

fn check_budget(walker: &GridWalker<'_>, opts: &ExactOptions) -> Result<()> {
    let required = walker.grid_size();
    if required > opts.budget {
        return Err(Error::BudgetExceeded {
            required,
            budget: opts.budget,
        });
    }
    Ok(())
}

fn check_items(scores: &ScoreMatrix) -> Result<()> {
    if scores.n() < 2 {
        return Err(Error::UndefinedMetric { n: scores.n() });
    }
    Ok(())
}

/// Minimizes a key over the grid; the first (lexicographically smallest)
/// point wins ties.
fn minimize<K: PartialOrd + Copy, F: Fn(&GridPoint<'_>) -> K>(
    scores: &ScoreMatrix,
    method: Method,
    opts: &ExactOptions,
    key: F,
) -> Result<SolveReport> {
    check_items(scores)?;
    let start = Instant::now();
    let index = SortedScoreIndex::new(scores);
    let mut walker = GridWalker::new(&index, method.scheme())?;
    check_budget(&walker, opts)?;
    let mut best: Option<(K, Vec<usize>)> = None;
    let evaluations = walker.walk(|p| {
        let k = key(&p);
        if best.as_ref().is_none_or(|(b, _)| k < *b) {
            best = Some((k, p.indices.to_vec()));
        }
    });
    let (_, indices) = best.expect("grid always has at least one point");
    let mut report = SolveReport::from_indices(method, scores, &index, CutIndexVector(indices))?;
    report.evaluations = evaluations;
    report.iterations = 1;
    report.elapsed = start.elapsed();
    Ok(report)
}

/// Global maximizer of distinguishability under count bucketing.
pub fn solve_exact_count(scores: &ScoreMatrix, opts: &ExactOptions) -> Result<SolveReport> {
    minimize(scores, Method::ExactCount, opts, |p| p.sum_of_squares)
}

/// Global maximizer of distinguishability under subset bucketing.
pub fn solve_exact_subset(scores: &ScoreMatrix, opts: &ExactOptions) -> Result<SolveReport> {
    if scores.m() > MAX_EXACT_SUBSET_SCORES {
        return Err(Error::SubsetCapacity {
            m: scores.m(),
            max: MAX_EXACT_SUBSET_SCORES,
        });
    }
    minimize(scores, Method::ExactSubset, opts, |p| p.sum_of_squares)
}

/// Minimizes `max - min` of the bucket counts, preferring smaller sums of
/// squares among equal ranges.
pub fn solve_min_range(scores: &ScoreMatrix, opts: &ExactOptions) -> Result<SolveReport> {
    minimize(scores, Method::MinRange, opts, |p| {
        (p.range(), p.sum_of_squares)
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bucket::BucketHistogram;

    fn identical(n: usize, m: usize) -> ScoreMatrix {
        ScoreMatrix::from_rows(vec![vec![1.5; m]; n]).unwrap()
    }

    #[test]
    fn identical_items_give_zero() {
        let s = identical(5, 2);
        let r = solve_exact_count(&s, &ExactOptions::default()).unwrap();
        assert_eq!(r.d(), 0.0);
        assert_eq!(r.cut_indices.unwrap().0, vec![0, 0]);
        let r = solve_min_range(&s, &ExactOptions::default()).unwrap();
        assert_eq!(r.objective, 5.0);
        assert_eq!(r.cut_indices.unwrap().0, vec![0, 0]);
    }

    #[test]
    fn budget_is_enforced() {
        let s =
            ScoreMatrix::from_rows((0..10).map(|i| vec![i as f64, -(i as f64)]).collect()).unwrap();
        let err = solve_exact_count(&s, &ExactOptions { budget: 120 }).unwrap_err();
        assert!(matches!(
            err,
            Error::BudgetExceeded {
                required: 121,
                budget: 120
            }
        ));
        assert!(err.is_capacity());
        assert!(solve_exact_count(&s, &ExactOptions { budget: 121 }).is_ok());
    }

    #[test]
    fn subset_capacity() {
        let s = ScoreMatrix::from_rows(vec![vec![0.0; 13], vec![1.0; 13]]).unwrap();
        assert!(matches!(
            solve_exact_subset(&s, &ExactOptions::default()),
            Err(Error::SubsetCapacity { m: 13, max: 12 })
        ));
    }

    #[test]
    fn walker_restores_state() {
        let s = ScoreMatrix::from_rows(vec![
            vec![1.0, 2.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![2.0, 2.0, 0.0],
            vec![0.0, 1.0, 4.0],
        ])
        .unwrap();
        let idx = SortedScoreIndex::new(&s);
        for scheme in [Scheme::Count, Scheme::Subset] {
            let mut w = GridWalker::new(&idx, scheme).unwrap();
            let visited = w.walk(|p| {
                let h = BucketHistogram::from_counts(p.counts.to_vec());
                assert_eq!(h.sum_of_squares(), p.sum_of_squares);
                assert_eq!(h.total(), 4);
            });
            assert_eq!(visited as u128, grid_size(&idx));
            assert!(w.is_at_start());
        }
    }

    #[test]
    fn visit_order_is_lexicographic() {
        let s = ScoreMatrix::from_rows(vec![vec![0.0, 0.0], vec![1.0, 1.0]]).unwrap();
        let idx = SortedScoreIndex::new(&s);
        let mut seen = Vec::new();
        GridWalker::new(&idx, Scheme::Count)
            .unwrap()
            .walk(|p| seen.push(p.indices.to_vec()));
        let mut sorted = seen.clone();
        sorted.sort();
        assert_eq!(seen, sorted);
        assert_eq!(seen.len(), 9);
    }

    #[test]
    fn single_score_subset_matches_count() {
        let s = ScoreMatrix::from_rows(vec![vec![3.0], vec![1.0], vec![2.0], vec![2.0], vec![5.0]])
            .unwrap();
        let a = solve_exact_count(&s, &ExactOptions::default()).unwrap();
        let b = solve_exact_subset(&s, &ExactOptions::default()).unwrap();
        assert_eq!(a.cut_indices, b.cut_indices);
        assert_eq!(a.histogram, b.histogram);
        assert_eq!(a.distinguishability, b.distinguishability);
    }
}
