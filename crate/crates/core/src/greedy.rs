//! Coordinate-wise greedy search over candidate cut-offs, started at the median.

use std::str::FromStr;
use std::time::Instant;

use crate::cutoffs::{median_cutoffs, median_start_indices, CutIndexVector};
use crate::error::{Error, Result};
use crate::report::{Method, SolveReport};
use crate::scores::{ScoreMatrix, SortedScoreIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum GreedyMode {
    /// Scan every (score, cut) pair, then apply the single best move.
    #[default]
    BestImprovement,
    /// Apply each improving cut as soon as it is found.
    FirstImprovement,
}

impl FromStr for GreedyMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "best" | "best_improvement" => Ok(Self::BestImprovement),
            "first" | "first_improvement" => Ok(Self::FirstImprovement),
            _ => Err(Error::Precondition(format!("unknown greedy mode `{s}`"))),
        }
    }
}

/// Median cut-offs, evaluated as given (an item whose score equals its
/// median crosses).
pub fn solve_median(scores: &ScoreMatrix) -> Result<SolveReport> {
    let start = Instant::now();
    let cutoffs = median_cutoffs(scores);
    let index = SortedScoreIndex::new(scores);
    let indices = cutoffs.equivalent_indices(&index);
    let mut report = SolveReport::from_cutoffs(Method::Median, scores, cutoffs)?;
    report.cut_indices = Some(indices);
    report.evaluations = 1;
    report.elapsed = start.elapsed();
    Ok(report)
}

struct Search<'a> {
    index: &'a SortedScoreIndex,
    cuts: Vec<Vec<usize>>,
    /// `rank[j][item]`: sorted position of `item` in score `j`.
    rank: Vec<Vec<usize>>,
    k: Vec<usize>,
    crossings: Vec<usize>,
    evaluations: u64,
}

impl<'a> Search<'a> {
    fn new(index: &'a SortedScoreIndex, start: Vec<usize>) -> Self {
        let (n, m) = (index.n(), index.m());
        let mut rank = vec![vec![0; n]; m];
        for (j, col) in index.columns().iter().enumerate() {
            for (r, &item) in col.order.iter().enumerate() {
                rank[j][item] = r;
            }
        }
        let crossings = (0..n)
            .map(|i| (0..m).filter(|&j| rank[j][i] >= start[j]).count())
            .collect();
        Self {
            index,
            cuts: (0..m).map(|j| index.valid_cut_indices(j)).collect(),
            rank,
            k: start,
            crossings,
            evaluations: 0,
        }
    }

    fn sum_of_squares(&self) -> u64 {
        let mut counts = vec![0u64; self.index.m() + 1];
        for &c in &self.crossings {
            counts[c] += 1;
        }
        counts.iter().map(|c| c * c).sum()
    }

    /// Sum of squares for every valid cut of score `j`, others fixed.
    fn scan(&mut self, j: usize) -> Vec<(usize, u64)> {
        let m = self.index.m();
        let order = &self.index.column(j).order;
        // bucket each item would land in if it crossed j
        let above: Vec<usize> = (0..self.index.n())
            .map(|i| self.crossings[i] + usize::from(self.rank[j][i] < self.k[j]))
            .collect();
        let mut counts = vec![0u64; m + 1];
        for &b in &above {
            counts[b] += 1;
        }
        let mut sum_sq: u64 = counts.iter().map(|c| c * c).sum();
        let mut out = Vec::with_capacity(self.cuts[j].len());
        let mut prev = 0;
        for &k in &self.cuts[j] {
            for &item in &order[prev..k] {
                let b = above[item];
                sum_sq = sum_sq + 1 - 2 * counts[b];
                counts[b] -= 1;
                sum_sq += 2 * counts[b - 1] + 1;
                counts[b - 1] += 1;
            }
            prev = k;
            out.push((k, sum_sq));
        }
        self.evaluations += out.len() as u64;
        out
    }

    fn set_cut(&mut self, j: usize, k: usize) {
        let old = self.k[j];
        for i in 0..self.index.n() {
            let was = self.rank[j][i] >= old;
            let now = self.rank[j][i] >= k;
            match (was, now) {
                (true, false) => self.crossings[i] -= 1,
                (false, true) => self.crossings[i] += 1,
                _ => {}
            }
        }
        self.k[j] = k;
    }
}

/// Greedy search from the median, stopping after a sweep that finds no
/// strict improvement.
pub fn solve_greedy(scores: &ScoreMatrix, mode: GreedyMode) -> Result<SolveReport> {
    if scores.n() < 2 {
        return Err(Error::UndefinedMetric { n: scores.n() });
    }
    let started = Instant::now();
    let index = SortedScoreIndex::new(scores);
    let start = median_start_indices(&index);
    let mut search = Search::new(&index, start.0);
    let mut best = search.sum_of_squares();
    let mut sweeps = 0u64;
    loop {
        sweeps += 1;
        let mut improved = false;
        match mode {
            GreedyMode::BestImprovement => {
                let mut chosen: Option<(usize, usize, u64)> = None;
                for j in 0..index.m() {
                    for (k, s) in search.scan(j) {
                        let target = chosen.map_or(best, |c| c.2);
                        if s < target {
                            chosen = Some((j, k, s));
                        }
                    }
                }
                if let Some((j, k, s)) = chosen {
                    search.set_cut(j, k);
                    best = s;
                    improved = true;
                }
            }
            GreedyMode::FirstImprovement => {
                for j in 0..index.m() {
                    let mut pick = None;
                    for (k, s) in search.scan(j) {
                        if s < best {
                            best = s;
                            pick = Some(k);
                        }
                    }
                    if let Some(k) = pick {
                        search.set_cut(j, k);
                        improved = true;
                    }
                }
            }
        }
        if !improved {
            break;
        }
    }
    let evaluations = search.evaluations;
    let mut report =
        SolveReport::from_indices(Method::Greedy, scores, &index, CutIndexVector(search.k))?;
    report.iterations = sweeps;
    report.evaluations = evaluations;
    report.elapsed = started.elapsed();
    Ok(report)
}
