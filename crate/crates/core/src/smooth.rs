//! Smoothed objective and adaptive-step gradient descent over real cut-offs.
//!
//! Hard crossings become logistic curves `sigma_r(x, c)`, an item's bucket
//! index becomes the sum of its crossing curves `u_i`, and the count of
//! bucket `b` becomes `sum_i bump_b(u_i)` with `bump_b(x) = 4 s (1 - s)`,
//! `s = sigma_r(x, b)`. The cost is the sum of squared smoothed counts over
//! buckets `0..=m`.

use std::time::Instant;

use crate::cutoffs::{median_cutoffs, CutoffValues};
use crate::error::{Error, Result};
use crate::report::{Method, SolveReport};
use crate::scores::{ScoreMatrix, SortedScoreIndex};

/// `(s, 1 - s)` for `s = 1 / (1 + e^-z)`, both without cancellation.
#[inline]
fn logistic_pair(z: f64) -> (f64, f64) {
    let e = (-z.abs()).exp();
    let big = 1.0 / (1.0 + e);
    let small = e / (1.0 + e);
    if z >= 0.0 {
        (big, small)
    } else {
        (small, big)
    }
}

/// Logistic crossing indicator `1 / (1 + exp(-r (x - c)))`.
pub fn sigma(x: f64, c: f64, r: f64) -> f64 {
    logistic_pair(r * (x - c)).0
}

/// Bump centred on bucket `i`; equals 1 at `x = i`.
pub fn bump(x: f64, i: f64, r: f64) -> f64 {
    let (s, t) = logistic_pair(r * (x - i));
    4.0 * s * t
}

/// Derivative of [`bump`] with respect to `x`.
fn bump_slope(x: f64, i: f64, r: f64) -> f64 {
    let (s, t) = logistic_pair(r * (x - i));
    4.0 * r * s * t * (t - s)
}

fn check_len(scores: &ScoreMatrix, cutoffs: &[f64]) -> Result<()> {
    if cutoffs.len() != scores.m() {
        return Err(Error::DimensionMismatch {
            expected: scores.m(),
            found: cutoffs.len(),
        });
    }
    Ok(())
}

/// Smoothed bucket index of every item.
fn soft_indices(scores: &ScoreMatrix, cutoffs: &[f64], r: f64) -> Vec<f64> {
    scores
        .rows()
        .map(|row| row.iter().zip(cutoffs).map(|(&x, &c)| sigma(x, c, r)).sum())
        .collect()
}

fn soft_counts(soft: &[f64], m: usize, r: f64) -> Vec<f64> {
    (0..=m)
        .map(|b| soft.iter().map(|&u| bump(u, b as f64, r)).sum())
        .collect()
}

/// Sum of squared smoothed bucket counts.
pub fn smooth_objective(scores: &ScoreMatrix, cutoffs: &[f64], r: f64) -> Result<f64> {
    check_len(scores, cutoffs)?;
    let soft = soft_indices(scores, cutoffs, r);
    Ok(soft_counts(&soft, scores.m(), r)
        .iter()
        .map(|b| b * b)
        .sum())
}

/// Analytic gradient of [`smooth_objective`] with respect to the cut-offs.
pub fn smooth_gradient(scores: &ScoreMatrix, cutoffs: &[f64], r: f64) -> Result<Vec<f64>> {
    check_len(scores, cutoffs)?;
    let m = scores.m();
    let soft = soft_indices(scores, cutoffs, r);
    let counts = soft_counts(&soft, m, r);
    let mut grad = vec![0.0; m];
    for (row, &u) in scores.rows().zip(&soft) {
        // d cost / d u_i
        let w: f64 = counts
            .iter()
            .enumerate()
            .map(|(b, &cb)| 2.0 * cb * bump_slope(u, b as f64, r))
            .sum();
        for (j, (&x, &c)) in row.iter().zip(cutoffs).enumerate() {
            let (s, t) = logistic_pair(r * (x - c));
            grad[j] -= w * r * s * t;
        }
    }
    Ok(grad)
}

/// Settings for [`solve_continuous`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SmoothConfig {
    /// Logistic sharpness.
    pub r: f64,
    pub eps_init: f64,
    /// Step divisor used by the backtracking search.
    pub shrink: f64,
    /// Stop once the largest gradient component falls below this.
    pub grad_tol: f64,
    /// Stop once the step falls below this without finding a decrease.
    pub eps_min: f64,
    pub max_iters: u64,
}

impl Default for SmoothConfig {
    fn default() -> Self {
        Self {
            r: 5.0,
            eps_init: 1.0,
            shrink: 1.1,
            grad_tol: 1e-8,
            eps_min: 1e-12,
            max_iters: 10_000,
        }
    }
}

impl SmoothConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.r > 0.0 && self.r.is_finite()) {
            return Err(Error::Precondition(format!(
                "sharpness r must be positive and finite, got {:e}",
                self.r
            )));
        }
        if !(self.shrink > 1.0 && self.shrink.is_finite()) {
            return Err(Error::Precondition("step divisor must exceed 1".into()));
        }
        if !(self.eps_min > 0.0 && self.eps_min < self.eps_init) {
            return Err(Error::Precondition("need 0 < eps_min < eps_init".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StopReason {
    SmallGradient,
    StepUnderflow,
    IterationLimit,
}

/// Current point of a descent run.
#[derive(Debug, Clone, PartialEq)]
pub struct SmoothState {
    pub cutoffs: Vec<f64>,
    pub objective: f64,
    pub gradient: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Descent {
    pub state: SmoothState,
    /// Objective at the start and after every accepted step.
    pub trace: Vec<f64>,
    pub iterations: u64,
    pub evaluations: u64,
    pub stop: StopReason,
}

fn evaluate(scores: &ScoreMatrix, cutoffs: Vec<f64>, r: f64) -> Result<SmoothState> {
    let objective = smooth_objective(scores, &cutoffs, r)?;
    let gradient = smooth_gradient(scores, &cutoffs, r)?;
    if !objective.is_finite() || gradient.iter().any(|g| !g.is_finite()) {
        return Err(Error::Numeric(format!(
            "non-finite smoothed objective or gradient at r = {r:e}"
        )));
    }
    Ok(SmoothState {
        cutoffs,
        objective,
        gradient,
    })
}

/// Gradient descent from `start`; each accepted step strictly lowers the cost.
pub fn descend(scores: &ScoreMatrix, start: Vec<f64>, config: &SmoothConfig) -> Result<Descent> {
    config.validate()?;
    check_len(scores, &start)?;
    let mut state = evaluate(scores, start, config.r)?;
    let mut trace = vec![state.objective];
    let mut iterations = 0;
    let mut evaluations = 1;
    let stop = loop {
        let grad_norm = state.gradient.iter().fold(0.0f64, |a, g| a.max(g.abs()));
        if grad_norm < config.grad_tol {
            break StopReason::SmallGradient;
        }
        if iterations >= config.max_iters {
            break StopReason::IterationLimit;
        }
        let mut eps = config.eps_init;
        let accepted = loop {
            let candidate: Vec<f64> = state
                .cutoffs
                .iter()
                .zip(&state.gradient)
                .map(|(c, g)| c - eps * g)
                .collect();
            let value = smooth_objective(scores, &candidate, config.r)?;
            evaluations += 1;
            if value < state.objective {
                break Some(candidate);
            }
            eps /= config.shrink;
            if eps < config.eps_min {
                break None;
            }
        };
        let Some(next) = accepted else {
            break StopReason::StepUnderflow;
        };
        state = evaluate(scores, next, config.r)?;
        evaluations += 1;
        iterations += 1;
        trace.push(state.objective);
    };
    Ok(Descent {
        state,
        trace,
        iterations,
        evaluations,
        stop,
    })
}

/// Descent from the median cut-offs, reported at the cut index whose
/// crossing sets match the final real cut-offs.
pub fn solve_continuous(scores: &ScoreMatrix, config: &SmoothConfig) -> Result<SolveReport> {
    if scores.n() < 2 {
        return Err(Error::UndefinedMetric { n: scores.n() });
    }
    let started = Instant::now();
    let run = descend(scores, median_cutoffs(scores).0, config)?;
    let index = SortedScoreIndex::new(scores);
    let indices = CutoffValues(run.state.cutoffs.clone()).equivalent_indices(&index);
    let mut report = SolveReport::from_indices(Method::Continuous, scores, &index, indices)?;
    report.smoothed_objective = Some(run.state.objective);
    report.iterations = run.iterations;
    report.evaluations = run.evaluations;
    report.elapsed = started.elapsed();
    Ok(report)
}
