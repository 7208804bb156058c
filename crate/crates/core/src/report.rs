use std::fmt;
use std::str::FromStr;
use std::time::Duration;

use serde::Serialize;
use serde_json::json;

use crate::bucket::{
    bucket_histogram, distinguishability, BucketHistogram, Distinguishability, Scheme,
};
use crate::cutoffs::{CutIndexVector, CutoffValues};
use crate::error::{Error, Result};
use crate::scores::{ScoreMatrix, SortedScoreIndex};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Median,
    Greedy,
    ExactCount,
    ExactSubset,
    MinRange,
    Continuous,
}

impl Method {
    pub const ALL: [Method; 6] = [
        Method::Median,
        Method::Greedy,
        Method::ExactCount,
        Method::ExactSubset,
        Method::MinRange,
        Method::Continuous,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Median => "median",
            Method::Greedy => "greedy",
            Method::ExactCount => "exact_count",
            Method::ExactSubset => "exact_subset",
            Method::MinRange => "min_range",
            Method::Continuous => "continuous",
        }
    }

    pub fn scheme(self) -> Scheme {
        match self {
            Method::ExactSubset => Scheme::Subset,
            _ => Scheme::Count,
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s)
            .ok_or_else(|| Error::Precondition(format!("unknown method `{s}`")))
    }
}

/// Outcome of one solver run.
///
/// `cutoffs`, `histogram` and `distinguishability` are always recomputed
/// from the score matrix, so they agree with each other.
#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub method: Method,
    /// Cut index vector inducing the reported crossing sets.
    pub cut_indices: Option<CutIndexVector>,
    pub cutoffs: CutoffValues,
    pub histogram: BucketHistogram,
    pub distinguishability: Distinguishability,
    /// Sum of squared bucket counts, or `max - min` for [`Method::MinRange`].
    pub objective: f64,
    /// Final smoothed cost, only for [`Method::Continuous`].
    pub smoothed_objective: Option<f64>,
    pub iterations: u64,
    pub evaluations: u64,
    pub elapsed: Duration,
}

impl SolveReport {
    pub(crate) fn from_indices(
        method: Method,
        scores: &ScoreMatrix,
        index: &SortedScoreIndex,
        indices: CutIndexVector,
    ) -> Result<Self> {
        let cutoffs = indices.realize(index)?;
        let mut report = Self::from_cutoffs(method, scores, cutoffs)?;
        report.cut_indices = Some(indices);
        Ok(report)
    }

    pub(crate) fn from_cutoffs(
        method: Method,
        scores: &ScoreMatrix,
        cutoffs: CutoffValues,
    ) -> Result<Self> {
        let histogram = bucket_histogram(scores, &cutoffs, method.scheme())?;
        let d = distinguishability(&histogram)?;
        let objective = match method {
            Method::MinRange => histogram.range() as f64,
            _ => histogram.sum_of_squares() as f64,
        };
        Ok(Self {
            method,
            cut_indices: None,
            cutoffs,
            histogram,
            distinguishability: d,
            objective,
            smoothed_objective: None,
            iterations: 0,
            evaluations: 0,
            elapsed: Duration::ZERO,
        })
    }

    pub fn d(&self) -> f64 {
        self.distinguishability.value()
    }

    pub fn elapsed_ms(&self) -> f64 {
        self.elapsed.as_secs_f64() * 1e3
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = json!({
            "method": self.method.name(),
            "cutoff_values": self.cutoffs.to_json(),
            "cutoff_indices": self.cut_indices,
            "bucket_counts": self.histogram.counts(),
            "distinguishability": self.d(),
            "objective": self.objective,
            "iterations": self.iterations,
            "evaluations": self.evaluations,
            "elapsed_ms": self.elapsed_ms(),
        });
        if let Some(s) = self.smoothed_objective {
            v["smoothed_objective"] = s.into();
        }
        v
    }
}
