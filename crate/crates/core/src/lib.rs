//! Per-score cut-offs that maximize distinguishability: the fraction of item
//! pairs whose scores clear a different number of cut-offs.
//!
//! Solvers: exact grid enumeration ([`grid`]), the range surrogate, a greedy
//! coordinate search ([`greedy`]) and a smoothed gradient descent
//! ([`smooth`]). [`lp`] writes the binary programs for external solvers and
//! [`bench`] runs ensembles of generated instances.

pub mod bench;
pub mod bucket;
pub mod cutoffs;
pub mod data;
pub mod error;
pub mod format;
pub mod greedy;
pub mod grid;
pub mod lp;
pub mod report;
pub mod scores;
pub mod set_function;
pub mod smooth;

pub use bucket::{
    bucket_histogram, crossings, distinguishability, distinguishability_by_pairs, BucketHistogram,
    Distinguishability, Scheme,
};
pub use cutoffs::{median_cutoffs, CutIndexVector, CutoffValues};
pub use error::{Error, Result};
pub use greedy::{solve_greedy, solve_median, GreedyMode};
pub use grid::{solve_exact_count, solve_exact_subset, solve_min_range, ExactOptions};
pub use report::{Method, SolveReport};
pub use scores::{ScoreMatrix, SortedScoreIndex};
pub use smooth::{solve_continuous, SmoothConfig};
