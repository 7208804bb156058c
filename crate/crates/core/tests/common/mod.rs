//! Brute-force reference implementations shared by the integration tests.
//! Nothing here goes through the crate's sorted index or grid walker.
#![allow(dead_code)]

use distcut::ScoreMatrix;
use itertools::Itertools;
use proptest::prelude::*;

/// Candidate cut-offs for one column: `-inf`, the midpoints between
/// consecutive distinct values, and `+inf`, ascending.
pub fn candidates(column: &[f64]) -> Vec<f64> {
    let mut v = column.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v.dedup();
    let mut out = vec![f64::NEG_INFINITY];
    out.extend(v.windows(2).map(|w| (w[0] + w[1]) / 2.0));
    out.push(f64::INFINITY);
    out
}

pub fn naive_counts(scores: &ScoreMatrix, cutoffs: &[f64], subset: bool) -> Vec<usize> {
    let m = scores.m();
    let mut counts = vec![0; if subset { 1 << m } else { m + 1 }];
    for i in 0..scores.n() {
        let mut b = 0;
        for (j, &c) in cutoffs.iter().enumerate() {
            if scores.get(i, j) >= c {
                b += if subset { 1 << j } else { 1 };
            }
        }
        counts[b] += 1;
    }
    counts
}

pub fn sum_sq(counts: &[usize]) -> u64 {
    counts.iter().map(|&c| (c * c) as u64).sum()
}

pub fn range(counts: &[usize]) -> usize {
    counts.iter().max().unwrap() - counts.iter().min().unwrap()
}

/// Every candidate cut-off vector in lexicographic order, with its counts.
pub fn all_points(scores: &ScoreMatrix, subset: bool) -> Vec<(Vec<f64>, Vec<usize>)> {
    (0..scores.m())
        .map(|j| candidates(&scores.column(j)))
        .multi_cartesian_product()
        .map(|c| {
            let counts = naive_counts(scores, &c, subset);
            (c, counts)
        })
        .collect()
}

/// First point minimizing `key`.
pub fn argmin<K: PartialOrd + Copy>(
    points: &[(Vec<f64>, Vec<usize>)],
    key: impl Fn(&[usize]) -> K,
) -> (Vec<f64>, Vec<usize>) {
    let mut best = &points[0];
    let mut best_key = key(&best.1);
    for p in &points[1..] {
        let k = key(&p.1);
        if k < best_key {
            best = p;
            best_key = k;
        }
    }
    best.clone()
}

/// Small matrices with integer scores drawn from a 5-value alphabet.
pub fn small_matrix(max_n: usize, max_m: usize) -> impl Strategy<Value = ScoreMatrix> {
    (2..=max_n, 1..=max_m).prop_flat_map(|(n, m)| {
        prop::collection::vec(prop::collection::vec(0..5i32, m), n).prop_map(|rows| {
            ScoreMatrix::from_rows(
                rows.into_iter()
                    .map(|r| r.into_iter().map(f64::from).collect())
                    .collect(),
            )
            .unwrap()
        })
    })
}

/// Deterministic pseudo-random small matrix (integer alphabet `0..alphabet`).
pub fn lcg_matrix(seed: u64, n: usize, m: usize, alphabet: u64) -> ScoreMatrix {
    let mut state = seed
        .wrapping_mul(6364136223846793005)
        .wrapping_add(1442695040888963407);
    let mut next = || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        (state >> 33) % alphabet
    };
    ScoreMatrix::from_rows(
        (0..n)
            .map(|_| (0..m).map(|_| next() as f64).collect())
            .collect(),
    )
    .unwrap()
}

/// Printed row numbers of the two set-function counterexamples on the demo
/// table: `(A, B, x)`.
pub const SUBMODULAR_EXAMPLE: (&[usize], &[usize], usize) = (
    &[32, 37, 5, 10, 43, 12, 46, 48, 49, 22, 29],
    &[32, 1, 37, 5, 10, 11, 43, 12, 46, 45, 48, 49, 22, 29],
    24,
);
pub const SUPERMODULAR_EXAMPLE: (&[usize], &[usize], usize) = (
    &[23, 46, 47],
    &[
        2, 3, 5, 7, 10, 14, 17, 18, 20, 23, 24, 25, 26, 27, 29, 30, 32, 36, 41, 43, 44, 45, 46, 47,
        48, 49,
    ],
    34,
);

/// `f(E)`: squared count histogram under the componentwise minimum of the
/// rows in `items` (0-based), crossing with `>=` or, if `strict`, with `>`.
pub fn naive_set_value(scores: &ScoreMatrix, items: &[usize], strict: bool) -> u64 {
    let cut: Vec<f64> = (0..scores.m())
        .map(|j| {
            items
                .iter()
                .map(|&i| scores.get(i, j))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    let mut counts = vec![0; scores.m() + 1];
    for i in 0..scores.n() {
        let b = (0..scores.m())
            .filter(|&j| {
                let v = scores.get(i, j);
                if strict {
                    v > cut[j]
                } else {
                    v >= cut[j]
                }
            })
            .count();
        counts[b] += 1;
    }
    sum_sq(&counts)
}

/// `(f(A + x) - f(A), f(B + x) - f(B))` with items shifted by `offset`.
pub fn naive_marginals(
    scores: &ScoreMatrix,
    example: (&[usize], &[usize], usize),
    offset: usize,
    strict: bool,
) -> (i64, i64) {
    let (a, b, x) = example;
    let shift = |v: &[usize]| v.iter().map(|&i| i - offset).collect::<Vec<_>>();
    let f = |v: &[usize]| naive_set_value(scores, v, strict) as i64;
    let (a, b, x) = (shift(a), shift(b), x - offset);
    let with_x = |v: &[usize]| {
        let mut v = v.to_vec();
        v.push(x);
        v
    };
    (f(&with_x(&a)) - f(&a), f(&with_x(&b)) - f(&b))
}
