mod common;

use common::*;
use distcut::bucket::{bucket_histogram, distinguishability, distinguishability_by_pairs, Scheme};
use distcut::grid::{ExactOptions, GridWalker};
use distcut::{
    solve_exact_count, solve_exact_subset, solve_greedy, solve_median, solve_min_range,
    CutIndexVector, CutoffValues, GreedyMode, SortedScoreIndex,
};
use proptest::prelude::*;

#[test]
fn exact_count_matches_brute_force_on_random_instances() {
    for seed in 0..120 {
        let s = lcg_matrix(seed, 2 + (seed as usize % 11), 1 + (seed as usize % 3), 5);
        let points = all_points(&s, false);
        let (best_c, best_counts) = argmin(&points, sum_sq);
        let r = solve_exact_count(&s, &ExactOptions::default()).unwrap();
        assert_eq!(
            r.histogram.sum_of_squares(),
            sum_sq(&best_counts),
            "seed {seed}"
        );
        assert_eq!(r.cutoffs.0, best_c, "tie-break differs, seed {seed}");
        assert_eq!(r.evaluations as usize, points.len());
    }
}

#[test]
fn min_range_matches_brute_force_on_random_instances() {
    for seed in 0..120 {
        let s = lcg_matrix(
            1000 + seed,
            2 + (seed as usize % 11),
            1 + (seed as usize % 3),
            5,
        );
        let points = all_points(&s, false);
        let (best_c, best_counts) = argmin(&points, |c| (range(c), sum_sq(c)));
        let r = solve_min_range(&s, &ExactOptions::default()).unwrap();
        assert_eq!(r.objective as usize, range(&best_counts), "seed {seed}");
        assert_eq!(r.cutoffs.0, best_c, "seed {seed}");
    }
}

#[test]
fn exact_subset_matches_brute_force() {
    // includes the n = 6, m = 2 shape
    for seed in 0..60 {
        let s = lcg_matrix(
            2000 + seed,
            6 + (seed as usize % 3),
            2 + (seed as usize % 2),
            4,
        );
        let points = all_points(&s, true);
        let (best_c, best_counts) = argmin(&points, sum_sq);
        let r = solve_exact_subset(&s, &ExactOptions::default()).unwrap();
        assert_eq!(r.histogram.counts(), best_counts.as_slice(), "seed {seed}");
        assert_eq!(r.cutoffs.0, best_c);
        let count = solve_exact_count(&s, &ExactOptions::default()).unwrap();
        assert!(r.d() >= count.d());
    }
}

#[test]
fn n8_m2_instance() {
    let s = lcg_matrix(77, 8, 2, 100);
    let points = all_points(&s, false);
    let (_, best) = argmin(&points, sum_sq);
    let r = solve_exact_count(&s, &ExactOptions::default()).unwrap();
    assert_eq!(r.histogram.counts(), best.as_slice());
    let (_, best) = argmin(&points, |c| (range(c), sum_sq(c)));
    let r = solve_min_range(&s, &ExactOptions::default()).unwrap();
    assert_eq!(r.histogram.counts(), best.as_slice());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    #[test]
    fn incremental_state_matches_recomputation(s in small_matrix(12, 3)) {
        let idx = SortedScoreIndex::new(&s);
        for scheme in [Scheme::Count, Scheme::Subset] {
            let mut walker = GridWalker::new(&idx, scheme).unwrap();
            let mut visited = 0usize;
            walker.walk(|p| {
                visited += 1;
                let c = CutIndexVector(p.indices.to_vec()).realize(&idx).unwrap();
                let counts = naive_counts(&s, &c.0, scheme == Scheme::Subset);
                assert_eq!(p.counts, counts.as_slice());
                assert_eq!(p.sum_of_squares, sum_sq(&counts));
            });
            prop_assert_eq!(visited, all_points(&s, false).len());
            prop_assert!(walker.is_at_start());
        }
    }

    #[test]
    fn pair_count_equals_histogram_formula(s in small_matrix(12, 3), pick in any::<u64>()) {
        let points = all_points(&s, false);
        let (c, _) = &points[(pick % points.len() as u64) as usize];
        let c = CutoffValues(c.clone());
        for scheme in [Scheme::Count, Scheme::Subset] {
            let by_hist = distinguishability(&bucket_histogram(&s, &c, scheme).unwrap()).unwrap();
            let by_pairs = distinguishability_by_pairs(&s, &c, scheme).unwrap();
            prop_assert_eq!(by_hist, by_pairs);
        }
    }

    #[test]
    fn exact_dominates_heuristics(s in small_matrix(12, 3)) {
        let exact = solve_exact_count(&s, &ExactOptions::default()).unwrap();
        let others = [
            solve_median(&s).unwrap(),
            solve_greedy(&s, GreedyMode::BestImprovement).unwrap(),
            solve_greedy(&s, GreedyMode::FirstImprovement).unwrap(),
            solve_min_range(&s, &ExactOptions::default()).unwrap(),
            distcut::solve_continuous(&s, &distcut::SmoothConfig { max_iters: 200, ..Default::default() }).unwrap(),
        ];
        for r in others {
            prop_assert!(r.histogram.sum_of_squares() >= exact.histogram.sum_of_squares(), "{}", r.method);
        }
    }

    #[test]
    fn reports_are_deterministic(s in small_matrix(10, 3)) {
        let strip = |mut r: distcut::SolveReport| { r.elapsed = Default::default(); r };
        let a = strip(solve_exact_count(&s, &ExactOptions::default()).unwrap());
        let b = strip(solve_exact_count(&s, &ExactOptions::default()).unwrap());
        prop_assert_eq!(a, b);
        let a = strip(solve_greedy(&s, GreedyMode::BestImprovement).unwrap());
        let b = strip(solve_greedy(&s, GreedyMode::BestImprovement).unwrap());
        prop_assert_eq!(a, b);
    }
}
