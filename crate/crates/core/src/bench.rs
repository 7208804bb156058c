//! Ensemble benchmark: every method on every instance, approximation ratios
//! against the exact optimum, and five-number summaries.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::data::{generate_instance, InstanceSpec};
use crate::error::{Error, Result};
use crate::format::significant;
use crate::greedy::{solve_greedy, solve_median, GreedyMode};
use crate::grid::{solve_exact_count, solve_min_range, ExactOptions};
use crate::report::{Method, SolveReport};
use crate::scores::ScoreMatrix;
use crate::smooth::{solve_continuous, SmoothConfig};

/// Where benchmark instances come from.
#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    /// Instance `i` uses `spec` with `stream = i`.
    Generated(InstanceSpec),
    /// The same matrix for every instance.
    Fixed(ScoreMatrix),
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkConfig {
    pub instances: usize,
    pub source: InstanceSource,
    /// Methods to run; [`Method::ExactCount`] is added when missing.
    pub methods: Vec<Method>,
    /// Worker threads; `0` uses the rayon default.
    pub jobs: usize,
    pub exact: ExactOptions,
    pub greedy_mode: GreedyMode,
    pub smooth: SmoothConfig,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            instances: 100,
            source: InstanceSource::Generated(InstanceSpec::default()),
            methods: vec![
                Method::Median,
                Method::Greedy,
                Method::MinRange,
                Method::Continuous,
                Method::ExactCount,
            ],
            jobs: 0,
            exact: ExactOptions::default(),
            greedy_mode: GreedyMode::default(),
            smooth: SmoothConfig::default(),
        }
    }
}

impl BenchmarkConfig {
    /// Methods in run order, with the exact solver included once and last.
    pub fn method_list(&self) -> Vec<Method> {
        let mut list: Vec<Method> = Vec::new();
        for &m in &self.methods {
            if m != Method::ExactCount && !list.contains(&m) {
                list.push(m);
            }
        }
        list.push(Method::ExactCount);
        list
    }

    fn seed(&self) -> u64 {
        match &self.source {
            InstanceSource::Generated(spec) => spec.seed,
            InstanceSource::Fixed(_) => 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MethodResult {
    pub method: Method,
    pub report: SolveReport,
    /// `d_method / d_exact`; 1 when the exact optimum is 0.
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceOutcome {
    pub index: usize,
    pub seed: u64,
    /// Per-method results, or the error that excluded this instance.
    pub results: std::result::Result<Vec<MethodResult>, String>,
}

/// Five-number summary plus mean.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Stats {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
    pub mean: f64,
    pub count: usize,
}

/// Quantile by linear interpolation between closest ranks, `h = (len - 1) p`.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty(), "quantile of empty sample");
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

impl Stats {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut v = values.to_vec();
        v.sort_by(f64::total_cmp);
        Some(Self {
            min: v[0],
            q1: quantile(&v, 0.25),
            median: quantile(&v, 0.5),
            q3: quantile(&v, 0.75),
            max: v[v.len() - 1],
            mean: v.iter().sum::<f64>() / v.len() as f64,
            count: v.len(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchmarkSummary {
    pub methods: Vec<Method>,
    /// Ratio statistics per method, over included instances.
    pub ratios: BTreeMap<Method, Stats>,
    /// Wall time of the range solver over the exact solver, when both ran.
    pub time_ratio: Option<Stats>,
    pub instances: Vec<InstanceOutcome>,
    pub excluded: usize,
}

impl BenchmarkSummary {
    pub fn included(&self) -> usize {
        self.instances.len() - self.excluded
    }

    /// Ratio column for `method` across included instances, in instance order.
    pub fn ratio_column(&self, method: Method) -> Vec<f64> {
        self.instances
            .iter()
            .filter_map(|o| o.results.as_ref().ok())
            .filter_map(|rs| rs.iter().find(|r| r.method == method).map(|r| r.ratio))
            .collect()
    }
}

fn run_method(
    config: &BenchmarkConfig,
    method: Method,
    scores: &ScoreMatrix,
) -> Result<SolveReport> {
    match method {
        Method::Median => solve_median(scores),
        Method::Greedy => solve_greedy(scores, config.greedy_mode),
        Method::MinRange => solve_min_range(scores, &config.exact),
        Method::Continuous => solve_continuous(scores, &config.smooth),
        Method::ExactCount => solve_exact_count(scores, &config.exact),
        Method::ExactSubset => Err(Error::Precondition(
            "subset bucketing has a different optimum and is not benchmarked".into(),
        )),
    }
}

fn run_instance(
    config: &BenchmarkConfig,
    methods: &[Method],
    index: usize,
) -> Result<Vec<MethodResult>> {
    let scores = match &config.source {
        InstanceSource::Generated(spec) => generate_instance(&InstanceSpec {
            stream: index as u64,
            ..*spec
        })?,
        InstanceSource::Fixed(s) => s.clone(),
    };
    let reports = methods
        .iter()
        .map(|&m| run_method(config, m, &scores))
        .collect::<Result<Vec<_>>>()?;
    let exact_d = reports
        .last()
        .expect("exact solver always runs")
        .distinguishability;
    reports
        .into_iter()
        .zip(methods)
        .map(|(report, &method)| {
            let d = report.distinguishability;
            // compare exact integer ratios: a/b <= c/e  <=>  a e <= c b
            let lhs = d.different_pairs as u128 * exact_d.total_pairs as u128;
            let rhs = exact_d.different_pairs as u128 * d.total_pairs as u128;
            if lhs > rhs {
                return Err(Error::Numeric(format!(
                    "{method} beat the exact optimum on instance {index}"
                )));
            }
            let ratio = if exact_d.different_pairs == 0 {
                1.0
            } else {
                d.value() / exact_d.value()
            };
            Ok(MethodResult {
                method,
                report,
                ratio,
            })
        })
        .collect()
}

/// Runs the benchmark. Instances run in parallel; results are gathered in
/// instance order, so everything except timings is reproducible.
pub fn run_benchmark(config: &BenchmarkConfig) -> Result<BenchmarkSummary> {
    if let InstanceSource::Generated(spec) = &config.source {
        spec.validate()?;
    }
    let methods = config.method_list();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.jobs)
        .build()
        .map_err(|e| Error::Precondition(format!("thread pool: {e}")))?;
    let seed = config.seed();
    let instances: Vec<InstanceOutcome> = pool.install(|| {
        (0..config.instances)
            .into_par_iter()
            .map(|index| InstanceOutcome {
                index,
                seed,
                results: run_instance(config, &methods, index).map_err(|e| e.to_string()),
            })
            .collect()
    });
    let excluded = instances.iter().filter(|o| o.results.is_err()).count();
    let mut summary = BenchmarkSummary {
        methods: methods.clone(),
        ratios: BTreeMap::new(),
        time_ratio: None,
        instances,
        excluded,
    };
    for &m in &methods {
        if let Some(stats) = Stats::of(&summary.ratio_column(m)) {
            summary.ratios.insert(m, stats);
        }
    }
    if methods.contains(&Method::MinRange) {
        let times: Vec<f64> = summary
            .instances
            .iter()
            .filter_map(|o| o.results.as_ref().ok())
            .map(|rs| {
                let t = |m: Method| {
                    rs.iter()
                        .find(|r| r.method == m)
                        .map(|r| r.report.elapsed.as_secs_f64())
                        .unwrap_or(0.0)
                };
                t(Method::MinRange) / t(Method::ExactCount).max(1e-9)
            })
            .collect();
        summary.time_ratio = Stats::of(&times);
    }
    Ok(summary)
}

pub const SUMMARY_HEADER: &str = "method,min,q1,median,q3,max,mean,n_instances,n_excluded";

/// One row per method plus a `time_ratio` row, 6 significant digits.
pub fn emit_summary_csv(summary: &BenchmarkSummary) -> String {
    let mut out = String::from(SUMMARY_HEADER);
    out.push('\n');
    let mut row = |name: &str, s: &Stats| {
        let cells: Vec<String> = [s.min, s.q1, s.median, s.q3, s.max, s.mean]
            .iter()
            .map(|&v| significant(v, 6))
            .collect();
        out.push_str(&format!(
            "{name},{},{},{}\n",
            cells.join(","),
            s.count,
            summary.excluded
        ));
    };
    for m in &summary.methods {
        if let Some(s) = summary.ratios.get(m) {
            row(m.name(), s);
        }
    }
    if let Some(s) = &summary.time_ratio {
        row("time_ratio", s);
    }
    out
}

pub const DETAIL_HEADER: [&str; 7] = [
    "instance_index",
    "seed",
    "method",
    "d",
    "objective",
    "cutoffs",
    "elapsed_ms",
];

/// One row per (instance, method); excluded instances get a single `error` row.
pub fn emit_detail_csv(summary: &BenchmarkSummary) -> String {
    let mut writer = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    writer.write_record(DETAIL_HEADER).expect("in-memory write");
    for o in &summary.instances {
        match &o.results {
            Ok(results) => {
                for r in results {
                    writer
                        .write_record([
                            o.index.to_string(),
                            o.seed.to_string(),
                            r.method.name().to_string(),
                            significant(r.report.d(), 6),
                            significant(r.report.objective, 6),
                            r.report.cutoffs.to_json().to_string(),
                            significant(r.report.elapsed_ms(), 6),
                        ])
                        .expect("in-memory write");
                }
            }
            Err(e) => writer
                .write_record([
                    o.index.to_string(),
                    o.seed.to_string(),
                    "error".to_string(),
                    String::new(),
                    String::new(),
                    e.clone(),
                    String::new(),
                ])
                .expect("in-memory write"),
        }
    }
    String::from_utf8(writer.into_inner().expect("in-memory flush")).expect("utf-8")
}
