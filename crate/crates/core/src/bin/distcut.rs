use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use distcut::bench::{
    emit_detail_csv, emit_summary_csv, run_benchmark, BenchmarkConfig, InstanceSource,
};
use distcut::data::{demo_table, parse_csv, InstanceSpec};
use distcut::format::significant;
use distcut::lp::{export_ilp, export_iqp};
use distcut::{
    solve_continuous, solve_exact_count, solve_exact_subset, solve_greedy, solve_median,
    solve_min_range, Error, ExactOptions, GreedyMode, Method, ScoreMatrix, SmoothConfig,
    SolveReport,
};

/// Choose per-score cut-offs that maximize distinguishability.
#[derive(Parser)]
#[command(name = "distcut", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one instance and print a report.
    Solve(SolveArgs),
    /// Write the binary program as an LP-format model file.
    Export(ExportArgs),
    /// Run every method over generated instances and summarize ratios.
    Bench(BenchArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
struct Source {
    /// CSV file with an optional header and item id column.
    #[arg(long)]
    input: Option<PathBuf>,
    /// Use the embedded 50-item demo table.
    #[arg(long)]
    demo: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Median,
    Greedy,
    Exact,
    SubsetExact,
    Range,
    Continuous,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Best,
    First,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum)]
    method: MethodArg,
    #[arg(long, value_enum, default_value = "best")]
    mode: ModeArg,
    /// Logistic sharpness for the continuous method.
    #[arg(long)]
    r: Option<f64>,
    /// Maximum grid points for exact and range solvers.
    #[arg(long)]
    budget: Option<u128>,
    #[arg(long, value_enum, default_value = "json")]
    output: OutputFormat,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormulationArg {
    Iqp,
    Ilp,
}

#[derive(Args)]
struct ExportArgs {
    #[command(flatten)]
    source: Source,
    #[arg(long, value_enum)]
    formulation: FormulationArg,
    /// Model file path; standard output when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long, default_value_t = 100)]
    instances: usize,
    #[arg(long, default_value_t = 100)]
    n: usize,
    #[arg(long, default_value_t = 3)]
    m: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Comma-separated subset of median,greedy,min_range,continuous,exact_count.
    #[arg(long, value_delimiter = ',')]
    methods: Option<Vec<String>>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
    #[arg(long)]
    budget: Option<u128>,
    /// Exit with status 3 if any instance was excluded.
    #[arg(long)]
    strict: bool,
    #[arg(long)]
    out_dir: PathBuf,
}

fn exit_code(err: &Error) -> u8 {
    match err {
        e if e.is_capacity() => 3,
        Error::Numeric(_) => 4,
        _ => 2,
    }
}

fn load(source: &Source) -> Result<ScoreMatrix, Error> {
    match &source.input {
        Some(path) => {
            let text = fs::read_to_string(path).map_err(|source| Error::Io {
                path: path.clone(),
                source,
            })?;
            parse_csv(&text)
        }
        None => Ok(demo_table()),
    }
}

fn write_out(path: Option<&Path>, text: &str) -> Result<(), Error> {
    match path {
        Some(p) => fs::write(p, text).map_err(|source| Error::Io {
            path: p.to_path_buf(),
            source,
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn exact_options(budget: Option<u128>) -> ExactOptions {
    budget.map_or_else(ExactOptions::default, |budget| ExactOptions { budget })
}

fn report_csv(report: &SolveReport) -> String {
    let join = |v: Vec<String>| v.join(";");
    let cutoffs = join(
        report
            .cutoffs
            .as_slice()
            .iter()
            .map(|&c| significant(c, 6))
            .collect(),
    );
    let indices = report
        .cut_indices
        .as_ref()
        .map(|k| join(k.0.iter().map(usize::to_string).collect()))
        .unwrap_or_default();
    let counts = join(
        report
            .histogram
            .counts()
            .iter()
            .map(usize::to_string)
            .collect(),
    );
    format!(
        "method,cutoff_values,cutoff_indices,bucket_counts,distinguishability,objective,iterations,evaluations,elapsed_ms\n\
         {},{cutoffs},{indices},{counts},{},{},{},{},{}\n",
        report.method,
        significant(report.d(), 6),
        significant(report.objective, 6),
        report.iterations,
        report.evaluations,
        significant(report.elapsed_ms(), 6),
    )
}

fn solve(args: &SolveArgs) -> Result<(), Error> {
    let scores = load(&args.source)?;
    let report = match args.method {
        MethodArg::Median => solve_median(&scores),
        MethodArg::Greedy => solve_greedy(
            &scores,
            match args.mode {
                ModeArg::Best => GreedyMode::BestImprovement,
                ModeArg::First => GreedyMode::FirstImprovement,
            },
        ),
        MethodArg::Exact => solve_exact_count(&scores, &exact_options(args.budget)),
        MethodArg::SubsetExact => solve_exact_subset(&scores, &exact_options(args.budget)),
        MethodArg::Range => solve_min_range(&scores, &exact_options(args.budget)),
        MethodArg::Continuous => {
            let mut config = SmoothConfig::default();
            if let Some(r) = args.r {
                config.r = r;
            }
            solve_continuous(&scores, &config)
        }
    }?;
    let text = match args.output {
        OutputFormat::Json => format!("{}\n", report.to_json()),
        OutputFormat::Csv => report_csv(&report),
    };
    write_out(args.out.as_deref(), &text)
}

fn export(args: &ExportArgs) -> Result<(), Error> {
    let scores = load(&args.source)?;
    let text = match args.formulation {
        FormulationArg::Iqp => export_iqp(&scores)?,
        FormulationArg::Ilp => export_ilp(&scores)?,
    };
    write_out(args.out.as_deref(), &text)
}

fn bench(args: &BenchArgs) -> Result<bool, Error> {
    let mut config = BenchmarkConfig {
        instances: args.instances,
        source: InstanceSource::Generated(InstanceSpec {
            n: args.n,
            m: args.m,
            seed: args.seed,
            ..Default::default()
        }),
        jobs: args.jobs,
        exact: exact_options(args.budget),
        ..Default::default()
    };
    if let Some(names) = &args.methods {
        config.methods = names
            .iter()
            .map(|s| s.trim().parse::<Method>())
            .collect::<Result<_, _>>()?;
    }
    let summary = run_benchmark(&config)?;
    fs::create_dir_all(&args.out_dir).map_err(|source| Error::Io {
        path: args.out_dir.clone(),
        source,
    })?;
    write_out(
        Some(&args.out_dir.join("summary.csv")),
        &emit_summary_csv(&summary),
    )?;
    write_out(
        Some(&args.out_dir.join("instances.csv")),
        &emit_detail_csv(&summary),
    )?;
    println!("{:<12} {:>10} {:>10}", "method", "mean", "median");
    for m in &summary.methods {
        if let Some(s) = summary.ratios.get(m) {
            println!("{:<12} {:>10.6} {:>10.6}", m.name(), s.mean, s.median);
        }
    }
    if let Some(t) = &summary.time_ratio {
        println!("{:<12} {:>10.6} {:>10.6}", "time_ratio", t.mean, t.median);
    }
    println!(
        "instances: {} included, {} excluded",
        summary.included(),
        summary.excluded
    );
    Ok(summary.excluded > 0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => solve(args).map(|_| false),
        Command::Export(args) => export(args).map(|_| false),
        Command::Bench(args) => bench(args).map(|excluded| excluded && args.strict),
    };
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => {
            eprintln!("error: some instances exceeded solver limits");
            ExitCode::from(3)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
