//! Thin command-line dispatcher over the core library. Heavy work lives in
//! the library; this binary parses flags, reads and writes files, and maps
//! error kinds to exit codes:
//!
//!   0  success
//!   2  undefined estimate (or not enough data to form one)
//!   3  infeasible plan (safety gap not positive)
//!   4  I/O, CSV, or flag parse error
//!   1  anything else

use clap::error::ErrorKind as ClapErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};
use dimest_core::error::Error as CoreError;
use dimest_core::estimator::{
    count_pairs, default_loglog_grid, dim_corr_from_counts, loglog_points, reach_free_test,
    DimEstimate, Metric, PointCloud,
};
use dimest_core::geometry::{gap_delta, ScalePair};
use dimest_core::harness::{
    compare_estimators, run_experiment, write_ndjson, EstimatorKind, ExperimentConfig, Mode,
    DEFAULT_CAP,
};
use dimest_core::planner::{
    heuristic_point_coefficients, pairs_required_clt, points_for_pairs, scale_search,
    theoretical_plan, HeuristicPlan, TheoreticalPlan,
};
use dimest_core::reference;
use dimest_core::samplers::{sample, sample_until_pairs, ManifoldSpec, Seed};
use serde::Serialize;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "dimest", version, about = "Intrinsic-dimension estimation and sample-size planning for point clouds")]
struct Cli {
    /// Print reals with 17 significant digits instead of 6.
    #[arg(long, global = true)]
    full_precision: bool,

    /// Cap the worker thread count.
    #[arg(long, global = true, value_name = "N")]
    threads: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
    Ndjson,
}

/// Flags shared by every subcommand that reads a cloud from CSV.
#[derive(Args)]
struct InputArgs {
    /// Input CSV: one point per line, decimal floats, uniform column count.
    #[arg(long, value_name = "PATH")]
    input: PathBuf,

    /// Skip one header line.
    #[arg(long)]
    skip_header: bool,

    /// Distance law: `euclidean` or `flat-torus:PERIOD`.
    #[arg(long, default_value = "euclidean", value_parser = parse_metric)]
    metric: Metric,
}

#[derive(Subcommand)]
enum Command {
    /// Rigorous point budget for a hypothesized dimension at given scales.
    PlanTheory {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        eps1: f64,
        #[arg(long)]
        eps2: f64,
        /// Share of the failure budget on the large scale (default: the
        /// published split for dim 1..10).
        #[arg(long)]
        alpha1: Option<f64>,
        /// Manifold volume; adds the integer point budget to the output.
        #[arg(long)]
        vol: Option<f64>,
        #[arg(long, default_value_t = 0.1)]
        failure_prob: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Close-pair budget from the binomial heuristic.
    PlanHeuristic {
        #[arg(long)]
        dim: u32,
        /// Defaults to the published scales for dim 1..10.
        #[arg(long)]
        eps1: Option<f64>,
        #[arg(long)]
        eps2: Option<f64>,
        #[arg(long, default_value_t = 0.9)]
        confidence: f64,
        /// Normal quantile for the CLT comparison column.
        #[arg(long, default_value_t = 1.64)]
        z: f64,
        /// Manifold volume; adds the point-count conversion to the output.
        #[arg(long)]
        vol: Option<f64>,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Grid search for the scales minimizing the rigorous budget.
    ScalesSearch {
        #[arg(long)]
        dim: u32,
        #[arg(long)]
        vol: f64,
        #[arg(long, default_value_t = 0.01)]
        grid_step: f64,
        #[arg(long, default_value_t = 0.01)]
        alpha_step: f64,
        #[arg(long, default_value_t = 0.1)]
        failure_prob: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Safety gaps at the published scales for dimensions 1..10.
    GapTable {
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Two-scale dimension estimate for a CSV cloud.
    Estimate {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        eps1: f64,
        #[arg(long)]
        eps2: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Reach-free hypothesis test: is the cloud d-dimensional?
    ReachFree {
        #[command(flatten)]
        input: InputArgs,
        #[arg(long)]
        dim: u32,
        #[arg(long, default_value_t = 0.9)]
        confidence: f64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Log-log pair-count curve as plot-ready CSV (natural logs; -1 marks
    /// scales with no pairs).
    Loglog {
        #[command(flatten)]
        input: InputArgs,
        /// Smallest scale of an explicit log-uniform grid.
        #[arg(long, requires = "grid_max")]
        grid_min: Option<f64>,
        /// Largest scale of an explicit log-uniform grid.
        #[arg(long, requires = "grid_min")]
        grid_max: Option<f64>,
        #[arg(long, default_value_t = 50)]
        grid_points: usize,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },

    /// Sample a synthetic manifold to CSV.
    Sample {
        /// Manifold spec, e.g. `sphere:3`, `clifford:4`, `flat:2`,
        /// `rotation`, `swiss`, `swiss:raw`, `schwarz`, `gauss:4`,
        /// `product(rotation,rotation)`.
        #[arg(long)]
        manifold: ManifoldSpec,
        /// Sample exactly this many points.
        #[arg(long, conflicts_with = "pairs")]
        points: Option<u64>,
        /// Sample until this many pairs sit within eps1 (needs --eps1).
        #[arg(long, requires = "eps1")]
        pairs: Option<u64>,
        #[arg(long)]
        eps1: Option<f64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Point cap for pair-target sampling.
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },

    /// Monte Carlo success-rate experiment on a synthetic manifold.
    Experiment {
        #[arg(long)]
        manifold: ManifoldSpec,
        /// Per-trial close-pair budget (sample until reached).
        #[arg(long, conflicts_with = "points")]
        pairs: Option<u64>,
        /// Per-trial point count.
        #[arg(long)]
        points: Option<u64>,
        /// Defaults to the published scales for the manifold's dimension.
        #[arg(long)]
        eps1: Option<f64>,
        #[arg(long)]
        eps2: Option<f64>,
        #[arg(long, value_enum, default_value_t = CliEstimator::Corr)]
        estimator: CliEstimator,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Write here instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },

    /// Run the two-scale and angle estimators on the same sampled clouds.
    Compare {
        #[arg(long)]
        manifold: ManifoldSpec,
        #[arg(long)]
        points: u64,
        /// Defaults to the published scales for the manifold's dimension.
        #[arg(long)]
        eps1: Option<f64>,
        #[arg(long)]
        eps2: Option<f64>,
        #[arg(long, default_value_t = 100)]
        trials: u32,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },

    /// Regenerate the four reference tables and diff them against the
    /// pinned values.
    Tables,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum CliEstimator {
    Corr,
    Gp,
    Anova,
}

impl From<CliEstimator> for EstimatorKind {
    fn from(e: CliEstimator) -> Self {
        match e {
            CliEstimator::Corr => EstimatorKind::Corr,
            CliEstimator::Gp => EstimatorKind::Gp,
            CliEstimator::Anova => EstimatorKind::Anova,
        }
    }
}

fn parse_metric(s: &str) -> Result<Metric, String> {
    if s == "euclidean" {
        return Ok(Metric::Euclidean);
    }
    if let Some(p) = s.strip_prefix("flat-torus:") {
        let period: f64 = p.parse().map_err(|_| format!("bad period '{p}'"))?;
        if !(period > 0.0 && period.is_finite()) {
            return Err(format!("period {period} must be positive and finite"));
        }
        return Ok(Metric::FlatTorus { period });
    }
    Err(format!("unknown metric '{s}' (expected euclidean or flat-torus:PERIOD)"))
}

enum CliError {
    Core(CoreError),
    Io(String),
    Parse(String),
    /// Message already printed; only the exit code remains.
    Silent(u8),
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Core(CoreError::Undefined(_)) => 2,
            CliError::Core(CoreError::InsufficientData(_)) => 2,
            CliError::Core(CoreError::Infeasible(_)) => 3,
            CliError::Core(CoreError::Domain(_)) => 4,
            CliError::Core(CoreError::InvalidSpec(_)) => 4,
            CliError::Core(CoreError::CapExceeded(_)) => 1,
            CliError::Io(_) | CliError::Parse(_) => 4,
            CliError::Silent(code) => *code,
        }
    }

    fn message(&self) -> Option<String> {
        match self {
            CliError::Core(e) => Some(e.to_string()),
            CliError::Io(m) | CliError::Parse(m) => Some(m.clone()),
            CliError::Silent(_) => None,
        }
    }
}

/// Significant-digit formatter: 6 digits by default, 17 with --full-precision.
#[derive(Clone, Copy)]
struct Fmt {
    digits: i32,
}

impl Fmt {
    fn new(full: bool) -> Self {
        Fmt { digits: if full { 17 } else { 6 } }
    }

    fn f(&self, x: f64) -> String {
        if x == 0.0 || !x.is_finite() {
            return format!("{x}");
        }
        let magnitude = x.abs().log10().floor() as i32;
        let decimals = (self.digits - 1 - magnitude).max(0) as usize;
        format!("{x:.decimals$}")
    }
}

fn io_err(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn read_cloud(args: &InputArgs) -> Result<PointCloud, CliError> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(args.skip_header)
        .flexible(false)
        .trim(csv::Trim::All)
        .from_path(&args.input)
        .map_err(|e| CliError::Io(format!("{}: {e}", args.input.display())))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for record in reader.records() {
        let record =
            record.map_err(|e| CliError::Parse(format!("{}: {e}", args.input.display())))?;
        let line = record.position().map_or(rows.len() as u64 + 1, |p| p.line());
        let mut row = Vec::with_capacity(record.len());
        for field in record.iter() {
            let v: f64 = field.parse().map_err(|_| {
                CliError::Parse(format!(
                    "{}: line {line}: not a float: '{field}'",
                    args.input.display()
                ))
            })?;
            row.push(v);
        }
        rows.push(row);
    }
    if rows.is_empty() {
        return Err(CliError::Parse(format!(
            "{}: no data rows",
            args.input.display()
        )));
    }
    PointCloud::from_rows(&rows, args.metric)
        .map_err(|e| CliError::Parse(format!("{}: {e}", args.input.display())))
}

fn out_writer(path: Option<&PathBuf>) -> Result<Box<dyn Write>, CliError> {
    match path {
        Some(p) => Ok(Box::new(BufWriter::new(
            File::create(p).map_err(|e| io_err(p, e))?,
        ))),
        None => Ok(Box::new(std::io::stdout().lock())),
    }
}

fn write_json<T: Serialize>(value: &T) -> Result<(), CliError> {
    let text = serde_json::to_string_pretty(value)
        .map_err(|e| CliError::Io(format!("JSON encode failed: {e}")))?;
    println!("{text}");
    Ok(())
}

fn unsupported_format() -> CliError {
    CliError::Parse("unsupported --format for this subcommand".into())
}

fn default_scales(d: u32, eps1: Option<f64>, eps2: Option<f64>) -> Result<ScalePair, CliError> {
    match (eps1, eps2) {
        (Some(a), Some(b)) => Ok(ScalePair::new(a, b)?),
        (None, None) => Ok(reference::standard_scales(d)?),
        _ => Err(CliError::Parse(
            "--eps1 and --eps2 must be given together".into(),
        )),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ClapErrorKind::DisplayHelp | ClapErrorKind::DisplayVersion => 0,
                _ => 4,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("warning: could not cap threads: {e}");
        }
    }
    let fmt = Fmt::new(cli.full_precision);
    match run(cli.command, fmt) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            if let Some(msg) = e.message() {
                eprintln!("error: {msg}");
            }
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(command: Command, fmt: Fmt) -> Result<(), CliError> {
    match command {
        Command::PlanTheory { dim, eps1, eps2, alpha1, vol, failure_prob, format } => {
            let alpha1 = match alpha1 {
                Some(a) => a,
                None => reference::standard_alpha1(dim)?,
            };
            let plan = theoretical_plan(dim, ScalePair::new(eps1, eps2)?, alpha1, failure_prob)?;
            print_theoretical_plan(&plan, vol, format, fmt)
        }
        Command::PlanHeuristic { dim, eps1, eps2, confidence, z, vol, format } => {
            let scales = default_scales(dim, eps1, eps2)?;
            let n_pairs = dimest_core::planner::pairs_required_exact(dim, scales, confidence)?;
            let (mean_ed, sigma_d, gap_d) =
                dimest_core::planner::heuristic_stats(dim as f64, scales)?;
            let plan =
                HeuristicPlan { d: dim, scales, confidence, n_pairs, mean_ed, sigma_d, gap_d };
            let clt_pairs = pairs_required_clt(dim, scales, z)?;
            let points = match vol {
                Some(v) => Some(points_for_pairs(plan.n_pairs, dim, scales.eps1, v)?),
                None => None,
            };
            match format {
                Format::Text => {
                    println!("heuristic plan d={dim}, scales ({}, {}), confidence {}",
                        fmt.f(scales.eps1), fmt.f(scales.eps2), fmt.f(confidence));
                    println!("mean_ed     {}", fmt.f(plan.mean_ed));
                    println!("sigma_d     {}", fmt.f(plan.sigma_d));
                    println!("gap_d       {}", fmt.f(plan.gap_d));
                    println!("pairs       {}   (exact binomial)", plan.n_pairs);
                    println!("pairs_clt   {clt_pairs}   (z = {})", fmt.f(z));
                    if let (Some(n), Some(v)) = (points, vol) {
                        println!("points      {n}   (vol = {})", fmt.f(v));
                    }
                    Ok(())
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        #[serde(flatten)]
                        plan: HeuristicPlan,
                        clt_pairs: u64,
                        z: f64,
                        #[serde(skip_serializing_if = "Option::is_none")]
                        vol: Option<f64>,
                        #[serde(skip_serializing_if = "Option::is_none")]
                        points: Option<u64>,
                    }
                    write_json(&Out { plan, clt_pairs, z, vol, points })
                }
                _ => Err(unsupported_format()),
            }
        }
        Command::ScalesSearch { dim, vol, grid_step, alpha_step, failure_prob, format } => {
            let plan = scale_search(dim, vol, grid_step, alpha_step, failure_prob)?;
            print_theoretical_plan(&plan, Some(vol), format, fmt)
        }
        Command::GapTable { format } => {
            let mut rows = Vec::new();
            for d in 1..=10u32 {
                let s = reference::standard_scales(d)?;
                rows.push((d, s.eps1, s.eps2, gap_delta(d, s)?));
            }
            match format {
                Format::Text => {
                    println!("{:>2}  {:>5}  {:>5}  {:>12}", "d", "eps1", "eps2", "gap");
                    for (d, e1, e2, gap) in rows {
                        println!("{d:>2}  {e1:>5}  {e2:>5}  {:>12}", fmt.f(gap));
                    }
                    Ok(())
                }
                Format::Csv => {
                    println!("d,eps1,eps2,gap");
                    for (d, e1, e2, gap) in rows {
                        println!("{d},{e1},{e2},{}", fmt.f(gap));
                    }
                    Ok(())
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Row {
                        d: u32,
                        eps1: f64,
                        eps2: f64,
                        gap: f64,
                    }
                    let rows: Vec<Row> = rows
                        .into_iter()
                        .map(|(d, eps1, eps2, gap)| Row { d, eps1, eps2, gap })
                        .collect();
                    write_json(&rows)
                }
                Format::Ndjson => Err(unsupported_format()),
            }
        }
        Command::Estimate { input, eps1, eps2, format } => {
            let cloud = read_cloud(&input)?;
            let s = ScalePair::new(eps1, eps2)?;
            let c1 = count_pairs(&cloud, s.eps1)?.count;
            let c2 = count_pairs(&cloud, s.eps2)?.count;
            let estimate = dim_corr_from_counts(c1, c2, s);
            match format {
                Format::Text => {
                    println!("n_points    {}", cloud.n());
                    println!("pairs_eps1  {c1}   (eps1 = {})", fmt.f(s.eps1));
                    println!("pairs_eps2  {c2}   (eps2 = {})", fmt.f(s.eps2));
                    match estimate {
                        DimEstimate::Defined { raw_slope, rounded } => {
                            println!("raw_slope   {}", fmt.f(raw_slope));
                            println!("dimension   {rounded}");
                        }
                        DimEstimate::GreaterThan { lower, limit_slope } => {
                            println!(
                                "undefined (no pairs at eps2); dimension > {lower} (limit slope {})",
                                fmt.f(limit_slope)
                            );
                        }
                        DimEstimate::Undefined => {
                            println!("undefined (no pairs at eps1)");
                        }
                    }
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        n_points: usize,
                        eps1: f64,
                        eps2: f64,
                        pairs_eps1: u64,
                        pairs_eps2: u64,
                        estimate: DimEstimate,
                    }
                    write_json(&Out {
                        n_points: cloud.n(),
                        eps1: s.eps1,
                        eps2: s.eps2,
                        pairs_eps1: c1,
                        pairs_eps2: c2,
                        estimate,
                    })?;
                }
                _ => return Err(unsupported_format()),
            }
            match estimate {
                DimEstimate::Defined { .. } => Ok(()),
                _ => Err(CliError::Silent(2)),
            }
        }
        Command::ReachFree { input, dim, confidence, format } => {
            let cloud = read_cloud(&input)?;
            let table = vec![HeuristicPlan::standard(dim, confidence)?];
            let outcome = reach_free_test(&cloud, dim, &table)?;
            match format {
                Format::Text => {
                    println!("budget      {} pairs (d = {dim}, confidence {})",
                        outcome.n_pairs_budget, fmt.f(confidence));
                    println!("r_big       {}", fmt.f(outcome.r_big));
                    println!("r_small     {}", fmt.f(outcome.r_small));
                    match outcome.estimate {
                        DimEstimate::Defined { raw_slope, rounded } => {
                            println!("raw_slope   {}", fmt.f(raw_slope));
                            println!("dimension   {rounded}");
                        }
                        DimEstimate::GreaterThan { lower, limit_slope } => {
                            println!(
                                "undefined (no pairs at r_small); dimension > {lower} (limit slope {})",
                                fmt.f(limit_slope)
                            );
                        }
                        DimEstimate::Undefined => println!("undefined (no pairs at r_big)"),
                    }
                    println!(
                        "hypothesis d={dim}: {}",
                        if outcome.pass { "PASS" } else { "FAIL" }
                    );
                }
                Format::Json => {
                    #[derive(Serialize)]
                    struct Out {
                        d: u32,
                        confidence: f64,
                        #[serde(flatten)]
                        outcome: dimest_core::estimator::ReachFreeOutcome,
                    }
                    write_json(&Out { d: dim, confidence, outcome })?;
                }
                _ => return Err(unsupported_format()),
            }
            match outcome.estimate {
                DimEstimate::Defined { .. } => Ok(()),
                _ => Err(CliError::Silent(2)),
            }
        }
        Command::Loglog { input, grid_min, grid_max, grid_points, output } => {
            let cloud = read_cloud(&input)?;
            let grid = match (grid_min, grid_max) {
                (Some(lo), Some(hi)) => {
                    if !(0.0 < lo && lo < hi) || grid_points < 2 {
                        return Err(CliError::Parse(
                            "need 0 < grid-min < grid-max and grid-points >= 2".into(),
                        ));
                    }
                    let step = (hi / lo).ln() / (grid_points - 1) as f64;
                    (0..grid_points)
                        .map(|i| lo * (step * i as f64).exp())
                        .collect()
                }
                _ => default_loglog_grid(&cloud)?,
            };
            let curve = loglog_points(&cloud, &grid)?;
            let mut w = out_writer(output.as_ref())?;
            for (x, y) in &curve.points {
                writeln!(w, "{},{}", fmt.f(*x), fmt.f(*y))
                    .map_err(|e| CliError::Io(format!("write failed: {e}")))?;
            }
            Ok(())
        }
        Command::Sample { manifold, points, pairs, eps1, seed, cap, output } => {
            let cloud = match (points, pairs) {
                (Some(n), None) => {
                    if n == 0 {
                        return Err(CliError::Parse("--points must be >= 1".into()));
                    }
                    sample(&manifold, n as usize, Seed::new(seed, 0))?
                }
                (None, Some(n_pairs)) => {
                    // clap guarantees eps1 accompanies --pairs.
                    sample_until_pairs(&manifold, eps1.unwrap(), n_pairs, Seed::new(seed, 0), cap)?
                }
                _ => {
                    return Err(CliError::Parse(
                        "exactly one of --points or --pairs is required".into(),
                    ))
                }
            };
            let mut w = out_writer(output.as_ref())?;
            for row in cloud.rows() {
                let line: Vec<String> = row.iter().map(|v| v.to_string()).collect();
                writeln!(w, "{}", line.join(","))
                    .map_err(|e| CliError::Io(format!("write failed: {e}")))?;
            }
            Ok(())
        }
        Command::Experiment {
            manifold,
            pairs,
            points,
            eps1,
            eps2,
            estimator,
            trials,
            seed,
            cap,
            format,
            output,
        } => {
            let scales = default_scales(manifold.intrinsic_dim(), eps1, eps2)?;
            let mode = match (pairs, points) {
                (Some(n), None) => Mode::FixedPairs(n),
                (None, Some(n)) => Mode::FixedPoints(n),
                _ => {
                    return Err(CliError::Parse(
                        "exactly one of --pairs or --points is required".into(),
                    ))
                }
            };
            let mut config = ExperimentConfig::new(manifold, mode, scales, estimator.into(), seed);
            config.trials = trials;
            config.cap = cap;
            let report = run_experiment(&config)?;
            let mut w = out_writer(output.as_ref())?;
            match format {
                Format::Text => {
                    let mode_text = match mode {
                        Mode::FixedPairs(n) => format!("fixed-pairs {n}"),
                        Mode::FixedPoints(n) => format!("fixed-points {n}"),
                    };
                    let lines = [
                        format!("manifold        {}", report.config.manifold),
                        format!("mode            {mode_text}"),
                        format!("scales          ({}, {})", fmt.f(scales.eps1), fmt.f(scales.eps2)),
                        format!("trials          {}", report.config.trials),
                        format!("successes       {}", report.successes),
                        format!("valid_trials    {}", report.valid_trials),
                        format!("invalid_trials  {}", report.invalid_trials),
                        format!("success_rate    {}", fmt.f(report.success_rate)),
                        format!("wall_time_ms    {}", report.wall_time_ms),
                    ];
                    for line in lines {
                        writeln!(w, "{line}")
                            .map_err(|e| CliError::Io(format!("write failed: {e}")))?;
                    }
                }
                Format::Json => {
                    let text = serde_json::to_string_pretty(&report)
                        .map_err(|e| CliError::Io(format!("JSON encode failed: {e}")))?;
                    writeln!(w, "{text}")
                        .map_err(|e| CliError::Io(format!("write failed: {e}")))?;
                }
                Format::Ndjson => write_ndjson(&report, w)?,
                Format::Csv => {
                    writeln!(
                        w,
                        "manifold,mode,target,estimator,trials,successes,valid_trials,invalid_trials,success_rate"
                    )
                    .map_err(|e| CliError::Io(format!("write failed: {e}")))?;
                    let (mode_name, target) = match mode {
                        Mode::FixedPairs(n) => ("fixed-pairs", n),
                        Mode::FixedPoints(n) => ("fixed-points", n),
                    };
                    let estimator_name = match report.config.estimator {
                        EstimatorKind::Corr => "corr",
                        EstimatorKind::Gp => "gp",
                        EstimatorKind::Anova => "anova",
                    };
                    writeln!(
                        w,
                        "{},{mode_name},{target},{estimator_name},{},{},{},{},{}",
                        report.config.manifold,
                        report.config.trials,
                        report.successes,
                        report.valid_trials,
                        report.invalid_trials,
                        fmt.f(report.success_rate),
                    )
                    .map_err(|e| CliError::Io(format!("write failed: {e}")))?;
                }
            }
            Ok(())
        }
        Command::Compare { manifold, points, eps1, eps2, trials, seed, format } => {
            let scales = default_scales(manifold.intrinsic_dim(), eps1, eps2)?;
            let report = compare_estimators(&manifold, points, scales, trials, seed)?;
            match format {
                Format::Text => {
                    println!("manifold    {}", report.manifold);
                    println!("points      {}", report.n_points);
                    println!("scales      ({}, {})", fmt.f(scales.eps1), fmt.f(scales.eps2));
                    println!("trials      {}", report.trials);
                    println!("corr_rate   {}", fmt.f(report.corr_rate));
                    println!("anova_rate  {}", fmt.f(report.anova_rate));
                    Ok(())
                }
                Format::Json => write_json(&report),
                _ => Err(unsupported_format()),
            }
        }
        Command::Tables => cmd_tables(fmt),
    }
}

fn print_theoretical_plan(
    plan: &TheoreticalPlan,
    vol: Option<f64>,
    format: Format,
    fmt: Fmt,
) -> Result<(), CliError> {
    let points = vol.map(|v| plan.n_points(v));
    match format {
        Format::Text => {
            println!(
                "plan d={}, scales ({}, {}), alpha1 {}, failure_prob {}",
                plan.d,
                fmt.f(plan.scales.eps1),
                fmt.f(plan.scales.eps2),
                fmt.f(plan.alpha1),
                fmt.f(plan.failure_prob)
            );
            println!("delta      {}", fmt.f(plan.delta));
            println!("rho        {}", fmt.f(plan.rho));
            println!("n_const    {}", fmt.f(plan.n_const));
            println!("n_coeff    {}", fmt.f(plan.n_coeff));
            println!(
                "law        n(vol) = {} + {} * sqrt(vol)",
                plan.n_const.ceil() as u64,
                plan.n_coeff.ceil() as u64
            );
            if let (Some(n), Some(v)) = (points, vol) {
                println!("points     {n}   (vol = {})", fmt.f(v));
            }
            Ok(())
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                #[serde(flatten)]
                plan: &'a TheoreticalPlan,
                #[serde(skip_serializing_if = "Option::is_none")]
                vol: Option<f64>,
                #[serde(skip_serializing_if = "Option::is_none")]
                points: Option<u64>,
            }
            write_json(&Out { plan, vol, points })
        }
        _ => Err(unsupported_format()),
    }
}

/// Regenerates the four pinned tables and prints computed vs pinned values
/// with a per-row status column.
fn cmd_tables(fmt: Fmt) -> Result<(), CliError> {
    let mut mismatches = 0u32;

    println!("# safety gaps at the published scales");
    println!("{:>2}  {:>5}  {:>5}  {:>12}  {:>12}  status", "d", "eps1", "eps2", "computed", "pinned");
    for d in 1..=10u32 {
        let s = reference::standard_scales(d)?;
        let gap = gap_delta(d, s)?;
        let pinned = reference::GAP_TABLE[(d - 1) as usize];
        let ok = (gap - pinned).abs() < 1e-5;
        if !ok {
            mismatches += 1;
        }
        println!(
            "{d:>2}  {:>5}  {:>5}  {:>12}  {:>12}  {}",
            s.eps1,
            s.eps2,
            fmt.f(gap),
            fmt.f(pinned),
            if ok { "ok" } else { "DIFF" }
        );
    }

    println!();
    println!("# rigorous point budgets n(vol) = A + B sqrt(vol)");
    println!(
        "{:>2}  {:>9}  {:>9}  {:>9}  {:>9}  status",
        "d", "A", "A_pinned", "B", "B_pinned"
    );
    for d in 1..=10u32 {
        let s = reference::standard_scales(d)?;
        let alpha1 = reference::standard_alpha1(d)?;
        let plan = theoretical_plan(d, s, alpha1, 0.1)?;
        let (a, b) = (plan.n_const.ceil() as u64, plan.n_coeff.ceil() as u64);
        let (pa, pb) = reference::PLAN_TABLE[(d - 1) as usize];
        let ok = a.abs_diff(pa) <= 1 && b.abs_diff(pb) <= 1;
        if !ok {
            mismatches += 1;
        }
        println!(
            "{d:>2}  {a:>9}  {pa:>9}  {b:>9}  {pb:>9}  {}",
            if ok { "ok" } else { "DIFF" }
        );
    }

    println!();
    println!("# heuristic close-pair budgets (exact binomial)");
    println!(
        "{:>2}  {:>6}  {:>10}  {:>6}  {:>10}  status",
        "d", "n90", "n90_pinned", "n70", "n70_pinned"
    );
    for d in 1..=10u32 {
        let s = reference::standard_scales(d)?;
        let n90 = dimest_core::planner::pairs_required_exact(d, s, 0.9)?;
        let n70 = dimest_core::planner::pairs_required_exact(d, s, 0.7)?;
        let (p90, p70) = (
            reference::PAIR_BUDGET_90[(d - 1) as usize],
            reference::PAIR_BUDGET_70[(d - 1) as usize],
        );
        let ok = n90 == p90 && n70 == p70;
        if !ok {
            mismatches += 1;
        }
        println!(
            "{d:>2}  {n90:>6}  {p90:>10}  {n70:>6}  {p70:>10}  {}",
            if ok { "ok" } else { "DIFF" }
        );
    }

    println!();
    println!("# heuristic point coefficients c(d): n = c(d) sqrt(vol)");
    println!(
        "{:>2}  {:>12}  {:>8}  {:>8}  status",
        "d", "computed", "ceiled", "pinned"
    );
    for d in 1..=10u32 {
        let c = heuristic_point_coefficients(d)?;
        let ceiled = c.ceil() as u64;
        let pinned = reference::POINT_COEFFICIENTS[(d - 1) as usize];
        let ok = ceiled == pinned;
        if !ok {
            mismatches += 1;
        }
        println!(
            "{d:>2}  {:>12}  {ceiled:>8}  {pinned:>8}  {}",
            fmt.f(c),
            if ok { "ok" } else { "DIFF" }
        );
    }

    println!();
    if mismatches == 0 {
        println!("all rows match the pinned values");
    } else {
        println!("{mismatches} row(s) differ from the pinned values");
    }
    Ok(())
}
