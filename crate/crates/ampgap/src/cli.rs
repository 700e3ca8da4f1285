//! Command-line frontend.
//!
//! Subcommands: `estimate` (one amplitude estimate as a CSV row), `verify`
//! (dense-matrix checks of the walk-operator identities), `sweep`
//! (error-vs-resource grids), `invariance` (fixed depth×query budget splits)
//! and `audit` (filter-function property checks).
//!
//! Exit codes: 0 success, 1 runtime or check failure, 2 usage error. All
//! randomness flows from `--seed`, which defaults to a fixed constant rather
//! than the clock, so identical invocations print identical bytes. A flat
//! `key = value` config file can pre-set any flag of the chosen subcommand;
//! explicit flags win on conflict.

use std::collections::BTreeMap;
use std::fmt::Display;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{ArgMatches, Args, CommandFactory, FromArgMatches, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::Error;
use crate::estimator::{estimate, EstimatorConfig};
use crate::experiments::{
    rmse_ratio, run_invariance, run_property_audit, run_sweep, InvariancePlan, SweepPlan,
    INVARIANCE_CSV_HEADER,
};
use crate::oracle::{AmplitudeOracle, Protocol, QueryAccounting};
use crate::verifier::{verify_eigenphases, verify_signals, ExactModel, CHECK_TOLERANCE, MAX_DIM};

/// Fixed default seed; documented so runs are reproducible without flags.
pub const DEFAULT_SEED: u64 = 1729;

/// Environment variable naming the default output directory.
pub const OUT_DIR_ENV: &str = "AMPGAP_OUT_DIR";

const USAGE_EXIT: i32 = 2;
const FAILURE_EXIT: i32 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "ampgap",
    version,
    about = "Amplitude estimation via eigengap estimation: estimators, exact verifier, benchmarks"
)]
struct Cli {
    /// Flat key = value config file; explicit flags override its entries.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Worker threads for sweeps and invariance runs (default: all cores).
    #[arg(long, global = true, value_name = "N")]
    jobs: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one estimate and print its CSV row.
    Estimate(EstimateArgs),
    /// Check walk-operator eigenphases and signal identities on dense models.
    Verify(VerifyArgs),
    /// Run an error-vs-resources sweep and write its dataset.
    Sweep(SweepArgs),
    /// Split a fixed depth*queries budget and compare precisions.
    Invariance(InvarianceArgs),
    /// Audit the analytic properties of the filter functions.
    Audit(AuditArgs),
}

#[derive(Args, Debug)]
struct EstimateArgs {
    /// Estimation protocol: glsae, gdmae or gmmae. Required, here or in the
    /// config file.
    #[arg(long)]
    protocol: Option<Protocol>,

    /// Hidden amplitude in [0, 1]. Required, here or in the config file.
    #[arg(long)]
    a: Option<f64>,

    /// Target additive precision on the amplitude. Required, here or in the
    /// config file.
    #[arg(long)]
    epsilon: Option<f64>,

    /// Depth/samples tuning parameter in [0, 1].
    #[arg(long, default_value_t = 0.0)]
    beta: f64,

    /// Support truncation multiple (depth cutoff M = floor(sigma*T)).
    #[arg(long, default_value_t = 4.0)]
    sigma: f64,

    /// Normalization truncation multiple (>= sigma).
    #[arg(long, default_value_t = 6.0)]
    rho: f64,

    /// RNG seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Gaussian width override, replacing the value derived from epsilon/beta.
    #[arg(long = "T", value_name = "T")]
    t: Option<f64>,

    /// Sample-count override, replacing the value derived from epsilon/beta.
    #[arg(long = "N", value_name = "N")]
    n: Option<usize>,

    /// Outcome flip probability of the noise channel.
    #[arg(long, default_value_t = 0.0)]
    p_flip: f64,

    /// Fine-grid spacing override.
    #[arg(long)]
    kappa: Option<f64>,

    /// Failure-probability budget entering the sample-count rule.
    #[arg(long, default_value_t = 0.1)]
    confidence: f64,

    /// Query accounting: state-preps (one per preparation) or two-per-iterate.
    #[arg(long, default_value = "state-preps")]
    query_accounting: String,
}

#[derive(Args, Debug)]
struct VerifyArgs {
    /// Model dimensions, comma separated.
    #[arg(long, default_value = "2,4,8,16")]
    dims: String,

    /// Random models per dimension.
    #[arg(long, default_value_t = 5)]
    seeds: u32,

    /// Longest evolution checked (iterations of the walk operator).
    #[arg(long, default_value_t = 8)]
    t_max: u32,

    /// RNG seed.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// Plan file in the flat key = value format; flags override its entries.
    #[arg(long, value_name = "FILE")]
    plan: Option<PathBuf>,

    /// Protocols, comma separated.
    #[arg(long, default_value = "glsae")]
    protocols: String,

    /// True amplitudes, comma separated.
    #[arg(long, default_value = "0.3")]
    a_values: String,

    /// Explicit epsilon grid, comma separated and strictly decreasing.
    /// Overrides the log-spaced grid flags.
    #[arg(long)]
    epsilons: Option<String>,

    /// Largest epsilon of the log-spaced grid.
    #[arg(long, default_value_t = 1e-1)]
    eps_max: f64,

    /// Smallest epsilon of the log-spaced grid.
    #[arg(long, default_value_t = 1e-3)]
    eps_min: f64,

    /// Number of log-spaced grid points.
    #[arg(long, default_value_t = 5)]
    eps_points: usize,

    #[arg(long, default_value_t = 0.0)]
    beta: f64,

    /// Trials per grid point.
    #[arg(long, default_value_t = 50)]
    trials: u32,

    /// Base seed of the per-trial schedule.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output CSV path, resolved against AMPGAP_OUT_DIR when relative.
    #[arg(long, default_value = "sweep.csv")]
    out: PathBuf,

    /// Lift the desk-scale caps on epsilon and trial count.
    #[arg(long, default_value_t = false)]
    allow_large: bool,
}

#[derive(Args, Debug)]
struct InvarianceArgs {
    /// Depth * queries budget each split must match within 10%.
    #[arg(long, default_value_t = 1e6)]
    budget: f64,

    /// Number of log-spaced splits between depth-min and depth-max.
    #[arg(long, default_value_t = 3)]
    splits: usize,

    /// Smallest maximum depth.
    #[arg(long, default_value_t = 50.0)]
    depth_min: f64,

    /// Largest maximum depth.
    #[arg(long, default_value_t = 200.0)]
    depth_max: f64,

    /// Explicit depth list, comma separated; overrides the log-spaced splits.
    #[arg(long)]
    split_depths: Option<String>,

    /// True amplitude.
    #[arg(long, default_value_t = 0.25)]
    a: f64,

    /// Trials per split.
    #[arg(long, default_value_t = 100)]
    trials: u32,

    /// Base seed of the per-trial schedule.
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Output CSV path, resolved against AMPGAP_OUT_DIR when relative.
    #[arg(long, default_value = "invariance.csv")]
    out: PathBuf,
}

#[derive(Args, Debug)]
struct AuditArgs {}

/// Parses arguments, runs the chosen subcommand and returns the process exit
/// code.
pub fn run() -> i32 {
    run_from(std::env::args_os())
}

/// Same as [`run`] with explicit arguments, for tests.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let command = Cli::command();
    let matches = match command.try_get_matches_from(args) {
        Ok(matches) => matches,
        Err(err) => {
            let code = if err.use_stderr() { USAGE_EXIT } else { 0 };
            let _ = err.print();
            return code;
        }
    };
    let cli = match Cli::from_arg_matches(&matches) {
        Ok(cli) => cli,
        Err(err) => {
            let _ = err.print();
            return USAGE_EXIT;
        }
    };

    if let Some(jobs) = cli.jobs {
        // Ignore the error if a pool already exists (repeat calls in-process).
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global();
    }

    match dispatch(cli, &matches) {
        Ok(code) => code,
        Err(CliError::Usage(message)) => {
            eprintln!("error: {message}");
            USAGE_EXIT
        }
        Err(CliError::Runtime(message)) => {
            eprintln!("error: {message}");
            FAILURE_EXIT
        }
    }
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        match err {
            Error::Parameter { .. } | Error::Config(_) => CliError::Usage(err.to_string()),
            other => CliError::Runtime(other.to_string()),
        }
    }
}

type CliResult = Result<i32, CliError>;

fn dispatch(cli: Cli, matches: &ArgMatches) -> CliResult {
    let config_map = match &cli.config {
        Some(path) => parse_config_file(path)?,
        None => ConfigMap::new(),
    };
    let sub = matches
        .subcommand()
        .map(|(_, sub)| sub)
        .expect("subcommand required by clap");
    match cli.command {
        Command::Estimate(mut args) => {
            apply_config(&mut args, &config_map, sub, ESTIMATE_KEYS, overlay_estimate)?;
            cmd_estimate(args)
        }
        Command::Verify(mut args) => {
            apply_config(&mut args, &config_map, sub, VERIFY_KEYS, overlay_verify)?;
            cmd_verify(args)
        }
        Command::Sweep(mut args) => {
            let mut map = config_map;
            if let Some(plan_path) = &args.plan {
                // Plan entries take precedence over the global config file.
                let plan_map = parse_config_file(plan_path)?;
                map.extend(plan_map);
            }
            apply_config(&mut args, &map, sub, SWEEP_KEYS, overlay_sweep)?;
            cmd_sweep(args)
        }
        Command::Invariance(mut args) => {
            apply_config(
                &mut args,
                &config_map,
                sub,
                INVARIANCE_KEYS,
                overlay_invariance,
            )?;
            cmd_invariance(args)
        }
        Command::Audit(_) => cmd_audit(),
    }
}

// ---------------------------------------------------------------------------
// Config file handling

type ConfigMap = BTreeMap<String, String>;

fn parse_config_file(path: &Path) -> Result<ConfigMap, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config file {}: {e}", path.display())))?;
    let mut map = ConfigMap::new();
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| {
            CliError::Usage(format!(
                "{}:{}: expected `key = value`, got `{line}`",
                path.display(),
                lineno + 1
            ))
        })?;
        let key = key.trim().replace('_', "-");
        let value = value.trim();
        if key.is_empty() || value.is_empty() {
            return Err(CliError::Usage(format!(
                "{}:{}: empty key or value",
                path.display(),
                lineno + 1
            )));
        }
        map.insert(key, value.to_string());
    }
    Ok(map)
}

fn apply_config<A>(
    args: &mut A,
    map: &ConfigMap,
    matches: &ArgMatches,
    known: &[&str],
    overlay: impl Fn(&mut A, &str, &str) -> Result<(), String>,
) -> Result<(), CliError> {
    for (key, value) in map {
        if !known.contains(&key.as_str()) {
            return Err(CliError::Usage(format!(
                "unknown config key `{key}` (known keys: {})",
                known.join(", ")
            )));
        }
        if flag_given(matches, key) {
            continue; // explicit flag wins
        }
        overlay(args, key, value)
            .map_err(|e| CliError::Usage(format!("config key `{key}`: {e}")))?;
    }
    Ok(())
}

fn flag_given(matches: &ArgMatches, key: &str) -> bool {
    let id = key.replace('-', "_").to_ascii_lowercase();
    matches
        .value_source(&id)
        .map(|source| source == clap::parser::ValueSource::CommandLine)
        .unwrap_or(false)
}

fn set<T: FromStr>(field: &mut T, value: &str) -> Result<(), String>
where
    T::Err: Display,
{
    *field = value.parse::<T>().map_err(|e| e.to_string())?;
    Ok(())
}

fn set_opt<T: FromStr>(field: &mut Option<T>, value: &str) -> Result<(), String>
where
    T::Err: Display,
{
    *field = Some(value.parse::<T>().map_err(|e| e.to_string())?);
    Ok(())
}

const ESTIMATE_KEYS: &[&str] = &[
    "protocol",
    "a",
    "epsilon",
    "beta",
    "sigma",
    "rho",
    "seed",
    "T",
    "N",
    "p-flip",
    "kappa",
    "confidence",
    "query-accounting",
];

fn overlay_estimate(args: &mut EstimateArgs, key: &str, value: &str) -> Result<(), String> {
    match key {
        "protocol" => set_opt(&mut args.protocol, value),
        "a" => set_opt(&mut args.a, value),
        "epsilon" => set_opt(&mut args.epsilon, value),
        "beta" => set(&mut args.beta, value),
        "sigma" => set(&mut args.sigma, value),
        "rho" => set(&mut args.rho, value),
        "seed" => set(&mut args.seed, value),
        "T" => set_opt(&mut args.t, value),
        "N" => set_opt(&mut args.n, value),
        "p-flip" => set(&mut args.p_flip, value),
        "kappa" => set_opt(&mut args.kappa, value),
        "confidence" => set(&mut args.confidence, value),
        "query-accounting" => set(&mut args.query_accounting, value),
        _ => unreachable!("key validated against ESTIMATE_KEYS"),
    }
}

const VERIFY_KEYS: &[&str] = &["dims", "seeds", "t-max", "seed"];

fn overlay_verify(args: &mut VerifyArgs, key: &str, value: &str) -> Result<(), String> {
    match key {
        "dims" => set(&mut args.dims, value),
        "seeds" => set(&mut args.seeds, value),
        "t-max" => set(&mut args.t_max, value),
        "seed" => set(&mut args.seed, value),
        _ => unreachable!("key validated against VERIFY_KEYS"),
    }
}

const SWEEP_KEYS: &[&str] = &[
    "protocols",
    "a-values",
    "epsilons",
    "eps-max",
    "eps-min",
    "eps-points",
    "beta",
    "trials",
    "seed",
    "out",
    "allow-large",
];

fn overlay_sweep(args: &mut SweepArgs, key: &str, value: &str) -> Result<(), String> {
    match key {
        "protocols" => set(&mut args.protocols, value),
        "a-values" => set(&mut args.a_values, value),
        "epsilons" => set_opt(&mut args.epsilons, value),
        "eps-max" => set(&mut args.eps_max, value),
        "eps-min" => set(&mut args.eps_min, value),
        "eps-points" => set(&mut args.eps_points, value),
        "beta" => set(&mut args.beta, value),
        "trials" => set(&mut args.trials, value),
        "seed" => set(&mut args.seed, value),
        "out" => set(&mut args.out, value),
        "allow-large" => set(&mut args.allow_large, value),
        _ => unreachable!("key validated against SWEEP_KEYS"),
    }
}

const INVARIANCE_KEYS: &[&str] = &[
    "budget",
    "splits",
    "depth-min",
    "depth-max",
    "split-depths",
    "a",
    "trials",
    "seed",
    "out",
];

fn overlay_invariance(args: &mut InvarianceArgs, key: &str, value: &str) -> Result<(), String> {
    match key {
        "budget" => set(&mut args.budget, value),
        "splits" => set(&mut args.splits, value),
        "depth-min" => set(&mut args.depth_min, value),
        "depth-max" => set(&mut args.depth_max, value),
        "split-depths" => set_opt(&mut args.split_depths, value),
        "a" => set(&mut args.a, value),
        "trials" => set(&mut args.trials, value),
        "seed" => set(&mut args.seed, value),
        "out" => set(&mut args.out, value),
        _ => unreachable!("key validated against INVARIANCE_KEYS"),
    }
}

// ---------------------------------------------------------------------------
// Subcommands

fn usage(flag: &str, message: impl Display) -> CliError {
    CliError::Usage(format!("--{flag}: {message}"))
}

fn parse_list<T: FromStr>(flag: &'static str, text: &str) -> Result<Vec<T>, CliError>
where
    T::Err: Display,
{
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<T>().map_err(|e| usage(flag, e)))
        .collect()
}

fn resolve_out(path: &Path) -> PathBuf {
    if path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(OUT_DIR_ENV) {
        Some(dir) => PathBuf::from(dir).join(path),
        None => path.to_path_buf(),
    }
}

fn cmd_estimate(args: EstimateArgs) -> CliResult {
    let protocol = args
        .protocol
        .ok_or_else(|| usage("protocol", "required (flag or config file)"))?;
    let a = args
        .a
        .ok_or_else(|| usage("a", "required (flag or config file)"))?;
    let epsilon = args
        .epsilon
        .ok_or_else(|| usage("epsilon", "required (flag or config file)"))?;
    if !(0.0..=1.0).contains(&a) {
        return Err(usage("a", format!("amplitude must lie in [0, 1], got {a}")));
    }
    if epsilon <= 0.0 || epsilon.is_nan() {
        return Err(usage("epsilon", format!("must be positive, got {epsilon}")));
    }
    if !(0.0..=1.0).contains(&args.beta) {
        return Err(usage(
            "beta",
            format!("must lie in [0, 1], got {}", args.beta),
        ));
    }
    if !(0.0..=1.0).contains(&args.p_flip) {
        return Err(usage(
            "p-flip",
            format!("must lie in [0, 1], got {}", args.p_flip),
        ));
    }
    let accounting = match args.query_accounting.as_str() {
        "state-preps" => QueryAccounting::StatePreparations,
        "two-per-iterate" => QueryAccounting::TwoPerIterate,
        other => {
            return Err(usage(
                "query-accounting",
                format!("expected state-preps or two-per-iterate, got {other}"),
            ))
        }
    };

    let mut config = EstimatorConfig::new(protocol, epsilon);
    config.beta = args.beta;
    config.sigma = args.sigma;
    config.rho = args.rho;
    config.seed = args.seed;
    config.t_override = args.t;
    config.n_override = args.n;
    config.grid_kappa = args.kappa;
    config.confidence = args.confidence;

    let mut oracle = AmplitudeOracle::new(a)?
        .with_flip_probability(args.p_flip)?
        .with_accounting(accounting);
    let result = estimate(&config, &mut oracle)?;
    println!("{}", result.csv_row(a));
    Ok(0)
}

fn cmd_verify(args: VerifyArgs) -> CliResult {
    let dims: Vec<usize> = parse_list("dims", &args.dims)?;
    if dims.is_empty() {
        return Err(usage("dims", "needs at least one dimension"));
    }
    for &dim in &dims {
        if !(2..=MAX_DIM).contains(&dim) {
            return Err(usage(
                "dims",
                format!("dimension {dim} outside the supported range [2, {MAX_DIM}]"),
            ));
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let mut worst: Option<(String, f64)> = None;
    let mut track = |label: String, err: f64| {
        if worst.as_ref().map(|(_, w)| err > *w).unwrap_or(true) {
            worst = Some((label, err));
        }
    };

    for &dim in &dims {
        for model_index in 0..args.seeds {
            let model = ExactModel::random(dim, &mut rng)?;
            let eigen = verify_eigenphases(&model);
            let signals = verify_signals(&model, args.t_max)?;
            println!(
                "random dim={dim} model={model_index} a={:.6}: eigenphases {:.3e}, signals {:.3e}",
                model.a(),
                eigen.max_error,
                signals.max_error
            );
            track(
                format!("eigenphases dim={dim} model={model_index}"),
                eigen.max_error,
            );
            track(
                format!("signals dim={dim} model={model_index}"),
                signals.max_error,
            );

            if dim % 2 == 0 {
                use rand::Rng;
                let lambda = rng.gen::<f64>() * std::f64::consts::FRAC_PI_2;
                let flag = ExactModel::flag(dim / 2, lambda, &mut rng)?;
                let eigen = verify_eigenphases(&flag);
                let signals = verify_signals(&flag, args.t_max)?;
                println!(
                    "flag   dim={dim} model={model_index} a={:.6}: eigenphases {:.3e}, signals {:.3e}",
                    flag.a(),
                    eigen.max_error,
                    signals.max_error
                );
                track(
                    format!("flag eigenphases dim={dim} model={model_index}"),
                    eigen.max_error,
                );
                track(
                    format!("flag signals dim={dim} model={model_index}"),
                    signals.max_error,
                );
            }
        }
    }

    let (label, err) = worst.expect("at least one model checked");
    if err <= CHECK_TOLERANCE {
        println!("ok: worst deviation {err:.3e} ({label}) within {CHECK_TOLERANCE:.0e}");
        Ok(0)
    } else {
        println!("FAIL: {label} deviates by {err:.3e} (tolerance {CHECK_TOLERANCE:.0e})");
        Ok(FAILURE_EXIT)
    }
}

fn cmd_sweep(args: SweepArgs) -> CliResult {
    let protocols: Vec<Protocol> = parse_list("protocols", &args.protocols)?;
    let a_values: Vec<f64> = parse_list("a-values", &args.a_values)?;
    let epsilons = match &args.epsilons {
        Some(text) => parse_list("epsilons", text)?,
        None => {
            if args.eps_points < 2 {
                return Err(usage("eps-points", "needs at least 2 grid points"));
            }
            SweepPlan::log_spaced_epsilons(args.eps_max, args.eps_min, args.eps_points)
        }
    };

    let plan = SweepPlan {
        protocols,
        a_values,
        epsilons,
        beta: args.beta,
        trials: args.trials,
        seed_base: args.seed,
        allow_large: args.allow_large,
        output: Some(resolve_out(&args.out)),
    };
    let dataset = run_sweep(&plan)?;

    println!("protocol,a_true,epsilon,rmse,p90_abs_err,success_rate,median_depth,median_queries");
    for point in &dataset.points {
        println!(
            "{},{},{},{},{},{},{},{}",
            point.protocol,
            point.a_true,
            point.epsilon,
            point.rmse,
            point.p90_abs_err,
            point.success_rate,
            point.median_depth,
            point.median_queries
        );
    }
    for &protocol in &plan.protocols {
        for &a in &plan.a_values {
            if let (Some(ds), Some(qs)) = (
                dataset.depth_slope(protocol, a),
                dataset.query_slope(protocol, a),
            ) {
                println!("slope {protocol} a={a}: depth {ds:.3}, queries {qs:.3}");
            }
        }
    }
    println!("wrote {}", plan.output.as_ref().unwrap().display());
    Ok(0)
}

fn cmd_invariance(args: InvarianceArgs) -> CliResult {
    if !(0.0..=1.0).contains(&args.a) {
        return Err(usage(
            "a",
            format!("amplitude must lie in [0, 1], got {}", args.a),
        ));
    }
    let splits = match &args.split_depths {
        Some(text) => {
            let depths: Vec<f64> = parse_list("split-depths", text)?;
            depths.into_iter().map(|d| (d, args.budget / d)).collect()
        }
        None => {
            if args.splits == 0 {
                return Err(usage("splits", "needs at least one split"));
            }
            InvariancePlan::log_spaced_splits(
                args.budget,
                args.depth_min,
                args.depth_max,
                args.splits,
            )
        }
    };

    let mut plan = InvariancePlan::new(args.budget, splits, args.a);
    plan.trials = args.trials;
    plan.seed_base = args.seed;
    plan.output = Some(resolve_out(&args.out));
    let points = run_invariance(&plan)?;

    println!("{INVARIANCE_CSV_HEADER}");
    for point in &points {
        println!("{}", point.csv_row());
    }
    if points.len() > 1 {
        println!("max/min rmse ratio: {:.4}", rmse_ratio(&points));
    }
    println!("wrote {}", plan.output.as_ref().unwrap().display());
    Ok(0)
}

fn cmd_audit() -> CliResult {
    let report = run_property_audit()?;
    for check in &report.checks {
        println!("{}", check.summary_line());
    }
    if report.all_passed() {
        println!("ok: {} checks passed", report.checks.len());
        Ok(0)
    } else {
        println!("FAIL: at least one property check failed");
        Ok(FAILURE_EXIT)
    }
}
