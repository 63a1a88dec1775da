//! clucmp command line: compare two partition files, print residual
//! matrices, or run the synthetic exchange experiments.
//!
//! Exit codes are a stable contract: 0 on success (degenerate measures are
//! reported in-band), 2 on usage and input errors, 1 on internal errors.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use clucmp::{
    compare_csv, compare_json, compare_report, contingency, experiment_csv, experiment_json,
    parse_partition_file, residual_csv, residual_json, residual_matrix, run_experiment,
    CompareItem, CompareOptions, Error, ExperimentConfig, LogBase, MeasureId, MeasureOptions,
    ResidualKind, Result, SamplingMode, Scenario,
};

#[derive(Parser)]
#[command(
    name = "clucmp",
    version,
    about = "Clustering similarity from one contingency table: pair counts, \
             information measures, and k-tuple collision statistics"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compare two partition files with the selected measures
    Compare(CompareArgs),
    /// Per-cell residual matrix of a measure between two partition files
    Residuals(ResidualArgs),
    /// Synthetic partition-exchange experiment curves
    Experiment(ExperimentArgs),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum OutputFormat {
    Json,
    Csv,
}

#[derive(Args)]
struct CompareArgs {
    /// First partition file (two-column or dense, detected)
    file_a: PathBuf,
    /// Second partition file
    file_b: PathBuf,
    /// Comma-separated measures: ri, ari, jaccard, fm, mi, vi, nmi, chi2,
    /// i2, i3, i4, ri_decomp (default: all)
    #[arg(long, value_delimiter = ',', value_parser = parse_item)]
    measures: Option<Vec<CompareItem>>,
    /// Report log-scaled measures in bits instead of nats
    #[arg(long)]
    bits: bool,
    /// Tuple sampling for i2/i3/i4: with or without replacement
    #[arg(long, default_value = "with", value_parser = parse_mode)]
    mode: SamplingMode,
    /// Additive smoothing for collision sums
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// Bootstrap replicate count (element bootstrap; off when absent)
    #[arg(long, value_name = "N")]
    bootstrap: Option<usize>,
    /// RNG seed; falls back to CLUCMP_SEED, then 0
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "json")]
    format: OutputFormat,
    /// Write to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ResidualArgs {
    /// First partition file
    file_a: PathBuf,
    /// Second partition file
    file_b: PathBuf,
    /// Residual kind: mi (log-weighted) or ari (pair-count)
    #[arg(long, default_value = "mi", value_parser = parse_kind)]
    kind: ResidualKind,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Write to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExperimentArgs {
    /// Scenario: balanced, small_small or big_small
    #[arg(value_parser = parse_scenario)]
    scenario: Scenario,
    /// Number of elements
    #[arg(long, default_value_t = 1000)]
    n: usize,
    /// Trials per exchange level
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Exchange-level grid, inclusive
    #[arg(long, default_value = "0:0.5:0.05", value_name = "START:STOP:STEP")]
    eps_grid: String,
    /// Comma-separated measures (default: ri,ari,nmi,i2,i3,i4)
    #[arg(long, value_delimiter = ',', value_parser = parse_measure)]
    measures: Option<Vec<MeasureId>>,
    /// Tuple sampling for i2/i3/i4: with or without replacement
    #[arg(long, default_value = "with", value_parser = parse_mode)]
    mode: SamplingMode,
    /// Additive smoothing for collision sums
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    /// RNG seed; falls back to CLUCMP_SEED, then 0
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value = "csv")]
    format: OutputFormat,
    /// Write to a file instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_item(s: &str) -> std::result::Result<CompareItem, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_measure(s: &str) -> std::result::Result<MeasureId, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_mode(s: &str) -> std::result::Result<SamplingMode, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_kind(s: &str) -> std::result::Result<ResidualKind, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scenario(s: &str) -> std::result::Result<Scenario, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// Seed priority: explicit flag, then CLUCMP_SEED, then 0.
fn resolve_seed(flag: Option<u64>) -> Result<u64> {
    if let Some(seed) = flag {
        return Ok(seed);
    }
    match std::env::var("CLUCMP_SEED") {
        Ok(text) => text.trim().parse().map_err(|_| {
            Error::Usage(format!(
                "CLUCMP_SEED must be an unsigned integer, got {text:?}"
            ))
        }),
        Err(std::env::VarError::NotPresent) => Ok(0),
        Err(e) => Err(Error::Usage(format!("CLUCMP_SEED: {e}"))),
    }
}

/// Parses `start:stop:step` into an inclusive grid within [0, 0.5]. Grid
/// points are snapped to 12 decimals so repeated-addition dust never leaks
/// into output files.
fn parse_eps_grid(text: &str) -> Result<Vec<f64>> {
    let parts: Vec<&str> = text.split(':').collect();
    let &[start, stop, step] = parts.as_slice() else {
        return Err(Error::Usage(format!(
            "--eps-grid expects START:STOP:STEP, got {text:?}"
        )));
    };
    let parse = |name: &str, s: &str| -> Result<f64> {
        s.trim().parse().map_err(|_| {
            Error::Usage(format!("--eps-grid {name} must be a number, got {s:?}"))
        })
    };
    let (start, stop, step) = (
        parse("start", start)?,
        parse("stop", stop)?,
        parse("step", step)?,
    );
    if step.is_nan() || step <= 0.0 {
        return Err(Error::Usage(format!(
            "--eps-grid step must be positive, got {step}"
        )));
    }
    if !(0.0 <= start && start <= stop && stop <= 0.5) {
        return Err(Error::Usage(format!(
            "--eps-grid needs 0 <= start <= stop <= 0.5, got {text:?}"
        )));
    }
    let count = ((stop - start) / step + 1e-9).floor() as usize + 1;
    Ok((0..count)
        .map(|i| ((start + step * i as f64) * 1e12).round() / 1e12)
        .collect())
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text)?,
        None => std::io::stdout().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn cmd_compare(args: CompareArgs) -> Result<()> {
    let a = parse_partition_file(&args.file_a)?;
    let b = parse_partition_file(&args.file_b)?;
    let options = CompareOptions {
        items: args.measures.unwrap_or_else(CompareItem::all),
        measure_opts: MeasureOptions {
            mode: args.mode,
            lambda: args.lambda,
            base: if args.bits { LogBase::Bits } else { LogBase::Natural },
        },
        bootstrap: args.bootstrap,
        seed: resolve_seed(args.seed)?,
    };
    let report = compare_report(&a, &b, &options)?;
    let text = match args.format {
        OutputFormat::Json => compare_json(&report),
        OutputFormat::Csv => compare_csv(&report),
    };
    emit(args.out.as_deref(), &text)
}

fn cmd_residuals(args: ResidualArgs) -> Result<()> {
    let a = parse_partition_file(&args.file_a)?;
    let b = parse_partition_file(&args.file_b)?;
    let t = contingency(&a, &b)?;
    let m = residual_matrix(&t, args.kind)?;
    let text = match args.format {
        OutputFormat::Csv => residual_csv(&t, &m),
        OutputFormat::Json => residual_json(&t, &m, args.kind),
    };
    emit(args.out.as_deref(), &text)
}

fn cmd_experiment(args: ExperimentArgs) -> Result<()> {
    let cfg = ExperimentConfig {
        scenario: args.scenario,
        n_elements: args.n,
        eps_grid: parse_eps_grid(&args.eps_grid)?,
        n_trials: args.trials,
        measures: args.measures.unwrap_or_else(|| {
            vec![
                MeasureId::Ri,
                MeasureId::Ari,
                MeasureId::Nmi,
                MeasureId::I2,
                MeasureId::I3,
                MeasureId::I4,
            ]
        }),
        seed: resolve_seed(args.seed)?,
        options: MeasureOptions {
            mode: args.mode,
            lambda: args.lambda,
            base: LogBase::Natural,
        },
    };
    let result = run_experiment(&cfg)?;
    let text = match args.format {
        OutputFormat::Csv => experiment_csv(&result),
        OutputFormat::Json => experiment_json(&result),
    };
    emit(args.out.as_deref(), &text)
}

/// 2 for problems with the invocation or the input data, 1 for faults that
/// indicate a bug.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Usage(_)
        | Error::Parse { .. }
        | Error::Io(_)
        | Error::InvalidConfig(_)
        | Error::EmptyInput(_)
        | Error::DuplicateElement(_)
        | Error::ElementSetMismatch(_)
        | Error::TooFewElements(_)
        | Error::OrderTooSmall(_)
        | Error::OrderExceedsN { .. }
        | Error::InvalidOrder(_) => 2,
        _ => 1,
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Compare(args) => cmd_compare(args),
        Command::Residuals(args) => cmd_residuals(args),
        Command::Experiment(args) => cmd_experiment(args),
    };
    if let Err(e) = outcome {
        eprintln!("clucmp: {e}");
        std::process::exit(exit_code(&e));
    }
}
