//! Argument parsing and the four subcommands.
//!
//! Exit codes: 0 success, 2 configuration errors (including clap usage
//! errors), 3 data errors (unreadable or malformed files), 4 internal
//! contract violations (panics caught in `main`).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use toric_loss::lattice::TorusSize;
use toric_loss::noise::{NoiseParams, TrialSeed};
use toric_loss::scaling::{fit_boundary, fit_scaling, FitError, FitOptions};
use toric_loss::trial::{run_trial_detailed, Accounting, GridPoint, GridResult};

use crate::experiment::{run_grid, run_percolation, resolve_workers, PercolationPoint};
use crate::formats;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Config(String),
    #[error("{0}")]
    Data(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config(_) => 2,
            CliError::Data(_) => 3,
        }
    }
}

#[derive(Parser, Debug)]
#[command(
    name = "toric-loss",
    version,
    about = "Loss-tolerant toric code simulation: sweeps, fits and percolation checks"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decode a single trial and dump every intermediate structure.
    Sample(SampleArgs),
    /// Monte Carlo failure-rate sweep over a (p_loss, p_com, L) grid.
    Sweep(SweepArgs),
    /// Fit the scaling law and boundary curve to sweep output.
    Fit(FitArgs),
    /// Pure-loss recovery sweep (percolation check, no decoding).
    Percolation(PercolationArgs),
}

fn parse_unit_probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..=1.0).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 1]"))
    }
}

fn parse_flip_probability(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("{s:?} is not a number"))?;
    if (0.0..0.5).contains(&v) {
        Ok(v)
    } else {
        Err(format!("{v} is outside [0, 0.5)"))
    }
}

fn parse_size(s: &str) -> Result<u32, String> {
    let v: u32 = s.parse().map_err(|_| format!("{s:?} is not an integer"))?;
    if v >= 2 {
        Ok(v)
    } else {
        Err(format!("lattice size must be at least 2, got {v}"))
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum AccountingArg {
    /// Count logical and loss-percolation failures.
    Combined,
    /// Count logical failures only.
    LogicalOnly,
}

impl From<AccountingArg> for Accounting {
    fn from(a: AccountingArg) -> Accounting {
        match a {
            AccountingArg::Combined => Accounting::Combined,
            AccountingArg::LogicalOnly => Accounting::LogicalOnly,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Args, Debug)]
pub struct SampleArgs {
    /// Lattice linear size L.
    #[arg(long, value_parser = parse_size)]
    pub size: u32,
    /// Qubit loss rate.
    #[arg(long, value_parser = parse_unit_probability)]
    pub ploss: f64,
    /// Bit-flip rate on surviving qubits.
    #[arg(long, value_parser = parse_flip_probability)]
    pub pcom: f64,
    /// Master seed; drawn from system entropy (and echoed) if omitted.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Which trial of the stream to dump.
    #[arg(long, default_value_t = 0)]
    pub trial_index: u64,
    /// Output path; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug)]
pub struct SweepArgs {
    /// Lattice sizes, e.g. "8,12,16". Defaults to 8,12,16 (desk scale) or
    /// 16,24,32 with --paper-scale.
    #[arg(long)]
    pub sizes: Option<String>,
    /// Loss rates: comma list and/or "start:end:step" ranges.
    #[arg(long)]
    pub ploss: String,
    /// Flip rates: comma list and/or "start:end:step" ranges.
    #[arg(long)]
    pub pcom: String,
    /// Trials per grid point. Defaults to 2000, or 10000 with --paper-scale.
    #[arg(long)]
    pub trials: Option<u64>,
    /// Use the publication-scale defaults (sizes 16,24,32 and 10⁴ trials).
    #[arg(long)]
    pub paper_scale: bool,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Worker threads; env TORIC_LOSS_WORKERS, then available parallelism.
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = OutputFormat::Csv)]
    pub format: OutputFormat,
    #[arg(long, value_enum, default_value_t = AccountingArg::Combined)]
    pub accounting: AccountingArg,
}

#[derive(Args, Debug)]
pub struct FitArgs {
    /// Sweep CSV to fit.
    #[arg(long)]
    pub input: PathBuf,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Half-width of the p_fail window around the crossing kept for the
    /// fit; honours the small-x linearity of the scaling function.
    #[arg(long, default_value_t = 0.15)]
    pub window: f64,
    #[arg(long, value_enum, default_value_t = AccountingArg::Combined)]
    pub accounting: AccountingArg,
}

#[derive(Args, Debug)]
pub struct PercolationArgs {
    /// Lattice sizes, e.g. "8,16,32".
    #[arg(long, default_value = "8,16,32")]
    pub sizes: String,
    /// Loss rates: comma list and/or "start:end:step" ranges.
    #[arg(long)]
    pub ploss: String,
    #[arg(long, default_value_t = 2000)]
    pub trials: u64,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub workers: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Expand "a,b,c" lists where each item may be a "start:end:step" range.
fn expand_values(spec: &str, flag: &str) -> Result<Vec<f64>, CliError> {
    let bad = |msg: String| CliError::Config(format!("{flag}: {msg}"));
    let mut values = Vec::new();
    for item in spec.split(',') {
        let item = item.trim();
        if item.is_empty() {
            return Err(bad("empty list item".into()));
        }
        if let Some((start, rest)) = item.split_once(':') {
            let (end, step) = rest
                .split_once(':')
                .ok_or_else(|| bad(format!("range {item:?} needs start:end:step")))?;
            let start: f64 = start
                .parse()
                .map_err(|_| bad(format!("{start:?} is not a number")))?;
            let end: f64 = end
                .parse()
                .map_err(|_| bad(format!("{end:?} is not a number")))?;
            let step: f64 = step
                .parse()
                .map_err(|_| bad(format!("{step:?} is not a number")))?;
            if step <= 0.0 || end < start {
                return Err(bad(format!("range {item:?} must ascend with step > 0")));
            }
            let mut k = 0u64;
            loop {
                let v = start + step * k as f64;
                if v > end + step * 1e-9 {
                    break;
                }
                values.push(v);
                k += 1;
            }
        } else {
            values.push(
                item.parse()
                    .map_err(|_| bad(format!("{item:?} is not a number")))?,
            );
        }
    }
    if values.is_empty() {
        return Err(bad("no values given".into()));
    }
    Ok(values)
}

fn parse_sizes(spec: &str) -> Result<Vec<u32>, CliError> {
    spec.split(',')
        .map(|s| {
            parse_size(s.trim()).map_err(|msg| CliError::Config(format!("--sizes: {msg}")))
        })
        .collect()
}

fn validate_probabilities(
    values: &[f64],
    flag: &str,
    upper_exclusive_half: bool,
) -> Result<(), CliError> {
    for &v in values {
        let ok = if upper_exclusive_half {
            (0.0..0.5).contains(&v)
        } else {
            (0.0..=1.0).contains(&v)
        };
        if !ok {
            let range = if upper_exclusive_half { "[0, 0.5)" } else { "[0, 1]" };
            return Err(CliError::Config(format!(
                "{flag}: value {v} is outside {range}"
            )));
        }
    }
    Ok(())
}

fn resolve_seed(flag: Option<u64>) -> u64 {
    match flag {
        Some(seed) => seed,
        None => {
            use rand::RngCore;
            let seed = rand::rngs::OsRng.next_u64();
            eprintln!("# no --seed given; drew master_seed = {seed}");
            seed
        }
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        None => {
            print!("{content}");
            Ok(())
        }
        Some(path) => std::fs::write(path, content).map_err(|e| {
            CliError::Data(format!("cannot write {}: {e}", path.display()))
        }),
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Sample(args) => cmd_sample(args),
        Command::Sweep(args) => cmd_sweep(args),
        Command::Fit(args) => cmd_fit(args),
        Command::Percolation(args) => cmd_percolation(args),
    }
}

fn cmd_sample(args: SampleArgs) -> Result<(), CliError> {
    let master_seed = resolve_seed(args.seed);
    let params = NoiseParams::new(args.ploss, args.pcom)
        .map_err(|e| CliError::Config(e.to_string()))?;
    let size = TorusSize::new(args.size);
    eprintln!("# rng = {}", toric_loss::noise::GENERATOR);
    let record = run_trial_detailed(
        params,
        size,
        TrialSeed {
            master_seed,
            trial_index: args.trial_index,
        },
    );
    let dump = formats::write_sample_dump(
        &record,
        size,
        args.ploss,
        args.pcom,
        master_seed,
        args.trial_index,
    );
    emit(args.out.as_deref(), &dump)
}

fn cmd_sweep(args: SweepArgs) -> Result<(), CliError> {
    let sizes_spec = args.sizes.as_deref().unwrap_or(if args.paper_scale {
        "16,24,32"
    } else {
        "8,12,16"
    });
    let sizes = parse_sizes(sizes_spec)?;
    let trials = args
        .trials
        .unwrap_or(if args.paper_scale { 10_000 } else { 2_000 });
    if trials == 0 {
        return Err(CliError::Config("--trials: must be at least 1".into()));
    }
    let ploss = expand_values(&args.ploss, "--ploss")?;
    let pcom = expand_values(&args.pcom, "--pcom")?;
    validate_probabilities(&ploss, "--ploss", false)?;
    validate_probabilities(&pcom, "--pcom", true)?;

    let master_seed = resolve_seed(args.seed);
    let workers = resolve_workers(args.workers);
    let accounting: Accounting = args.accounting.into();
    eprintln!("# rng = {}", toric_loss::noise::GENERATOR);
    eprintln!("# master_seed = {master_seed}");
    eprintln!("# workers = {workers}");

    let mut points = Vec::new();
    for &p_loss in &ploss {
        for &p_com in &pcom {
            for &l in &sizes {
                points.push(GridPoint {
                    p_loss,
                    p_com,
                    l,
                    trials,
                });
            }
        }
    }

    let results = run_grid(&points, master_seed, workers);
    report_progress(&results, accounting);

    let content = match args.format {
        OutputFormat::Csv => formats::write_sweep_csv(&results, accounting),
        OutputFormat::Json => formats::write_sweep_json(&results, accounting),
    };
    emit(args.out.as_deref(), &content)
}

fn report_progress(results: &[GridResult], accounting: Accounting) {
    for r in results {
        let (lo, hi) = r.wilson_interval(accounting, 1.96);
        eprintln!(
            "# p_loss={} p_com={} L={}: p_fail={:.4} ± {:.4} (wilson95 {:.4}..{:.4})",
            r.point.p_loss,
            r.point.p_com,
            r.point.l,
            r.p_fail(accounting),
            r.stderr(accounting),
            lo,
            hi
        );
    }
}

fn cmd_fit(args: FitArgs) -> Result<(), CliError> {
    if args.window <= 0.0 {
        return Err(CliError::Config("--window: must be positive".into()));
    }
    let text = std::fs::read_to_string(&args.input).map_err(|e| {
        CliError::Data(format!("cannot read {}: {e}", args.input.display()))
    })?;
    let results = formats::parse_sweep_csv(&text).map_err(|e| {
        CliError::Data(format!("{}: {e}", args.input.display()))
    })?;
    if results.is_empty() {
        return Err(CliError::Data(format!(
            "{}: no data rows",
            args.input.display()
        )));
    }

    // Group rows by loss rate, ascending.
    let mut rates: Vec<u64> = results.iter().map(|r| r.point.p_loss.to_bits()).collect();
    rates.sort();
    rates.dedup();
    rates.sort_by(|a, b| {
        f64::from_bits(*a)
            .partial_cmp(&f64::from_bits(*b))
            .unwrap()
    });

    let opts = FitOptions {
        window: Some(args.window),
        accounting: args.accounting.into(),
    };
    let mut fits = Vec::new();
    for bits in rates {
        let p_loss = f64::from_bits(bits);
        let group: Vec<GridResult> = results
            .iter()
            .filter(|r| r.point.p_loss.to_bits() == bits)
            .copied()
            .collect();
        let fit = fit_scaling(&group, opts).map_err(|e| {
            CliError::Data(format!("fit at p_loss = {p_loss}: {e}"))
        })?;
        eprintln!(
            "# p_loss={}: p_t={:.4} nu0={:.3} converged={}",
            p_loss, fit.p_t, fit.nu0, fit.converged
        );
        fits.push(fit);
    }

    let boundary = match fit_boundary(&fits) {
        Ok(curve) => Some(curve),
        Err(FitError::InsufficientFits) => None,
        Err(e) => return Err(CliError::Data(e.to_string())),
    };
    let content = formats::write_fit_json(&fits, boundary.as_ref());
    emit(args.out.as_deref(), &content)
}

fn cmd_percolation(args: PercolationArgs) -> Result<(), CliError> {
    let sizes = parse_sizes(&args.sizes)?;
    if args.trials == 0 {
        return Err(CliError::Config("--trials: must be at least 1".into()));
    }
    let ploss = expand_values(&args.ploss, "--ploss")?;
    validate_probabilities(&ploss, "--ploss", false)?;

    let master_seed = resolve_seed(args.seed);
    let workers = resolve_workers(args.workers);
    eprintln!("# rng = {}", toric_loss::noise::GENERATOR);
    eprintln!("# master_seed = {master_seed}");

    let mut points = Vec::new();
    for &p_loss in &ploss {
        for &l in &sizes {
            points.push(PercolationPoint {
                p_loss,
                l,
                trials: args.trials,
            });
        }
    }
    let results = run_percolation(&points, master_seed, workers);
    for r in &results {
        eprintln!(
            "# p_loss={} L={}: p_recover={:.4} ± {:.4}",
            r.point.p_loss,
            r.point.l,
            r.p_recover(),
            r.stderr()
        );
    }
    emit(args.out.as_deref(), &formats::write_percolation_csv(&results))
}
