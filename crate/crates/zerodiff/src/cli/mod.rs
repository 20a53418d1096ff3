//! Command-line front end: reproducible experiments over zero tables,
//! emitting CSV/JSON.
//!
//! Exit codes: 0 ok, 2 parse, 3 domain, 4 inconclusive, 5 capacity.
//! Option precedence: command-line flags, then `--config` key=value file,
//! then built-in defaults.

use crate::error::{Error, Result};
use crate::explicit::{DetectOptions, Explicit, ExplicitConfig};
use crate::kernels::BumpKernel;
use crate::pairstats;
use crate::zerodata::ZeroTable;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use std::collections::HashMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

#[derive(Parser)]
#[command(
    name = "zerodiff",
    about = "Discrepancy statistics of unnormalized differences between Riemann zeta zeros",
    version
)]
struct Cli {
    #[command(subcommand)]
    cmd: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Tabulate the discrepancy density D(t) = K(1+it) + K(1-it) as CSV.
    Density(DensityArgs),
    /// Compare an empirical pair sum against its predicted main term (JSON).
    Verify(VerifyArgs),
    /// Run the zero-multiplicity detector (JSON; exit 4 when inconclusive).
    Detect(DetectArgs),
    /// Histogram of pairwise ordinate differences (CSV).
    Histogram(HistogramArgs),
    /// Load and validate a zero table, reporting count and RvM deviation (JSON).
    Ingest(IngestArgs),
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Zero-table file (one ascending ordinate per line, '#' comments).
    #[arg(long)]
    zeros: Option<PathBuf>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Worker threads (default: rayon's choice).
    #[arg(long)]
    threads: Option<usize>,
    /// key=value config file consulted for any flag not given explicitly.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args)]
struct DensityArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Grid start.
    #[arg(long = "t-lo")]
    t_lo: Option<f64>,
    /// Grid end.
    #[arg(long = "t-hi")]
    t_hi: Option<f64>,
    /// Grid step.
    #[arg(long)]
    dt: Option<f64>,
    /// Scaling cutoff M of the explicit formula.
    #[arg(long = "M")]
    scaling_cutoff: Option<u32>,
    /// Use only table zeros up to this height (density tail beyond).
    #[arg(long = "zero-cutoff")]
    zero_cutoff: Option<f64>,
    /// Emit the per-m contribution columns m1..mM.
    #[arg(long = "per-m")]
    per_m: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    /// Kernel concentration.
    #[arg(long)]
    m: Option<u32>,
    /// Derivative order of the kernel.
    #[arg(long)]
    k: Option<u32>,
    /// Height cutoff (default: full table).
    #[arg(long = "T")]
    t_height: Option<f64>,
    #[arg(long = "M")]
    scaling_cutoff: Option<u32>,
}

#[derive(Args)]
struct DetectArgs {
    #[command(flatten)]
    common: CommonArgs,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    beta: Option<f64>,
    #[arg(long = "k-start")]
    k_start: Option<u32>,
    #[arg(long = "k-end")]
    k_end: Option<u32>,
    /// Stabilization tolerance of the detector sweep.
    #[arg(long)]
    tol: Option<f64>,
}

#[derive(Args)]
struct HistogramArgs {
    #[command(flatten)]
    common: CommonArgs,
    /// Difference range LO:HI.
    #[arg(long)]
    range: Option<String>,
    #[arg(long)]
    bins: Option<usize>,
    #[arg(long = "T")]
    t_height: Option<f64>,
}

#[derive(Args)]
struct IngestArgs {
    #[command(flatten)]
    common: CommonArgs,
}

/// Lower-precedence key=value options from --config.
struct FileConfig(HashMap<String, String>);

impl FileConfig {
    fn load(path: Option<&Path>) -> Result<Self> {
        let mut map = HashMap::new();
        if let Some(path) = path {
            let text = std::fs::read_to_string(path)?;
            for (lineno, raw) in text.lines().enumerate() {
                let line = raw.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                    line: lineno + 1,
                    msg: format!("expected key=value, got {line:?}"),
                })?;
                map.insert(key.trim().to_string(), value.trim().to_string());
            }
        }
        Ok(Self(map))
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.0.get(key) {
            None => Ok(None),
            Some(raw) => raw.parse::<T>().map(Some).map_err(|_| Error::Parse {
                line: 0,
                msg: format!("config key {key}: cannot parse {raw:?}"),
            }),
        }
    }
}

fn pick<T: FromStr>(cli: Option<T>, file: &FileConfig, key: &str) -> Result<Option<T>> {
    match cli {
        Some(v) => Ok(Some(v)),
        None => file.get(key),
    }
}

fn required<T: FromStr>(cli: Option<T>, file: &FileConfig, key: &str) -> Result<T> {
    pick(cli, file, key)?.ok_or_else(|| Error::Domain(format!("missing required option --{key}")))
}

fn zeros_table(common: &CommonArgs, file: &FileConfig) -> Result<ZeroTable> {
    let path: PathBuf = required(common.zeros.clone(), file, "zeros")?;
    ZeroTable::load(path)
}

fn emit(common: &CommonArgs, file: &FileConfig, payload: &str) -> Result<()> {
    let out: Option<PathBuf> = pick(common.out.clone(), file, "out")?;
    match out {
        Some(path) => std::fs::write(path, payload)?,
        None => print!("{payload}"),
    }
    Ok(())
}

fn in_pool<T: Send>(threads: Option<usize>, body: impl FnOnce() -> Result<T> + Send) -> Result<T> {
    match threads {
        Some(n) if n > 0 => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map_err(|e| Error::Capacity(format!("cannot build thread pool: {e}")))?
            .install(body),
        _ => body(),
    }
}

fn parse_range(raw: &str) -> Result<(f64, f64)> {
    let (lo, hi) = raw.rsplit_once(':').ok_or_else(|| Error::Parse {
        line: 0,
        msg: format!("range must be LO:HI, got {raw:?}"),
    })?;
    let parse = |s: &str| -> Result<f64> {
        s.trim().parse().map_err(|_| Error::Parse {
            line: 0,
            msg: format!("bad range endpoint {s:?}"),
        })
    };
    Ok((parse(lo)?, parse(hi)?))
}

#[derive(Serialize)]
struct VerifyReport {
    kernel: BumpKernel,
    deriv_order: u32,
    t_height: f64,
    empirical_raw: f64,
    empirical_normalized: f64,
    predicted_raw: f64,
    predicted_normalized: f64,
    ratio: Option<f64>,
    pair_count: u64,
    budgets: BudgetReport,
}

#[derive(Serialize)]
struct BudgetReport {
    pair_accumulation: f64,
    quadrature_rel_tol: f64,
}

#[derive(Serialize)]
struct DetectJson {
    alpha: f64,
    beta: f64,
    k_start: u32,
    k_end: u32,
    tol: f64,
    converged: bool,
    multiplicity: Option<i64>,
    converged_at: Option<u32>,
    truncation_budget: Option<f64>,
    trace: Vec<(u32, f64)>,
}

#[derive(Serialize)]
struct IngestReport {
    source: String,
    count: usize,
    gamma_max: f64,
    rvm_max_abs_dev: f64,
}

fn cmd_density(args: DensityArgs) -> Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let zt = zeros_table(&args.common, &file)?;
    let t_lo = pick(args.t_lo, &file, "t-lo")?.unwrap_or(0.05);
    let t_hi = pick(args.t_hi, &file, "t-hi")?.unwrap_or(35.0);
    let dt = pick(args.dt, &file, "dt")?.unwrap_or(0.01);
    let cfg = ExplicitConfig {
        scaling_cutoff: pick(args.scaling_cutoff, &file, "M")?.unwrap_or(12),
        zero_cutoff: pick(args.zero_cutoff, &file, "zero-cutoff")?,
        ..Default::default()
    };
    let threads: Option<usize> = pick(args.common.threads, &file, "threads")?;
    let profile = in_pool(threads, || {
        Explicit::new(&zt, cfg)?.density_profile(t_lo, t_hi, dt, args.per_m)
    })?;
    emit(&args.common, &file, &profile.to_csv())
}

fn cmd_verify(args: VerifyArgs) -> Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let zt = zeros_table(&args.common, &file)?;
    let alpha = required(args.alpha, &file, "alpha")?;
    let beta = required(args.beta, &file, "beta")?;
    let m = pick(args.m, &file, "m")?.unwrap_or(4);
    let k = pick(args.k, &file, "k")?.unwrap_or(0);
    let t_height = pick(args.t_height, &file, "T")?.unwrap_or_else(|| zt.gamma_max());
    let cfg = ExplicitConfig {
        scaling_cutoff: pick(args.scaling_cutoff, &file, "M")?.unwrap_or(12),
        ..Default::default()
    };
    let threads: Option<usize> = pick(args.common.threads, &file, "threads")?;
    let report = in_pool(threads, || {
        let empirical = pairstats::s_mk(&zt, t_height, alpha, beta, m, k)?;
        let eval = Explicit::new(&zt, cfg)?;
        let kernel = BumpKernel::new(alpha, beta, m)?;
        let predicted_raw = pairstats::predicted_main_term(&eval, &kernel, k, t_height)?;
        let ratio = if predicted_raw != 0.0 {
            Some(empirical.raw_sum / predicted_raw)
        } else {
            None
        };
        Ok(VerifyReport {
            kernel,
            deriv_order: k,
            t_height,
            empirical_raw: empirical.raw_sum,
            empirical_normalized: empirical.normalized,
            predicted_raw,
            predicted_normalized: predicted_raw * 2.0 * std::f64::consts::PI / t_height,
            ratio,
            pair_count: empirical.pair_count,
            budgets: BudgetReport {
                pair_accumulation: empirical.error_budget,
                quadrature_rel_tol: 1e-6,
            },
        })
    })?;
    let mut payload = serde_json::to_string_pretty(&report).expect("serializable report");
    payload.push('\n');
    emit(&args.common, &file, &payload)
}

fn cmd_detect(args: DetectArgs) -> Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let zt = zeros_table(&args.common, &file)?;
    let alpha = required(args.alpha, &file, "alpha")?;
    let beta = required(args.beta, &file, "beta")?;
    let opts = DetectOptions {
        k_start: pick(args.k_start, &file, "k-start")?.unwrap_or(10),
        k_end: pick(args.k_end, &file, "k-end")?.unwrap_or(40),
        tol: pick(args.tol, &file, "tol")?.unwrap_or(1e-3),
    };
    let threads: Option<usize> = pick(args.common.threads, &file, "threads")?;
    let outcome = in_pool(threads, || {
        let eval = Explicit::new(&zt, ExplicitConfig::default())?;
        eval.detect_multiplicity(alpha, beta, opts)
    });
    match outcome {
        Ok(rep) => {
            let json = DetectJson {
                alpha,
                beta,
                k_start: opts.k_start,
                k_end: opts.k_end,
                tol: opts.tol,
                converged: true,
                multiplicity: Some(rep.multiplicity),
                converged_at: Some(rep.converged_at),
                truncation_budget: Some(rep.truncation_budget),
                trace: rep.trace,
            };
            let mut payload = serde_json::to_string_pretty(&json).expect("serializable report");
            payload.push('\n');
            emit(&args.common, &file, &payload)
        }
        Err(Error::Inconclusive { msg, trace }) => {
            let json = DetectJson {
                alpha,
                beta,
                k_start: opts.k_start,
                k_end: opts.k_end,
                tol: opts.tol,
                converged: false,
                multiplicity: None,
                converged_at: None,
                truncation_budget: None,
                trace,
            };
            let mut payload = serde_json::to_string_pretty(&json).expect("serializable report");
            payload.push('\n');
            emit(&args.common, &file, &payload)?;
            Err(Error::Inconclusive { msg, trace: Vec::new() })
        }
        Err(e) => Err(e),
    }
}

fn cmd_histogram(args: HistogramArgs) -> Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let zt = zeros_table(&args.common, &file)?;
    let range_raw: Option<String> = pick(args.range, &file, "range")?;
    let (lo, hi) = match range_raw {
        Some(raw) => parse_range(&raw)?,
        None => (0.0, 35.0),
    };
    let bins = pick(args.bins, &file, "bins")?.unwrap_or(700);
    let t_height = pick(args.t_height, &file, "T")?.unwrap_or_else(|| zt.gamma_max());
    let threads: Option<usize> = pick(args.common.threads, &file, "threads")?;
    let hist = in_pool(threads, || {
        pairstats::diff_histogram(&zt, t_height, lo, hi, bins)
    })?;
    emit(&args.common, &file, &hist.to_csv())
}

fn cmd_ingest(args: IngestArgs) -> Result<()> {
    let file = FileConfig::load(args.common.config.as_deref())?;
    let zt = zeros_table(&args.common, &file)?;
    let report = IngestReport {
        source: zt.source_label().to_string(),
        count: zt.count(),
        gamma_max: zt.gamma_max(),
        rvm_max_abs_dev: zt.rvm_max_abs_dev(4096),
    };
    let mut payload = serde_json::to_string_pretty(&report).expect("serializable report");
    payload.push('\n');
    emit(&args.common, &file, &payload)
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.cmd {
        Command::Density(a) => cmd_density(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Detect(a) => cmd_detect(a),
        Command::Histogram(a) => cmd_histogram(a),
        Command::Ingest(a) => cmd_ingest(a),
    }
}

/// Run the CLI on explicit arguments; returns the process exit code.
pub fn run<I, S>(args: I) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

/// Entry point for the thin binary.
pub fn main() -> std::process::ExitCode {
    let code = run(std::env::args_os());
    std::process::ExitCode::from(code as u8)
}
