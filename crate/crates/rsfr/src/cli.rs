//! Command-line front end. Exit codes: 0 success, 1 invalid configuration or
//! I/O failure, 2 solver non-convergence in `recover`.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime};

use clap::{Args, Parser, Subcommand, ValueEnum};
use rsfr_core::{Algorithm, DopplerMode, FrequencyCodes, RadarParams};
use serde::Serialize;

use crate::analysis::{bound_table, run_analysis, CodeSource, ConditionQuery};
use crate::ccdf::run_ccdf_experiment;
use crate::config::{read_json, run_recover, RecoverConfig};
use crate::error::{Error, Result};
use crate::output::{manifest_path, write_csv, write_csv_file, write_json_file, Manifest};
use crate::rates::{run_exact_rate_experiment, run_hit_rate_experiment};
use crate::spec::{ExperimentKind, ExperimentSpec, ModeSpec, Scale};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INVALID: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "rsfr",
    version,
    about = "Randomized stepped-frequency radar: coherence analysis, bounds and sparse recovery experiments"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Empirical CCDFs of mu_I, mu_B and ||Psi||_s with the union bounds
    Ccdf(SweepArgs),
    /// Noiseless exact-recovery rate against the number of targets
    ExactRate(SweepArgs),
    /// Noisy hit rate over the (targets, SNR) grid
    HitRate(SweepArgs),
    /// Coherence report and recovery guarantees for one code realization
    Analyze(AnalyzeArgs),
    /// Table of the sparsity bound and, optionally, the incoherence condition
    Bound(BoundArgs),
    /// Reconstruct one scene described by a JSON config
    Recover(RecoverArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exact,
    Simplified,
}

impl From<ModeArg> for DopplerMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Exact => DopplerMode::Exact,
            ModeArg::Simplified => DopplerMode::Simplified,
        }
    }
}

#[derive(Debug, Default, Args)]
pub struct RadarArgs {
    /// Pulses per CPI, N
    #[arg(long)]
    pub n: Option<usize>,
    /// Frequencies, M
    #[arg(long)]
    pub m: Option<usize>,
    /// Frequency step in Hz
    #[arg(long)]
    pub freq_step: Option<f64>,
    /// Carrier in Hz
    #[arg(long)]
    pub carrier: Option<f64>,
    /// Pulse repetition interval in seconds
    #[arg(long)]
    pub pri: Option<f64>,
}

impl RadarArgs {
    fn apply(&self, base: &RadarParams) -> Result<RadarParams> {
        Ok(RadarParams::new(
            self.n.unwrap_or(base.n_pulses),
            self.m.unwrap_or(base.n_freqs),
            self.freq_step.unwrap_or(base.freq_step),
            self.carrier.unwrap_or(base.carrier),
            self.pri.unwrap_or(base.pri),
        )?)
    }
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub radar: RadarArgs,
    /// JSON experiment spec to start from instead of the preset
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Monte Carlo trials per cell
    #[arg(long)]
    pub trials: Option<usize>,
    /// Base seed; trial t uses seed + t
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long, value_enum)]
    pub mode: Option<ModeArg>,
    /// Relative bandwidths M*df/fc for the exact model, comma separated
    #[arg(long, value_delimiter = ',')]
    pub rb: Option<Vec<f64>>,
    /// Algorithms, comma separated: mf, omp, block-omp, lasso, block-lasso, bp, block-bp
    #[arg(long, value_delimiter = ',')]
    pub algos: Option<Vec<String>>,
    /// Target counts: list "1,2,4" or inclusive range "1:8" or "1:12:2"
    #[arg(long)]
    pub k_range: Option<String>,
    /// SNR values in dB: list "0,5,10" or inclusive range "-5:20:2.5"
    #[arg(long, allow_hyphen_values = true)]
    pub snr_range: Option<String>,
    /// Scatterers per target, P
    #[arg(long)]
    pub scatterers: Option<usize>,
    /// Lasso weight (default: a tenth of the largest correlation)
    #[arg(long)]
    pub lambda: Option<f64>,
    /// Iteration cap for the iterative solvers
    #[arg(long)]
    pub max_iterations: Option<usize>,
    /// Relative stopping tolerance for the iterative solvers
    #[arg(long)]
    pub tolerance: Option<f64>,
    /// CSV output path; a manifest is written next to it. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Full-size grids (N = 128, 1000 trials per cell)
    #[arg(long, conflicts_with = "desk_scale")]
    pub paper_scale: bool,
    /// Reduced grids (the default)
    #[arg(long)]
    pub desk_scale: bool,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    #[command(flatten)]
    pub radar: RadarArgs,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Explicit codes, comma separated, instead of drawing them from the seed
    #[arg(long, value_delimiter = ',')]
    pub codes: Option<Vec<usize>>,
    #[arg(long, value_enum, default_value = "simplified")]
    pub mode: ModeArg,
    /// Relative bandwidth for the exact model
    #[arg(long)]
    pub rb: Option<f64>,
    /// Block sparsity at which to evaluate the incoherence condition
    #[arg(long, default_value_t = 1)]
    pub k: usize,
    /// Failure probability for the sparsity bound
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// JSON report path; defaults to stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,4,8")]
    pub m: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "32,128,1024,1048576,1073741824")]
    pub n: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_value = "0.1")]
    pub epsilon: Vec<f64>,
    /// Intra-block coherence for the incoherence condition
    #[arg(long, requires_all = ["mu_inter", "k"])]
    pub mu_intra: Option<f64>,
    #[arg(long, requires_all = ["mu_intra", "k"])]
    pub mu_inter: Option<f64>,
    /// Spectral norm for the condition (default sqrt(M))
    #[arg(long)]
    pub norm: Option<f64>,
    #[arg(long)]
    pub k: Option<usize>,
    /// CSV output path; defaults to stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct RecoverArgs {
    /// JSON scene configuration
    #[arg(long)]
    pub config: PathBuf,
    /// JSON output path; defaults to stdout
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// Parses `"a,b,c"` or inclusive `"start:end[:step]"` into integers.
pub fn parse_usize_list(text: &str) -> Result<Vec<usize>> {
    let bad = || Error::Config(format!("cannot parse integer range {text:?}"));
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let parts: Vec<&str> = item.split(':').collect();
        let nums = parts.iter().map(|p| p.trim().parse::<usize>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        match nums[..] {
            [v] => out.push(v),
            [a, b] if a <= b => out.extend(a..=b),
            [a, b, step] if a <= b && step > 0 => out.extend((a..=b).step_by(step)),
            _ => return Err(bad()),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

/// Parses `"a,b,c"` or inclusive `"start:end:step"` into reals.
pub fn parse_f64_list(text: &str) -> Result<Vec<f64>> {
    let bad = || Error::Config(format!("cannot parse real range {text:?}"));
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let nums = item.split(':').map(|p| p.trim().parse::<f64>().map_err(|_| bad())).collect::<Result<Vec<_>>>()?;
        if nums.iter().any(|v| !v.is_finite()) {
            return Err(bad());
        }
        match nums[..] {
            [v] => out.push(v),
            [a, b, step] if a <= b && step > 0.0 => {
                let count = ((b - a) / step + 1e-9).floor() as usize;
                out.extend((0..=count).map(|i| a + step * i as f64));
            }
            _ => return Err(bad()),
        }
    }
    if out.is_empty() {
        return Err(bad());
    }
    Ok(out)
}

fn build_spec(kind: ExperimentKind, args: &SweepArgs) -> Result<ExperimentSpec> {
    let scale = if args.paper_scale { Scale::Paper } else { Scale::Desk };
    let mut spec = match &args.config {
        Some(path) => {
            let spec: ExperimentSpec = read_json(path)?;
            if spec.kind != kind {
                return Err(Error::Config(format!("{} holds a {:?} spec", path.display(), spec.kind)));
            }
            spec
        }
        None => ExperimentSpec::preset(kind, scale),
    };
    spec.params = args.radar.apply(&spec.params)?;
    if let Some(t) = args.trials {
        spec.trials = t;
    }
    if let Some(s) = args.seed {
        spec.base_seed = s;
    }
    match (args.mode, &args.rb) {
        (Some(ModeArg::Simplified), Some(_)) => {
            return Err(Error::Config("--rb only applies to the exact model".into()));
        }
        (Some(ModeArg::Simplified), None) => spec.modes = vec![ModeSpec::simplified()],
        (Some(ModeArg::Exact), None) => spec.modes = vec![ModeSpec::exact(None)],
        (_, Some(rbs)) => spec.modes = rbs.iter().map(|&rb| ModeSpec::exact(Some(rb))).collect(),
        (None, None) => {}
    }
    if let Some(algos) = &args.algos {
        spec.algorithms = algos.iter().map(|a| a.parse::<Algorithm>()).collect::<std::result::Result<_, _>>()?;
    }
    if let Some(k) = &args.k_range {
        spec.k_range = parse_usize_list(k)?;
    }
    if let Some(s) = &args.snr_range {
        spec.snr_range_db = parse_f64_list(s)?;
    }
    if let Some(p) = args.scatterers {
        spec.scatterers_per_target = p;
    }
    if args.lambda.is_some() {
        spec.solver.lambda = args.lambda;
    }
    if let Some(i) = args.max_iterations {
        spec.solver.max_iterations = i;
    }
    if let Some(t) = args.tolerance {
        spec.solver.tolerance = t;
    }
    spec.validate()?;
    Ok(spec)
}

fn emit_table<T: Serialize, S: Serialize>(
    command: &str,
    spec: S,
    rows: &[T],
    out: Option<&Path>,
    started: (SystemTime, Instant),
    stdout: &mut dyn Write,
) -> Result<()> {
    match out {
        Some(path) => {
            write_csv_file(rows, path)?;
            let manifest = Manifest::new(command, spec, started.0, started.1.elapsed(), rows.len(), path);
            write_json_file(&manifest, &manifest_path(path))
        }
        None => write_csv(rows, stdout),
    }
}

fn emit_json<T: Serialize>(value: &T, out: Option<&Path>, stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => write_json_file(value, path),
        None => {
            serde_json::to_writer_pretty(&mut *stdout, value)?;
            writeln!(stdout).map_err(|e| Error::io("<stdout>", e))
        }
    }
}

fn execute(cli: Cli, stdout: &mut dyn Write) -> Result<u8> {
    let started = (SystemTime::now(), Instant::now());
    match cli.command {
        Command::Ccdf(args) => {
            let spec = build_spec(ExperimentKind::Ccdf, &args)?;
            let table = run_ccdf_experiment(&spec)?;
            emit_table("ccdf", &spec, &table.points, args.out.as_deref(), started, stdout)?;
        }
        Command::ExactRate(args) => {
            let spec = build_spec(ExperimentKind::ExactRate, &args)?;
            let rows = run_exact_rate_experiment(&spec)?;
            emit_table("exact-rate", &spec, &rows, args.out.as_deref(), started, stdout)?;
        }
        Command::HitRate(args) => {
            let spec = build_spec(ExperimentKind::HitRate, &args)?;
            let rows = run_hit_rate_experiment(&spec)?;
            emit_table("hit-rate", &spec, &rows, args.out.as_deref(), started, stdout)?;
        }
        Command::Analyze(args) => {
            let mut params = args.radar.apply(&RadarParams::x_band(32, 4)?)?;
            if let Some(rb) = args.rb {
                if args.mode == ModeArg::Simplified {
                    return Err(Error::Config("--rb only applies to the exact model".into()));
                }
                params = params.with_relative_bandwidth(rb)?;
            }
            let source = match args.codes {
                Some(c) => CodeSource::Explicit(FrequencyCodes::from_codes(c, params.n_freqs)?),
                None => CodeSource::Seed(args.seed),
            };
            let report = run_analysis(&params, source, args.mode.into(), args.k, args.epsilon)?;
            emit_json(&report, args.out.as_deref(), stdout)?;
        }
        Command::Bound(args) => {
            let query = match (args.mu_intra, args.mu_inter, args.k) {
                (Some(mu_intra), Some(mu_inter), Some(k)) => {
                    Some(ConditionQuery { mu_intra, mu_inter, spectral_norm: args.norm, block_sparsity: k })
                }
                _ => None,
            };
            let rows = bound_table(&args.m, &args.n, &args.epsilon, query)?;
            let echo = serde_json::json!({ "m": args.m, "n": args.n, "epsilon": args.epsilon, "condition": query });
            emit_table("bound", echo, &rows, args.out.as_deref(), started, stdout)?;
        }
        Command::Recover(args) => {
            let config: RecoverConfig = read_json(&args.config)?;
            let output = run_recover(&config)?;
            emit_json(&output, args.out.as_deref(), stdout)?;
            if !output.converged {
                return Ok(EXIT_NOT_CONVERGED);
            }
        }
    }
    Ok(EXIT_OK)
}

/// Parses `args`, runs the command and returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(stderr, "{}", e.render());
            return if e.use_stderr() { EXIT_INVALID } else { EXIT_OK };
        }
    };
    match execute(cli, stdout) {
        Ok(code) => {
            if code == EXIT_NOT_CONVERGED {
                let _ = writeln!(stderr, "rsfr: solver stopped at the iteration limit before converging");
            }
            code
        }
        Err(e) => {
            let _ = writeln!(stderr, "rsfr: {e}");
            EXIT_INVALID
        }
    }
}
