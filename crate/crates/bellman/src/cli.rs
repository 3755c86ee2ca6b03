//! Command-line front-end.
//!
//! JSON goes to stdout, diagnostics to stderr. Exit codes: `0` success,
//! `1` failed check, `2` usage or parameter error, `3` I/O error.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;

use bellman_core::bellman::{solve, ProblemParams};
use bellman_core::carleson::{carleson_sum, random_admissible_weights};
use bellman_core::dyadic::{DyadicSet, MAX_LEVEL};
use bellman_core::extremizer::build_extremizer;
use bellman_core::sharpness::sharpness_sequence;
use bellman_core::{bellman_value, DyadicStepFunction, Error as CoreError, Exponent, RootFindConfig};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::csvio::{self, CsvError};
use crate::harness::{self, Suite, TrialConfig, SHARPNESS_THRESHOLD};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "bellman", version, about = "Bellman function of the dyadic maximal operator")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Value of B_p(f, F, k) with optimizer diagnostics.
    Bellman {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        tol: TolArgs,
    },
    /// Samples of the extremal profile g_k as CSV (t,g,hardy_avg).
    Extremizer {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        tol: TolArgs,
        /// Number of log-spaced sample points on [1e-6, 1].
        #[arg(long, default_value_t = 200)]
        samples: usize,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Dyadic maximal function of a step function read from CSV.
    Maximal {
        /// CSV with rows t_start,t_end,value on uniform dyadic cells.
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'p', long = "p", default_value_t = 2.0)]
        p: f64,
        /// CSV destination for M φ; omitted when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Randomized verification suite.
    Verify {
        /// lemma31, weak_type, ineq_1_10, ineq_1_11, carleson, ineq_6_10,
        /// ineq_6_12, sharpness, or all.
        suite: String,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: u64,
        #[arg(long, default_value_t = 10)]
        level: u32,
    },
    /// Ratios of the constructive near-extremal sequence.
    Sharpness {
        #[command(flatten)]
        params: ParamArgs,
        #[command(flatten)]
        tol: TolArgs,
        /// Largest level; levels run 8, 10, ... up to it.
        #[arg(long, default_value_t = 14)]
        level: u32,
    },
    /// Carleson sum of a step function against random admissible weights.
    Carleson {
        /// CSV with rows t_start,t_end,value on uniform dyadic cells.
        #[arg(long)]
        input: PathBuf,
        #[arg(short = 'p', long = "p", default_value_t = 2.0)]
        p: f64,
        #[arg(short = 'k', long = "k")]
        k: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        /// Depth of the weight tree.
        #[arg(long, default_value_t = 8)]
        level: u32,
        #[command(flatten)]
        tol: TolArgs,
    },
}

#[derive(Debug, Clone, Copy, Args)]
pub struct ParamArgs {
    #[arg(short = 'p', long = "p")]
    pub p: f64,
    /// Mean f = ∫φ.
    #[arg(short = 'f', long = "f")]
    pub f: f64,
    /// Moment F = ∫φ^p.
    #[arg(short = 'F', long = "F")]
    pub big_f: f64,
    #[arg(short = 'k', long = "k")]
    pub k: f64,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct TolArgs {
    /// Absolute tolerance of the root finders.
    #[arg(long)]
    pub tol: Option<f64>,
}

impl TolArgs {
    fn config(&self) -> Result<RootFindConfig, CliError> {
        let mut cfg = RootFindConfig::default();
        if let Some(t) = self.tol {
            cfg.abs_tol = t;
            cfg.validate().map_err(CliError::Usage)?;
        }
        Ok(cfg)
    }
}

impl ParamArgs {
    fn params(&self) -> Result<ProblemParams, CliError> {
        ProblemParams::from_raw(self.p, self.f, self.big_f, self.k).map_err(CliError::Usage)
    }
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{0}")]
    Usage(CoreError),
    #[error("{0}")]
    UsageMsg(String),
    #[error("{0}")]
    Compute(CoreError),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::UsageMsg(_) => EXIT_USAGE,
            CliError::Compute(_) => EXIT_FAILED,
            CliError::Io(_) => EXIT_IO,
        }
    }
}

impl From<CsvError> for CliError {
    fn from(e: CsvError) -> Self {
        if e.is_io() {
            CliError::Io(e.to_string())
        } else {
            CliError::UsageMsg(e.to_string())
        }
    }
}

fn io_err(path: &std::path::Path, e: io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

fn emit(stdout: &mut dyn Write, v: &Value) -> Result<(), CliError> {
    let s = crate::json::to_string(v).expect("JSON values serialize");
    writeln!(stdout, "{s}").map_err(|e| CliError::Io(e.to_string()))
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if e.use_stderr() {
                write!(stderr, "{text}")
            } else {
                write!(stdout, "{text}")
            };
            return code;
        }
    };
    match execute(cli.command, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.code()
        }
    }
}

fn execute(cmd: Command, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    match cmd {
        Command::Bellman { params, tol } => cmd_bellman(&params.params()?, &tol.config()?, stdout),
        Command::Extremizer {
            params,
            tol,
            samples,
            out,
        } => cmd_extremizer(&params.params()?, &tol.config()?, samples, out, stdout),
        Command::Maximal { input, p, out } => cmd_maximal(input, p, out, stdout),
        Command::Verify {
            suite,
            seed,
            trials,
            level,
        } => cmd_verify(&suite, seed, trials, level, stdout, stderr),
        Command::Sharpness { params, tol, level } => cmd_sharpness(&params.params()?, &tol.config()?, level, stdout),
        Command::Carleson {
            input,
            p,
            k,
            seed,
            level,
            tol,
        } => cmd_carleson(input, p, k, seed, level, &tol.config()?, stdout),
    }
}

fn param_json(params: &ProblemParams) -> Value {
    json!({ "p": params.p().get(), "f": params.mean(), "F": params.moment(), "k": params.k() })
}

fn cmd_bellman(params: &ProblemParams, cfg: &RootFindConfig, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let s = solve(params, cfg).map_err(CliError::Compute)?;
    emit(
        stdout,
        &json!({
            "params": param_json(params),
            "degenerate": params.is_degenerate(),
            "value": s.value,
            "B0": s.b0,
            "Z0": s.z0,
            "a": s.a,
            "domain": [s.domain.lo, s.domain.hi],
        }),
    )?;
    Ok(EXIT_OK)
}

/// `samples` log-spaced points on `[1e-6, 1]` together with `t = k`, sorted.
pub fn sample_points(samples: usize, k: f64) -> Vec<f64> {
    let lo: f64 = 1e-6;
    let mut ts: Vec<f64> = match samples {
        0 => vec![],
        1 => vec![1.0],
        n => (0..n)
            .map(|i| if i + 1 == n { 1.0 } else { lo * (1.0 / lo).powf(i as f64 / (n - 1) as f64) })
            .collect(),
    };
    ts.push(k);
    ts.sort_by(f64::total_cmp);
    ts.dedup();
    ts
}

fn cmd_extremizer(
    params: &ProblemParams,
    cfg: &RootFindConfig,
    samples: usize,
    out: Option<PathBuf>,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    if samples == 0 {
        return Err(CliError::UsageMsg("--samples must be at least 1".into()));
    }
    let g = build_extremizer(params, cfg).map_err(CliError::Compute)?;
    let mut rows = Vec::new();
    for t in sample_points(samples, params.k()) {
        let v = g.eval(t).map_err(CliError::Compute)?;
        let h = g.hardy_average(t).map_err(CliError::Compute)?;
        rows.push((t, v, h));
    }
    match out {
        Some(path) => {
            let file = File::create(&path).map_err(|e| io_err(&path, e))?;
            csvio::write_samples(BufWriter::new(file), &rows)?;
            emit(
                stdout,
                &json!({
                    "params": param_json(params),
                    "B0": g.b0(), "Z0": g.z0(), "a": g.a(), "A1": g.a1(), "c": g.c(),
                    "rows": rows.len(),
                    "out": path.display().to_string(),
                }),
            )?;
        }
        None => csvio::write_samples(&mut *stdout, &rows)?,
    }
    Ok(EXIT_OK)
}

fn read_input(path: &std::path::Path) -> Result<DyadicStepFunction, CliError> {
    let file = File::open(path).map_err(|e| io_err(path, e))?;
    Ok(csvio::read_dyadic(BufReader::new(file))?)
}

fn cmd_maximal(input: PathBuf, p: f64, out: Option<PathBuf>, stdout: &mut dyn Write) -> Result<i32, CliError> {
    let p = Exponent::new(p).map_err(CliError::Usage)?;
    let phi = read_input(&input)?;
    let m = phi.maximal_operator();
    let f = phi.mean();
    if let Some(path) = &out {
        let file = File::create(path).map_err(|e| io_err(path, e))?;
        csvio::write_dyadic(BufWriter::new(file), &m)?;
    }
    let above_mean = DyadicSet::superlevel(&m, f).map(|s| s.to_hex());
    emit(
        stdout,
        &json!({
            "level": phi.level(),
            "p": p.get(),
            "f": f,
            "F": phi.lp_moment(p.get()),
            "maximal_moment": m.lp_moment(p.get()),
            "superlevel_at_mean": above_mean,
            "out": out.map(|o| o.display().to_string()),
        }),
    )?;
    Ok(EXIT_OK)
}

fn cmd_verify(suite: &str, seed: u64, trials: u64, level: u32, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32, CliError> {
    let suites: Vec<Suite> = if suite == "all" {
        Suite::ALL.to_vec()
    } else {
        vec![suite.parse().map_err(|e: harness::UnknownSuite| CliError::UsageMsg(e.to_string()))?]
    };
    let cfg = TrialConfig {
        seed,
        trials,
        level,
        ..TrialConfig::default()
    };
    cfg.validate().map_err(|e| CliError::UsageMsg(e.to_string()))?;
    let mut reports = Vec::new();
    for s in suites {
        let r = harness::run_suite(s, &cfg).map_err(|e| CliError::UsageMsg(e.to_string()))?;
        let _ = writeln!(
            stderr,
            "{}: {} (min margin {})",
            r.name,
            if r.passed { "passed" } else { "FAILED" },
            crate::json::format_f64(r.min_margin)
        );
        reports.push(r);
    }
    let passed = reports.iter().all(|r| r.passed);
    let v = if reports.len() == 1 {
        serde_json::to_value(&reports[0])
    } else {
        serde_json::to_value(&reports)
    }
    .expect("reports serialize");
    emit(stdout, &v)?;
    Ok(if passed { EXIT_OK } else { EXIT_FAILED })
}

fn cmd_sharpness(params: &ProblemParams, cfg: &RootFindConfig, level: u32, stdout: &mut dyn Write) -> Result<i32, CliError> {
    if !(8..=MAX_LEVEL).contains(&level) {
        return Err(CliError::UsageMsg(format!("--level must lie in 8..={MAX_LEVEL}")));
    }
    let levels = harness::sharpness_levels(level);
    let seq = sharpness_sequence(params, &levels, cfg).map_err(CliError::Compute)?;
    let ratios: Vec<f64> = seq.iter().map(|s| s.ratio).collect();
    let measures: Vec<f64> = seq.iter().map(|s| s.measure).collect();
    let moments: Vec<f64> = seq.iter().map(|s| s.moment).collect();
    let nondecreasing = ratios.windows(2).all(|w| w[1] >= w[0] - 1e-12);
    let last = *ratios.last().expect("at least one level");
    let reaches = last >= SHARPNESS_THRESHOLD;
    emit(
        stdout,
        &json!({
            "params": param_json(params),
            "levels": levels,
            "ratios": ratios,
            "measures": measures,
            "moments": moments,
            "threshold": SHARPNESS_THRESHOLD,
            "final_ratio": last,
            "nondecreasing": nondecreasing,
            "reaches_threshold": reaches,
        }),
    )?;
    Ok(if nondecreasing && reaches { EXIT_OK } else { EXIT_FAILED })
}

#[allow(clippy::too_many_arguments)]
fn cmd_carleson(
    input: PathBuf,
    p: f64,
    k: f64,
    seed: u64,
    level: u32,
    cfg: &RootFindConfig,
    stdout: &mut dyn Write,
) -> Result<i32, CliError> {
    let p = Exponent::new(p).map_err(CliError::Usage)?;
    if !(k > 0.0 && k <= 1.0) {
        return Err(CliError::UsageMsg("k must lie in (0, 1]".into()));
    }
    if level > MAX_LEVEL {
        return Err(CliError::UsageMsg(format!("--level must be at most {MAX_LEVEL}")));
    }
    let phi = read_input(&input)?;
    let weights = random_admissible_weights(level, k, seed).map_err(CliError::Usage)?;
    let sum = carleson_sum(&phi, &weights, p.get()).map_err(CliError::Compute)?;
    let f = phi.mean();
    let big_f = phi.lp_moment(p.get()).max(f.powf(p.get()));
    let params = ProblemParams::new(p, f, big_f, k).map_err(CliError::Usage)?;
    let bound = bellman_value(&params, cfg).map_err(CliError::Compute)?;
    let margin = bound - sum;
    emit(
        stdout,
        &json!({
            "params": param_json(&params),
            "seed": seed,
            "weight_level": level,
            "weights_total": weights.total(),
            "carleson_sum": sum,
            "bellman_bound": bound,
            "margin": margin,
            "passed": margin >= -1e-9,
        }),
    )?;
    Ok(if margin >= -1e-9 { EXIT_OK } else { EXIT_FAILED })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("bellman").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn sample_points_include_k_and_ends() {
        let ts = sample_points(5, 0.3);
        assert_eq!(ts.len(), 6);
        assert_eq!(ts[0], 1e-6);
        assert_eq!(*ts.last().unwrap(), 1.0);
        assert!(ts.contains(&0.3));
        assert!(ts.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(sample_points(5, 1.0).len(), 5);
    }

    #[test]
    fn invalid_params_are_usage_errors() {
        assert_eq!(run_args(&["bellman", "-p", "2", "-f", "2", "-F", "1", "-k", "0.5"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["bellman", "-p", "1", "-f", "1", "-F", "1", "-k", "0.5"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["bellman", "-p", "2", "-f", "1", "-F", "2", "-k", "0"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["bellman", "-p", "2", "-f", "1", "-F", "2", "-k", "1.5"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["bellman", "-p", "2", "-f", "1", "-F", "2"]).0, EXIT_USAGE);
        assert_eq!(run_args(&["bellman", "-p", "2", "-f", "1", "-F", "2", "-k", "1", "--tol", "-1"]).0, EXIT_USAGE);
    }

    #[test]
    fn help_goes_to_stdout() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("verify"));
    }

    #[test]
    fn missing_input_is_io_error() {
        let (code, _, err) = run_args(&["maximal", "--input", "/nonexistent/phi.csv"]);
        assert_eq!(code, EXIT_IO);
        assert!(err.contains("error"));
    }
}
