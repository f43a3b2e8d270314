//! Command-line front end: `dsgm <solve|eval|gradcheck|synth> [--config FILE] [--key value ...]`.
//!
//! Exit codes: `0` success, `1` numerical or tolerance failure, `2` usage, config,
//! parse, domain or I/O failure.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, ValueEnum};
use thiserror::Error;

use dsgm_core::divergence::appendix_table_neg_grad;
use dsgm_core::gradcheck::{self, DEFAULT_TOLERANCE};
use dsgm_core::linear::{Convolution1d, InverseProblem, LinearOperator};
use dsgm_core::solver::{self, Status};
use dsgm_core::synth::{self, SynthConfig};
use dsgm_core::{io, DivergenceSpec, Error};

pub mod config;

pub use config::RunConfig;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) => 1,
            CliError::Usage(_) => 2,
        }
    }
}

/// Errors raised while checking inputs; anything the library reports here is a usage
/// problem, whatever its kind.
impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Usage(e.to_string())
    }
}

/// Errors raised while iterating: evaluation breakdowns are numerical failures.
fn numerical(e: Error) -> CliError {
    match e {
        Error::Eval(_)
        | Error::ModelDegenerate { .. }
        | Error::PreconditionerDegenerate { .. }
        | Error::LineSearchFailed { .. } => CliError::Numerical(e.to_string()),
        other => other.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Command {
    Solve,
    Eval,
    Gradcheck,
    Synth,
}

#[derive(Debug, Parser)]
#[command(name = "dsgm", version, about = "Entropic divergences and scaled-gradient solvers")]
struct Cli {
    #[arg(value_enum)]
    command: Command,
    /// Flat `key = value` config file.
    #[arg(long)]
    config: Option<PathBuf>,
    /// `--key value` or `--key=value` overrides.
    #[arg(trailing_var_arg = true, allow_hyphen_values = true)]
    overrides: Vec<String>,
}

/// Runs the CLI and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let result = RunConfig::load(cli.config.as_deref(), &cli.overrides).and_then(|cfg| match cli.command {
        Command::Eval => cmd_eval(&cfg, out, err),
        Command::Gradcheck => cmd_gradcheck(&cfg, out, err),
        Command::Synth => cmd_synth(&cfg, out),
        Command::Solve => cmd_solve(&cfg, out, err),
    });
    match result {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}

fn io_err(e: std::io::Error) -> CliError {
    CliError::Usage(format!("i/o error: {e}"))
}

fn spec_with_notes(cfg: &RunConfig, err: &mut dyn Write) -> Result<DivergenceSpec, CliError> {
    let spec = cfg.spec()?;
    for note in spec.family().diagnostics() {
        writeln!(err, "note: {note}").map_err(io_err)?;
    }
    Ok(spec)
}

fn join(v: &[f64]) -> String {
    v.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(", ")
}

/// Prints `D` and `-∇D` for the pair in the `p` and `q` files.
pub fn cmd_eval(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let spec = spec_with_notes(cfg, err)?;
    let p = io::read_vector(cfg.require_path("p")?)?;
    let q = io::read_vector(cfg.require_path("q")?)?;
    let value = spec.value(&p, &q)?;
    let g = spec.neg_grad(&p, &q)?;
    writeln!(out, "divergence = {}", spec.family().key()).map_err(io_err)?;
    writeln!(out, "value = {value:?}").map_err(io_err)?;
    writeln!(out, "neg_grad = {}", join(&g)).map_err(io_err)?;
    Ok(0)
}

/// Compares the analytic negative gradient with central differences.
///
/// The pair comes from the `p` and `q` files, or is drawn from `seed` (`n` components,
/// default 6). `source = table` checks the per-family table path instead of the
/// general one, and `perturb` adds an offset to the first component (a negative
/// control).
pub fn cmd_gradcheck(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let spec = spec_with_notes(cfg, err)?;
    let tol: f64 = cfg.parse_or("tol", DEFAULT_TOLERANCE)?;
    let (p, q) = match (cfg.path("p"), cfg.path("q")) {
        (Some(p), Some(q)) => (io::read_vector(p)?, io::read_vector(q)?),
        (None, None) => {
            let seed: u64 = cfg.parse_or("seed", 1)?;
            let n: usize = cfg.parse_or("n", 6)?;
            gradcheck::random_pair(seed, n, 0.5, 2.0)
        }
        _ => return Err(CliError::Usage("give both p and q, or neither".into())),
    };
    if let Some(j) = p.iter().chain(&q).position(|v| !(*v > 0.0)) {
        return Err(CliError::Usage(format!("gradient check needs strictly positive inputs (entry {j})")));
    }
    let mut g = match cfg.get("source").unwrap_or("analytic") {
        "analytic" => spec.neg_grad(&p, &q)?,
        "table" => appendix_table_neg_grad(&spec, &p, &q)?,
        other => return Err(CliError::Usage(format!("unknown gradient source '{other}'"))),
    };
    let perturb: f64 = cfg.parse_or("perturb", 0.0)?;
    if let Some(g0) = g.first_mut() {
        *g0 += perturb;
    }
    let report = gradcheck::check_neg_grad(|q| spec.value(&p, q), &g, &q)?;
    let pass = report.passes(tol);
    writeln!(out, "max_rel_err = {:e}", report.max_rel_err).map_err(io_err)?;
    writeln!(out, "tol = {tol:e}").map_err(io_err)?;
    writeln!(out, "{}", if pass { "PASS" } else { "FAIL" }).map_err(io_err)?;
    Ok(if pass { 0 } else { 1 })
}

fn out_dir(cfg: &RunConfig) -> Result<PathBuf, CliError> {
    let dir = cfg.path("out_dir").unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&dir).map_err(io_err)?;
    Ok(dir)
}

/// Writes a seeded synthetic problem and a `problem.cfg` that `solve` can read.
pub fn cmd_synth(cfg: &RunConfig, out: &mut dyn Write) -> Result<i32, CliError> {
    let d = SynthConfig::default();
    let sc = SynthConfig {
        n: cfg.parse_or("n", d.n)?,
        seed: cfg.parse_or("seed", d.seed)?,
        kernel_width: cfg.parse_or("kernel_width", d.kernel_width)?,
        kernel_sigma: cfg.parse("kernel_sigma")?,
        spikes: cfg.parse_or("spikes", d.spikes)?,
        poisson: cfg.flag("poisson")?,
    };
    let prob = synth::generate(&sc)?;
    let dir = out_dir(cfg)?;
    io::write_vector(dir.join("x_true.csv"), "x_true", &prob.x_true)?;
    io::write_vector(dir.join("kernel.csv"), "kernel (periodic)", &prob.kernel)?;
    io::write_vector(dir.join("measurement.csv"), "measurement", &prob.measurement)?;
    io::write_vector(dir.join("x0.csv"), "x0", &prob.x0)?;
    let total: f64 = prob.x_true.iter().sum();
    let problem_cfg = format!(
        "# synthetic problem: n = {}, seed = {}, poisson = {}\n\
         # sum of x_true = {total:?}\n\
         kernel = kernel.csv\n\
         boundary = periodic\n\
         measurement = measurement.csv\n\
         x0 = x0.csv\n",
        sc.n, sc.seed, sc.poisson
    );
    fs::write(dir.join("problem.cfg"), problem_cfg).map_err(io_err)?;
    writeln!(out, "wrote synthetic problem (n = {}, seed = {}) to {}", sc.n, sc.seed, dir.display())
        .map_err(io_err)?;
    Ok(0)
}

fn load_problem(cfg: &RunConfig) -> Result<(InverseProblem, Vec<f64>), CliError> {
    let measurement = io::read_vector(cfg.require_path("measurement")?)?;
    let x0 = cfg.path("x0").map(io::read_vector).transpose()?;
    let operator: Box<dyn LinearOperator> = match (cfg.path("operator"), cfg.path("kernel")) {
        (Some(path), None) => Box::new(io::read_matrix(path)?),
        (None, Some(path)) => {
            let n = x0.as_ref().map_or(measurement.len(), Vec::len);
            Box::new(Convolution1d::new(io::read_vector(path)?, n, cfg.boundary()?)?)
        }
        (Some(_), Some(_)) => return Err(CliError::Usage("give either operator or kernel, not both".into())),
        (None, None) => return Err(CliError::Usage("missing required key 'operator' or 'kernel'".into())),
    };
    let sum_constraint: Option<f64> = cfg.parse("sum_constraint")?;
    let x0 = match x0 {
        Some(x0) => x0,
        None => {
            let n = operator.cols();
            let total = sum_constraint.unwrap_or_else(|| measurement.iter().sum());
            vec![total / n as f64; n]
        }
    };
    Ok((InverseProblem::new(operator, measurement, sum_constraint)?, x0))
}

/// Runs the configured solver and writes `x_final.csv` and `trace.csv`.
pub fn cmd_solve(cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, CliError> {
    let spec = spec_with_notes(cfg, err)?;
    let config = cfg.solver(spec)?;
    let (problem, x0) = load_problem(cfg)?;
    // surface bad starting points as input errors before iterating
    problem.value(&spec, &x0)?;
    let (x, trace) = solver::solve(&config, &problem, &x0).map_err(numerical)?;
    let dir = out_dir(cfg)?;
    write_outputs(&dir, &x, &trace)?;
    let last = trace.last();
    writeln!(out, "status = {}", trace.status).map_err(io_err)?;
    writeln!(out, "iterations = {}", trace.iterations()).map_err(io_err)?;
    writeln!(out, "value = {:?}", last.value).map_err(io_err)?;
    writeln!(out, "grad_norm = {:?}", last.grad_norm).map_err(io_err)?;
    writeln!(out, "sum_x = {:?}", last.sum_x).map_err(io_err)?;
    Ok(if trace.status == Status::Degenerate { 1 } else { 0 })
}

fn write_outputs(dir: &Path, x: &[f64], trace: &solver::ConvergenceTrace) -> Result<(), CliError> {
    io::write_vector(dir.join("x_final.csv"), "x_final", x)?;
    io::write_trace(dir.join("trace.csv"), trace)?;
    Ok(())
}
