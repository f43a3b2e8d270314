//! Scaled-gradient minimization of `D(p‖Hx)` over `x ≥ 0`.
//!
//! With `-∇D = U - V` (both non-negative, mapped through `Hᵀ`), three iterations are
//! provided:
//!
//! | Mode | Update |
//! |------|--------|
//! | additive | `x + α x ⊙ (U - V)` |
//! | preconditioned | `x + α x ⊙ (U/V - 1)` |
//! | multiplicative | `x ⊙ U/V`, optionally rescaled to `Σx = C` |
//!
//! The first two take `α` from an Armijo search started just inside the largest
//! step that keeps `x ≥ 0`. With an invariant divergence, `Σ_j q_j ∂D/∂q_j = 0`, so
//! the additive direction has zero sum and `Σx` is conserved. The multiplicative form
//! has no descent guarantee; a run whose value rises over a 10-iteration window is
//! reported as [`Status::Degenerate`].

use std::fmt;
use std::str::FromStr;

use crate::divergence::{DivergenceSpec, Variant};
use crate::error::{Error, Result};
use crate::linear::{neg_grad_split_x, neg_grad_x, InverseProblem};

/// Backtracks allowed before the line search gives up.
pub const MAX_BACKTRACKS: usize = 60;

/// Window over which a multiplicative run must not increase the divergence.
pub const DEGENERACY_WINDOW: usize = 10;

/// Smallest preconditioner component accepted.
pub const MIN_PRECONDITIONER: f64 = 1e-300;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Additive,
    Preconditioned,
    Multiplicative,
}

impl FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "additive" => Ok(Mode::Additive),
            "preconditioned" => Ok(Mode::Preconditioned),
            "multiplicative" => Ok(Mode::Multiplicative),
            other => Err(Error::Parse(format!("unknown solver mode '{other}'"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Additive => "additive",
            Mode::Preconditioned => "preconditioned",
            Mode::Multiplicative => "multiplicative",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    pub mode: Mode,
    pub spec: DivergenceSpec,
    pub max_iters: usize,
    /// Stop when `‖-∂D/∂x‖∞ ≤ grad_tol`.
    pub grad_tol: f64,
    /// Stop when `|D_k - D_{k+1}| ≤ value_tol · |D_k|`.
    pub value_tol: f64,
    pub armijo_c: f64,
    pub backtrack_ratio: f64,
    /// Fraction of the maximal feasible step tried first.
    pub step_safety: f64,
    /// `Σx = C`. Overrides the problem's constraint when set.
    pub sum_constraint: Option<f64>,
}

impl SolverConfig {
    pub fn new(mode: Mode, spec: DivergenceSpec) -> Self {
        SolverConfig {
            mode,
            spec,
            max_iters: 10_000,
            grad_tol: 1e-8,
            value_tol: 1e-12,
            armijo_c: 1e-4,
            backtrack_ratio: 0.5,
            step_safety: 0.99,
            sum_constraint: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let open_unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")))
            }
        };
        open_unit("armijo_c", self.armijo_c)?;
        open_unit("backtrack_ratio", self.backtrack_ratio)?;
        if !(self.step_safety > 0.0 && self.step_safety <= 1.0) {
            return Err(Error::Config(format!(
                "step_safety must lie in (0, 1], got {}",
                self.step_safety
            )));
        }
        if !(self.grad_tol > 0.0) || !(self.value_tol > 0.0) {
            return Err(Error::Config("grad_tol and value_tol must be positive".into()));
        }
        if let Some(c) = self.sum_constraint {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::Config(format!("sum constraint must be positive, got {c}")));
            }
            if self.mode == Mode::Multiplicative && self.spec.variant() != Variant::Invariant {
                return Err(Error::Config(
                    "multiplicative mode with a sum constraint needs an invariant divergence".into(),
                ));
            }
        }
        Ok(())
    }

    fn constraint(&self, problem: &InverseProblem) -> Option<f64> {
        self.sum_constraint.or(problem.sum_constraint())
    }
}

/// Why a run stopped.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    GradTol,
    ValueTol,
    MaxIters,
    /// Multiplicative run whose divergence increased over the check window.
    Degenerate,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::GradTol => "grad_tol",
            Status::ValueTol => "value_tol",
            Status::MaxIters => "max_iters",
            Status::Degenerate => "degenerate",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    pub iter: usize,
    pub value: f64,
    pub grad_norm: f64,
    pub alpha: f64,
    pub sum_x: f64,
    pub min_x: f64,
}

/// One record per iterate, starting with the initial point at `iter = 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvergenceTrace {
    pub records: Vec<TraceRecord>,
    pub status: Status,
}

impl ConvergenceTrace {
    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("trace holds the initial state")
    }

    /// Iterations performed (the initial state is not counted).
    pub fn iterations(&self) -> usize {
        self.records.len() - 1
    }
}

/// Result of one iteration.
#[derive(Debug, Clone, PartialEq)]
pub struct Step {
    pub x: Vec<f64>,
    /// Step size; `1` for the multiplicative update.
    pub alpha: f64,
    /// The iterate before the sum-constraint rescaling, when one was applied.
    pub before_normalization: Option<Vec<f64>>,
}

/// Largest `α` with `x + αd ≥ 0`: `min_{d_l < 0} (-x_l / d_l)`, or `+∞`.
pub fn max_step(x: &[f64], d: &[f64]) -> f64 {
    x.iter()
        .zip(d)
        .filter(|(_, d)| **d < 0.0)
        .map(|(x, d)| -x / d)
        .fold(f64::INFINITY, f64::min)
}

/// Armijo parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineSearch {
    pub c: f64,
    pub ratio: f64,
    pub safety: f64,
}

impl From<&SolverConfig> for LineSearch {
    fn from(c: &SolverConfig) -> Self {
        LineSearch {
            c: c.armijo_c,
            ratio: c.backtrack_ratio,
            safety: c.step_safety,
        }
    }
}

/// Backtracking search from `safety · α_max` (or `1` when `α_max = ∞`).
///
/// Accepts the first `α` with `D(x + αd) ≤ D(x) + c α ⟨∇D, d⟩`, where
/// `slope = ⟨∇D, d⟩ < 0`. A few ulps of `|D(x)|` are allowed on the right-hand side
/// so that the search does not fail on rounding noise near a minimum. Trial points
/// where the objective errors or is not finite count as rejections. Returns `α` and
/// the accepted value.
pub fn armijo_step<F>(
    objective: F,
    x: &[f64],
    d: &[f64],
    alpha_max: f64,
    value: f64,
    slope: f64,
    params: LineSearch,
) -> Result<(f64, f64)>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let mut alpha = if alpha_max.is_finite() {
        params.safety * alpha_max
    } else {
        1.0
    };
    let noise = 8.0 * f64::EPSILON * value.abs();
    let mut trial = vec![0.0; x.len()];
    for _ in 0..=MAX_BACKTRACKS {
        for ((t, x), d) in trial.iter_mut().zip(x).zip(d) {
            *t = x + alpha * d;
        }
        if let Ok(v) = objective(&trial) {
            if v.is_finite() && v <= value + params.c * alpha * slope + noise {
                return Ok((alpha, v));
            }
        }
        alpha *= params.ratio;
    }
    Err(Error::LineSearchFailed {
        backtracks: MAX_BACKTRACKS,
    })
}

/// Iterates may reach zero (a zero component stays zero under every update); the
/// model `Hx` is checked for positivity where it is evaluated.
fn check_iterate(x: &[f64], n: usize, strict: bool) -> Result<()> {
    if x.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: x.len(),
        });
    }
    let bad = |v: f64| !v.is_finite() || v < 0.0 || (strict && v == 0.0);
    match x.iter().position(|v| bad(*v)) {
        Some(j) => Err(Error::Config(format!(
            "x[{j}] = {} must be {}",
            x[j],
            if strict { "positive" } else { "non-negative" }
        ))),
        None => Ok(()),
    }
}

fn line_search_step(
    config: &SolverConfig,
    problem: &InverseProblem,
    x: &[f64],
    d: Vec<f64>,
    slope: f64,
) -> Result<Step> {
    if !(slope < 0.0) {
        return Ok(Step {
            x: x.to_vec(),
            alpha: 0.0,
            before_normalization: None,
        });
    }
    let value = problem.value(&config.spec, x)?;
    let alpha_max = max_step(x, &d);
    let (alpha, _) = armijo_step(
        |y| problem.value(&config.spec, y),
        x,
        &d,
        alpha_max,
        value,
        slope,
        config.into(),
    )?;
    Ok(Step {
        x: x.iter().zip(&d).map(|(x, d)| x + alpha * d).collect(),
        alpha,
        before_normalization: None,
    })
}

/// `x + α x ⊙ (-∂D/∂x)`.
pub fn iterate_additive(config: &SolverConfig, problem: &InverseProblem, x: &[f64]) -> Result<Step> {
    check_iterate(x, problem.operator().cols(), false)?;
    let g = neg_grad_x(&config.spec, problem, x)?;
    let d: Vec<f64> = x.iter().zip(&g).map(|(x, g)| x * g).collect();
    let slope = -g.iter().zip(&d).map(|(g, d)| g * d).sum::<f64>();
    line_search_step(config, problem, x, d, slope)
}

fn checked_split(config: &SolverConfig, problem: &InverseProblem, x: &[f64]) -> Result<(Vec<f64>, Vec<f64>)> {
    let s = neg_grad_split_x(&config.spec, problem, x)?;
    if let Some(j) = s.v.iter().position(|v| !(*v >= MIN_PRECONDITIONER)) {
        return Err(Error::PreconditionerDegenerate { index: j, value: s.v[j] });
    }
    Ok((s.u, s.v))
}

/// `x + α x ⊙ (U/V - 1)`.
pub fn iterate_preconditioned(
    config: &SolverConfig,
    problem: &InverseProblem,
    x: &[f64],
) -> Result<Step> {
    check_iterate(x, problem.operator().cols(), false)?;
    let (u, v) = checked_split(config, problem, x)?;
    let d: Vec<f64> = x.iter().zip(u.iter().zip(&v)).map(|(x, (u, v))| x * (u / v - 1.0)).collect();
    let slope = -u
        .iter()
        .zip(&v)
        .zip(&d)
        .map(|((u, v), d)| (u - v) * d)
        .sum::<f64>();
    line_search_step(config, problem, x, d, slope)
}

/// `x ⊙ U/V`, then `C x / Σx` when a sum constraint is set.
pub fn iterate_multiplicative(
    config: &SolverConfig,
    problem: &InverseProblem,
    x: &[f64],
) -> Result<Step> {
    check_iterate(x, problem.operator().cols(), false)?;
    let (u, v) = checked_split(config, problem, x)?;
    let raw: Vec<f64> = x.iter().zip(u.iter().zip(&v)).map(|(x, (u, v))| x * (u / v)).collect();
    match config.constraint(problem) {
        Some(c) => {
            let s: f64 = raw.iter().sum();
            Ok(Step {
                x: raw.iter().map(|r| c * r / s).collect(),
                alpha: 1.0,
                before_normalization: Some(raw),
            })
        }
        None => Ok(Step {
            x: raw,
            alpha: 1.0,
            before_normalization: None,
        }),
    }
}

fn inf_norm(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn record(iter: usize, value: f64, grad: &[f64], alpha: f64, x: &[f64]) -> TraceRecord {
    TraceRecord {
        iter,
        value,
        grad_norm: inf_norm(grad),
        alpha,
        sum_x: x.iter().sum(),
        min_x: x.iter().copied().fold(f64::INFINITY, f64::min),
    }
}

/// Runs the configured iteration from `x0` until a stopping rule fires.
///
/// `x0` must be strictly positive and, under a sum constraint, satisfy `Σx0 = C` to
/// `1e-9` relative; it is not silently rescaled.
pub fn solve(
    config: &SolverConfig,
    problem: &InverseProblem,
    x0: &[f64],
) -> Result<(Vec<f64>, ConvergenceTrace)> {
    config.validate()?;
    check_iterate(x0, problem.operator().cols(), true)?;
    if let Some(c) = config.constraint(problem) {
        let s: f64 = x0.iter().sum();
        if (s - c).abs() > 1e-9 * c {
            return Err(Error::Config(format!(
                "initial point has Σx = {s} but the sum constraint is {c}"
            )));
        }
    }
    let step_fn = match config.mode {
        Mode::Additive => iterate_additive,
        Mode::Preconditioned => iterate_preconditioned,
        Mode::Multiplicative => iterate_multiplicative,
    };
    let mass: f64 = problem.measurement().iter().sum();

    let mut x = x0.to_vec();
    let mut value = problem.value(&config.spec, &x)?;
    let g = neg_grad_x(&config.spec, problem, &x)?;
    let mut records = vec![record(0, value, &g, 0.0, &x)];
    let mut status = Status::MaxIters;
    if records[0].grad_norm <= config.grad_tol {
        status = Status::GradTol;
    } else {
        for k in 1..=config.max_iters {
            let step = step_fn(config, problem, &x)?;
            x = step.x;
            let new_value = problem.value(&config.spec, &x)?;
            let g = neg_grad_x(&config.spec, problem, &x)?;
            records.push(record(k, new_value, &g, step.alpha, &x));
            let old_value = std::mem::replace(&mut value, new_value);
            if records[k].grad_norm <= config.grad_tol {
                status = Status::GradTol;
                break;
            }
            if config.mode == Mode::Multiplicative && k >= DEGENERACY_WINDOW {
                let before = records[k - DEGENERACY_WINDOW].value;
                if new_value > before + 1e-12 * (before.abs() + mass) {
                    status = Status::Degenerate;
                    break;
                }
            }
            if (old_value - new_value).abs() <= config.value_tol * old_value.abs() {
                status = Status::ValueTol;
                break;
            }
        }
    }
    Ok((x, ConvergenceTrace { records, status }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::{FactorChoice, Form};
    use crate::entropy::EntropyFamily;
    use crate::linear::DenseMatrix;

    fn kl() -> DivergenceSpec {
        DivergenceSpec::plain(EntropyFamily::Shannon, Form::Csiszar).unwrap()
    }

    fn identity_problem(p: Vec<f64>) -> InverseProblem {
        let n = p.len();
        InverseProblem::new(Box::new(DenseMatrix::identity(n)), p, None).unwrap()
    }

    #[test]
    fn max_step_examples() {
        assert_eq!(max_step(&[1.0, 1.0], &[1.0, 0.0]), f64::INFINITY);
        assert_eq!(max_step(&[1.0, 1.0], &[-2.0, 1.0]), 0.5);
        assert_eq!(max_step(&[2.0, 4.0], &[-1.0, -2.0]), 2.0);
    }

    #[test]
    fn armijo_on_a_quadratic() {
        let p = [1.0, 2.0];
        let f = |y: &[f64]| -> Result<f64> { Ok(y.iter().zip(&p).map(|(a, b)| (a - b) * (a - b)).sum()) };
        let x = [3.0, 3.0];
        let d = [-2.0, -1.0]; // exact minimizer direction
        let slope = 2.0 * (2.0 * -2.0 + 1.0 * -1.0);
        let amax = max_step(&x, &d);
        let ls = LineSearch { c: 1e-4, ratio: 0.5, safety: 0.99 };
        let (alpha, v) = armijo_step(f, &x, &d, amax, 5.0, slope, ls).unwrap();
        assert_eq!(alpha, 0.99 * 1.5);
        assert!(v < 5.0);
    }

    #[test]
    fn armijo_failure_is_reported() {
        // objective that never decreases
        let f = |_: &[f64]| -> Result<f64> { Ok(1.0) };
        let ls = LineSearch { c: 1e-4, ratio: 0.5, safety: 0.99 };
        let r = armijo_step(f, &[1.0], &[1.0], f64::INFINITY, 0.5, -1.0, ls);
        assert_eq!(r.unwrap_err(), Error::LineSearchFailed { backtracks: MAX_BACKTRACKS });
    }

    #[test]
    fn additive_converges_on_identity() {
        let p = vec![1.0, 3.0, 0.5, 2.0];
        let prob = identity_problem(p.clone());
        let mut cfg = SolverConfig::new(Mode::Additive, kl());
        cfg.max_iters = 200;
        let (x, trace) = solve(&cfg, &prob, &[1.0; 4]).unwrap();
        for w in trace.records.windows(2) {
            assert!(w[1].value <= w[0].value * (1.0 + 1e-12));
        }
        assert!(trace.last().value <= 1e-10, "{:?}", trace.last());
        for (a, b) in x.iter().zip(&p) {
            assert!((a - b).abs() < 1e-4);
        }
    }

    #[test]
    fn preconditioned_with_unit_step_hits_the_data() {
        // U/V = p/x for KL on the identity, so x ⊙ (U/V - 1) = p - x.
        let p = vec![1.0, 3.0, 0.5];
        let prob = identity_problem(p.clone());
        let cfg = SolverConfig::new(Mode::Preconditioned, kl());
        let x0 = [2.0, 1.0, 1.0];
        let (u, v) = checked_split(&cfg, &prob, &x0).unwrap();
        let x1: Vec<f64> = x0.iter().zip(u.iter().zip(&v)).map(|(x, (u, v))| x + x * (u / v - 1.0)).collect();
        assert_eq!(x1, p);
    }

    #[test]
    fn multiplicative_is_one_step_on_identity() {
        let p = vec![1.0, 3.0, 0.5];
        let prob = identity_problem(p.clone());
        let cfg = SolverConfig::new(Mode::Multiplicative, kl());
        let step = iterate_multiplicative(&cfg, &prob, &[2.0, 2.0, 2.0]).unwrap();
        assert_eq!(step.x, p);
    }

    #[test]
    fn fixed_point_is_left_alone() {
        let p = vec![1.0, 2.0];
        let prob = identity_problem(p.clone());
        for mode in [Mode::Additive, Mode::Preconditioned, Mode::Multiplicative] {
            let cfg = SolverConfig::new(mode, kl());
            let (x, trace) = solve(&cfg, &prob, &p).unwrap();
            assert_eq!(x, p);
            assert_eq!(trace.status, Status::GradTol);
            assert_eq!(trace.iterations(), 0);
        }
    }

    #[test]
    fn zero_iterations() {
        let prob = identity_problem(vec![1.0, 2.0]);
        let mut cfg = SolverConfig::new(Mode::Additive, kl());
        cfg.max_iters = 0;
        let (x, trace) = solve(&cfg, &prob, &[3.0, 3.0]).unwrap();
        assert_eq!(x, vec![3.0, 3.0]);
        assert_eq!(trace.status, Status::MaxIters);
    }

    #[test]
    fn config_validation() {
        let inv = DivergenceSpec::invariant(EntropyFamily::Shannon, Form::Csiszar, FactorChoice::Reference).unwrap();
        let mut cfg = SolverConfig::new(Mode::Multiplicative, kl());
        cfg.sum_constraint = Some(2.0);
        assert!(cfg.validate().is_err());
        cfg.spec = inv;
        assert!(cfg.validate().is_ok());
        cfg.armijo_c = 1.0;
        assert!(cfg.validate().is_err());
        let prob = identity_problem(vec![1.0, 1.0]);
        let mut cfg = SolverConfig::new(Mode::Additive, inv);
        cfg.sum_constraint = Some(5.0);
        assert!(matches!(solve(&cfg, &prob, &[1.0, 1.0]), Err(Error::Config(_))));
    }

    #[test]
    fn preconditioner_must_be_positive() {
        let prob = identity_problem(vec![1.0, 1.0]);
        let cfg = SolverConfig::new(Mode::Preconditioned, kl());
        assert!(iterate_preconditioned(&cfg, &prob, &[0.0, 1.0]).is_err());
    }
}
