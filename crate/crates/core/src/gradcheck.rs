//! Central finite differences for checking analytic gradients.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Default tolerance on the relative error of a gradient check.
pub const DEFAULT_TOLERANCE: f64 = 1e-5;

/// `∂f/∂q_j` by central differences with `h_j = ε^{1/3} · max(|q_j|, 1)`.
///
/// Steps are clipped so that `q_j - h_j` stays positive.
pub fn central_difference<F>(f: F, q: &[f64]) -> Result<Vec<f64>>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    let base = f64::EPSILON.cbrt();
    let mut work = q.to_vec();
    let mut out = Vec::with_capacity(q.len());
    for j in 0..q.len() {
        let mut h = base * q[j].abs().max(1.0);
        if q[j] > 0.0 {
            h = h.min(0.5 * q[j]);
        }
        work[j] = q[j] + h;
        let fp = f(&work)?;
        work[j] = q[j] - h;
        let fm = f(&work)?;
        work[j] = q[j];
        // use the step that was actually represented
        let span = (q[j] + h) - (q[j] - h);
        out.push((fp - fm) / span);
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GradCheckReport {
    /// Analytic negative gradient.
    pub analytic: Vec<f64>,
    /// Finite-difference negative gradient.
    pub numeric: Vec<f64>,
    /// `‖analytic - numeric‖∞ / max(‖analytic‖∞, ‖numeric‖∞)`.
    pub max_rel_err: f64,
}

impl GradCheckReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_rel_err <= tol
    }
}

/// Compares a claimed negative gradient of `f` at `q` against finite differences.
pub fn check_neg_grad<F>(f: F, neg_grad: &[f64], q: &[f64]) -> Result<GradCheckReport>
where
    F: Fn(&[f64]) -> Result<f64>,
{
    if neg_grad.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: q.len(),
            found: neg_grad.len(),
        });
    }
    let numeric: Vec<f64> = central_difference(f, q)?.into_iter().map(|g| -g).collect();
    let inf = |v: &[f64]| v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let scale = inf(neg_grad).max(inf(&numeric));
    let diff = neg_grad
        .iter()
        .zip(&numeric)
        .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
    let max_rel_err = if scale == 0.0 { 0.0 } else { diff / scale };
    if !max_rel_err.is_finite() {
        return Err(Error::eval("gradient check produced a non-finite error"));
    }
    Ok(GradCheckReport {
        analytic: neg_grad.to_vec(),
        numeric,
        max_rel_err,
    })
}

/// Seeded pair `(p, q)` with components uniform in `[lo, hi]`.
pub fn random_pair(seed: u64, n: usize, lo: f64, hi: f64) -> (Vec<f64>, Vec<f64>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    let q = (0..n).map(|_| rng.gen_range(lo..=hi)).collect();
    (p, q)
}
