//! Forward model `q = Hx`, its adjoint, and the chain rule into `x`.
//!
//! Operators have non-negative entries so that `x ≥ 0` implies `Hx ≥ 0`. Divergence
//! gradients in `q` map to `x` through the adjoint: `-∂D/∂x = Hᵀ(-∂D/∂q)`. Because
//! `Hᵀ` is non-negative, `(HᵀU, HᵀV)` is again a valid split.

use std::fmt;
use std::str::FromStr;

use crate::divergence::{DivergenceSpec, GradientSplit};
use crate::error::{Error, Result};

/// A linear map `ℝⁿ → ℝᵐ` with non-negative entries.
pub trait LinearOperator: fmt::Debug + Send + Sync {
    /// `m`.
    fn rows(&self) -> usize;
    /// `n`.
    fn cols(&self) -> usize;
    /// `Hx`.
    fn forward(&self, x: &[f64]) -> Result<Vec<f64>>;
    /// `Hᵀy`.
    fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>>;
}

fn check_len(expected: usize, v: &[f64]) -> Result<()> {
    if v.len() == expected {
        Ok(())
    } else {
        Err(Error::LengthMismatch {
            expected,
            found: v.len(),
        })
    }
}

fn check_entries(what: &str, data: &[f64]) -> Result<()> {
    match data.iter().position(|v| !v.is_finite() || *v < 0.0) {
        Some(i) => Err(Error::Config(format!(
            "{what} entry {i} = {} must be finite and non-negative",
            data[i]
        ))),
        None => Ok(()),
    }
}

/// Row-major dense matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Config("matrix dimensions must be positive".into()));
        }
        check_len(rows * cols, &data)?;
        check_entries("matrix", &data)?;
        Ok(DenseMatrix { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if let Some(bad) = rows.iter().find(|r| r.len() != cols) {
            return Err(Error::LengthMismatch {
                expected: cols,
                found: bad.len(),
            });
        }
        Self::new(rows.len(), cols, rows.concat())
    }

    pub fn identity(n: usize) -> Self {
        let mut data = vec![0.0; n * n];
        for i in 0..n {
            data[i * n + i] = 1.0;
        }
        DenseMatrix { rows: n, cols: n, data }
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn data(&self) -> &[f64] {
        &self.data
    }
}

impl LinearOperator for DenseMatrix {
    fn rows(&self) -> usize {
        self.rows
    }

    fn cols(&self) -> usize {
        self.cols
    }

    fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.cols, x)?;
        Ok(self
            .data
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len(self.rows, y)?;
        let mut out = vec![0.0; self.cols];
        for (row, yi) in self.data.chunks_exact(self.cols).zip(y) {
            for (o, a) in out.iter_mut().zip(row) {
                *o += a * yi;
            }
        }
        Ok(out)
    }
}

/// How a convolution treats indices outside `0..n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Boundary {
    /// Wrap around. Preserves `Σ(Hx) = Σh · Σx`.
    #[default]
    Periodic,
    /// Treat out-of-range samples as zero.
    Zero,
}

impl FromStr for Boundary {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "periodic" => Ok(Boundary::Periodic),
            "zero" | "zero-pad" | "zeropad" => Ok(Boundary::Zero),
            other => Err(Error::Parse(format!("unknown boundary '{other}'"))),
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Boundary::Periodic => "periodic",
            Boundary::Zero => "zero",
        })
    }
}

/// Same-size 1-D convolution `q_i = Σ_k h_k x_{i + c - k}` with `c = len(h) / 2`.
#[derive(Debug, Clone, PartialEq)]
pub struct Convolution1d {
    kernel: Vec<f64>,
    n: usize,
    boundary: Boundary,
}

impl Convolution1d {
    pub fn new(kernel: Vec<f64>, n: usize, boundary: Boundary) -> Result<Self> {
        if kernel.is_empty() || n == 0 {
            return Err(Error::Config("convolution needs a non-empty kernel and signal".into()));
        }
        check_entries("kernel", &kernel)?;
        Ok(Convolution1d { kernel, n, boundary })
    }

    pub fn kernel(&self) -> &[f64] {
        &self.kernel
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    fn index(&self, i: isize) -> Option<usize> {
        let n = self.n as isize;
        match self.boundary {
            Boundary::Periodic => Some(i.rem_euclid(n) as usize),
            Boundary::Zero => (0..n).contains(&i).then_some(i as usize),
        }
    }
}

impl LinearOperator for Convolution1d {
    fn rows(&self) -> usize {
        self.n
    }

    fn cols(&self) -> usize {
        self.n
    }

    fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, x)?;
        let c = (self.kernel.len() / 2) as isize;
        Ok((0..self.n as isize)
            .map(|i| {
                self.kernel
                    .iter()
                    .enumerate()
                    .filter_map(|(k, h)| self.index(i + c - k as isize).map(|m| h * x[m]))
                    .sum()
            })
            .collect())
    }

    fn adjoint(&self, y: &[f64]) -> Result<Vec<f64>> {
        check_len(self.n, y)?;
        let c = (self.kernel.len() / 2) as isize;
        Ok((0..self.n as isize)
            .map(|j| {
                self.kernel
                    .iter()
                    .enumerate()
                    .filter_map(|(k, h)| self.index(j - c + k as isize).map(|m| h * y[m]))
                    .sum()
            })
            .collect())
    }
}

/// `p ≈ Hx` with optional `Σx = C`.
#[derive(Debug)]
pub struct InverseProblem {
    operator: Box<dyn LinearOperator>,
    measurement: Vec<f64>,
    sum_constraint: Option<f64>,
}

impl InverseProblem {
    pub fn new(
        operator: Box<dyn LinearOperator>,
        measurement: Vec<f64>,
        sum_constraint: Option<f64>,
    ) -> Result<Self> {
        check_len(operator.rows(), &measurement)?;
        if let Some(j) = measurement.iter().position(|v| !v.is_finite() || *v < 0.0) {
            return Err(Error::Config(format!(
                "measurement p[{j}] = {} must be finite and non-negative",
                measurement[j]
            )));
        }
        if let Some(c) = sum_constraint {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::Config(format!("sum constraint must be positive, got {c}")));
            }
        }
        Ok(InverseProblem {
            operator,
            measurement,
            sum_constraint,
        })
    }

    pub fn operator(&self) -> &dyn LinearOperator {
        self.operator.as_ref()
    }

    pub fn measurement(&self) -> &[f64] {
        &self.measurement
    }

    pub fn sum_constraint(&self) -> Option<f64> {
        self.sum_constraint
    }

    /// `q = Hx`, failing with [`Error::ModelDegenerate`] if any `q_j ≤ 0`.
    pub fn model(&self, x: &[f64]) -> Result<Vec<f64>> {
        let q = self.operator.forward(x)?;
        if let Some(j) = q.iter().position(|v| !(*v > 0.0)) {
            return Err(Error::ModelDegenerate { index: j, value: q[j] });
        }
        Ok(q)
    }

    /// `D(p‖Hx)`.
    pub fn value(&self, spec: &DivergenceSpec, x: &[f64]) -> Result<f64> {
        spec.value(&self.measurement, &self.model(x)?)
    }
}

/// `y ↦ Hy`.
pub fn forward(op: &dyn LinearOperator, x: &[f64]) -> Result<Vec<f64>> {
    op.forward(x)
}

/// `y ↦ Hᵀy`.
pub fn adjoint_apply(op: &dyn LinearOperator, g: &[f64]) -> Result<Vec<f64>> {
    op.adjoint(g)
}

/// `-∂D(p‖Hx)/∂x = Hᵀ(-∂D/∂q)` at `q = Hx`.
pub fn neg_grad_x(spec: &DivergenceSpec, problem: &InverseProblem, x: &[f64]) -> Result<Vec<f64>> {
    let q = problem.model(x)?;
    let g = spec.neg_grad(problem.measurement(), &q)?;
    problem.operator().adjoint(&g)
}

/// `(HᵀU, HᵀV)` for the split of `-∂D/∂q` at `q = Hx`.
pub fn neg_grad_split_x(spec: &DivergenceSpec, problem: &InverseProblem, x: &[f64]) -> Result<GradientSplit> {
    let q = problem.model(x)?;
    let s = spec.split(problem.measurement(), &q)?;
    Ok(GradientSplit {
        u: problem.operator().adjoint(&s.u)?,
        v: problem.operator().adjoint(&s.v)?,
        branch: s.branch,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divergence::Form;
    use crate::entropy::EntropyFamily;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    #[test]
    fn forward_examples() {
        assert_eq!(DenseMatrix::identity(2).forward(&[1.0, 2.0]).unwrap(), vec![1.0, 2.0]);
        let m = DenseMatrix::from_rows(&[vec![1.0, 1.0], vec![0.0, 1.0]]).unwrap();
        assert_eq!(m.forward(&[1.0, 2.0]).unwrap(), vec![3.0, 2.0]);
        assert_eq!(m.adjoint(&[1.0, 1.0]).unwrap(), vec![1.0, 2.0]);
        let delta = Convolution1d::new(vec![1.0], 4, Boundary::Periodic).unwrap();
        assert_eq!(delta.forward(&[1.0, 5.0, 2.0, 0.5]).unwrap(), vec![1.0, 5.0, 2.0, 0.5]);
    }

    #[test]
    fn convolution_is_centered() {
        let h = Convolution1d::new(vec![0.25, 0.5, 0.25], 5, Boundary::Zero).unwrap();
        let q = h.forward(&[0.0, 0.0, 4.0, 0.0, 0.0]).unwrap();
        assert_eq!(q, vec![0.0, 1.0, 2.0, 1.0, 0.0]);
        // asymmetric kernel: q_i = Σ h_k x_{i+1-k}
        let h = Convolution1d::new(vec![1.0, 2.0, 3.0], 4, Boundary::Periodic).unwrap();
        let q = h.forward(&[1.0, 0.0, 0.0, 0.0]).unwrap();
        assert_eq!(q, vec![2.0, 3.0, 0.0, 1.0]);
    }

    #[test]
    fn rejects_bad_operators() {
        assert!(DenseMatrix::new(2, 2, vec![1.0, -1.0, 0.0, 1.0]).is_err());
        assert!(DenseMatrix::new(2, 2, vec![1.0; 3]).is_err());
        assert!(Convolution1d::new(vec![], 3, Boundary::Zero).is_err());
        assert!(matches!(
            DenseMatrix::identity(3).forward(&[1.0]),
            Err(Error::LengthMismatch { expected: 3, found: 1 })
        ));
    }

    #[test]
    fn adjoint_identity_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for trial in 0..100 {
            let (m, n) = (1 + trial % 7, 1 + (trial * 3) % 5);
            let data: Vec<f64> = (0..m * n).map(|_| rng.gen::<f64>()).collect();
            let a = DenseMatrix::new(m, n, data).unwrap();
            let len = 1 + trial % 6;
            let kernel: Vec<f64> = (0..len).map(|_| rng.gen::<f64>()).collect();
            let boundary = if trial % 2 == 0 { Boundary::Periodic } else { Boundary::Zero };
            let c = Convolution1d::new(kernel, 9, boundary).unwrap();
            for op in [&a as &dyn LinearOperator, &c] {
                let x: Vec<f64> = (0..op.cols()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let y: Vec<f64> = (0..op.rows()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let lhs = dot(&op.forward(&x).unwrap(), &y);
                let rhs = dot(&x, &op.adjoint(&y).unwrap());
                let scale = x.iter().map(|v| v.abs()).sum::<f64>() * y.iter().map(|v| v.abs()).sum::<f64>();
                assert!((lhs - rhs).abs() <= 1e-12 * scale.max(1.0), "{op:?}");
            }
        }
    }

    #[test]
    fn periodic_convolution_preserves_mass() {
        let h = Convolution1d::new(vec![0.1, 0.2, 0.4, 0.2, 0.1], 8, Boundary::Periodic).unwrap();
        let x = [3.0, 0.0, 1.0, 7.0, 0.5, 0.0, 2.0, 1.0];
        let q = h.forward(&x).unwrap();
        let sum_x: f64 = x.iter().sum();
        assert!((q.iter().sum::<f64>() - sum_x).abs() <= 1e-12 * sum_x);
    }

    #[test]
    fn chain_rule_on_identity_and_at_data() {
        let spec = DivergenceSpec::plain(EntropyFamily::Shannon, Form::Csiszar).unwrap();
        let p = vec![1.0, 2.0, 0.5];
        let prob = InverseProblem::new(Box::new(DenseMatrix::identity(3)), p.clone(), None).unwrap();
        assert!(neg_grad_x(&spec, &prob, &p).unwrap().iter().all(|g| *g == 0.0));
        let x = [2.0, 1.0, 1.0];
        assert_eq!(neg_grad_x(&spec, &prob, &x).unwrap(), spec.neg_grad(&p, &x).unwrap());
    }

    #[test]
    fn degenerate_model_is_reported() {
        let spec = DivergenceSpec::plain(EntropyFamily::Shannon, Form::Csiszar).unwrap();
        let prob = InverseProblem::new(Box::new(DenseMatrix::identity(2)), vec![1.0, 1.0], None).unwrap();
        assert_eq!(
            neg_grad_x(&spec, &prob, &[1.0, 0.0]).unwrap_err(),
            Error::ModelDegenerate { index: 1, value: 0.0 }
        );
    }
}
