//! Seeded synthetic 1-D deconvolution problems.
//!
//! The ground truth is a handful of spikes on top of a smooth bump and a small
//! positive background. The blur is a sampled Gaussian normalized to unit sum and
//! applied with periodic boundaries, so `Σp = Σx*` in the noiseless case.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linear::{Boundary, Convolution1d, LinearOperator};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SynthConfig {
    pub n: usize,
    pub seed: u64,
    /// Number of kernel taps (odd).
    pub kernel_width: usize,
    /// Defaults to a third of the half-width, so the taps span `±3σ`.
    pub kernel_sigma: Option<f64>,
    pub spikes: usize,
    /// Replace `p = Hx*` by Poisson counts with that mean.
    pub poisson: bool,
}

impl Default for SynthConfig {
    fn default() -> Self {
        SynthConfig {
            n: 32,
            seed: 1,
            kernel_width: 5,
            kernel_sigma: None,
            spikes: 3,
            poisson: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SynthProblem {
    pub x_true: Vec<f64>,
    pub kernel: Vec<f64>,
    pub measurement: Vec<f64>,
    /// Uniform start with the same total as `x_true`.
    pub x0: Vec<f64>,
}

impl SynthProblem {
    pub fn operator(&self) -> Result<Convolution1d> {
        Convolution1d::new(self.kernel.clone(), self.x_true.len(), Boundary::Periodic)
    }
}

/// Sampled Gaussian `exp(-k²/2σ²)`, `k = -w/2 ..= w/2`, scaled to unit sum.
pub fn gaussian_kernel(width: usize, sigma: f64) -> Result<Vec<f64>> {
    if width == 0 || width % 2 == 0 {
        return Err(Error::Config(format!("kernel width must be odd, got {width}")));
    }
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::Config(format!("kernel sigma must be positive, got {sigma}")));
    }
    let c = (width / 2) as f64;
    let taps: Vec<f64> = (0..width)
        .map(|k| {
            let d = k as f64 - c;
            (-d * d / (2.0 * sigma * sigma)).exp()
        })
        .collect();
    let s: f64 = taps.iter().sum();
    Ok(taps.into_iter().map(|t| t / s).collect())
}

/// Poisson sample by inverse transform. Means above 500 are split into chunks so
/// that `e^{-λ}` stays representable.
pub fn poisson<R: Rng>(rng: &mut R, mean: f64) -> f64 {
    const CHUNK: f64 = 500.0;
    let mut remaining = mean;
    let mut total = 0.0;
    while remaining > 0.0 {
        let lambda = remaining.min(CHUNK);
        remaining -= lambda;
        let u: f64 = rng.gen();
        let mut k = 0.0;
        let mut pk = (-lambda).exp();
        let mut cdf = pk;
        while u > cdf && pk > 0.0 {
            k += 1.0;
            pk *= lambda / k;
            cdf += pk;
        }
        total += k;
    }
    total
}

pub fn generate(config: &SynthConfig) -> Result<SynthProblem> {
    let n = config.n;
    if n < 2 {
        return Err(Error::Config(format!("problem size must be at least 2, got {n}")));
    }
    if config.kernel_width > n {
        return Err(Error::Config("kernel is wider than the signal".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let sigma = config
        .kernel_sigma
        .unwrap_or((config.kernel_width / 2).max(1) as f64 / 3.0);
    let kernel = gaussian_kernel(config.kernel_width, sigma)?;

    let centre = rng.gen_range(0.0..n as f64);
    let width = n as f64 / 8.0;
    let mut x_true: Vec<f64> = (0..n)
        .map(|i| {
            // periodic distance to the bump centre
            let d = (i as f64 - centre).abs();
            let d = d.min(n as f64 - d);
            0.5 + 4.0 * (-d * d / (2.0 * width * width)).exp()
        })
        .collect();
    for _ in 0..config.spikes {
        let at = rng.gen_range(0..n);
        x_true[at] += rng.gen_range(5.0..20.0);
    }

    let op = Convolution1d::new(kernel.clone(), n, Boundary::Periodic)?;
    let mut measurement = op.forward(&x_true)?;
    if config.poisson {
        for m in &mut measurement {
            *m = poisson(&mut rng, *m);
        }
    }
    let total: f64 = x_true.iter().sum();
    let x0 = vec![total / n as f64; n];
    Ok(SynthProblem {
        x_true,
        kernel,
        measurement,
        x0,
    })
}
