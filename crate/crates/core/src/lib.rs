//! # dsgm-core
//!
//! Entropic divergences built on deformed logarithms, and the scaled-gradient
//! algorithms that minimize them for linear inverse problems `q = Hx` under
//! non-negativity and sum constraints.
//!
//! ## Layout
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`entropy`] | entropy families, parameter domains, `f`, `f_c`, deformed logs, `(a, b)` reduction |
//! | [`divergence`] | Csiszár, dual Csiszár, Bregman and dual Bregman values, gradients and `U - V` splits |
//! | [`invariance`] | invariance factors and the scale-invariant divergences |
//! | [`linear`] | dense and 1-D convolution operators, adjoints, chain rule to `x` |
//! | [`solver`] | additive, preconditioned and multiplicative iterations, Armijo search |
//! | [`synth`] | seeded synthetic deconvolution problems |
//! | [`gradcheck`] | central finite differences |
//! | [`io`] | CSV vectors and matrices |
//!
//! ## Conventions
//!
//! - `p` is the measurement, `q` the model. Every divergence is `D(p‖q)` for the
//!   plain forms and `D(q‖p)` for the duals, always differentiated with respect to `q`.
//! - Gradients are returned with the sign flipped (`-∂D/∂q`), since that is what the
//!   multiplicative algorithms consume.
//!
//! ```
//! use dsgm_core::divergence::{DivergenceSpec, Form};
//! use dsgm_core::entropy::EntropyFamily;
//!
//! let spec = DivergenceSpec::plain(EntropyFamily::Shannon, Form::Csiszar).unwrap();
//! let kl = spec.value(&[2.0], &[1.0]).unwrap();
//! assert!((kl - (2.0 * 2f64.ln() - 1.0)).abs() < 1e-15);
//! ```

pub mod divergence;
pub mod entropy;
pub mod error;
pub mod gradcheck;
pub mod invariance;
pub mod io;
pub mod linear;
pub mod solver;
pub mod synth;

pub use divergence::{DivergenceSpec, FactorChoice, Form, GradientSplit, SplitBranch, Variant};
pub use entropy::{AbPair, EntropyFamily};
pub use error::{Error, Result};
