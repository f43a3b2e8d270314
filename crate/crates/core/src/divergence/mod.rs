//! Csiszár, dual Csiszár, Bregman and dual Bregman divergences.
//!
//! For a generator `f` with standard form `f_c`:
//!
//! - Csiszár: `C(p‖q) = Σ q_i f_c(p_i / q_i)`
//! - Bregman: `B(p‖q) = Σ f(p_i) - f(q_i) - (p_i - q_i) f'(q_i)`
//! - the duals swap `p` and `q`; all gradients are taken with respect to `q`.
//!
//! Reducible families all go through the general `(a, b)` kernel. The per-family
//! tables in [`appendix`] give a second, independent route to the same gradients.
//!
//! Negative gradients come with a split `-∇D = U - V` into non-negative parts, which
//! is what the scaled-gradient iterations need. For the dual forms the terms that go
//! into `U` and `V` depend on the sign of `a - b`; [`GradientSplit::branch`] records
//! which assignment was made.

mod appendix;
pub(crate) mod kernel;

use std::fmt;
use std::str::FromStr;

pub use appendix::appendix_table_neg_grad;

use crate::entropy::EntropyFamily;
use crate::error::{Error, Result};
use crate::invariance;
use kernel::Kernel;

/// Which functional of the generator is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Form {
    Csiszar,
    CsiszarDual,
    Bregman,
    BregmanDual,
}

impl Form {
    pub const ALL: [Form; 4] = [Form::Csiszar, Form::CsiszarDual, Form::Bregman, Form::BregmanDual];

    pub fn is_dual(self) -> bool {
        matches!(self, Form::CsiszarDual | Form::BregmanDual)
    }

    pub fn is_bregman(self) -> bool {
        matches!(self, Form::Bregman | Form::BregmanDual)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Variant {
    #[default]
    Plain,
    /// Scale-invariant in `q`: evaluated at `K(p, q)·q` for an invariance factor `K`.
    Invariant,
}

/// Invariance factor used by the invariant variant.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum FactorChoice {
    /// `Σp / Σq`, available for every reducible family.
    #[default]
    Reference,
    /// The minimizer over `K` of `D(p‖Kq)`. It has a closed form only for Tsallis.
    Nominal,
}

/// How the negative gradient was divided into `U` and `V`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SplitBranch {
    /// The natural two-term factorization (e.g. `U = p/q`, `V = 1` for Kullback-Leibler).
    Direct,
    /// Dual form with `a > b`.
    GapPositive,
    /// Dual form with `a < b`.
    GapNegative,
    /// No sign-stable factorization: `U = max(g, 0) + 1`, `V = max(-g, 0) + 1`.
    SignParts,
}

/// `-∇D = U - V` with `U, V ≥ 0` componentwise.
#[derive(Debug, Clone, PartialEq)]
pub struct GradientSplit {
    pub u: Vec<f64>,
    pub v: Vec<f64>,
    pub branch: SplitBranch,
}

impl GradientSplit {
    /// `U - V`.
    pub fn difference(&self) -> Vec<f64> {
        self.u.iter().zip(&self.v).map(|(u, v)| u - v).collect()
    }
}

/// A fully specified divergence: family, form, and whether it is made scale-invariant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DivergenceSpec {
    family: EntropyFamily,
    form: Form,
    variant: Variant,
    factor: FactorChoice,
}

impl DivergenceSpec {
    /// Validates the family and the combination.
    ///
    /// Rejected combinations:
    /// - Bregman forms of the Alpha family;
    /// - invariant forms of Newton and Alpha;
    /// - the nominal factor for anything but Tsallis.
    pub fn new(
        family: EntropyFamily,
        form: Form,
        variant: Variant,
        factor: FactorChoice,
    ) -> Result<Self> {
        family.validate()?;
        if matches!(family, EntropyFamily::Alpha { .. }) && form.is_bregman() {
            return Err(Error::Unsupported(
                "bregman divergences of the alpha logarithm are not provided".into(),
            ));
        }
        let factor = match variant {
            Variant::Plain => FactorChoice::Reference,
            Variant::Invariant => {
                if matches!(family, EntropyFamily::Newton | EntropyFamily::Alpha { .. }) {
                    return Err(Error::Unsupported(format!(
                        "no invariant divergence for the {} family",
                        family.key()
                    )));
                }
                if factor == FactorChoice::Nominal {
                    let EntropyFamily::Tsallis { t } = family else {
                        return Err(Error::Unsupported(format!(
                            "the nominal invariance factor has a closed form only for tsallis, not {}",
                            family.key()
                        )));
                    };
                    invariance::InvarianceFactor::nominal(form, t)?;
                }
                factor
            }
        };
        Ok(DivergenceSpec {
            family,
            form,
            variant,
            factor,
        })
    }

    pub fn plain(family: EntropyFamily, form: Form) -> Result<Self> {
        Self::new(family, form, Variant::Plain, FactorChoice::Reference)
    }

    pub fn invariant(family: EntropyFamily, form: Form, factor: FactorChoice) -> Result<Self> {
        Self::new(family, form, Variant::Invariant, factor)
    }

    pub fn family(&self) -> EntropyFamily {
        self.family
    }

    pub fn form(&self) -> Form {
        self.form
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    pub fn factor(&self) -> FactorChoice {
        self.factor
    }

    /// The same family and form without the invariance factor.
    pub fn plain_counterpart(&self) -> DivergenceSpec {
        DivergenceSpec {
            variant: Variant::Plain,
            factor: FactorChoice::Reference,
            ..*self
        }
    }

    pub(crate) fn kernel(&self) -> Kernel {
        Kernel::for_family(&self.family)
    }

    /// The invariance factor this spec uses, if it is an invariant spec.
    pub fn invariance_factor(&self) -> Option<invariance::InvarianceFactor> {
        match (self.variant, self.factor, self.family) {
            (Variant::Plain, ..) => None,
            (Variant::Invariant, FactorChoice::Reference, _) => {
                Some(invariance::InvarianceFactor::Reference)
            }
            (Variant::Invariant, FactorChoice::Nominal, EntropyFamily::Tsallis { t }) => {
                invariance::InvarianceFactor::nominal(self.form, t).ok()
            }
            _ => unreachable!("validated in the constructor"),
        }
    }

    /// `D(p‖q)`; for dual forms, `D(q‖p)`.
    pub fn value(&self, p: &[f64], q: &[f64]) -> Result<f64> {
        check_inputs(p, q, self.form)?;
        match self.invariance_factor() {
            None => plain_value(self.kernel(), self.form, p, q),
            Some(factor) => invariance::invariant_value(self, factor, p, q),
        }
    }

    /// `-∂D/∂q`.
    pub fn neg_grad(&self, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
        check_inputs(p, q, self.form)?;
        match self.invariance_factor() {
            None => plain_neg_grad(self.kernel(), self.form, p, q),
            Some(factor) => invariance::invariant_neg_grad(self, factor, p, q),
        }
    }

    /// Non-negative `U`, `V` with `U - V = -∂D/∂q`.
    pub fn split(&self, p: &[f64], q: &[f64]) -> Result<GradientSplit> {
        check_inputs(p, q, self.form)?;
        match self.invariance_factor() {
            None => plain_split(self.kernel(), self.form, p, q),
            Some(factor) => invariance::invariant_split(self, factor, p, q),
        }
    }
}

impl fmt::Display for DivergenceSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}", self.family, self.form)?;
        if self.variant == Variant::Invariant {
            write!(f, " / invariant ({})", self.factor)?;
        }
        Ok(())
    }
}

/// Checks lengths, finiteness, `p ≥ 0` and `q > 0`; dual forms also need `p > 0`.
pub(crate) fn check_inputs(p: &[f64], q: &[f64], form: Form) -> Result<()> {
    if p.len() != q.len() {
        return Err(Error::LengthMismatch {
            expected: p.len(),
            found: q.len(),
        });
    }
    if p.is_empty() {
        return Err(Error::eval("empty input vectors"));
    }
    for (j, (&pj, &qj)) in p.iter().zip(q).enumerate() {
        if !pj.is_finite() || pj < 0.0 {
            return Err(Error::eval(format!("p[{j}] = {pj} must be finite and non-negative")));
        }
        if !qj.is_finite() || qj <= 0.0 {
            return Err(Error::eval(format!("q[{j}] = {qj} must be finite and positive")));
        }
        if form.is_dual() && pj == 0.0 {
            return Err(Error::eval(format!("p[{j}] = 0 but the dual form needs p > 0")));
        }
    }
    Ok(())
}

pub(crate) fn plain_value(k: Kernel, form: Form, p: &[f64], q: &[f64]) -> Result<f64> {
    p.iter().zip(q).map(|(&pj, &qj)| k.term(form, pj, qj)).sum()
}

pub(crate) fn plain_neg_grad(k: Kernel, form: Form, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    p.iter().zip(q).map(|(&pj, &qj)| k.grad(form, pj, qj)).collect()
}

pub(crate) fn plain_split(k: Kernel, form: Form, p: &[f64], q: &[f64]) -> Result<GradientSplit> {
    let n = p.len();
    let (mut u, mut v) = (Vec::with_capacity(n), Vec::with_capacity(n));
    for (&pj, &qj) in p.iter().zip(q) {
        let (uj, vj) = k.split(form, pj, qj)?;
        u.push(uj);
        v.push(vj);
    }
    Ok(GradientSplit {
        u,
        v,
        branch: k.branch(form),
    })
}

fn plain_spec(family: EntropyFamily, form: Form) -> Result<DivergenceSpec> {
    DivergenceSpec::plain(family, form)
}

/// `Σ q_i f_c(p_i / q_i)`.
pub fn csiszar_value(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<f64> {
    plain_spec(family, Form::Csiszar)?.value(p, q)
}

pub fn csiszar_neg_grad(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    plain_spec(family, Form::Csiszar)?.neg_grad(p, q)
}

/// `Σ p_i f_c(q_i / p_i)`, i.e. `csiszar_value(family, q, p)`.
pub fn csiszar_dual_value(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<f64> {
    plain_spec(family, Form::CsiszarDual)?.value(p, q)
}

pub fn csiszar_dual_neg_grad(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    plain_spec(family, Form::CsiszarDual)?.neg_grad(p, q)
}

/// `Σ f(p_i) - f(q_i) - (p_i - q_i) f'(q_i)`.
pub fn bregman_value(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<f64> {
    plain_spec(family, Form::Bregman)?.value(p, q)
}

pub fn bregman_neg_grad(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    plain_spec(family, Form::Bregman)?.neg_grad(p, q)
}

/// `bregman_value(family, q, p)`.
pub fn bregman_dual_value(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<f64> {
    plain_spec(family, Form::BregmanDual)?.value(p, q)
}

pub fn bregman_dual_neg_grad(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    plain_spec(family, Form::BregmanDual)?.neg_grad(p, q)
}

/// `U`, `V` for any spec; see [`DivergenceSpec::split`].
pub fn neg_grad_split(spec: &DivergenceSpec, p: &[f64], q: &[f64]) -> Result<GradientSplit> {
    spec.split(p, q)
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Form::Csiszar => "csiszar",
            Form::CsiszarDual => "csiszar-dual",
            Form::Bregman => "bregman",
            Form::BregmanDual => "bregman-dual",
        })
    }
}

impl FromStr for Form {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('_', "-").as_str() {
            "csiszar" => Ok(Form::Csiszar),
            "csiszar-dual" | "dual-csiszar" => Ok(Form::CsiszarDual),
            "bregman" => Ok(Form::Bregman),
            "bregman-dual" | "dual-bregman" => Ok(Form::BregmanDual),
            other => Err(Error::Parse(format!("unknown divergence form '{other}'"))),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Plain => "plain",
            Variant::Invariant => "invariant",
        })
    }
}

impl FromStr for Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "plain" => Ok(Variant::Plain),
            "invariant" => Ok(Variant::Invariant),
            other => Err(Error::Parse(format!("unknown variant '{other}'"))),
        }
    }
}

impl fmt::Display for FactorChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FactorChoice::Reference => "reference",
            FactorChoice::Nominal => "nominal",
        })
    }
}

impl FromStr for FactorChoice {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "reference" => Ok(FactorChoice::Reference),
            "nominal" => Ok(FactorChoice::Nominal),
            other => Err(Error::Parse(format!("unknown invariance factor '{other}'"))),
        }
    }
}
