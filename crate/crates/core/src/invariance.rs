//! Scale-invariant divergences.
//!
//! An invariance factor `K(p, q) > 0` obeys `K(p, λq) = K(p, q)/λ`, so `K(p, q)·q` does
//! not change when `q` is rescaled. The invariant divergence is `D(p‖K·q)`, or
//! `D(K·q‖p)` for the duals. Two kinds of factor are provided:
//!
//! - the reference factor `Σp / Σq`, for every reducible family;
//! - the nominal factor `K₀ = argmin_K D(p‖Kq)`, which has a closed form only for
//!   Tsallis. There is one closed form per divergence form.
//!
//! Every invariant divergence satisfies the Euler identity `Σ_j q_j ∂D/∂q_j = 0`.
//! Under an additive scaled-gradient step, this is what keeps `Σx` constant.
//!
//! [`crate::DivergenceSpec`] evaluates invariant specs by a single generic route:
//! - the value is the base divergence at `(p, K·q)`;
//! - the gradient is the base gradient `g` at `(p, K·q)`, projected as
//!   `K (g_j - Σ_i q̄_i g_i)`.
//!
//! For the reference factor this projection is the exact chain rule. For the nominal
//! factor it is exact at the minimizer, where `Σ q_i g_i = 0`. The `invariant_*`
//! functions below implement the closed-form expressions family by family; the tests
//! check that the two routes agree.

use crate::divergence::kernel::Kernel;
use crate::divergence::{
    check_inputs, plain_neg_grad, plain_split, plain_value, DivergenceSpec, FactorChoice, Form,
    GradientSplit,
};
use crate::entropy::EntropyFamily;
use crate::error::{Error, Result};

/// `|t - 1|` at or below which the nominal dual factors are rejected: their exponent
/// `1/(t - 1)` is singular at `t = 1`.
pub const NOMINAL_T_GUARD: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InvarianceFactor {
    /// `Σp / Σq`.
    Reference,
    /// `(Σ p^t q^{1-t} / Σq)^{1/t}`.
    CsiszarTsallisNominal { t: f64 },
    /// `(Σq / Σ q^t p^{1-t})^{1/(t-1)}`.
    CsiszarDualTsallisNominal { t: f64 },
    /// `Σ p q^{t-1} / Σ q^t`.
    BregmanTsallisNominal { t: f64 },
    /// `(Σ q^t / Σ q p^{t-1})^{1/(1-t)}`.
    BregmanDualTsallisNominal { t: f64 },
}

impl InvarianceFactor {
    /// Nominal Tsallis factor for `form`.
    pub fn nominal(form: Form, t: f64) -> Result<Self> {
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::domain("tsallis requires t > 0", t));
        }
        let kind = match form {
            Form::Csiszar => InvarianceFactor::CsiszarTsallisNominal { t },
            Form::CsiszarDual => InvarianceFactor::CsiszarDualTsallisNominal { t },
            Form::Bregman => InvarianceFactor::BregmanTsallisNominal { t },
            Form::BregmanDual => InvarianceFactor::BregmanDualTsallisNominal { t },
        };
        if form.is_dual() && (t - 1.0).abs() <= NOMINAL_T_GUARD {
            return Err(Error::eval(format!(
                "nominal factor for {form} is singular at t = 1 (got t = {t})"
            )));
        }
        Ok(kind)
    }

    /// The divergence form a nominal factor minimizes; `None` for the reference factor.
    pub fn form(&self) -> Option<Form> {
        match self {
            InvarianceFactor::Reference => None,
            InvarianceFactor::CsiszarTsallisNominal { .. } => Some(Form::Csiszar),
            InvarianceFactor::CsiszarDualTsallisNominal { .. } => Some(Form::CsiszarDual),
            InvarianceFactor::BregmanTsallisNominal { .. } => Some(Form::Bregman),
            InvarianceFactor::BregmanDualTsallisNominal { .. } => Some(Form::BregmanDual),
        }
    }

    pub fn tsallis_parameter(&self) -> Option<f64> {
        match *self {
            InvarianceFactor::Reference => None,
            InvarianceFactor::CsiszarTsallisNominal { t }
            | InvarianceFactor::CsiszarDualTsallisNominal { t }
            | InvarianceFactor::BregmanTsallisNominal { t }
            | InvarianceFactor::BregmanDualTsallisNominal { t } => Some(t),
        }
    }

    /// `K(p, q)`. Sums are written as ratio-weighted sums so that `K(p, p) = 1` exactly.
    pub fn evaluate(&self, p: &[f64], q: &[f64]) -> Result<f64> {
        // only the dual nominal factors raise p to a possibly negative power
        check_inputs(p, q, self.form().unwrap_or(Form::Csiszar))?;
        let sum = |f: &dyn Fn(f64, f64) -> f64| -> f64 { p.iter().zip(q).map(|(&a, &b)| f(a, b)).sum() };
        let k = match *self {
            InvarianceFactor::Reference => p.iter().sum::<f64>() / q.iter().sum::<f64>(),
            InvarianceFactor::CsiszarTsallisNominal { t } => {
                let num = sum(&|p, q| q * (p / q).powf(t));
                (num / q.iter().sum::<f64>()).powf(1.0 / t)
            }
            InvarianceFactor::CsiszarDualTsallisNominal { t } => {
                self.guard(t)?;
                let den = sum(&|p, q| p * (q / p).powf(t));
                (q.iter().sum::<f64>() / den).powf(1.0 / (t - 1.0))
            }
            InvarianceFactor::BregmanTsallisNominal { t } => {
                sum(&|p, q| (p / q) * q.powf(t)) / sum(&|_, q| q.powf(t))
            }
            InvarianceFactor::BregmanDualTsallisNominal { t } => {
                self.guard(t)?;
                let num = sum(&|_, q| q.powf(t));
                let den = sum(&|p, q| (q / p) * p.powf(t));
                (num / den).powf(1.0 / (1.0 - t))
            }
        };
        if k.is_finite() && k > 0.0 {
            Ok(k)
        } else {
            Err(Error::eval(format!("invariance factor evaluated to {k}")))
        }
    }

    fn guard(&self, t: f64) -> Result<()> {
        if (t - 1.0).abs() <= NOMINAL_T_GUARD {
            Err(Error::eval(format!("nominal dual factor is singular at t = 1 (got t = {t})")))
        } else {
            Ok(())
        }
    }
}

/// `K(p, q)` for `kind`.
pub fn factor(kind: InvarianceFactor, p: &[f64], q: &[f64]) -> Result<f64> {
    kind.evaluate(p, q)
}

/// `p̄ = p / Σp`, `q̄ = q / Σq` and the two sums.
#[derive(Debug, Clone, PartialEq)]
pub struct NormalizedPair {
    pub p_bar: Vec<f64>,
    pub q_bar: Vec<f64>,
    pub sum_p: f64,
    pub sum_q: f64,
}

impl NormalizedPair {
    pub fn new(p: &[f64], q: &[f64]) -> Result<Self> {
        check_inputs(p, q, Form::Csiszar)?;
        let sum_p: f64 = p.iter().sum();
        let sum_q: f64 = q.iter().sum();
        Ok(NormalizedPair {
            p_bar: p.iter().map(|x| x / sum_p).collect(),
            q_bar: q.iter().map(|x| x / sum_q).collect(),
            sum_p,
            sum_q,
        })
    }

    /// `w_j = p̄_j / q̄_j`.
    pub fn ratio(&self) -> Vec<f64> {
        self.p_bar.iter().zip(&self.q_bar).map(|(p, q)| p / q).collect()
    }

    /// `Σ_i q̄_i h(w_i)`.
    fn q_mean(&self, h: impl Fn(f64) -> f64) -> f64 {
        self.p_bar.iter().zip(&self.q_bar).map(|(p, q)| q * h(p / q)).sum()
    }
}

/// `∂D(p‖Kq)/∂K` at `K = K₀` (for dual kinds, `∂D(Kq‖p)/∂K`).
///
/// Zero in exact arithmetic. A natural scale for the rounding error is
/// `Σ q_i (U_i + V_i)`, taken from the base split at `(p, K₀q)`.
pub fn nominal_stationarity_residual(kind: InvarianceFactor, p: &[f64], q: &[f64]) -> Result<f64> {
    let (form, t) = match (kind.form(), kind.tsallis_parameter()) {
        (Some(form), Some(t)) => (form, t),
        _ => return Err(Error::Unsupported("stationarity is defined for nominal factors".into())),
    };
    let k0 = kind.evaluate(p, q)?;
    let kq: Vec<f64> = q.iter().map(|x| k0 * x).collect();
    let kernel = Kernel::for_family(&EntropyFamily::Tsallis { t });
    let g = plain_neg_grad(kernel, form, p, &kq)?;
    Ok(-q.iter().zip(&g).map(|(q, g)| q * g).sum::<f64>())
}

// ---------------------------------------------------------------------------
// generic route used by DivergenceSpec

fn scaled(factor: InvarianceFactor, p: &[f64], q: &[f64]) -> Result<(f64, Vec<f64>)> {
    let k = factor.evaluate(p, q)?;
    Ok((k, q.iter().map(|x| k * x).collect()))
}

pub(crate) fn invariant_value(
    spec: &DivergenceSpec,
    factor: InvarianceFactor,
    p: &[f64],
    q: &[f64],
) -> Result<f64> {
    let (_, kq) = scaled(factor, p, q)?;
    plain_value(spec.kernel(), spec.form(), p, &kq)
}

pub(crate) fn invariant_neg_grad(
    spec: &DivergenceSpec,
    factor: InvarianceFactor,
    p: &[f64],
    q: &[f64],
) -> Result<Vec<f64>> {
    let (k, kq) = scaled(factor, p, q)?;
    let g = plain_neg_grad(spec.kernel(), spec.form(), p, &kq)?;
    let sum_q: f64 = q.iter().sum();
    let mean = q.iter().zip(&g).map(|(q, g)| q * g).sum::<f64>() / sum_q;
    Ok(g.iter().map(|g| k * (g - mean)).collect())
}

/// Projects the base split: `U'_j = K (U_j + Σq̄V - o)`, `V'_j = K (V_j + Σq̄U - o)`.
///
/// `o = 1` for the Csiszár forms, whose `U` and `V` both carry a unit term that
/// cancels in the difference. `o = 0` for the Bregman forms.
pub(crate) fn invariant_split(
    spec: &DivergenceSpec,
    factor: InvarianceFactor,
    p: &[f64],
    q: &[f64],
) -> Result<GradientSplit> {
    let (k, kq) = scaled(factor, p, q)?;
    let base = plain_split(spec.kernel(), spec.form(), p, &kq)?;
    let sum_q: f64 = q.iter().sum();
    let su = q.iter().zip(&base.u).map(|(q, u)| q * u).sum::<f64>() / sum_q;
    let sv = q.iter().zip(&base.v).map(|(q, v)| q * v).sum::<f64>() / sum_q;
    let offset = if spec.form().is_bregman() { 0.0 } else { 1.0 };
    let (cu, cv) = (sv - offset, su - offset);
    Ok(GradientSplit {
        u: base.u.iter().map(|u| k * (u + cu).max(0.0)).collect(),
        v: base.v.iter().map(|v| k * (v + cv).max(0.0)).collect(),
        branch: base.branch,
    })
}

// ---------------------------------------------------------------------------
// closed forms

enum Route {
    Ab(f64, f64),
    Generic(DivergenceSpec),
}

fn route(family: EntropyFamily, form: Form) -> Result<Route> {
    let spec = DivergenceSpec::invariant(family, form, FactorChoice::Reference)?;
    Ok(match spec.kernel() {
        Kernel::Ab { a, b } => Route::Ab(a, b),
        _ => Route::Generic(spec),
    })
}

/// `(Σp / (a-b)) [Σ p̄^a q̄^{1-a} - Σ p̄^b q̄^{1-b}]`.
pub fn invariant_csiszar_value(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<f64> {
    match route(family, Form::Csiszar)? {
        Route::Ab(a, b) => {
            let n = NormalizedPair::new(p, q)?;
            let d = a - b;
            Ok(n.sum_p * n.q_mean(|w| w.powf(b) * (d * w.ln()).exp_m1()) / d)
        }
        Route::Generic(spec) => spec.value(p, q),
    }
}

/// `(Σp/Σq) [A_j - Σ_i q̄_i A_i]` with `A = ((a-1) w^a + (1-b) w^b) / (a-b)`.
pub fn invariant_csiszar_neg_grad(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    match route(family, Form::Csiszar)? {
        Route::Ab(a, b) => {
            let n = NormalizedPair::new(p, q)?;
            let d = a - b;
            let big_a = |w: f64| (a - 1.0) / d * w.powf(a) + (1.0 - b) / d * w.powf(b);
            let mean = n.q_mean(big_a);
            let scale = n.sum_p / n.sum_q;
            Ok(n.ratio().into_iter().map(|w| scale * (big_a(w) - mean)).collect())
        }
        Route::Generic(spec) => spec.neg_grad(p, q),
    }
}

fn closed_form_t(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::domain("tsallis requires t > 0", t));
    }
    if (t - 1.0).abs() <= NOMINAL_T_GUARD {
        return Err(Error::eval(format!("closed form is singular at t = 1 (got t = {t})")));
    }
    Ok(())
}

/// `t/(1-t) [Σp - K₀ Σq]` with the nominal Csiszár/Tsallis factor `K₀`.
pub fn invariant_csiszar_tsallis_nominal_value(t: f64, p: &[f64], q: &[f64]) -> Result<f64> {
    closed_form_t(t)?;
    let k0 = InvarianceFactor::CsiszarTsallisNominal { t }.evaluate(p, q)?;
    let (sp, sq): (f64, f64) = (p.iter().sum(), q.iter().sum());
    Ok(t / (1.0 - t) * (sp - k0 * sq))
}

/// `(Σp/Σq) [S^{1/t - 1} w_j^t - S^{1/t}]` with `S = Σ q̄ w^t`.
pub fn invariant_csiszar_tsallis_nominal_neg_grad(t: f64, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    closed_form_t(t)?;
    let n = NormalizedPair::new(p, q)?;
    let s = n.q_mean(|w| w.powf(t));
    let scale = n.sum_p / n.sum_q;
    Ok(n.ratio()
        .into_iter()
        .map(|w| scale * (s.powf(1.0 / t - 1.0) * w.powf(t) - s.powf(1.0 / t)))
        .collect())
}

/// `(Σp / (a-b)) [Σ q̄^a p̄^{1-a} - Σ q̄^b p̄^{1-b}]`.
pub fn invariant_csiszar_dual_value(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<f64> {
    match route(family, Form::CsiszarDual)? {
        Route::Ab(a, b) => {
            let n = NormalizedPair::new(p, q)?;
            let d = a - b;
            let s: f64 = n
                .p_bar
                .iter()
                .zip(&n.q_bar)
                .map(|(p, q)| {
                    let v = q / p;
                    p * v.powf(b) * (d * v.ln()).exp_m1()
                })
                .sum();
            Ok(n.sum_p * s / d)
        }
        Route::Generic(spec) => spec.value(p, q),
    }
}

/// `(Σp/Σq)/(a-b) [b w_j^{1-b} - a w_j^{1-a} - b Σq̄ w^{1-b} + a Σq̄ w^{1-a}]`.
pub fn invariant_csiszar_dual_neg_grad(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    match route(family, Form::CsiszarDual)? {
        Route::Ab(a, b) => {
            let n = NormalizedPair::new(p, q)?;
            let d = a - b;
            let ma = n.q_mean(|w| w.powf(1.0 - a));
            let mb = n.q_mean(|w| w.powf(1.0 - b));
            let scale = n.sum_p / n.sum_q / d;
            Ok(n.ratio()
                .into_iter()
                .map(|w| scale * (b * w.powf(1.0 - b) - a * w.powf(1.0 - a) - b * mb + a * ma))
                .collect())
        }
        Route::Generic(spec) => spec.neg_grad(p, q),
    }
}

/// `Σp - K₀ Σq` with the nominal dual Csiszár/Tsallis factor.
pub fn invariant_csiszar_dual_tsallis_nominal_value(t: f64, p: &[f64], q: &[f64]) -> Result<f64> {
    closed_form_t(t)?;
    let k0 = InvarianceFactor::CsiszarDualTsallisNominal { t }.evaluate(p, q)?;
    let (sp, sq): (f64, f64) = (p.iter().sum(), q.iter().sum());
    Ok(sp - k0 * sq)
}

/// `t/(1-t) K₀ [(K₀ q_j / p_j)^{t-1} - 1]`.
pub fn invariant_csiszar_dual_tsallis_nominal_neg_grad(
    t: f64,
    p: &[f64],
    q: &[f64],
) -> Result<Vec<f64>> {
    closed_form_t(t)?;
    let k0 = InvarianceFactor::CsiszarDualTsallisNominal { t }.evaluate(p, q)?;
    Ok(p.iter()
        .zip(q)
        .map(|(p, q)| t / (1.0 - t) * k0 * ((k0 * q / p).powf(t - 1.0) - 1.0))
        .collect())
}

fn bregman_bracket(e: f64, x_bar: &[f64], y_bar: &[f64]) -> f64 {
    // Σ x̄^e + (e-1) Σ ȳ^e - e Σ x̄ ȳ^{e-1}
    x_bar
        .iter()
        .zip(y_bar)
        .map(|(x, y)| x.powf(e) + (e - 1.0) * y.powf(e) - e * x * y.powf(e - 1.0))
        .sum()
}

/// `(Σp)^a/(a-b) [Σp̄^a + (a-1)Σq̄^a - aΣp̄ q̄^{a-1}] - (Σp)^b/(a-b) [same in b]`.
pub fn invariant_bregman_value(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<f64> {
    match route(family, Form::Bregman)? {
        Route::Ab(a, b) => {
            let n = NormalizedPair::new(p, q)?;
            let ta = n.sum_p.powf(a) * bregman_bracket(a, &n.p_bar, &n.q_bar);
            let tb = n.sum_p.powf(b) * bregman_bracket(b, &n.p_bar, &n.q_bar);
            Ok((ta - tb) / (a - b))
        }
        Route::Generic(spec) => spec.value(p, q),
    }
}

/// `Σ_e ± e(e-1)/(a-b) (Σp)^e/Σq [p̄_j q̄_j^{e-2} - Σp̄q̄^{e-1} - q̄_j^{e-1} + Σq̄^e]`, `e ∈ {a, b}`.
pub fn invariant_bregman_neg_grad(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    match route(family, Form::Bregman)? {
        Route::Ab(a, b) => {
            let n = NormalizedPair::new(p, q)?;
            let part = |e: f64, j: usize| -> f64 {
                let s1: f64 = n.p_bar.iter().zip(&n.q_bar).map(|(p, q)| p * q.powf(e - 1.0)).sum();
                let s2: f64 = n.q_bar.iter().map(|q| q.powf(e)).sum();
                let (pj, qj) = (n.p_bar[j], n.q_bar[j]);
                e * (e - 1.0) * n.sum_p.powf(e) / n.sum_q
                    * (pj * qj.powf(e - 2.0) - s1 - qj.powf(e - 1.0) + s2)
            };
            Ok((0..p.len()).map(|j| (part(a, j) - part(b, j)) / (a - b)).collect())
        }
        Route::Generic(spec) => spec.neg_grad(p, q),
    }
}

/// `1/(1-t) [(Σ p q^{t-1})^t (Σ q^t)^{1-t} - Σ p^t]`.
pub fn invariant_bregman_tsallis_nominal_value(t: f64, p: &[f64], q: &[f64]) -> Result<f64> {
    closed_form_t(t)?;
    check_inputs(p, q, Form::Bregman)?;
    let spq: f64 = p.iter().zip(q).map(|(p, q)| p * q.powf(t - 1.0)).sum();
    let sqt: f64 = q.iter().map(|q| q.powf(t)).sum();
    let spt: f64 = p.iter().map(|p| p.powf(t)).sum();
    Ok((spq.powf(t) * sqt.powf(1.0 - t) - spt) / (1.0 - t))
}

/// `t K₀^{t-1} q_j^{t-1} (p_j/q_j - K₀)`.
pub fn invariant_bregman_tsallis_nominal_neg_grad(t: f64, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    closed_form_t(t)?;
    let k0 = InvarianceFactor::BregmanTsallisNominal { t }.evaluate(p, q)?;
    Ok(p.iter()
        .zip(q)
        .map(|(p, q)| t * k0.powf(t - 1.0) * q.powf(t - 1.0) * (p / q - k0))
        .collect())
}

/// `(Σp)^a/(a-b) [Σq̄^a + (a-1)Σp̄^a - aΣq̄ p̄^{a-1}] - (Σp)^b/(a-b) [same in b]`.
pub fn invariant_bregman_dual_value(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<f64> {
    match route(family, Form::BregmanDual)? {
        Route::Ab(a, b) => {
            let n = NormalizedPair::new(p, q)?;
            let ta = n.sum_p.powf(a) * bregman_bracket(a, &n.q_bar, &n.p_bar);
            let tb = n.sum_p.powf(b) * bregman_bracket(b, &n.q_bar, &n.p_bar);
            Ok((ta - tb) / (a - b))
        }
        Route::Generic(spec) => spec.value(p, q),
    }
}

/// `Σ_e ± e/(a-b) (Σp)^e/Σq [p̄_j^{e-1} - q̄_j^{e-1} + Σq̄^e - Σq̄ p̄^{e-1}]`, `e ∈ {a, b}`.
pub fn invariant_bregman_dual_neg_grad(family: EntropyFamily, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    match route(family, Form::BregmanDual)? {
        Route::Ab(a, b) => {
            let n = NormalizedPair::new(p, q)?;
            let part = |e: f64, j: usize| -> f64 {
                let s1: f64 = n.q_bar.iter().map(|q| q.powf(e)).sum();
                let s2: f64 = n.p_bar.iter().zip(&n.q_bar).map(|(p, q)| q * p.powf(e - 1.0)).sum();
                let (pj, qj) = (n.p_bar[j], n.q_bar[j]);
                e * n.sum_p.powf(e) / n.sum_q * (pj.powf(e - 1.0) - qj.powf(e - 1.0) + s1 - s2)
            };
            Ok((0..p.len()).map(|j| (part(a, j) - part(b, j)) / (a - b)).collect())
        }
        Route::Generic(spec) => spec.neg_grad(p, q),
    }
}

/// `Σ p^t - K₀^t Σ q^t` with the nominal dual Bregman/Tsallis factor.
pub fn invariant_bregman_dual_tsallis_nominal_value(t: f64, p: &[f64], q: &[f64]) -> Result<f64> {
    closed_form_t(t)?;
    let k0 = InvarianceFactor::BregmanDualTsallisNominal { t }.evaluate(p, q)?;
    let spt: f64 = p.iter().map(|p| p.powf(t)).sum();
    let sqt: f64 = q.iter().map(|q| q.powf(t)).sum();
    Ok(spt - k0.powf(t) * sqt)
}

/// `t/(t-1) K₀ [p_j^{t-1} - K₀^{t-1} q_j^{t-1}]`.
pub fn invariant_bregman_dual_tsallis_nominal_neg_grad(
    t: f64,
    p: &[f64],
    q: &[f64],
) -> Result<Vec<f64>> {
    closed_form_t(t)?;
    let k0 = InvarianceFactor::BregmanDualTsallisNominal { t }.evaluate(p, q)?;
    Ok(p.iter()
        .zip(q)
        .map(|(p, q)| t / (t - 1.0) * k0 * (p.powf(t - 1.0) - k0.powf(t - 1.0) * q.powf(t - 1.0)))
        .collect())
}
