//! Per-component divergence kernels.
//!
//! Every family is routed to one of four kernels: the two-exponent `(a, b)` form, its
//! `a = b` logarithmic limit, Newton, or Alpha. Each kernel supplies, for one
//! component `(p_j, q_j)`, the Csiszár and Bregman terms, the four negative gradients,
//! and their `U - V` splits. Dual values reuse the plain terms with arguments swapped.
//!
//! Power differences are written with `expm1` so that every gradient is exactly zero
//! at `p_j = q_j` and accurate near it.

use super::{Form, SplitBranch};
use crate::entropy::{EntropyFamily, AbPair};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum Kernel {
    Ab { a: f64, b: f64 },
    /// Generator `x^c ln x`; `c = 1` is Shannon.
    Limit { c: f64 },
    Newton,
    Alpha { alpha: f64 },
}

/// `x^e` for `x ≥ 0`; zero raised to a non-positive power is an error.
fn powz(x: f64, e: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x.powf(e))
    } else if e > 0.0 {
        Ok(0.0)
    } else {
        Err(Error::eval(format!("zero component raised to non-positive power {e}")))
    }
}

/// `(p/q - 1, ln(p/q))`, both accurate to a few ulps of themselves near `p = q`.
fn ratio_log(p: f64, q: f64) -> (f64, f64) {
    let e = (p - q) / q;
    (e, e.ln_1p())
}

fn sign_parts(g: f64) -> (f64, f64) {
    (g.max(0.0) + 1.0, (-g).max(0.0) + 1.0)
}

impl Kernel {
    pub(crate) fn for_family(family: &EntropyFamily) -> Kernel {
        match *family {
            EntropyFamily::Shannon => Kernel::Limit { c: 1.0 },
            EntropyFamily::Newton => Kernel::Newton,
            EntropyFamily::Alpha { alpha } => Kernel::Alpha { alpha },
            _ => {
                let ab: AbPair = family.to_ab().expect("reducible family");
                if ab.is_degenerate() {
                    Kernel::Limit { c: ab.a }
                } else {
                    Kernel::Ab { a: ab.a, b: ab.b }
                }
            }
        }
    }

    pub(crate) fn branch(&self, form: Form) -> SplitBranch {
        let direct_limit = |c: f64| {
            if c == 1.0 {
                SplitBranch::Direct
            } else {
                SplitBranch::SignParts
            }
        };
        match (self, form) {
            (Kernel::Ab { .. }, Form::Csiszar | Form::Bregman) => SplitBranch::Direct,
            (Kernel::Ab { a, b }, Form::CsiszarDual | Form::BregmanDual) => {
                if a > b {
                    SplitBranch::GapPositive
                } else {
                    SplitBranch::GapNegative
                }
            }
            (Kernel::Limit { c }, Form::Csiszar | Form::Bregman) => direct_limit(*c),
            (Kernel::Newton, Form::Csiszar | Form::Bregman) => SplitBranch::Direct,
            (Kernel::Alpha { .. }, Form::Csiszar) => SplitBranch::Direct,
            _ => SplitBranch::SignParts,
        }
    }

    /// `q f_c(p / q)`, with `q > 0`, `p ≥ 0`.
    pub(crate) fn csiszar_term(&self, p: f64, q: f64) -> Result<f64> {
        let u = p / q;
        let (e, l) = ratio_log(p, q);
        match *self {
            Kernel::Ab { a, b } => {
                if p == 0.0 {
                    powz(0.0, a)?;
                    powz(0.0, b)?;
                    return Ok(q);
                }
                let d = a - b;
                let f = (b * l).exp() * (d * l).exp_m1() / d;
                Ok(q * (f - e))
            }
            Kernel::Limit { c } => {
                if p == 0.0 {
                    powz(0.0, c)?;
                    return Ok(q);
                }
                let f = if c == 1.0 { u * l } else { (c * l).exp() * l };
                Ok(q * (f - e))
            }
            Kernel::Newton => {
                // u² - 3u + 2 + u ln u = e² + (u ln u - e)
                let ulnu = if p == 0.0 { 0.0 } else { u * l };
                Ok(0.5 * q * (e * e + (ulnu - e)))
            }
            Kernel::Alpha { alpha } => {
                if p == 0.0 {
                    return Ok(q);
                }
                let f = u * (alpha * l).tanh() / alpha;
                Ok(q * (f - e))
            }
        }
    }

    /// `f(p) - f(q) - (p - q) f'(q)`, with `q > 0`, `p ≥ 0`.
    pub(crate) fn bregman_term(&self, p: f64, q: f64) -> Result<f64> {
        let (e, lr) = ratio_log(p, q);
        match *self {
            Kernel::Ab { a, b } => {
                let em1 = |x: f64| -> Result<f64> {
                    if p == 0.0 {
                        powz(0.0, x)?;
                        Ok(-1.0)
                    } else {
                        Ok((x * lr).exp_m1())
                    }
                };
                let ta = q.powf(a) * (em1(a)? - a * e);
                let tb = q.powf(b) * (em1(b)? - b * e);
                Ok((ta - tb) / (a - b))
            }
            Kernel::Limit { c } => {
                let rc_lnr = if p == 0.0 {
                    powz(0.0, c)?;
                    0.0
                } else {
                    (c * lr).exp() * lr
                };
                if c == 1.0 {
                    return Ok(q * (rc_lnr - e));
                }
                let lq = q.ln();
                let drift = if p == 0.0 { -1.0 } else { (c * lr).exp_m1() } - c * e;
                Ok(q.powf(c) * (lq * drift + rc_lnr - e))
            }
            Kernel::Newton => {
                let plr = if p == 0.0 { 0.0 } else { p * lr };
                Ok(0.5 * (p - q).powi(2) + 0.5 * (plr - (p - q)))
            }
            Kernel::Alpha { .. } => Err(unsupported_alpha_bregman()),
        }
    }

    /// Negative gradient of the Csiszár term with respect to `q`.
    pub(crate) fn csiszar_grad(&self, p: f64, q: f64) -> Result<f64> {
        let u = p / q;
        match *self {
            Kernel::Ab { a, b } => {
                if p == 0.0 {
                    powz(0.0, a)?;
                    powz(0.0, b)?;
                    return Ok(-1.0);
                }
                let d = a - b;
                let l = u.ln();
                Ok((a - 1.0) / d * (a * l).exp_m1() + (1.0 - b) / d * (b * l).exp_m1())
            }
            Kernel::Limit { c } => {
                if p == 0.0 {
                    powz(0.0, c)?;
                    return Ok(-1.0);
                }
                if c == 1.0 {
                    return Ok(u - 1.0);
                }
                let l = u.ln();
                Ok((c - 1.0) * u.powf(c) * l + (c * l).exp_m1())
            }
            Kernel::Newton => Ok(0.5 * (u - 1.0) * (u + 2.0)),
            Kernel::Alpha { alpha } => {
                if p == 0.0 {
                    return Ok(-1.0);
                }
                let ch = (alpha * u.ln()).cosh();
                Ok(u / (ch * ch) - 1.0)
            }
        }
    }

    /// Negative gradient of the dual Csiszár term `p f_c(q / p)` with respect to `q`.
    pub(crate) fn csiszar_dual_grad(&self, p: f64, q: f64) -> Result<f64> {
        let l = (p / q).ln();
        Ok(match *self {
            Kernel::Ab { a, b } => {
                let d = a - b;
                // (b u^{1-b} - a u^{1-a}) / d + 1, with u^{1-b} = u^{1-a} e^{d l}
                b * ((1.0 - a) * l).exp() * (d * l).exp_m1() / d - ((1.0 - a) * l).exp_m1()
            }
            Kernel::Limit { c } => {
                if c == 1.0 {
                    l
                } else {
                    // v = q/p, 1 - c v^{c-1} ln v - v^{c-1}
                    let lv = -l;
                    -c * ((c - 1.0) * lv).exp() * lv - ((c - 1.0) * lv).exp_m1()
                }
            }
            Kernel::Newton => 0.5 * l + (p - q) / p,
            Kernel::Alpha { alpha } => {
                let t = (alpha * l).tanh();
                t / alpha + t * t
            }
        })
    }

    /// Negative gradient of the Bregman term with respect to `q`: `(p - q) f''(q)`.
    pub(crate) fn bregman_grad(&self, p: f64, q: f64) -> Result<f64> {
        Ok((p / q - 1.0) * self.bregman_weight(q)?)
    }

    /// `Z = q f''(q)`, the factor multiplying `p/q - 1` in the Bregman gradient.
    pub(crate) fn bregman_weight(&self, q: f64) -> Result<f64> {
        match *self {
            Kernel::Ab { a, b } => {
                let ta = if a == 0.0 || a == 1.0 { 0.0 } else { (a * a - a) * q.powf(a - 1.0) };
                let tb = if b == 0.0 || b == 1.0 { 0.0 } else { (b - b * b) * q.powf(b - 1.0) };
                Ok((ta + tb) / (a - b))
            }
            Kernel::Limit { c } => {
                if c == 1.0 {
                    Ok(1.0)
                } else {
                    Ok(q.powf(c - 1.0) * (c * (c - 1.0) * q.ln() + 2.0 * c - 1.0))
                }
            }
            Kernel::Newton => Ok(0.5 + q),
            Kernel::Alpha { .. } => Err(unsupported_alpha_bregman()),
        }
    }

    /// Negative gradient of the dual Bregman term `f(q) - f(p) - (q - p) f'(p)`: `f'(p) - f'(q)`.
    pub(crate) fn bregman_dual_grad(&self, p: f64, q: f64) -> Result<f64> {
        let l = (p / q).ln();
        match *self {
            Kernel::Ab { a, b } => {
                let diff = |e: f64| {
                    if e == 0.0 {
                        0.0
                    } else {
                        e * q.powf(e - 1.0) * ((e - 1.0) * l).exp_m1()
                    }
                };
                Ok((diff(a) - diff(b)) / (a - b))
            }
            Kernel::Limit { c } => {
                if c == 1.0 {
                    Ok(l)
                } else {
                    let fp = |x: f64| x.powf(c - 1.0) * (c * x.ln() + 1.0);
                    Ok(fp(p) - fp(q))
                }
            }
            Kernel::Newton => Ok((p - q) + 0.5 * l),
            Kernel::Alpha { .. } => Err(unsupported_alpha_bregman()),
        }
    }

    pub(crate) fn term(&self, form: Form, p: f64, q: f64) -> Result<f64> {
        match form {
            Form::Csiszar => self.csiszar_term(p, q),
            Form::CsiszarDual => self.csiszar_term(q, p),
            Form::Bregman => self.bregman_term(p, q),
            Form::BregmanDual => self.bregman_term(q, p),
        }
    }

    pub(crate) fn grad(&self, form: Form, p: f64, q: f64) -> Result<f64> {
        match form {
            Form::Csiszar => self.csiszar_grad(p, q),
            Form::CsiszarDual => self.csiszar_dual_grad(p, q),
            Form::Bregman => self.bregman_grad(p, q),
            Form::BregmanDual => self.bregman_dual_grad(p, q),
        }
    }

    /// `(U_j, V_j)` with `U_j - V_j` equal to the negative gradient and both non-negative.
    pub(crate) fn split(&self, form: Form, p: f64, q: f64) -> Result<(f64, f64)> {
        let branch = self.branch(form);
        if branch == SplitBranch::SignParts {
            return Ok(sign_parts(self.grad(form, p, q)?));
        }
        match (*self, form) {
            (_, Form::Csiszar) => {
                let g = self.csiszar_grad(p, q)?;
                let u = match *self {
                    Kernel::Ab { a, b } => {
                        let d = a - b;
                        (a - 1.0) / d * powz(p / q, a)? + (1.0 - b) / d * powz(p / q, b)?
                    }
                    Kernel::Limit { .. } => p / q,
                    Kernel::Newton => (p / q) * (0.5 * p / q + 0.5),
                    // u sech^2 is g + 1 up to rounding; clamp guards the last ulp
                    Kernel::Alpha { .. } => (g + 1.0).max(0.0),
                };
                Ok((u, 1.0))
            }
            (_, Form::Bregman) => {
                let z = self.bregman_weight(q)?;
                Ok((p / q * z, z))
            }
            (Kernel::Ab { a, b }, Form::CsiszarDual) => {
                let d = a - b;
                let l = (p / q).ln();
                let ta = a * ((1.0 - a) * l).exp() / d.abs();
                let tb = b * ((1.0 - b) * l).exp() / d.abs();
                Ok(if d > 0.0 { (tb + 1.0, ta) } else { (ta + 1.0, tb) })
            }
            (Kernel::Ab { a, b }, Form::BregmanDual) => {
                let d = a - b;
                let pw = |x: f64, e: f64| if e == 0.0 { 0.0 } else { e * x.powf(e - 1.0) };
                let first = (pw(p, a) + pw(q, b)) / d.abs();
                let second = (pw(q, a) + pw(p, b)) / d.abs();
                Ok(if d > 0.0 { (first, second) } else { (second, first) })
            }
            _ => unreachable!("remaining combinations use sign parts"),
        }
    }
}

fn unsupported_alpha_bregman() -> Error {
    Error::Unsupported("bregman divergences of the alpha logarithm are not provided".into())
}
