//! Family-by-family gradient tables.
//!
//! These use each family's own parameters, never the `(a, b)` reduction, so they are an
//! independent check on the general kernel:
//!
//! | Form | Negative gradient |
//! |------|-------------------|
//! | Csiszár | `(p/q) X - 1` |
//! | dual Csiszár | `(p/q) T + 1` |
//! | Bregman | `(p/q - 1) Z` |
//! | dual Bregman | family-specific difference `g(p) - g(q)` |
//!
//! Three entries differ from the commonly printed tables, because the printed versions
//! do not differentiate the stated divergences:
//! - the Tsallis dual-Bregman prefactor is `t/(t-1)`;
//! - the second KLS `Z` coefficient is `(K-r)(1+r-K)/(2K)`;
//! - the Newton `T` is `½ (q/p) ln(p/q) - (q/p)²`.

use super::{check_inputs, DivergenceSpec, Form, Variant};
use crate::entropy::EntropyFamily;
use crate::error::{Error, Result};

/// Negative gradient of a plain divergence, computed from the per-family tables.
///
/// Supported families: Shannon, Tsallis, Kaniadakis, Abe, Gamma, KLS, general `(a, b)`
/// and Newton. Requires `p > 0`.
pub fn appendix_table_neg_grad(spec: &DivergenceSpec, p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    if spec.variant() != Variant::Plain {
        return Err(Error::Unsupported("gradient tables cover plain divergences only".into()));
    }
    let family = match spec.family() {
        // z = 1 is the Shannon point of the Abe family; its rows divide by 1 - z²
        EntropyFamily::Abe { z: 1.0 } => EntropyFamily::Shannon,
        other => other,
    };
    if matches!(family, EntropyFamily::Alpha { .. }) {
        return Err(Error::Unsupported("the alpha family has no gradient table".into()));
    }
    check_inputs(p, q, spec.form())?;
    if let Some(j) = p.iter().position(|&x| x <= 0.0) {
        return Err(Error::eval(format!("gradient tables need p > 0, p[{j}] = {}", p[j])));
    }
    Ok(p.iter()
        .zip(q)
        .map(|(&pj, &qj)| {
            let u = pj / qj;
            match spec.form() {
                Form::Csiszar => u * x_entry(family, u) - 1.0,
                Form::CsiszarDual => u * t_entry(family, u) + 1.0,
                Form::Bregman => (u - 1.0) * z_entry(family, qj),
                Form::BregmanDual => dual_bregman_entry(family, pj, qj),
            }
        })
        .collect())
}

fn x_entry(family: EntropyFamily, u: f64) -> f64 {
    match family {
        EntropyFamily::Shannon => 1.0,
        EntropyFamily::Tsallis { t } => u.powf(t - 1.0),
        EntropyFamily::Kaniadakis { k } => 0.5 * u.powf(k) + 0.5 * u.powf(-k),
        EntropyFamily::Abe { z } => {
            z / (z + 1.0) * u.powf(z - 1.0) + 1.0 / (z + 1.0) * u.powf(1.0 / z - 1.0)
        }
        EntropyFamily::Gamma { g } => 2.0 / 3.0 * u.powf(2.0 * g) + 1.0 / 3.0 * u.powf(-g),
        EntropyFamily::Kls { k, r } => {
            (k + r) / (2.0 * k) * u.powf(r + k) + (k - r) / (2.0 * k) * u.powf(r - k)
        }
        EntropyFamily::GeneralAb { a, b } => {
            (a - 1.0) / (a - b) * u.powf(a - 1.0) + (1.0 - b) / (a - b) * u.powf(b - 1.0)
        }
        EntropyFamily::Newton => 0.5 * u + 0.5,
        EntropyFamily::Alpha { .. } => unreachable!(),
    }
}

fn t_entry(family: EntropyFamily, u: f64) -> f64 {
    match family {
        EntropyFamily::Shannon => (u.ln() - 1.0) / u,
        EntropyFamily::Tsallis { t } => t / (1.0 - t) * u.powf(-t) - 1.0 / (1.0 - t) / u,
        EntropyFamily::Kaniadakis { k } => {
            (1.0 - k) / (2.0 * k) * u.powf(k - 1.0) - (1.0 + k) / (2.0 * k) * u.powf(-k - 1.0)
        }
        EntropyFamily::Abe { z } => {
            let z2 = z * z;
            z2 / (1.0 - z2) * u.powf(-z) - 1.0 / (1.0 - z2) * u.powf(-1.0 / z)
        }
        EntropyFamily::Gamma { g } => {
            (1.0 - g) / (3.0 * g) * u.powf(g - 1.0)
                - (1.0 + 2.0 * g) / (3.0 * g) * u.powf(-2.0 * g - 1.0)
        }
        EntropyFamily::Kls { k, r } => {
            (1.0 + r - k) / (2.0 * k) * u.powf(k - r - 1.0)
                - (1.0 + r + k) / (2.0 * k) * u.powf(-k - r - 1.0)
        }
        EntropyFamily::GeneralAb { a, b } => {
            b / (a - b) * u.powf(-b) - a / (a - b) * u.powf(-a)
        }
        EntropyFamily::Newton => 0.5 * u.ln() / u - 1.0 / (u * u),
        EntropyFamily::Alpha { .. } => unreachable!(),
    }
}

fn z_entry(family: EntropyFamily, q: f64) -> f64 {
    match family {
        EntropyFamily::Shannon => 1.0,
        EntropyFamily::Tsallis { t } => t * q.powf(t - 1.0),
        EntropyFamily::Kaniadakis { k } => {
            (1.0 + k) / 2.0 * q.powf(k) + (1.0 - k) / 2.0 * q.powf(-k)
        }
        EntropyFamily::Abe { z } => {
            z * z / (z + 1.0) * q.powf(z - 1.0) + 1.0 / (z * (z + 1.0)) * q.powf(1.0 / z - 1.0)
        }
        EntropyFamily::Gamma { g } => {
            2.0 * (2.0 * g + 1.0) / 3.0 * q.powf(2.0 * g) + (1.0 - g) / 3.0 * q.powf(-g)
        }
        EntropyFamily::Kls { k, r } => {
            (r + k) * (1.0 + r + k) / (2.0 * k) * q.powf(r + k)
                + (k - r) * (1.0 + r - k) / (2.0 * k) * q.powf(r - k)
        }
        EntropyFamily::GeneralAb { a, b } => {
            (a * a - a) / (a - b) * q.powf(a - 1.0) + (b - b * b) / (a - b) * q.powf(b - 1.0)
        }
        EntropyFamily::Newton => 0.5 + q,
        EntropyFamily::Alpha { .. } => unreachable!(),
    }
}

fn dual_bregman_entry(family: EntropyFamily, p: f64, q: f64) -> f64 {
    let diff = |e: f64| p.powf(e) - q.powf(e);
    match family {
        EntropyFamily::Shannon => p.ln() - q.ln(),
        EntropyFamily::Tsallis { t } => t / (t - 1.0) * diff(t - 1.0),
        EntropyFamily::Kaniadakis { k } => {
            (1.0 + k) / (2.0 * k) * diff(k) - (1.0 - k) / (2.0 * k) * diff(-k)
        }
        EntropyFamily::Abe { z } => {
            let z2 = z * z;
            z2 / (z2 - 1.0) * diff(z - 1.0) - 1.0 / (z2 - 1.0) * diff(1.0 / z - 1.0)
        }
        EntropyFamily::Gamma { g } => {
            (2.0 * g + 1.0) / (3.0 * g) * diff(2.0 * g) - (1.0 - g) / (3.0 * g) * diff(-g)
        }
        EntropyFamily::Kls { k, r } => {
            (1.0 + r + k) / (2.0 * k) * diff(r + k) - (1.0 + r - k) / (2.0 * k) * diff(r - k)
        }
        EntropyFamily::GeneralAb { a, b } => {
            a / (a - b) * diff(a - 1.0) - b / (a - b) * diff(b - 1.0)
        }
        EntropyFamily::Newton => (p + 0.5 * p.ln()) - (q + 0.5 * q.ln()),
        EntropyFamily::Alpha { .. } => unreachable!(),
    }
}
