//! Entropy families built on deformed logarithms.
//!
//! Every family here is a trace-form entropy `S(p) = -Σ f(p_i)` with a strictly
//! convex generator `f` satisfying `f(1) = 0` and `f'(1) = 1`. The standard convex
//! function used to build Csiszár divergences is therefore `f_c(x) = f(x) - x + 1`.
//!
//! Six of the families are special cases of the two-exponent generator
//! `f(x) = (x^a - x^b) / (a - b)`:
//!
//! | Family | a | b |
//! |--------|---|---|
//! | Tsallis `t` | `t` | `1` |
//! | Kaniadakis `K` | `1 + K` | `1 - K` |
//! | Abe `z` | `z` | `1/z` |
//! | Gamma `γ` | `1 + 2γ` | `1 - γ` |
//! | KLS `(K, r)` | `1 + r + K` | `1 + r - K` |
//!
//! Shannon is the `a, b → 1` limit and is kept as its own tag so the logarithm is
//! exact. Newton and Alpha have no `(a, b)` form.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// `|a - b|` at or below which the two-exponent ratio is replaced by its limit `x^a ln x`.
pub const DEGENERACY_THRESHOLD: f64 = 1e-8;

/// One entropy, identified by its tag and parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EntropyFamily {
    Shannon,
    Tsallis { t: f64 },
    Kaniadakis { k: f64 },
    Abe { z: f64 },
    Gamma { g: f64 },
    Kls { k: f64, r: f64 },
    GeneralAb { a: f64, b: f64 },
    Newton,
    Alpha { alpha: f64 },
}

/// Exponent pair of the general two-parameter entropy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AbPair {
    pub a: f64,
    pub b: f64,
}

impl AbPair {
    pub fn new(a: f64, b: f64) -> Self {
        AbPair { a, b }
    }

    /// `a - b`.
    pub fn gap(&self) -> f64 {
        self.a - self.b
    }

    /// True when the pair is close enough to `a = b` that the limit form is used.
    pub fn is_degenerate(&self) -> bool {
        self.gap().abs() <= DEGENERACY_THRESHOLD
    }

    /// Checks `0 ≤ a ≤ 1 ≤ b` or `0 ≤ b ≤ 1 ≤ a`, and rejects pairs whose generator is affine.
    pub fn validate(&self) -> Result<()> {
        let AbPair { a, b } = *self;
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::domain("a and b must be finite", if a.is_finite() { b } else { a }));
        }
        let ordered = (0.0..=1.0).contains(&a) && b >= 1.0 || (0.0..=1.0).contains(&b) && a >= 1.0;
        if !ordered {
            return Err(Error::domain(
                format!("need 0 <= a <= 1 <= b or 0 <= b <= 1 <= a (a = {a}, b = {b})"),
                if (0.0..=1.0).contains(&a) || a >= 1.0 { b } else { a },
            ));
        }
        if a == b {
            return Err(Error::domain("a must differ from b (use shannon for a = b = 1)", a));
        }
        // {a, b} = {0, 1} gives f(x) = ±(x - 1): not strictly convex.
        let is_01 = |x: f64| x == 0.0 || x == 1.0;
        if is_01(a) && is_01(b) {
            return Err(Error::domain(
                format!("(a, b) = ({a}, {b}) makes f affine, so no divergence exists"),
                a,
            ));
        }
        Ok(())
    }
}

impl EntropyFamily {
    /// Lower-case key used in config files.
    pub fn key(&self) -> &'static str {
        match self {
            EntropyFamily::Shannon => "shannon",
            EntropyFamily::Tsallis { .. } => "tsallis",
            EntropyFamily::Kaniadakis { .. } => "kaniadakis",
            EntropyFamily::Abe { .. } => "abe",
            EntropyFamily::Gamma { .. } => "gamma",
            EntropyFamily::Kls { .. } => "kls",
            EntropyFamily::GeneralAb { .. } => "general",
            EntropyFamily::Newton => "newton",
            EntropyFamily::Alpha { .. } => "alpha",
        }
    }

    /// Returns `Ok(())` iff every parameter lies in the family's domain.
    pub fn validate(&self) -> Result<()> {
        fn finite(name: &str, v: f64) -> Result<()> {
            if v.is_finite() {
                Ok(())
            } else {
                Err(Error::domain(format!("{name} must be finite"), v))
            }
        }
        match *self {
            EntropyFamily::Shannon | EntropyFamily::Newton => Ok(()),
            EntropyFamily::Tsallis { t } => {
                finite("t", t)?;
                if t <= 0.0 {
                    return Err(Error::domain("tsallis requires t > 0", t));
                }
                if t == 1.0 {
                    return Err(Error::domain("tsallis t = 1 is shannon", t));
                }
                Ok(())
            }
            EntropyFamily::Kaniadakis { k } => {
                finite("K", k)?;
                if k == 0.0 {
                    return Err(Error::domain("kaniadakis K = 0 is shannon", k));
                }
                if k.abs() >= 1.0 {
                    return Err(Error::domain("kaniadakis requires -1 < K < 1", k));
                }
                Ok(())
            }
            EntropyFamily::Abe { z } => {
                finite("z", z)?;
                if z <= 0.0 {
                    return Err(Error::domain("abe requires z > 0", z));
                }
                Ok(())
            }
            EntropyFamily::Gamma { g } => {
                finite("gamma", g)?;
                if g == 0.0 {
                    return Err(Error::domain("gamma = 0 is shannon", g));
                }
                if !(-0.5..=1.0).contains(&g) {
                    return Err(Error::domain("gamma entropy requires -0.5 <= gamma <= 1", g));
                }
                Ok(())
            }
            EntropyFamily::Kls { k, r } => {
                finite("K", k)?;
                finite("r", r)?;
                if k == 0.0 {
                    return Err(Error::domain("kls requires K != 0", k));
                }
                if r.abs() > k.abs() {
                    return Err(Error::domain("kls requires -|K| <= r <= |K|", r));
                }
                AbPair::new(1.0 + r + k, 1.0 + r - k).validate()
            }
            EntropyFamily::GeneralAb { a, b } => AbPair::new(a, b).validate(),
            EntropyFamily::Alpha { alpha } => {
                finite("alpha", alpha)?;
                if alpha == 0.0 {
                    return Err(Error::domain("alpha = 0 is shannon", alpha));
                }
                if alpha.abs() > 0.5 {
                    return Err(Error::domain("alpha entropy requires -0.5 <= alpha <= 0.5", alpha));
                }
                Ok(())
            }
        }
    }

    /// Non-fatal notes about parameters outside the deformed logarithm's concavity range.
    pub fn diagnostics(&self) -> Vec<String> {
        let mut notes = Vec::new();
        match *self {
            EntropyFamily::Gamma { g } if g.abs() >= 0.5 => notes.push(format!(
                "gamma = {g}: deformed log is concave only for -0.5 < gamma < 0.5"
            )),
            EntropyFamily::Kls { k, r } => {
                let bound = if k.abs() <= 0.5 { k.abs() } else { 1.0 - k.abs() };
                if r > bound {
                    notes.push(format!(
                        "kls (K = {k}, r = {r}): deformed log is concave only for r <= {bound}"
                    ));
                }
            }
            EntropyFamily::GeneralAb { a, b } if a.max(b) > 2.0 => notes.push(format!(
                "general (a = {a}, b = {b}): deformed log is concave only for max(a, b) <= 2"
            )),
            _ => {}
        }
        notes
    }

    /// Exponent pair of the general two-parameter form.
    ///
    /// Shannon maps to the `(1, 1)` limit sentinel. Newton and Alpha are not reducible.
    pub fn to_ab(&self) -> Result<AbPair> {
        Ok(match *self {
            EntropyFamily::Shannon => AbPair::new(1.0, 1.0),
            EntropyFamily::Tsallis { t } => AbPair::new(t, 1.0),
            EntropyFamily::Kaniadakis { k } => AbPair::new(1.0 + k, 1.0 - k),
            EntropyFamily::Abe { z } => AbPair::new(z, 1.0 / z),
            EntropyFamily::Gamma { g } => AbPair::new(2.0 * g + 1.0, 1.0 - g),
            EntropyFamily::Kls { k, r } => AbPair::new(1.0 + r + k, 1.0 + r - k),
            EntropyFamily::GeneralAb { a, b } => AbPair::new(a, b),
            EntropyFamily::Newton => return Err(Error::NotReducible("newton")),
            EntropyFamily::Alpha { .. } => return Err(Error::NotReducible("alpha")),
        })
    }

    /// Base convex generator `f(x)`, using each family's own closed form.
    pub fn f(&self, x: f64) -> Result<f64> {
        check_nonneg(x)?;
        if let Ok(ab) = self.to_ab() {
            if ab.is_degenerate() {
                return limit_f(ab.a, x);
            }
        }
        match *self {
            EntropyFamily::Shannon => limit_f(1.0, x),
            EntropyFamily::Tsallis { t } => Ok((pow0(x, t)? - x) / (t - 1.0)),
            EntropyFamily::Kaniadakis { k } => {
                Ok((pow0(x, 1.0 + k)? - pow0(x, 1.0 - k)?) / (2.0 * k))
            }
            EntropyFamily::Abe { z } => Ok((pow0(x, z)? - pow0(x, 1.0 / z)?) / (z - 1.0 / z)),
            EntropyFamily::Gamma { g } => {
                Ok((pow0(x, 1.0 + 2.0 * g)? - pow0(x, 1.0 - g)?) / (3.0 * g))
            }
            EntropyFamily::Kls { k, r } => {
                Ok((pow0(x, 1.0 + k + r)? - pow0(x, 1.0 - k + r)?) / (2.0 * k))
            }
            EntropyFamily::GeneralAb { a, b } => Ok((pow0(x, a)? - pow0(x, b)?) / (a - b)),
            EntropyFamily::Newton => {
                let xlnx = if x == 0.0 { 0.0 } else { x * x.ln() };
                Ok(0.5 * (x * x - x + xlnx))
            }
            EntropyFamily::Alpha { alpha } => {
                if x == 0.0 {
                    Ok(0.0)
                } else {
                    Ok(x * (alpha * x.ln()).tanh() / alpha)
                }
            }
        }
    }

    /// First derivative of `f`, for `x > 0`.
    pub fn f_prime(&self, x: f64) -> Result<f64> {
        check_positive(x)?;
        if let Ok(ab) = self.to_ab() {
            let AbPair { a, b } = ab;
            if ab.is_degenerate() {
                return Ok(x.powf(a - 1.0) * (a * x.ln() + 1.0));
            }
            return Ok((a * x.powf(a - 1.0) - b * x.powf(b - 1.0)) / (a - b));
        }
        match *self {
            EntropyFamily::Newton => Ok(x + 0.5 * x.ln()),
            EntropyFamily::Alpha { alpha } => {
                let th = (alpha * x.ln()).tanh();
                Ok(th / alpha + (1.0 - th * th))
            }
            _ => unreachable!("reducible families handled above"),
        }
    }

    /// Standard convex function `f_c(x) = f(x) - f(1) - (x - 1) f'(1) = f(x) - x + 1`.
    pub fn f_c(&self, x: f64) -> Result<f64> {
        Ok(self.f(x)? - x + 1.0)
    }

    /// Deformed logarithm `Λ(x) = f(x) / x`, with `Λ(1) = 0`.
    pub fn deformed_log(&self, x: f64) -> Result<f64> {
        if !(x > 0.0) || !x.is_finite() {
            return Err(Error::eval(format!("deformed log needs x > 0, got {x}")));
        }
        match *self {
            EntropyFamily::Shannon => Ok(x.ln()),
            EntropyFamily::Newton => Ok(0.5 * (x - 1.0 + x.ln())),
            EntropyFamily::Alpha { alpha } => {
                let (up, down) = (x.powf(alpha), x.powf(-alpha));
                Ok((up - down) / (up + down) / alpha)
            }
            _ => {
                let AbPair { a, b } = self.to_ab()?;
                if (a - b).abs() <= DEGENERACY_THRESHOLD {
                    Ok(x.powf(a - 1.0) * x.ln())
                } else {
                    Ok((x.powf(a - 1.0) - x.powf(b - 1.0)) / (a - b))
                }
            }
        }
    }
}

/// Limit generator `x^c ln x`, with `0^c ln 0 := 0` for `c > 0`.
fn limit_f(c: f64, x: f64) -> Result<f64> {
    if x == 0.0 {
        if c > 0.0 {
            Ok(0.0)
        } else {
            Err(Error::eval(format!("x^{c} ln x is singular at x = 0")))
        }
    } else {
        Ok(x.powf(c) * x.ln())
    }
}

/// `x^e` extended to `x = 0` by continuity where the limit is finite.
fn pow0(x: f64, e: f64) -> Result<f64> {
    if x > 0.0 {
        Ok(x.powf(e))
    } else if e > 0.0 {
        Ok(0.0)
    } else if e == 0.0 {
        Ok(1.0)
    } else {
        Err(Error::eval(format!("0^{e} is singular")))
    }
}

fn check_nonneg(x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::eval(format!("expected a finite non-negative argument, got {x}")))
    }
}

fn check_positive(x: f64) -> Result<()> {
    if x > 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::eval(format!("expected a finite positive argument, got {x}")))
    }
}

impl fmt::Display for EntropyFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            EntropyFamily::Shannon | EntropyFamily::Newton => write!(f, "{}", self.key()),
            EntropyFamily::Tsallis { t } => write!(f, "tsallis t={t}"),
            EntropyFamily::Kaniadakis { k } => write!(f, "kaniadakis k={k}"),
            EntropyFamily::Abe { z } => write!(f, "abe z={z}"),
            EntropyFamily::Gamma { g } => write!(f, "gamma g={g}"),
            EntropyFamily::Kls { k, r } => write!(f, "kls k={k} r={r}"),
            EntropyFamily::GeneralAb { a, b } => write!(f, "general a={a} b={b}"),
            EntropyFamily::Alpha { alpha } => write!(f, "alpha alpha={alpha}"),
        }
    }
}

impl FromStr for EntropyFamily {
    type Err = Error;

    /// Parses `tag [key=value ...]`, e.g. `tsallis t=1.5` or `general a=1.5 b=0.5`.
    /// The result is validated.
    fn from_str(s: &str) -> Result<Self> {
        let mut words = s.split_whitespace();
        let tag = words
            .next()
            .ok_or_else(|| Error::Parse("empty entropy family".into()))?
            .to_ascii_lowercase();
        let mut params: Vec<(String, f64)> = Vec::new();
        for w in words {
            let (k, v) = w
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("expected key=value, got '{w}'")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad number for {k}: '{v}'")))?;
            params.push((k.trim().to_ascii_lowercase(), v));
        }
        let take = |names: &[&str]| -> Result<f64> {
            params
                .iter()
                .find(|(k, _)| names.contains(&k.as_str()))
                .map(|(_, v)| *v)
                .ok_or_else(|| Error::Parse(format!("{tag}: missing parameter {}", names[0])))
        };
        let allowed: &[&str] = match tag.as_str() {
            "shannon" | "newton" => &[],
            "tsallis" => &["t"],
            "kaniadakis" => &["k"],
            "abe" => &["z"],
            "gamma" => &["g", "gamma"],
            "kls" => &["k", "r"],
            "general" | "generalab" => &["a", "b"],
            "alpha" => &["alpha", "a"],
            other => return Err(Error::Parse(format!("unknown entropy family '{other}'"))),
        };
        if let Some((k, _)) = params.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            return Err(Error::Parse(format!("{tag}: unexpected parameter '{k}'")));
        }
        let family = match tag.as_str() {
            "shannon" => EntropyFamily::Shannon,
            "newton" => EntropyFamily::Newton,
            "tsallis" => EntropyFamily::Tsallis { t: take(&["t"])? },
            "kaniadakis" => EntropyFamily::Kaniadakis { k: take(&["k"])? },
            "abe" => EntropyFamily::Abe { z: take(&["z"])? },
            "gamma" => EntropyFamily::Gamma { g: take(&["g", "gamma"])? },
            "kls" => EntropyFamily::Kls {
                k: take(&["k"])?,
                r: take(&["r"])?,
            },
            "general" | "generalab" => EntropyFamily::GeneralAb {
                a: take(&["a"])?,
                b: take(&["b"])?,
            },
            "alpha" => EntropyFamily::Alpha {
                alpha: take(&["alpha", "a"])?,
            },
            _ => unreachable!(),
        };
        family.validate()?;
        Ok(family)
    }
}
