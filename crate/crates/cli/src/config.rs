//! Flat `key = value` run configuration.
//!
//! A config file holds one `key = value` per line; `#` starts a comment. Command-line
//! `--key value` (or `--key=value`) pairs override file entries. Keys accept `-` in
//! place of `_`. Relative paths are resolved against the config file's directory, or
//! the working directory for paths given on the command line.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dsgm_core::linear::Boundary;
use dsgm_core::solver::{Mode, SolverConfig};
use dsgm_core::{DivergenceSpec, EntropyFamily, FactorChoice, Form, Variant};

use crate::CliError;

const KNOWN_KEYS: &[&str] = &[
    // divergence
    "family", "t", "k", "z", "g", "gamma", "r", "a", "b", "alpha", "form", "variant", "factor",
    // solver
    "mode", "max_iters", "grad_tol", "value_tol", "armijo_c", "backtrack_ratio", "step_safety",
    "sum_constraint",
    // problem files
    "operator", "kernel", "boundary", "measurement", "x0", "p", "q", "out_dir",
    // synthetic problems and gradient checks
    "seed", "n", "kernel_width", "kernel_sigma", "spikes", "poisson", "tol", "perturb", "source",
];

const FAMILY_PARAMS: &[&str] = &["t", "k", "z", "g", "gamma", "r", "a", "b", "alpha"];

#[derive(Debug, Clone)]
struct Entry {
    value: String,
    base: PathBuf,
}

#[derive(Debug, Clone, Default)]
pub struct RunConfig {
    entries: BTreeMap<String, Entry>,
}

fn normalize(key: &str) -> String {
    key.trim().trim_start_matches('-').replace('-', "_").to_ascii_lowercase()
}

impl RunConfig {
    pub fn load(file: Option<&Path>, overrides: &[String]) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(path) = file {
            let text = fs::read_to_string(path)
                .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
            let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
            for (i, line) in text.lines().enumerate() {
                let line = line.split('#').next().unwrap_or("").trim();
                if line.is_empty() {
                    continue;
                }
                let (k, v) = line.split_once('=').ok_or_else(|| {
                    CliError::Usage(format!("{}:{}: expected key = value", path.display(), i + 1))
                })?;
                cfg.insert(k, v.trim(), &base)?;
            }
        }
        let mut args = overrides.iter();
        while let Some(arg) = args.next() {
            if !arg.starts_with("--") {
                return Err(CliError::Usage(format!("expected --key, got '{arg}'")));
            }
            let (k, v) = match arg.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = args
                        .next()
                        .ok_or_else(|| CliError::Usage(format!("missing value for {arg}")))?;
                    (arg.clone(), v.clone())
                }
            };
            cfg.insert(&k, &v, Path::new(""))?;
        }
        Ok(cfg)
    }

    fn insert(&mut self, key: &str, value: &str, base: &Path) -> Result<(), CliError> {
        let key = normalize(key);
        if !KNOWN_KEYS.contains(&key.as_str()) {
            return Err(CliError::Usage(format!("unknown config key '{key}'")));
        }
        self.entries.insert(
            key,
            Entry {
                value: value.to_string(),
                base: base.to_path_buf(),
            },
        );
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(|e| e.value.as_str())
    }

    pub fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, CliError>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| CliError::Usage(format!("bad value for {key}: '{v}' ({e})")))
            })
            .transpose()
    }

    pub fn parse_or<T: FromStr>(&self, key: &str, default: T) -> Result<T, CliError>
    where
        T::Err: std::fmt::Display,
    {
        Ok(self.parse(key)?.unwrap_or(default))
    }

    pub fn flag(&self, key: &str) -> Result<bool, CliError> {
        match self.get(key).map(|v| v.to_ascii_lowercase()) {
            None => Ok(false),
            Some(v) => match v.as_str() {
                "true" | "yes" | "1" | "on" => Ok(true),
                "false" | "no" | "0" | "off" => Ok(false),
                _ => Err(CliError::Usage(format!("bad boolean for {key}: '{v}'"))),
            },
        }
    }

    pub fn path(&self, key: &str) -> Option<PathBuf> {
        self.entries.get(key).map(|e| e.base.join(&e.value))
    }

    pub fn require_path(&self, key: &str) -> Result<PathBuf, CliError> {
        self.path(key)
            .ok_or_else(|| CliError::Usage(format!("missing required key '{key}'")))
    }

    pub fn family(&self) -> Result<EntropyFamily, CliError> {
        let name = self
            .get("family")
            .ok_or_else(|| CliError::Usage("missing required key 'family'".into()))?;
        let mut text = name.to_string();
        for p in FAMILY_PARAMS {
            if let Some(v) = self.get(p) {
                text.push_str(&format!(" {p}={v}"));
            }
        }
        let family: EntropyFamily = text.parse()?;
        Ok(family)
    }

    pub fn spec(&self) -> Result<DivergenceSpec, CliError> {
        let family = self.family()?;
        let form: Form = self.parse_or("form", Form::Csiszar)?;
        let variant = match self.get("variant").map(str::to_ascii_lowercase).as_deref() {
            None | Some("plain") => Variant::Plain,
            Some("invariant") => Variant::Invariant,
            Some(other) => return Err(CliError::Usage(format!("unknown variant '{other}'"))),
        };
        let factor = match self.get("factor").map(str::to_ascii_lowercase).as_deref() {
            None | Some("reference") => FactorChoice::Reference,
            Some("nominal") => FactorChoice::Nominal,
            Some(other) => return Err(CliError::Usage(format!("unknown factor '{other}'"))),
        };
        Ok(DivergenceSpec::new(family, form, variant, factor)?)
    }

    pub fn solver(&self, spec: DivergenceSpec) -> Result<SolverConfig, CliError> {
        let mode: Mode = self.parse_or("mode", Mode::Additive)?;
        let mut c = SolverConfig::new(mode, spec);
        c.max_iters = self.parse_or("max_iters", c.max_iters)?;
        c.grad_tol = self.parse_or("grad_tol", c.grad_tol)?;
        c.value_tol = self.parse_or("value_tol", c.value_tol)?;
        c.armijo_c = self.parse_or("armijo_c", c.armijo_c)?;
        c.backtrack_ratio = self.parse_or("backtrack_ratio", c.backtrack_ratio)?;
        c.step_safety = self.parse_or("step_safety", c.step_safety)?;
        c.sum_constraint = self.parse("sum_constraint")?;
        c.validate()?;
        Ok(c)
    }

    pub fn boundary(&self) -> Result<Boundary, CliError> {
        self.parse_or("boundary", Boundary::Periodic)
    }
}
