//! Line-oriented experiment configuration and the built-in presets.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use thiserror::Error;

use crate::generators::{Family, GeneratorSpec};
use crate::prob::Probability;

/// Decimal places kept when `p = auto` is resolved.
pub const AUTO_P_DIGITS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Check {
    OutSize,
    OutComponents,
    Balance,
    CoreExpansion,
    Certificate,
    S0Concentration,
}

impl Check {
    pub const ALL: [Check; 6] =
        [Check::OutSize, Check::OutComponents, Check::Balance, Check::CoreExpansion, Check::Certificate, Check::S0Concentration];

    pub fn as_str(&self) -> &'static str {
        match self {
            Check::OutSize => "out-size",
            Check::OutComponents => "out-components",
            Check::Balance => "balance",
            Check::CoreExpansion => "core-expansion",
            Check::Certificate => "certificate",
            Check::S0Concentration => "s0-concentration",
        }
    }
}

impl fmt::Display for Check {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Check {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Check::ALL.into_iter().find(|c| c.as_str() == s).ok_or_else(|| format!("unknown check {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PValues {
    /// `5c/sqrt(d)` from the measured host, rounded, capped at 1.
    Auto,
    List(Vec<Probability>),
}

impl PValues {
    pub fn resolve(&self, lambda: f64, d: usize) -> Vec<Probability> {
        match self {
            PValues::Auto => vec![auto_p(lambda, d)],
            PValues::List(ps) => ps.clone(),
        }
    }
}

/// `5c/sqrt(d) = 5 lambda / d` rounded up to four decimals, so the
/// resolved p never falls below the hypothesis it stands for.
pub fn auto_p(lambda: f64, d: usize) -> Probability {
    Probability::rounded_up(5.0 * lambda / d as f64, AUTO_P_DIGITS)
}

#[derive(Debug, Clone, PartialEq)]
pub enum HostSource {
    Generate(GeneratorSpec),
    EdgeList(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub id: String,
    pub host: HostSource,
    pub p_values: PValues,
    pub trials: usize,
    pub base_seed: u64,
    pub checks: Vec<Check>,
    pub output: Option<PathBuf>,
    /// Sampled connected sets per trial for the core expansion check.
    pub samples: usize,
    pub spectral_tol: f64,
    pub spectral_max_iter: usize,
}

impl ExperimentConfig {
    pub fn enabled(&self, check: Check) -> bool {
        self.checks.contains(&check)
    }
}

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const DEFAULT_SPECTRAL_TOL: f64 = 1e-9;
pub const DEFAULT_SPECTRAL_MAX_ITER: usize = 2_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key {key:?}")]
    UnknownKey { line: usize, key: String },
    #[error("line {line}: bad value for {key}: {reason}")]
    Malformed { line: usize, key: String, reason: String },
    #[error("line {line}: expected `key = value`")]
    Syntax { line: usize },
    #[error("line {line}: key {key} given twice")]
    Duplicate { line: usize, key: String },
    #[error("line {line}: missing required key {key}")]
    Missing { line: usize, key: &'static str },
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
}

const KEYS: [&str; 15] = [
    "id", "preset", "family", "n", "d", "q", "graph", "seed", "p", "trials", "checks", "output", "samples", "spectral_tol",
    "spectral_max_iter",
];

/// Values applied on top of a file, as a command line does.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Overrides {
    pub trials: Option<usize>,
    pub seed: Option<u64>,
    pub output: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn apply(&mut self, o: &Overrides) -> Result<(), ConfigError> {
        if let Some(t) = o.trials {
            if t == 0 {
                return Err(ConfigError::Malformed { line: 0, key: "trials".into(), reason: "must be at least 1".into() });
            }
            self.trials = t;
        }
        if let Some(s) = o.seed {
            self.base_seed = s;
            if let HostSource::Generate(g) = &mut self.host {
                g.seed = s;
            }
        }
        if let Some(out) = &o.output {
            self.output = Some(out.clone());
        }
        Ok(())
    }
}

#[derive(Default)]
struct Raw {
    entries: Vec<(usize, String, String)>,
    last_line: usize,
}

impl Raw {
    fn get(&self, key: &str) -> Option<(usize, &str)> {
        self.entries.iter().find(|(_, k, _)| k == key).map(|(l, _, v)| (*l, v.as_str()))
    }

    fn parse<T: FromStr>(&self, key: &str) -> Result<Option<T>, ConfigError>
    where
        T::Err: fmt::Display,
    {
        match self.get(key) {
            None => Ok(None),
            Some((line, v)) => v
                .parse()
                .map(Some)
                .map_err(|e: T::Err| ConfigError::Malformed { line, key: key.into(), reason: e.to_string() }),
        }
    }
}

/// Parses `key = value` lines. `#` starts a comment; blank lines are
/// ignored. A `preset` key seeds every value, and the file's other keys
/// override it.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    let mut raw = Raw::default();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        raw.last_line = line_no;
        let body = line.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        let (key, value) = body.split_once('=').ok_or(ConfigError::Syntax { line: line_no })?;
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(ConfigError::UnknownKey { line: line_no, key: key.into() });
        }
        if raw.get(key).is_some() {
            return Err(ConfigError::Duplicate { line: line_no, key: key.into() });
        }
        if value.is_empty() {
            return Err(ConfigError::Malformed { line: line_no, key: key.into(), reason: "empty value".into() });
        }
        raw.entries.push((line_no, key.into(), value.into()));
    }
    let end = raw.last_line + 1;
    let base = match raw.get("preset") {
        Some((line, name)) => Some(preset(name).map_err(|_| ConfigError::Malformed {
            line,
            key: "preset".into(),
            reason: format!("unknown preset {name:?}"),
        })?),
        None => None,
    };

    let seed: Option<u64> = raw.parse("seed")?;
    let base_seed = seed.or(base.as_ref().map(|b| b.base_seed)).ok_or(ConfigError::Missing { line: end, key: "seed" })?;

    let host = if let Some((line, path)) = raw.get("graph") {
        for other in ["family", "n", "d", "q"] {
            if let Some((l, _)) = raw.get(other) {
                return Err(ConfigError::Malformed {
                    line: l.max(line),
                    key: other.into(),
                    reason: "cannot be combined with graph".into(),
                });
            }
        }
        HostSource::EdgeList(PathBuf::from(path))
    } else {
        let base_spec = match base.as_ref().map(|b| &b.host) {
            Some(HostSource::Generate(g)) => Some(g.clone()),
            _ => None,
        };
        let family = match raw.get("family") {
            Some((line, f)) => f
                .parse::<Family>()
                .map_err(|e| ConfigError::Malformed { line, key: "family".into(), reason: e.to_string() })?,
            None => base_spec.as_ref().map(|g| g.family).ok_or(ConfigError::Missing { line: end, key: "family" })?,
        };
        let n_key = if family == Family::Paley { "q" } else { "n" };
        let n = match raw.parse::<usize>(n_key)? {
            Some(n) => n,
            None => base_spec
                .as_ref()
                .filter(|g| g.family == family)
                .map(|g| g.n)
                .ok_or(ConfigError::Missing { line: end, key: if family == Family::Paley { "q" } else { "n" } })?,
        };
        let d = match raw.parse::<usize>("d")? {
            Some(d) => Some(d),
            None => base_spec.as_ref().filter(|g| g.family == family).and_then(|g| g.d),
        };
        if family == Family::RandomRegular && d.is_none() {
            return Err(ConfigError::Missing { line: end, key: "d" });
        }
        HostSource::Generate(GeneratorSpec { family, n, d, seed: base_seed })
    };

    let trials = match raw.parse::<usize>("trials")? {
        Some(0) => {
            return Err(ConfigError::Malformed {
                line: raw.get("trials").unwrap().0,
                key: "trials".into(),
                reason: "must be at least 1".into(),
            })
        }
        Some(t) => t,
        None => base.as_ref().map(|b| b.trials).ok_or(ConfigError::Missing { line: end, key: "trials" })?,
    };

    let p_values = match raw.get("p") {
        Some((_, "auto")) => PValues::Auto,
        Some((line, list)) => {
            let ps = list
                .split(',')
                .map(|s| s.trim().parse::<Probability>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| ConfigError::Malformed { line, key: "p".into(), reason: e.to_string() })?;
            PValues::List(ps)
        }
        None => base.as_ref().map_or(PValues::Auto, |b| b.p_values.clone()),
    };

    let checks = match raw.get("checks") {
        Some((line, list)) => {
            let mut cs = Vec::new();
            for item in list.split(',') {
                let c = item
                    .trim()
                    .parse::<Check>()
                    .map_err(|reason| ConfigError::Malformed { line, key: "checks".into(), reason })?;
                if !cs.contains(&c) {
                    cs.push(c);
                }
            }
            cs.sort();
            cs
        }
        None => base.as_ref().map_or_else(|| Check::ALL.to_vec(), |b| b.checks.clone()),
    };

    let samples = raw.parse("samples")?.or(base.as_ref().map(|b| b.samples)).unwrap_or(DEFAULT_SAMPLES);
    let spectral_tol: f64 =
        raw.parse("spectral_tol")?.or(base.as_ref().map(|b| b.spectral_tol)).unwrap_or(DEFAULT_SPECTRAL_TOL);
    if spectral_tol.is_nan() || spectral_tol <= 0.0 {
        let line = raw.get("spectral_tol").map_or(end, |(l, _)| l);
        return Err(ConfigError::Malformed { line, key: "spectral_tol".into(), reason: "must be positive".into() });
    }
    let spectral_max_iter = raw
        .parse("spectral_max_iter")?
        .or(base.as_ref().map(|b| b.spectral_max_iter))
        .unwrap_or(DEFAULT_SPECTRAL_MAX_ITER);
    let id = raw
        .get("id")
        .map(|(_, v)| v.to_string())
        .or(base.as_ref().map(|b| b.id.clone()))
        .unwrap_or_else(|| "experiment".to_string());
    if id.contains(',') || id.contains('"') {
        let line = raw.get("id").map_or(end, |(l, _)| l);
        return Err(ConfigError::Malformed { line, key: "id".into(), reason: "must not contain commas or quotes".into() });
    }
    let output = raw.get("output").map(|(_, v)| PathBuf::from(v)).or(base.and_then(|b| b.output));

    Ok(ExperimentConfig { id, host, p_values, trials, base_seed, checks, output, samples, spectral_tol, spectral_max_iter })
}

pub const PRESETS: [&str; 3] = ["kn-boundary", "random-regular-main", "cycle-negative-control"];

/// Built-in configurations.
///
/// * `kn-boundary`: `K_200` with p at 0.2, 1, 5 and 25 times `1/(n-1)`.
/// * `random-regular-main`: a 256-regular graph on 20000 vertices at `p = auto`.
/// * `cycle-negative-control`: `C_1000` at p = 0.6, where the spectral bounds say nothing.
pub fn preset(name: &str) -> Result<ExperimentConfig, ConfigError> {
    let config = |id: &str, spec: GeneratorSpec, p_values, trials| ExperimentConfig {
        id: id.to_string(),
        host: HostSource::Generate(spec),
        p_values,
        trials,
        base_seed: 1,
        checks: Check::ALL.to_vec(),
        output: None,
        samples: DEFAULT_SAMPLES,
        spectral_tol: DEFAULT_SPECTRAL_TOL,
        spectral_max_iter: DEFAULT_SPECTRAL_MAX_ITER,
    };
    match name {
        "kn-boundary" => {
            let n = 200;
            let ps = [0.2, 1.0, 5.0, 25.0].iter().map(|m| Probability::rounded(m / (n - 1) as f64, 6)).collect();
            Ok(config(
                name,
                GeneratorSpec { family: Family::Complete, n, d: None, seed: 1 },
                PValues::List(ps),
                10,
            ))
        }
        "random-regular-main" => Ok(config(
            name,
            GeneratorSpec { family: Family::RandomRegular, n: 20_000, d: Some(256), seed: 1 },
            PValues::Auto,
            10,
        )),
        "cycle-negative-control" => Ok(config(
            name,
            GeneratorSpec { family: Family::Cycle, n: 1000, d: None, seed: 1 },
            PValues::List(vec!["0.6".parse().unwrap()]),
            10,
        )),
        other => Err(ConfigError::UnknownPreset(other.to_string())),
    }
}
