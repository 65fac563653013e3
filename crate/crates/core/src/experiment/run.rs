//! The Monte Carlo harness: one host, many seeded trials, one CSV row each.

use std::fmt::{self, Write as _};
use std::path::PathBuf;

use rayon::prelude::*;
use thiserror::Error;

use crate::experiment::config::{Check, ExperimentConfig, HostSource};
use crate::generators::GeneratorError;
use crate::graph::Graph;
use crate::io::{read_edge_list, FormatError};
use crate::percolation::{peel, percolate, Advisory, PercolationParams};
use crate::prob::Probability;
use crate::rng::derive_seed;
use crate::spectral::{second_eigenvalue_abs, SpectralError, SpectralOptions, SpectralSummary};
use crate::structure::certificate::giant_expansion_certificate;

/// Environment variable capping the worker threads.
pub const THREADS_ENV: &str = "PERC_LAB_THREADS";

pub const CSV_HEADER: &str = "experiment_id,trial,seed,n,d,lambda,c,p,s0_size,out_size,peel_iterations,survivor_count,\
giant_size,second_comp_size,max_out_comp,out_comp_bound,all_out_balanced,min_sampled_core_expansion,core_bound_pd13,\
theorem_bound,certificate_pass,status";

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("generating host: {0}")]
    Generator(#[from] GeneratorError),
    #[error("loading host: {0}")]
    Format(#[from] FormatError),
    #[error("measuring lambda: {0}")]
    Spectral(#[from] SpectralError),
    #[error("no p values to run")]
    NoProbabilities,
    #[error("writing {path}: {source}")]
    Output { path: PathBuf, source: std::io::Error },
    #[error("thread pool: {0}")]
    Threads(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    /// Worker threads; `None` uses rayon's default.
    Parallel(Option<usize>),
}

impl Execution {
    /// Parallel unless `PERC_LAB_THREADS` caps it; a cap of 1 is serial.
    pub fn from_env() -> Self {
        match std::env::var(THREADS_ENV).ok().and_then(|v| v.trim().parse::<usize>().ok()) {
            Some(0) | None => Execution::Parallel(None),
            Some(1) => Execution::Serial,
            Some(k) => Execution::Parallel(Some(k)),
        }
    }
}

/// Measurements of one successful trial.
#[derive(Debug, Clone, PartialEq)]
pub struct TrialMeasures {
    pub s0_size: usize,
    pub out_size: usize,
    pub peel_iterations: usize,
    pub survivor_count: usize,
    pub giant_size: usize,
    pub second_comp_size: usize,
    pub max_out_comp: usize,
    pub out_comp_bound: f64,
    pub all_out_balanced: bool,
    pub min_sampled_core_expansion: f64,
    pub core_bound_pd13: f64,
    pub theorem_bound: f64,
    pub certificate_pass: bool,
    pub core_expansion_pass: bool,
    pub failed_conditions: Vec<&'static str>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentRecord {
    pub experiment_id: String,
    pub p_index: usize,
    pub trial: usize,
    pub seed: u64,
    pub n: usize,
    pub d: usize,
    pub lambda: f64,
    pub c: f64,
    pub p: Probability,
    pub advisories: Vec<Advisory>,
    pub result: Result<TrialMeasures, String>,
}

impl ExperimentRecord {
    /// `|OUT| <= exp(-c sqrt(d) / 12) n`.
    pub fn out_size_bound(&self) -> f64 {
        (-self.lambda / 12.0).exp() * self.n as f64
    }

    /// Outcome of a per-trial check; errors fail every check.
    pub fn check(&self, check: Check) -> Option<bool> {
        let m = match &self.result {
            Ok(m) => m,
            Err(_) => return Some(false),
        };
        Some(match check {
            Check::OutSize => m.out_size as f64 <= self.out_size_bound(),
            Check::OutComponents => m.max_out_comp as f64 <= m.out_comp_bound,
            Check::Balance => m.all_out_balanced,
            Check::CoreExpansion => m.core_expansion_pass,
            Check::Certificate => m.certificate_pass,
            Check::S0Concentration => return None,
        })
    }

    pub fn status(&self) -> String {
        match &self.result {
            Err(e) => format!("error: {}", e.replace([',', '\n'], ";")),
            Ok(_) if self.advisories.is_empty() => "ok".to_string(),
            Ok(_) => {
                let flags: Vec<String> = self.advisories.iter().map(|a| a.to_string()).collect();
                format!("flagged: {}", flags.join(";"))
            }
        }
    }

    pub fn csv_row(&self) -> String {
        let mut row = format!(
            "{},{},{},{},{},{},{},{}",
            self.experiment_id,
            self.trial,
            self.seed,
            self.n,
            self.d,
            fmt_g9(self.lambda),
            fmt_g9(self.c),
            self.p
        );
        match &self.result {
            Ok(m) => {
                let _ = write!(
                    row,
                    ",{},{},{},{},{},{},{},{},{},{},{},{},{}",
                    m.s0_size,
                    m.out_size,
                    m.peel_iterations,
                    m.survivor_count,
                    m.giant_size,
                    m.second_comp_size,
                    m.max_out_comp,
                    fmt_g9(m.out_comp_bound),
                    u8::from(m.all_out_balanced),
                    fmt_g9(m.min_sampled_core_expansion),
                    fmt_g9(m.core_bound_pd13),
                    fmt_g9(m.theorem_bound),
                    u8::from(m.certificate_pass)
                );
            }
            Err(_) => row.push_str(&",".repeat(13)),
        }
        row.push(',');
        row.push_str(&self.status());
        row
    }
}

/// Formats like C's `%.9g`.
pub fn fmt_g9(x: f64) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return if x.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{x:.8e}");
    let (mantissa, exp) = sci.split_once('e').unwrap();
    let exp: i32 = exp.parse().unwrap();
    if !(-4..9).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (8 - exp) as usize;
        strip_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// Pass counts of one p value.
#[derive(Debug, Clone, PartialEq)]
pub struct PSummary {
    pub p: Probability,
    pub trials: usize,
    pub errors: usize,
    pub flagged: usize,
    /// Per enabled per-trial check: trials passed.
    pub passes: Vec<(Check, usize)>,
    pub out_size_bound: f64,
    pub out_comp_bound: f64,
    pub core_bound: f64,
    pub s0_mean: f64,
    pub s0_stddev: f64,
    /// Largest `peel_iterations / |S0|` over trials with nonempty `S0`.
    pub max_rounds_per_s0: Option<f64>,
    /// Trials whose round count exceeds `2 |S0|`.
    pub rounds_above_2s0: usize,
    /// `stddev(s0) <= 3 sqrt(mean)`; `None` when the check is off.
    pub s0_band: Option<bool>,
}

impl PSummary {
    pub fn passed(&self) -> bool {
        self.errors == 0 && self.passes.iter().all(|&(_, k)| k == self.trials) && self.s0_band != Some(false)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentOutcome {
    pub config: ExperimentConfig,
    pub spectrum: SpectralSummary,
    pub n: usize,
    pub records: Vec<ExperimentRecord>,
    pub summaries: Vec<PSummary>,
}

impl ExperimentOutcome {
    pub fn csv(&self) -> String {
        let mut out = String::with_capacity(256 * (self.records.len() + 1));
        out.push_str(CSV_HEADER);
        out.push('\n');
        for r in &self.records {
            out.push_str(&r.csv_row());
            out.push('\n');
        }
        out
    }

    /// True iff every enabled check passed in every trial.
    pub fn all_passed(&self) -> bool {
        self.summaries.iter().all(PSummary::passed)
    }
}

impl fmt::Display for ExperimentOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = &self.spectrum;
        writeln!(
            f,
            "experiment {}: n={} d={} lambda={} c={} method={} iterations={} converged={}",
            self.config.id,
            self.n,
            s.d,
            fmt_g9(s.lambda),
            fmt_g9(s.c),
            s.method.as_str(),
            s.iterations,
            s.converged
        )?;
        for p in &self.summaries {
            writeln!(f, "p={} trials={} errors={} flagged={}", p.p, p.trials, p.errors, p.flagged)?;
            for &(check, k) in &p.passes {
                let rule = match check {
                    Check::OutSize => format!("|OUT| <= exp(-c sqrt(d)/12) n = {}", fmt_g9(p.out_size_bound)),
                    Check::OutComponents => format!("max OUT component <= 61 log2(n)/(c sqrt(d)) = {}", fmt_g9(p.out_comp_bound)),
                    Check::Balance => "every OUT component at least 1/3 S0".to_string(),
                    Check::CoreExpansion => format!("sampled core expansion >= pd/13 = {}", fmt_g9(p.core_bound)),
                    Check::Certificate => "all certificate conditions".to_string(),
                    Check::S0Concentration => unreachable!(),
                };
                writeln!(f, "  {:<17} {k}/{}  {rule}", check.as_str(), p.trials)?;
            }
            if let Some(r) = p.max_rounds_per_s0 {
                writeln!(f, "  peel rounds / |S0| at most {} ({} trials above 2)", fmt_g9(r), p.rounds_above_2s0)?;
            }
            if let Some(ok) = p.s0_band {
                writeln!(
                    f,
                    "  {:<17} {}  stddev(s0)={} <= 3 sqrt(mean)={} (harness sanity band, not a theorem bound)",
                    Check::S0Concentration.as_str(),
                    if ok { "pass" } else { "fail" },
                    fmt_g9(p.s0_stddev),
                    fmt_g9(3.0 * p.s0_mean.sqrt())
                )?;
            }
        }
        write!(f, "overall: {}", if self.all_passed() { "pass" } else { "fail" })
    }
}

pub fn load_host(config: &ExperimentConfig) -> Result<Graph, ExperimentError> {
    Ok(match &config.host {
        HostSource::Generate(spec) => spec.generate()?,
        HostSource::EdgeList(path) => read_edge_list(path)?,
    })
}

/// Runs the configured experiment with the thread cap from the environment
/// and writes the CSV when an output path is set.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentOutcome, ExperimentError> {
    let outcome = run_experiment_with(config, Execution::from_env())?;
    if let Some(path) = &config.output {
        std::fs::write(path, outcome.csv()).map_err(|source| ExperimentError::Output { path: path.clone(), source })?;
    }
    Ok(outcome)
}

pub fn run_experiment_with(config: &ExperimentConfig, exec: Execution) -> Result<ExperimentOutcome, ExperimentError> {
    let threads = match exec {
        Execution::Serial => 1,
        Execution::Parallel(k) => k.unwrap_or(0),
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| ExperimentError::Threads(e.to_string()))?;
    pool.install(|| run_on_host(config, load_host(config)?))
}

/// Runs every trial on an already built host.
pub fn run_on_host(config: &ExperimentConfig, host: Graph) -> Result<ExperimentOutcome, ExperimentError> {
    let opts = SpectralOptions { tol: config.spectral_tol, max_iter: config.spectral_max_iter, ..SpectralOptions::default() };
    let spectrum = second_eigenvalue_abs(&host, &opts)?;
    let (d, lambda) = (spectrum.d, spectrum.lambda);
    let ps = config.p_values.resolve(lambda, d);
    if ps.is_empty() {
        return Err(ExperimentError::NoProbabilities);
    }
    let jobs: Vec<(usize, usize)> = (0..ps.len()).flat_map(|i| (0..config.trials).map(move |t| (i, t))).collect();
    let records: Vec<ExperimentRecord> =
        jobs.par_iter().map(|&(i, t)| run_trial(config, &host, &spectrum, i, ps[i], t)).collect();
    let summaries = ps.iter().enumerate().map(|(i, &p)| summarize(config, p, &records[i * config.trials..(i + 1) * config.trials])).collect();
    Ok(ExperimentOutcome { config: config.clone(), spectrum, n: host.n(), records, summaries })
}

fn run_trial(
    config: &ExperimentConfig,
    host: &Graph,
    spectrum: &SpectralSummary,
    p_index: usize,
    p: Probability,
    trial: usize,
) -> ExperimentRecord {
    let (n, d, lambda) = (host.n(), spectrum.d, spectrum.lambda);
    let seed = derive_seed(config.base_seed, trial as u64);
    let params = PercolationParams::new(p, seed, d);
    let gp = percolate(host, p, seed);
    let result = peel(&gp, p, d).map_err(|e| e.to_string()).map(|trace| {
        let cert = giant_expansion_certificate(&gp, &trace, lambda, d, p, config.samples, seed);
        TrialMeasures {
            s0_size: trace.s0.len(),
            out_size: trace.out.len(),
            peel_iterations: trace.iterations(),
            survivor_count: trace.survivors.len(),
            giant_size: cert.giant_size,
            second_comp_size: cert.second_component_size,
            max_out_comp: cert.max_out_component,
            out_comp_bound: cert.out.size_bound,
            all_out_balanced: cert.out.all_balanced,
            min_sampled_core_expansion: cert.core_expansion.min_ratio,
            core_bound_pd13: cert.core_expansion.bound,
            theorem_bound: cert.implied_bound,
            certificate_pass: cert.passed(),
            core_expansion_pass: cert.core_expansion.passed,
            failed_conditions: cert.conditions.iter().filter(|c| !c.passed).map(|c| c.name).collect(),
        }
    });
    ExperimentRecord {
        experiment_id: config.id.clone(),
        p_index,
        trial,
        seed,
        n,
        d,
        lambda,
        c: spectrum.c,
        p,
        advisories: params.advisories(lambda),
        result,
    }
}

fn summarize(config: &ExperimentConfig, p: Probability, rows: &[ExperimentRecord]) -> PSummary {
    let passes = config
        .checks
        .iter()
        .filter(|&&c| c != Check::S0Concentration)
        .map(|&c| (c, rows.iter().filter(|r| r.check(c) == Some(true)).count()))
        .collect();
    let s0: Vec<f64> = rows.iter().filter_map(|r| r.result.as_ref().ok()).map(|m| m.s0_size as f64).collect();
    let (mean, stddev) = mean_stddev(&s0);
    let measured: Vec<&TrialMeasures> = rows.iter().filter_map(|r| r.result.as_ref().ok()).collect();
    let max_rounds_per_s0 = measured
        .iter()
        .filter(|m| m.s0_size > 0)
        .map(|m| m.peel_iterations as f64 / m.s0_size as f64)
        .reduce(f64::max);
    let rounds_above_2s0 = measured.iter().filter(|m| m.peel_iterations > 2 * m.s0_size).count();
    let first = rows.first().expect("at least one trial");
    let bounds = rows.iter().find_map(|r| r.result.as_ref().ok());
    PSummary {
        p,
        trials: rows.len(),
        errors: rows.iter().filter(|r| r.result.is_err()).count(),
        flagged: rows.iter().filter(|r| !r.advisories.is_empty()).count(),
        passes,
        out_size_bound: first.out_size_bound(),
        out_comp_bound: bounds.map_or(f64::NAN, |m| m.out_comp_bound),
        core_bound: p.as_f64() * first.d as f64 / 13.0,
        s0_mean: mean,
        s0_stddev: stddev,
        max_rounds_per_s0,
        rounds_above_2s0,
        s0_band: config.enabled(Check::S0Concentration).then(|| !s0.is_empty() && stddev <= 3.0 * mean.sqrt()),
    }
}

/// Sample mean and (n-1) standard deviation.
fn mean_stddev(xs: &[f64]) -> (f64, f64) {
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let mean = xs.iter().sum::<f64>() / xs.len() as f64;
    if xs.len() == 1 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (xs.len() - 1) as f64;
    (mean, var.sqrt())
}
