use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use perc_lab::experiment::{self, Overrides};
use perc_lab::generators::{Family, GeneratorSpec};
use perc_lab::io::{parse_trace, read_edge_list, write_edge_list, write_trace};
use perc_lab::percolation::{peel, percolate, verify_trace, PercolationParams};
use perc_lab::spectral::{density_bound_check, mixing_lemma_audit, second_eigenvalue_abs, spectral_expansion_lower_bound, SpectralOptions};
use perc_lab::structure::{
    exact_edge_expansion, expansion_upper_bound_with, giant_expansion_certificate, BoundedSearch, SubsetRule,
};
use perc_lab::{Graph, Probability};

#[derive(Parser)]
#[command(name = "perc-lab", version, about = "Edge percolation on spectral expanders")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Rule {
    Strict,
    Atmost,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a host graph as an edge list.
    Gen {
        #[arg(long)]
        family: Family,
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        d: Option<usize>,
        /// Prime order of a Paley graph.
        #[arg(long)]
        q: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Measure lambda and audit the mixing lemma and small-set density.
    Spectrum {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, default_value_t = 100_000)]
        max_iter: usize,
        /// Random (S, T) pairs for the mixing audit.
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the audit as a one-row CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
    },
    /// Keep each edge with probability p.
    Percolate {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: Probability,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Peel a percolated graph and print its trace.
    Peel {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        percolated: PathBuf,
        #[arg(long)]
        p: Probability,
        #[arg(long)]
        d: usize,
        /// Write the trace here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyze OUT and the core of a peeled percolation.
    Analyze {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        percolated: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        p: Probability,
        #[arg(long)]
        d: usize,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Edge expansion, exact for small graphs or a witness-backed bound.
    Expansion {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long, conflicts_with = "bounded")]
        exact: bool,
        #[arg(long)]
        bounded: bool,
        #[arg(long, value_enum, default_value_t = Rule::Atmost)]
        rule: Rule,
        #[arg(long, default_value_t = 32)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run a seeded experiment from a config file or a preset.
    Experiment {
        #[arg(long, required_unless_present = "preset")]
        config: Option<PathBuf>,
        #[arg(long, conflicts_with = "config")]
        preset: Option<String>,
        #[arg(long)]
        trials: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn load(path: &Path) -> Result<Graph> {
    read_edge_list(path).with_context(|| format!("reading {}", path.display()))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("writing {}", path.display()))
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode> {
    let mut stdout = std::io::stdout().lock();
    match cli.command {
        Command::Gen { family, n, d, q, seed, out } => {
            let n = match (family, n, q) {
                (Family::Paley, _, Some(q)) | (_, Some(q), None) => q,
                (Family::Paley, None, None) => bail!("paley needs --q"),
                (_, None, _) => bail!("{family} needs --n"),
                (_, Some(_), Some(_)) => bail!("--q only applies to paley"),
            };
            let g = GeneratorSpec { family, n, d, seed }.generate()?;
            write(&out, &write_edge_list(&g))?;
            writeln!(stdout, "n={}\nm={}", g.n(), g.m())?;
        }
        Command::Spectrum { graph, tol, max_iter, samples, seed, csv } => {
            let g = load(&graph)?;
            let s = second_eigenvalue_abs(&g, &SpectralOptions { tol, max_iter, ..SpectralOptions::default() })?;
            let audit = mixing_lemma_audit(&g, s.lambda, samples, seed)?;
            let density = density_bound_check(&g, s.lambda, 1, samples.min(1000), seed)?;
            let lower = spectral_expansion_lower_bound(&g, s.lambda)?;
            writeln!(stdout, "n={}\nd={}\nlambda={}\nc={}", g.n(), s.d, s.lambda, s.c)?;
            writeln!(stdout, "method={}\nresidual={}\niterations={}\nconverged={}", s.method.as_str(), s.residual, s.iterations, s.converged)?;
            if let (Some(second), Some(smallest)) = (s.second, s.smallest) {
                writeln!(stdout, "mu2={second}\nmu_min={smallest}")?;
            }
            writeln!(stdout, "expansion_lower_bound={lower}")?;
            writeln!(stdout, "mixing_samples={}\nmixing_max_slack={}\nmixing_violations={}", audit.samples, audit.max_normalized_slack, audit.violations.len())?;
            writeln!(stdout, "density_k=1\ndensity_bound={}\ndensity_worst={}\ndensity_violations={}", density.bound, density.worst_avg_degree, density.violations)?;
            if let Some(path) = csv {
                let text = format!(
                    "n,d,lambda,c,method,converged,mixing_samples,mixing_max_slack,mixing_violations\n{},{},{},{},{},{},{},{},{}\n",
                    g.n(), s.d, s.lambda, s.c, s.method.as_str(), u8::from(s.converged), audit.samples, audit.max_normalized_slack, audit.violations.len()
                );
                write(&path, &text)?;
            }
        }
        Command::Percolate { graph, p, seed, out } => {
            let g = load(&graph)?;
            let gp = percolate(&g, p, seed);
            write(&out, &write_edge_list(&gp))?;
            writeln!(stdout, "n={}\nm_host={}\nm_kept={}", g.n(), g.m(), gp.m())?;
        }
        Command::Peel { graph, percolated, p, d, out } => {
            let host = load(&graph)?;
            let gp = load(&percolated)?;
            if host.n() != gp.n() {
                bail!("host has {} vertices, percolated graph {}", host.n(), gp.n());
            }
            let trace = peel(&gp, p, d)?;
            let text = write_trace(&trace);
            match out {
                Some(path) => {
                    write(&path, &text)?;
                    writeln!(stdout, "s0={}\nout={}\nsurvivors={}\niterations={}", trace.s0.len(), trace.out.len(), trace.survivors.len(), trace.iterations())?;
                }
                None => stdout.write_all(text.as_bytes())?,
            }
        }
        Command::Analyze { graph, percolated, trace, p, d, samples, seed } => {
            let host = load(&graph)?;
            let gp = load(&percolated)?;
            let text = fs::read_to_string(&trace).with_context(|| format!("reading {}", trace.display()))?;
            let trace = parse_trace(&text, gp.n(), PercolationParams::new(p, seed, d))?;
            let violations = verify_trace(&gp, &trace);
            let s = second_eigenvalue_abs(&host, &SpectralOptions::default())?;
            let cert = giant_expansion_certificate(&gp, &trace, s.lambda, d, p, samples, seed);
            let out = &cert.out;
            writeln!(stdout, "lambda={}\nc={}\ntrace_violations={}", s.lambda, s.c, violations.len())?;
            for v in violations.iter().take(10) {
                writeln!(stdout, "trace_violation={v}")?;
            }
            writeln!(stdout, "out_size={}\nout_components={}\nmax_out_component={}", out.out_size, out.components.len(), out.max_component_size)?;
            writeln!(stdout, "size_bound={}\nsize_bound_ln={}\nbalance_threshold={}\nall_balanced={}", out.size_bound, out.size_bound_ln, out.balance_threshold, out.all_balanced)?;
            writeln!(stdout, "giant_size={}\nsecond_component_size={}", cert.giant_size, cert.second_component_size)?;
            writeln!(stdout, "implied_bound={}\nimplied_bound_ln={}", cert.implied_bound, cert.implied_bound_ln)?;
            for c in &cert.conditions {
                writeln!(stdout, "condition.{}={} measured={} threshold={}", c.name, if c.passed { "pass" } else { "fail" }, c.measured, c.threshold)?;
            }
            writeln!(stdout, "certificate_pass={}", u8::from(cert.passed()))?;
            writeln!(stdout, "size,min_vertex,s0_count,s0_fraction,balanced,has_edge_to_giant")?;
            for c in &out.components {
                writeln!(stdout, "{},{},{},{},{},{}", c.size, c.min_vertex, c.s0_count, c.s0_fraction, u8::from(c.balanced), u8::from(c.has_edge_to_giant))?;
            }
        }
        Command::Expansion { graph, exact, bounded, rule, trials, seed } => {
            let g = load(&graph)?;
            let rule = match rule {
                Rule::Strict => SubsetRule::StrictHalf,
                Rule::Atmost => SubsetRule::AtMostHalf,
            };
            let use_exact = exact || (!bounded && g.n() <= perc_lab::structure::expansion::EXACT_LIMIT);
            let report = if use_exact {
                exact_edge_expansion(&g, rule)?
            } else {
                let lambda = match g.regular_degree() {
                    Some(_) => Some(second_eigenvalue_abs(&g, &SpectralOptions::default())?.lambda),
                    None => None,
                };
                expansion_upper_bound_with(&g, &BoundedSearch { trials, seed, rule, lambda, ..BoundedSearch::default() })
            };
            writeln!(stdout, "mode={:?}\nrule={:?}", report.mode, report.subset_rule)?;
            if let Some(v) = report.value {
                writeln!(stdout, "value={v}")?;
            }
            writeln!(stdout, "lower_bound={}\nupper_bound={}", report.lower_bound, report.upper_bound)?;
            writeln!(stdout, "witness_size={}\nwitness_boundary={}\nconnected={}", report.witness.len(), report.witness_boundary, report.connected)?;
            let ids: Vec<String> = report.witness.iter().map(|v| v.to_string()).collect();
            writeln!(stdout, "witness={}", ids.join(" "))?;
        }
        Command::Experiment { config, preset, trials, seed, out } => {
            let mut cfg = match (&config, &preset) {
                (Some(path), _) => {
                    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
                    experiment::parse_config(&text).with_context(|| format!("in {}", path.display()))?
                }
                (None, Some(name)) => experiment::preset(name)?,
                (None, None) => unreachable!("clap requires one of them"),
            };
            cfg.apply(&Overrides { trials, seed, output: out })?;
            let outcome = experiment::run_experiment(&cfg)?;
            if cfg.output.is_none() {
                stdout.write_all(outcome.csv().as_bytes())?;
                eprintln!("{outcome}");
            } else {
                writeln!(stdout, "{outcome}")?;
            }
            if !outcome.all_passed() {
                return Ok(ExitCode::from(1));
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}
