//! The giant-component expansion certificate: the primitive conditions that
//! together imply the expansion bound, each measured on an actual run.

use std::cmp::Ordering;
use std::fmt;

use crate::graph::{connected_components, induced_subgraph, Graph, VertexSet};
use crate::percolation::PruneTrace;
use crate::prob::Probability;
use crate::structure::expansion::{sampled_core_expansion, CoreExpansionReport};
use crate::structure::out::{out_component_report_with, BoundConstants, LogBase, OutReport};

#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: &'static str,
    pub passed: bool,
    pub measured: f64,
    pub threshold: f64,
    pub detail: String,
}

impl fmt::Display for Condition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}={} measured={} threshold={}",
            self.name,
            if self.passed { "pass" } else { "fail" },
            self.measured,
            self.threshold
        )?;
        if !self.detail.is_empty() {
            write!(f, " ({})", self.detail)?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateReport {
    /// Conditions in order: core min degree, survivor links into OUT,
    /// OUT component size, OUT balance, sampled core expansion, giant
    /// contains survivors.
    pub conditions: Vec<Condition>,
    /// `c sqrt d / (61 log2 n)`.
    pub implied_bound: f64,
    /// The same with the natural logarithm.
    pub implied_bound_ln: f64,
    pub giant_size: usize,
    pub second_component_size: usize,
    pub max_out_component: usize,
    pub giant_contains_survivors: bool,
    pub out: OutReport,
    pub core_expansion: CoreExpansionReport,
}

impl CertificateReport {
    pub fn passed(&self) -> bool {
        self.conditions.iter().all(|c| c.passed)
    }

    pub fn condition(&self, name: &str) -> Option<&Condition> {
        self.conditions.iter().find(|c| c.name == name)
    }
}

pub const CONDITION_NAMES: [&str; 6] =
    ["core_min_degree", "survivor_out_links", "out_component_size", "out_balanced", "core_expansion", "giant_contains_survivors"];

/// Evaluates every certificate condition on `gp` and its peeling trace.
/// Nothing in the trace is trusted beyond its survivor and `S_0` sets: core
/// degrees and OUT links are recounted from `gp`.
pub fn giant_expansion_certificate(
    gp: &Graph,
    trace: &PruneTrace,
    lambda: f64,
    d: usize,
    p: Probability,
    samples: usize,
    seed: u64,
) -> CertificateReport {
    let n = gp.n();
    let constants = BoundConstants::default();
    let sqrt_d = (d as f64).sqrt();
    let c = lambda / sqrt_d;
    let params = trace.params;
    let pd = p.as_f64() * d as f64;
    let survivors = &trace.survivors;

    let mut conditions = Vec::with_capacity(6);

    let (core, _) = induced_subgraph(gp, survivors).expect("trace matches graph");
    let min_core = if core.n() == 0 { None } else { Some(core.min_degree()) };
    let weak = survivors.iter().filter(|&v| {
        let deg = gp.neighbors(v).iter().filter(|&&w| survivors.contains(w as usize)).count();
        params.cmp_degree(deg, 3, 5) == Ordering::Less
    });
    let weak_count = weak.count();
    conditions.push(Condition {
        name: CONDITION_NAMES[0],
        passed: weak_count == 0,
        measured: min_core.map_or(f64::INFINITY, |m| m as f64),
        threshold: 3.0 * pd / 5.0,
        detail: if weak_count == 0 { String::new() } else { format!("{weak_count} survivors below") },
    });

    let mut worst_links = 0;
    let mut heavy = 0;
    for v in survivors.iter() {
        let links = gp.neighbors(v).iter().filter(|&&w| trace.out.contains(w as usize)).count();
        worst_links = worst_links.max(links);
        if params.cmp_degree(links, 6, 5) == Ordering::Greater {
            heavy += 1;
        }
    }
    conditions.push(Condition {
        name: CONDITION_NAMES[1],
        passed: heavy == 0,
        measured: worst_links as f64,
        threshold: 6.0 * pd / 5.0,
        detail: if heavy == 0 { String::new() } else { format!("{heavy} survivors above") },
    });

    let out = out_component_report_with(gp, trace, c, d, &constants);
    conditions.push(Condition {
        name: CONDITION_NAMES[2],
        passed: out.max_component_size as f64 <= out.size_bound,
        measured: out.max_component_size as f64,
        threshold: out.size_bound,
        detail: format!("ln bound {:.6}", out.size_bound_ln),
    });

    let unbalanced = out.components.iter().filter(|c| !c.balanced).count();
    let worst_fraction = out.components.iter().map(|c| c.s0_fraction).fold(1.0, f64::min);
    conditions.push(Condition {
        name: CONDITION_NAMES[3],
        passed: unbalanced == 0,
        measured: worst_fraction,
        threshold: out.balance_threshold,
        detail: if unbalanced == 0 { String::new() } else { format!("{unbalanced} components below") },
    });

    let core_expansion = sampled_core_expansion(&core, p, d, samples, seed);
    conditions.push(Condition {
        name: CONDITION_NAMES[4],
        passed: core_expansion.passed,
        measured: core_expansion.min_ratio,
        threshold: core_expansion.bound,
        detail: format!("{} sets over {} samples", core_expansion.evaluated, core_expansion.samples),
    });

    let components = connected_components(gp);
    let giant = components.first().cloned().unwrap_or_else(|| VertexSet::empty(n));
    let giant_size = giant.len();
    let second_component_size = components.get(1).map_or(0, |c| c.len());
    let giant_contains_survivors = survivors.is_subset(&giant);
    let outside = survivors.difference(&giant).len();
    conditions.push(Condition {
        name: CONDITION_NAMES[5],
        passed: giant_contains_survivors,
        measured: outside as f64,
        threshold: 0.0,
        detail: format!("second component {second_component_size}, max OUT component {}", out.max_component_size),
    });

    let ln = BoundConstants { log_base: LogBase::E, ..constants };
    CertificateReport {
        conditions,
        implied_bound: constants.expansion_bound(n, lambda),
        implied_bound_ln: ln.expansion_bound(n, lambda),
        giant_size,
        second_component_size,
        max_out_component: out.max_component_size,
        giant_contains_survivors,
        out,
        core_expansion,
    }
}
