//! Structure of the removed set `OUT`: components, balance against `S_0`,
//! and the density of each component in the host.

use crate::graph::{connected_components, directed_pair_count, induced_subgraph, Graph, VertexSet};
use crate::percolation::PruneTrace;

/// Constants of the structural bounds. Defaults: balance 1/3, size
/// constant 61, base-2 logarithm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundConstants {
    pub balance_num: usize,
    pub balance_den: usize,
    pub size_constant: f64,
    pub log_base: LogBase,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LogBase {
    Two,
    E,
}

impl LogBase {
    pub fn log(&self, x: f64) -> f64 {
        match self {
            LogBase::Two => x.log2(),
            LogBase::E => x.ln(),
        }
    }
}

impl Default for BoundConstants {
    fn default() -> Self {
        Self { balance_num: 1, balance_den: 3, size_constant: 61.0, log_base: LogBase::Two }
    }
}

impl BoundConstants {
    /// `size_constant * log(n) / (c sqrt d)`.
    pub fn component_bound(&self, n: usize, c_sqrt_d: f64) -> f64 {
        self.size_constant * self.log_base.log(n as f64) / c_sqrt_d
    }

    /// `c sqrt d / (size_constant * log n)`.
    pub fn expansion_bound(&self, n: usize, c_sqrt_d: f64) -> f64 {
        c_sqrt_d / (self.size_constant * self.log_base.log(n as f64))
    }

    pub fn is_balanced(&self, s0_count: usize, size: usize) -> bool {
        s0_count * self.balance_den >= size * self.balance_num
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutComponent {
    pub size: usize,
    pub min_vertex: usize,
    pub s0_count: usize,
    pub s0_fraction: f64,
    pub balanced: bool,
    /// Has a percolated edge to a survivor inside the giant component.
    pub has_edge_to_giant: bool,
    pub members: VertexSet,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutReport {
    /// Components of `G_p[OUT]`, largest first, ties by smallest vertex.
    pub components: Vec<OutComponent>,
    pub out_size: usize,
    pub max_component_size: usize,
    pub balance_threshold: f64,
    /// Component size bound with the configured log base.
    pub size_bound: f64,
    /// Same bound with the natural logarithm.
    pub size_bound_ln: f64,
    pub all_balanced: bool,
}

/// Components of the percolated graph restricted to `OUT`.
pub fn out_component_report(gp: &Graph, trace: &PruneTrace, c: f64, d: usize) -> OutReport {
    out_component_report_with(gp, trace, c, d, &BoundConstants::default())
}

pub fn out_component_report_with(
    gp: &Graph,
    trace: &PruneTrace,
    c: f64,
    d: usize,
    constants: &BoundConstants,
) -> OutReport {
    let n = gp.n();
    let c_sqrt_d = c * (d as f64).sqrt();
    let giant = connected_components(gp).into_iter().next().unwrap_or_else(|| VertexSet::empty(n));
    let (sub, map) = induced_subgraph(gp, &trace.out).expect("trace matches graph");
    let mut components: Vec<OutComponent> = connected_components(&sub)
        .into_iter()
        .map(|local| {
            let members = VertexSet::from_members(n, local.iter().map(|v| map.old_id(v)));
            let size = members.len();
            let s0_count = members.intersection(&trace.s0).len();
            let has_edge_to_giant = members.iter().any(|v| {
                gp.neighbors(v).iter().any(|&w| {
                    let w = w as usize;
                    giant.contains(w) && trace.survivors.contains(w)
                })
            });
            OutComponent {
                size,
                min_vertex: members.min().unwrap(),
                s0_count,
                s0_fraction: s0_count as f64 / size as f64,
                balanced: constants.is_balanced(s0_count, size),
                has_edge_to_giant,
                members,
            }
        })
        .collect();
    components.sort_by_key(|c| (std::cmp::Reverse(c.size), c.min_vertex));
    let ln = BoundConstants { log_base: LogBase::E, ..*constants };
    OutReport {
        out_size: trace.out.len(),
        max_component_size: components.first().map_or(0, |c| c.size),
        balance_threshold: constants.balance_num as f64 / constants.balance_den as f64,
        size_bound: constants.component_bound(n, c_sqrt_d),
        size_bound_ln: ln.component_bound(n, c_sqrt_d),
        all_balanced: components.iter().all(|c| c.balanced),
        components,
    }
}

/// Host-graph density of one removed set against the small-set bound.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityLine {
    pub size: usize,
    /// Average degree of `G[U]` in the host.
    pub host_avg_degree: f64,
    /// Largest integer `k >= 1` with `|U| <= c n / (k sqrt d)`, if any.
    pub k: Option<usize>,
    /// `c sqrt d (1 + 1/k)`.
    pub bound: Option<f64>,
    pub within_bound: bool,
}

/// Average host degree of `u` next to `lambda (1 + 1/k)` for the largest
/// admissible `k`; sets too large for every `k` are reported without a bound.
pub fn host_density(host: &Graph, u: &VertexSet, lambda: f64, d: usize) -> DensityLine {
    let size = u.len();
    let avg = if size == 0 { 0.0 } else { directed_pair_count(host, u, u).expect("set matches host") as f64 / size as f64 };
    let k = if size == 0 { None } else {
        let k = (lambda * host.n() as f64 / (d as f64 * size as f64)).floor();
        (k >= 1.0).then_some(k as usize)
    };
    let bound = k.map(|k| lambda * (1.0 + 1.0 / k as f64));
    DensityLine { size, host_avg_degree: avg, k, bound, within_bound: bound.is_none_or(|b| avg <= b) }
}

/// Density of all of `OUT` followed by each OUT component.
pub fn out_density_report(host: &Graph, trace: &PruneTrace, report: &OutReport, lambda: f64, d: usize) -> Vec<DensityLine> {
    std::iter::once(host_density(host, &trace.out, lambda, d))
        .chain(report.components.iter().map(|c| host_density(host, &c.members, lambda, d)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{cycle_graph, named, random_regular};
    use crate::percolation::{peel, percolate};
    use crate::prob::Probability;

    #[test]
    fn empty_out() {
        let g = random_regular(40, 6, 1).unwrap();
        let t = peel(&g, Probability::ONE, 6).unwrap();
        let r = out_component_report(&g, &t, 0.9, 6);
        assert!(r.components.is_empty());
        assert_eq!(r.max_component_size, 0);
        assert!(r.all_balanced);
    }

    #[test]
    fn isolated_s0_vertex() {
        // a triangle plus an isolated vertex, d = 2, p = 1: vertex 3 has degree 0
        let g = crate::graph::build_graph(4, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        let t = peel(&g, Probability::ONE, 2).unwrap();
        let r = out_component_report(&g, &t, 1.0, 2);
        assert_eq!(r.components.len(), 1);
        let c = &r.components[0];
        assert_eq!((c.size, c.s0_count, c.s0_fraction), (1, 1, 1.0));
        assert!(c.balanced && !c.has_edge_to_giant);
    }

    #[test]
    fn path_components_touch_nothing() {
        let g = named::path(4);
        let t = peel(&g, Probability::ONE, 2).unwrap();
        let r = out_component_report(&g, &t, 2.0_f64.sqrt(), 2);
        assert_eq!(r.components.len(), 1);
        assert_eq!(r.components[0].size, 4);
        // S0 = {0, 3}: 2/4 >= 1/3
        assert!(r.all_balanced);
    }

    #[test]
    fn bounds_and_density() {
        let k = BoundConstants::default();
        assert!((k.component_bound(1024, 2.0) - 61.0 * 10.0 / 2.0).abs() < 1e-9);
        assert!((k.expansion_bound(1024, 2.0) - 2.0 / 610.0).abs() < 1e-12);
        let g = cycle_graph(12).unwrap();
        let gp = percolate(&g, "0.6".parse().unwrap(), 4);
        let t = peel(&gp, "0.6".parse().unwrap(), 2).unwrap();
        let r = out_component_report(&gp, &t, 2.0 / 2.0_f64.sqrt(), 2);
        assert_eq!(r.components.iter().map(|c| c.size).sum::<usize>(), t.out.len());
        let lines = out_density_report(&g, &t, &r, 2.0, 2);
        assert_eq!(lines.len(), r.components.len() + 1);
        // arcs of a cycle have average degree 2(|U|-1)/|U| < 2 <= 2(1+1/k)
        assert!(lines.iter().all(|l| l.within_bound));
    }
}
