//! Edge percolation and the two-phase low-degree peeling that splits a
//! percolated graph into its core and the removed set `OUT`.

use std::cmp::{Ordering, Reverse};
use std::collections::BinaryHeap;
use std::fmt;

use rand_core::RngCore;
use thiserror::Error;

use crate::graph::{build_graph, Graph, VertexSet};
use crate::prob::Probability;
use crate::rng::{self, Stream};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PercolationError {
    #[error("p must be positive for peeling")]
    ZeroProbability,
    #[error("degree d must be positive")]
    ZeroDegree,
}

/// Keeps each edge independently with probability `p`.
///
/// Edges are visited in ascending `(u, v)` order; each consumes one draw
/// from the percolation stream of `seed` and is kept iff the draw is below
/// `floor(p * 2^64)`.
pub fn percolate(g: &Graph, p: Probability, seed: u64) -> Graph {
    let threshold = p.keep_threshold();
    let mut rng = rng::stream(seed, Stream::Percolation);
    let kept: Vec<_> = g.edges().filter(|_| u128::from(rng.next_u64()) < threshold).collect();
    build_graph(g.n(), &kept).expect("subgraph of a simple graph")
}

/// Peeling parameters for a percolated `d`-regular host.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PercolationParams {
    pub p: Probability,
    pub seed: u64,
    pub d: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Advisory {
    /// p < 5c/sqrt(d).
    BelowTheoremProbability,
    /// c >= sqrt(d)/5, so the host is not an algebraic expander in the required sense.
    WeakSpectralGap,
    /// p*d < 5: the degree window is too narrow to mean much.
    LowExpectedDegree,
}

impl fmt::Display for Advisory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Advisory::BelowTheoremProbability => "p-below-5c/sqrt(d)",
            Advisory::WeakSpectralGap => "c-at-least-sqrt(d)/5",
            Advisory::LowExpectedDegree => "pd-below-5",
        })
    }
}

impl PercolationParams {
    pub fn new(p: Probability, seed: u64, d: usize) -> Self {
        Self { p, seed, d }
    }

    /// Flags for parameters outside the theorem's hypothesis, given the
    /// measured lambda of the host.
    pub fn advisories(&self, lambda: f64) -> Vec<Advisory> {
        let d = self.d as f64;
        let c = lambda / d.sqrt();
        let mut out = Vec::new();
        // p < 5c/sqrt(d)  <=>  p d < 5 lambda
        if self.p.as_f64() * d < 5.0 * lambda {
            out.push(Advisory::BelowTheoremProbability);
        }
        if c >= d.sqrt() / 5.0 {
            out.push(Advisory::WeakSpectralGap);
        }
        if self.p.numerator() * (self.d as u128) < 5 * self.p.denominator() {
            out.push(Advisory::LowExpectedDegree);
        }
        out
    }

    /// `deg` against `(num/den) p d`.
    pub fn cmp_degree(&self, deg: usize, num: u64, den: u64) -> Ordering {
        self.p.cmp_scaled(deg as u64, num, den, self.d as u64)
    }

    pub fn in_window(&self, deg: usize) -> bool {
        self.cmp_degree(deg, 4, 5) != Ordering::Less && self.cmp_degree(deg, 6, 5) != Ordering::Greater
    }

    /// deg < 3pd/5.
    pub fn below_core(&self, deg: usize) -> bool {
        self.cmp_degree(deg, 3, 5) == Ordering::Less
    }

    pub fn pd(&self) -> f64 {
        self.p.as_f64() * self.d as f64
    }
}

/// Vertices whose percolated degree lies outside `[4pd/5, 6pd/5]`.
pub fn compute_s0(gp: &Graph, p: Probability, d: usize) -> VertexSet {
    let params = PercolationParams::new(p, 0, d);
    VertexSet::from_members(gp.n(), (0..gp.n()).filter(|&v| !params.in_window(gp.degree(v))))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Removal {
    pub vertex: usize,
    /// 1-based; removing `S_0` is iteration 0.
    pub iteration: usize,
    /// Degree in the graph left before this iteration.
    pub degree: usize,
    /// Percolated edges into vertices removed in earlier iterations.
    pub edges_into_removed: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PruneTrace {
    pub s0: VertexSet,
    pub removals: Vec<Removal>,
    pub survivors: VertexSet,
    pub out: VertexSet,
    pub params: PercolationParams,
}

impl PruneTrace {
    /// Number of peeling iterations after removing `S_0`.
    pub fn iterations(&self) -> usize {
        self.removals.last().map_or(0, |r| r.iteration)
    }

    /// Rebuilds a trace from its three recorded parts.
    pub fn from_parts(n: usize, s0: VertexSet, removals: Vec<Removal>, survivors: VertexSet, params: PercolationParams) -> Self {
        debug_assert_eq!(survivors.universe(), n);
        let out = survivors.complement();
        Self { s0, removals, survivors, out, params }
    }
}

/// Order in which low-degree vertices leave after `S_0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeelOrder {
    /// One vertex per iteration, smallest id first.
    LowestId,
    /// Every currently low vertex leaves in the same iteration.
    Batch,
    /// One vertex per iteration, drawn uniformly among low vertices.
    Random(u64),
}

/// Removes `S_0`, then one low vertex (degree < 3pd/5) at a time, lowest id
/// first, until the remaining graph has minimum degree >= 3pd/5.
pub fn peel(gp: &Graph, p: Probability, d: usize) -> Result<PruneTrace, PercolationError> {
    peel_with(gp, PercolationParams::new(p, 0, d), PeelOrder::LowestId)
}

pub fn peel_with(gp: &Graph, params: PercolationParams, order: PeelOrder) -> Result<PruneTrace, PercolationError> {
    if params.p.is_zero() {
        return Err(PercolationError::ZeroProbability);
    }
    if params.d == 0 {
        return Err(PercolationError::ZeroDegree);
    }
    let n = gp.n();
    let s0 = compute_s0(gp, params.p, params.d);
    let mut removed = s0.clone();
    let mut degree: Vec<usize> = (0..n).map(|v| gp.degree(v)).collect();
    for v in s0.iter() {
        for &w in gp.neighbors(v) {
            degree[w as usize] -= 1;
        }
    }
    let mut low = LowSet::new(order);
    for v in 0..n {
        if !removed.contains(v) && params.below_core(degree[v]) {
            low.push(v);
        }
    }
    let mut removals = Vec::new();
    let mut iteration = 0;
    while !low.is_empty() {
        iteration += 1;
        let batch = low.take_iteration();
        // record against the state at the start of the iteration, then apply
        for &v in &batch {
            removals.push(Removal {
                vertex: v,
                iteration,
                degree: degree[v],
                edges_into_removed: gp.degree(v) - degree[v],
            });
            removed.insert(v);
        }
        for &v in &batch {
            for &w in gp.neighbors(v) {
                let w = w as usize;
                degree[w] -= 1;
                if !removed.contains(w) && !low.contains(w) && params.below_core(degree[w]) {
                    low.push(w);
                }
            }
        }
    }
    let survivors = removed.complement();
    Ok(PruneTrace { s0, removals, survivors, out: removed, params })
}

/// Pending low vertices. Membership is permanent until taken because
/// degrees only decrease.
struct LowSet {
    order: PeelOrder,
    heap: BinaryHeap<Reverse<usize>>,
    pool: Vec<usize>,
    member: Vec<bool>,
    rng: Option<rng::Rng>,
}

impl LowSet {
    fn new(order: PeelOrder) -> Self {
        let rng = match order {
            PeelOrder::Random(seed) => Some(rng::stream(seed, Stream::Sampling)),
            _ => None,
        };
        Self { order, heap: BinaryHeap::new(), pool: Vec::new(), member: Vec::new(), rng }
    }

    fn contains(&self, v: usize) -> bool {
        self.member.get(v).copied().unwrap_or(false)
    }

    fn push(&mut self, v: usize) {
        if self.member.len() <= v {
            self.member.resize(v + 1, false);
        }
        self.member[v] = true;
        match self.order {
            PeelOrder::LowestId => self.heap.push(Reverse(v)),
            _ => self.pool.push(v),
        }
    }

    fn is_empty(&self) -> bool {
        self.heap.is_empty() && self.pool.is_empty()
    }

    fn take_iteration(&mut self) -> Vec<usize> {
        let taken = match self.order {
            PeelOrder::LowestId => vec![self.heap.pop().expect("nonempty").0],
            PeelOrder::Batch => {
                let mut all = std::mem::take(&mut self.pool);
                all.sort_unstable();
                all
            }
            PeelOrder::Random(_) => {
                let rng = self.rng.as_mut().expect("random order has a stream");
                let i = rng::uniform_below(rng, self.pool.len() as u64) as usize;
                vec![self.pool.swap_remove(i)]
            }
        };
        for &v in &taken {
            self.member[v] = false;
        }
        taken
    }
}

/// A broken invariant found while replaying a trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceViolation {
    UniverseMismatch { graph: usize, trace: usize },
    S0Mismatch { vertex: usize, in_trace: bool },
    OutNotComplement,
    S0NotInOut(usize),
    RemovalOfS0(usize),
    DuplicateRemoval(usize),
    RemovalOfSurvivor(usize),
    MissingRemoval(usize),
    BadIteration { vertex: usize, iteration: usize },
    DegreeMismatch { vertex: usize, recorded: usize, replayed: usize },
    RemovedAtCoreDegree { vertex: usize, degree: usize },
    EdgesIntoRemovedMismatch { vertex: usize, recorded: usize, replayed: usize },
    FewEdgesIntoRemoved { vertex: usize, edges: usize },
    SurvivorBelowCore { vertex: usize, degree: usize },
}

impl fmt::Display for TraceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use TraceViolation::*;
        match self {
            UniverseMismatch { graph, trace } => write!(f, "trace covers {trace} vertices, graph has {graph}"),
            S0Mismatch { vertex, in_trace: true } => write!(f, "vertex {vertex} listed in S0 but its degree is inside the window"),
            S0Mismatch { vertex, in_trace: false } => write!(f, "vertex {vertex} belongs to S0 but is not listed"),
            OutNotComplement => write!(f, "OUT is not the complement of the survivors"),
            S0NotInOut(v) => write!(f, "S0 vertex {v} is not in OUT"),
            RemovalOfS0(v) => write!(f, "S0 vertex {v} appears as an iterative removal"),
            DuplicateRemoval(v) => write!(f, "vertex {v} removed twice"),
            RemovalOfSurvivor(v) => write!(f, "removed vertex {v} is listed as a survivor"),
            MissingRemoval(v) => write!(f, "OUT vertex {v} is neither in S0 nor removed"),
            BadIteration { vertex, iteration } => write!(f, "vertex {vertex} has out-of-order iteration {iteration}"),
            DegreeMismatch { vertex, recorded, replayed } => write!(f, "vertex {vertex} degree at removal recorded {recorded}, replayed {replayed}"),
            RemovedAtCoreDegree { vertex, degree } => write!(f, "vertex {vertex} removed with degree {degree}, not below 3pd/5"),
            EdgesIntoRemovedMismatch { vertex, recorded, replayed } => write!(f, "vertex {vertex} edges into removed recorded {recorded}, replayed {replayed}"),
            FewEdgesIntoRemoved { vertex, edges } => write!(f, "vertex {vertex} has only {edges} edges into removed vertices, below pd/5"),
            SurvivorBelowCore { vertex, degree } => write!(f, "survivor below 3pd/5: vertex {vertex} has core degree {degree}"),
        }
    }
}

/// Replays `trace` on `gp` and reports every broken invariant.
///
/// A removal's degree is measured against `S_0` plus all removals of
/// strictly earlier iterations, so batch traces verify as well.
pub fn verify_trace(gp: &Graph, trace: &PruneTrace) -> Vec<TraceViolation> {
    use TraceViolation::*;
    let n = gp.n();
    let params = &trace.params;
    let mut out = Vec::new();
    if trace.survivors.universe() != n || trace.s0.universe() != n || trace.out.universe() != n {
        out.push(UniverseMismatch { graph: n, trace: trace.survivors.universe() });
        return out;
    }
    let expected_s0 = compute_s0(gp, params.p, params.d);
    for v in expected_s0.union(&trace.s0).iter() {
        if expected_s0.contains(v) != trace.s0.contains(v) {
            out.push(S0Mismatch { vertex: v, in_trace: trace.s0.contains(v) });
        }
    }
    if trace.out != trace.survivors.complement() {
        out.push(OutNotComplement);
    }
    for v in trace.s0.iter().filter(|&v| !trace.out.contains(v)) {
        out.push(S0NotInOut(v));
    }

    let mut removed = trace.s0.clone();
    let mut listed = VertexSet::empty(n);
    let mut pending: Vec<usize> = Vec::new();
    let mut last_iteration = 0;
    let flush = |pending: &mut Vec<usize>, removed: &mut VertexSet| {
        for v in pending.drain(..) {
            removed.insert(v);
        }
    };
    for r in &trace.removals {
        let v = r.vertex;
        if v >= n {
            out.push(UniverseMismatch { graph: n, trace: v + 1 });
            continue;
        }
        if r.iteration == 0 || r.iteration < last_iteration {
            out.push(BadIteration { vertex: v, iteration: r.iteration });
        }
        if r.iteration > last_iteration {
            flush(&mut pending, &mut removed);
            last_iteration = r.iteration;
        }
        if trace.s0.contains(v) {
            out.push(RemovalOfS0(v));
        }
        if !listed.insert(v) {
            out.push(DuplicateRemoval(v));
        }
        if trace.survivors.contains(v) {
            out.push(RemovalOfSurvivor(v));
        }
        let into = gp.neighbors(v).iter().filter(|&&w| removed.contains(w as usize)).count();
        let degree = gp.degree(v) - into;
        if degree != r.degree {
            out.push(DegreeMismatch { vertex: v, recorded: r.degree, replayed: degree });
        }
        if !params.below_core(r.degree) {
            out.push(RemovedAtCoreDegree { vertex: v, degree: r.degree });
        }
        if into != r.edges_into_removed {
            out.push(EdgesIntoRemovedMismatch { vertex: v, recorded: r.edges_into_removed, replayed: into });
        }
        if params.cmp_degree(r.edges_into_removed, 1, 5) == Ordering::Less {
            out.push(FewEdgesIntoRemoved { vertex: v, edges: r.edges_into_removed });
        }
        pending.push(v);
    }
    for v in trace.out.difference(&trace.s0).difference(&listed).iter() {
        out.push(MissingRemoval(v));
    }
    for v in trace.survivors.iter() {
        let core_degree = gp.neighbors(v).iter().filter(|&&w| trace.survivors.contains(w as usize)).count();
        if params.below_core(core_degree) {
            out.push(SurvivorBelowCore { vertex: v, degree: core_degree });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, named, random_regular};

    fn p(s: &str) -> Probability {
        s.parse().unwrap()
    }

    #[test]
    fn percolate_extremes() {
        let g = random_regular(40, 5, 1).unwrap();
        assert_eq!(percolate(&g, Probability::ONE, 9), g);
        let empty = percolate(&g, Probability::ZERO, 9);
        assert_eq!((empty.n(), empty.m()), (40, 0));
    }

    #[test]
    fn percolate_is_reproducible_and_coupled() {
        let g = complete_graph(30).unwrap();
        let a = percolate(&g, p("0.3"), 5);
        assert_eq!(a, percolate(&g, p("0.3"), 5));
        // same draws, larger threshold: a monotone coupling
        let b = percolate(&g, p("0.6"), 5);
        assert!(a.edges().all(|(u, v)| b.has_edge(u, v)));
    }

    #[test]
    fn s0_examples() {
        let g = random_regular(30, 4, 2).unwrap();
        assert!(compute_s0(&g, Probability::ONE, 4).is_empty());
        let empty = Graph::edgeless(6);
        assert_eq!(compute_s0(&empty, p("0.5"), 4).len(), 6);
    }

    #[test]
    fn window_boundaries_are_inclusive() {
        // p = 1, d = 5: window [4, 6]
        let params = PercolationParams::new(Probability::ONE, 0, 5);
        assert!(!params.in_window(3));
        assert!(params.in_window(4) && params.in_window(6));
        assert!(!params.in_window(7));
        // 3pd/5 = 3: strict
        assert!(params.below_core(2) && !params.below_core(3));
    }

    #[test]
    fn regular_host_at_p_one_is_untouched() {
        let g = random_regular(50, 6, 4).unwrap();
        let t = peel(&g, Probability::ONE, 6).unwrap();
        assert!(t.out.is_empty() && t.removals.is_empty());
        assert_eq!(t.survivors.len(), 50);
        assert!(verify_trace(&g, &t).is_empty());
    }

    #[test]
    fn path_of_four_peels_away() {
        // d = 2, p = 1: window [1.6, 2.4] puts 0 and 3 in S0; 1 and 2 then have
        // degree 1 < 1.2 and go one at a time, lowest id first
        let g = named::path(4);
        let t = peel(&g, Probability::ONE, 2).unwrap();
        assert_eq!(t.s0.to_vec(), vec![0, 3]);
        assert_eq!(
            t.removals,
            vec![
                Removal { vertex: 1, iteration: 1, degree: 1, edges_into_removed: 1 },
                Removal { vertex: 2, iteration: 2, degree: 0, edges_into_removed: 2 },
            ]
        );
        assert!(t.survivors.is_empty());
        assert_eq!(t.out.len(), 4);
    }

    #[test]
    fn zero_p_rejected() {
        assert_eq!(peel(&named::path(3), Probability::ZERO, 2), Err(PercolationError::ZeroProbability));
    }

    #[test]
    fn verify_catches_survivor_below_core() {
        // triangle plus pendant: with d = 3, p = 1 the pendant is in S0 and the
        // triangle survives with degree 2 >= 1.8
        let g = build_graph(4, &[(0, 1), (1, 2), (0, 2), (2, 3)]).unwrap();
        let t = peel(&g, Probability::ONE, 3).unwrap();
        assert!(verify_trace(&g, &t).is_empty());
        let mut bad = t.clone();
        bad.survivors.insert(3);
        bad.out.remove(3);
        bad.s0.remove(3);
        let v = verify_trace(&g, &bad);
        assert!(v.iter().any(|x| matches!(x, TraceViolation::SurvivorBelowCore { vertex: 3, .. })), "{v:?}");
        assert!(v.iter().any(|x| x.to_string().contains("survivor below 3pd/5")));
    }

    #[test]
    fn orders_agree_on_survivors() {
        let g = random_regular(300, 12, 8).unwrap();
        for seed in 0..5 {
            let gp = percolate(&g, p("0.5"), seed);
            let params = PercolationParams::new(p("0.5"), seed, 12);
            let a = peel_with(&gp, params, PeelOrder::LowestId).unwrap();
            let b = peel_with(&gp, params, PeelOrder::Batch).unwrap();
            let c = peel_with(&gp, params, PeelOrder::Random(seed)).unwrap();
            assert_eq!(a.survivors, b.survivors);
            assert_eq!(a.survivors, c.survivors);
            for t in [&a, &b, &c] {
                assert!(verify_trace(&gp, t).is_empty());
            }
        }
    }

    #[test]
    fn advisories() {
        // d = 256, lambda = 32: 5c/sqrt(d) = 0.625
        let ok = PercolationParams::new(p("0.625"), 0, 256);
        assert!(ok.advisories(32.0).is_empty());
        let low = PercolationParams::new(p("0.5"), 0, 256);
        assert_eq!(low.advisories(32.0), vec![Advisory::BelowTheoremProbability]);
        let tiny = PercolationParams::new(p("0.1"), 0, 2);
        assert!(tiny.advisories(2.0).contains(&Advisory::LowExpectedDegree));
        assert!(tiny.advisories(2.0).contains(&Advisory::WeakSpectralGap));
    }
}
