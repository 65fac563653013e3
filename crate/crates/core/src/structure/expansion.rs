//! Edge expansion `min |∂S| / |S|`: exhaustive for small graphs, witness
//! search upper bounds for larger ones, and sampled evidence for cores.

use std::cmp::Ordering;

use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{is_connected, Graph, VertexSet};
use crate::prob::Probability;
use crate::rng::{self, Stream};
use crate::spectral::{second_eigenvalue_abs, SpectralOptions};

/// Largest graph the exhaustive search accepts.
pub const EXACT_LIMIT: usize = 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExpansionError {
    #[error("exhaustive expansion supports at most {EXACT_LIMIT} vertices, got {0}")]
    TooLarge(usize),
    #[error("no admissible subset on {0} vertices under this rule")]
    NoAdmissibleSet(usize),
}

/// Which subset sizes count.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubsetRule {
    /// `|S| < n/2`.
    StrictHalf,
    /// `|S| <= n/2`.
    AtMostHalf,
}

impl SubsetRule {
    pub fn max_size(&self, n: usize) -> usize {
        match self {
            SubsetRule::StrictHalf => n.saturating_sub(1) / 2,
            SubsetRule::AtMostHalf => n / 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExpansionMode {
    Exact,
    Bounded,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExpansionReport {
    pub mode: ExpansionMode,
    pub subset_rule: SubsetRule,
    /// Exact value, when `mode == Exact`.
    pub value: Option<f64>,
    pub lower_bound: f64,
    pub upper_bound: f64,
    /// `|∂witness| / |witness| == upper_bound`.
    pub witness: VertexSet,
    pub witness_boundary: usize,
    pub connected: bool,
}

/// `a/b < c/d` on nonnegative integers.
fn ratio_cmp(a: usize, b: usize, c: usize, d: usize) -> Ordering {
    (a as u128 * d as u128).cmp(&(c as u128 * b as u128))
}

/// Lexicographic order of the sorted member lists of two bitmasks.
fn lex_cmp(a: u32, b: u32) -> Ordering {
    if a == b {
        return Ordering::Equal;
    }
    let low = (a ^ b).trailing_zeros();
    // both agree below `low`; whoever owns `low` is smaller unless the other
    // list simply ends there (a proper prefix)
    let (owner, other) = if a >> low & 1 == 1 { (Ordering::Less, b) } else { (Ordering::Greater, a) };
    if other >> low == 0 { owner.reverse() } else { owner }
}

/// Exact edge expansion by Gray-code enumeration of all `2^n` subsets.
/// The witness is the lexicographically smallest minimiser. Disconnected
/// graphs are reported with `connected == false` (the value is then 0).
pub fn exact_edge_expansion(g: &Graph, rule: SubsetRule) -> Result<ExpansionReport, ExpansionError> {
    let n = g.n();
    if n > EXACT_LIMIT {
        return Err(ExpansionError::TooLarge(n));
    }
    let max = rule.max_size(n);
    if n < 2 || max == 0 {
        return Err(ExpansionError::NoAdmissibleSet(n));
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbors(v).iter().fold(0u32, |m, &w| m | 1 << w))
        .collect();
    let mut mask = 0u32;
    let mut boundary = 0usize;
    let mut size = 0usize;
    let mut best: Option<(usize, usize, u32)> = None;
    for i in 1u64..(1u64 << n) {
        let v = i.trailing_zeros() as usize;
        let links = (adj[v] & mask).count_ones() as usize;
        let deg = g.degree(v);
        if mask >> v & 1 == 0 {
            boundary = boundary + deg - 2 * links;
            size += 1;
        } else {
            boundary = boundary + 2 * links - deg;
            size -= 1;
        }
        mask ^= 1 << v;
        if size == 0 || size > max {
            continue;
        }
        let better = match best {
            None => true,
            Some((b, s, m)) => match ratio_cmp(boundary, size, b, s) {
                Ordering::Less => true,
                Ordering::Equal => lex_cmp(mask, m) == Ordering::Less,
                Ordering::Greater => false,
            },
        };
        if better {
            best = Some((boundary, size, mask));
        }
    }
    let (b, s, m) = best.expect("at least one admissible subset");
    let value = b as f64 / s as f64;
    Ok(ExpansionReport {
        mode: ExpansionMode::Exact,
        subset_rule: rule,
        value: Some(value),
        lower_bound: value,
        upper_bound: value,
        witness: VertexSet::from_members(n, (0..n).filter(|&v| m >> v & 1 == 1)),
        witness_boundary: b,
        connected: is_connected(g),
    })
}

/// Incrementally maintained cut.
struct Cut<'g> {
    g: &'g Graph,
    inside: Vec<bool>,
    links: Vec<u32>,
    size: usize,
    boundary: usize,
}

impl<'g> Cut<'g> {
    fn new(g: &'g Graph) -> Self {
        Self { g, inside: vec![false; g.n()], links: vec![0; g.n()], size: 0, boundary: 0 }
    }

    fn add(&mut self, v: usize) {
        self.boundary = self.boundary + self.g.degree(v) - 2 * self.links[v] as usize;
        self.inside[v] = true;
        self.size += 1;
        for &w in self.g.neighbors(v) {
            self.links[w as usize] += 1;
        }
    }

    fn remove(&mut self, v: usize) {
        self.boundary = self.boundary + 2 * self.links[v] as usize - self.g.degree(v);
        self.inside[v] = false;
        self.size -= 1;
        for &w in self.g.neighbors(v) {
            self.links[w as usize] -= 1;
        }
    }

    fn delta_add(&self, v: usize) -> isize {
        self.g.degree(v) as isize - 2 * self.links[v] as isize
    }

    fn members(&self) -> VertexSet {
        VertexSet::from_members(self.g.n(), (0..self.g.n()).filter(|&v| self.inside[v]))
    }
}

/// Best prefix `(boundary, size, length)` of a vertex order, up to `max` members.
fn best_prefix(g: &Graph, order: &[usize], max: usize) -> Option<(usize, usize)> {
    let mut cut = Cut::new(g);
    let mut best: Option<(usize, usize)> = None;
    for &v in order.iter().take(max) {
        cut.add(v);
        if best.is_none_or(|(b, s)| ratio_cmp(cut.boundary, cut.size, b, s) == Ordering::Less) {
            best = Some((cut.boundary, cut.size));
        }
    }
    best
}

/// Breadth-first discovery order from `root`, each adjacency list scanned
/// from a random rotation. Every prefix is connected.
fn bfs_order(g: &Graph, root: usize, limit: usize, rng: &mut rng::Rng, seen: &mut [bool]) -> Vec<usize> {
    let mut order = vec![root];
    seen[root] = true;
    let mut head = 0;
    while head < order.len() && order.len() < limit {
        let u = order[head];
        head += 1;
        let nbrs = g.neighbors(u);
        if nbrs.is_empty() {
            continue;
        }
        let offset = rng::uniform_below(rng, nbrs.len() as u64) as usize;
        for i in 0..nbrs.len() {
            let w = nbrs[(offset + i) % nbrs.len()] as usize;
            if !seen[w] {
                seen[w] = true;
                order.push(w);
                if order.len() == limit {
                    break;
                }
            }
        }
    }
    for &v in &order {
        seen[v] = false;
    }
    order
}

/// Approximate Fiedler vector: power iteration on `2Δ I - L` orthogonal to
/// the all-ones vector.
fn fiedler_vector(g: &Graph, iterations: usize, rng: &mut rng::Rng) -> Vec<f64> {
    let n = g.n();
    let shift = 2.0 * g.max_degree() as f64;
    let mut x: Vec<f64> = (0..n).map(|_| rng::unit_f64(rng) - 0.5).collect();
    let mut y = vec![0.0; n];
    for _ in 0..iterations {
        g.adjacency_apply(&x, &mut y);
        for v in 0..n {
            y[v] += (shift - g.degree(v) as f64) * x[v];
        }
        let mean = y.iter().sum::<f64>() / n as f64;
        let norm = y.iter().map(|t| (t - mean).powi(2)).sum::<f64>().sqrt();
        if norm == 0.0 {
            break;
        }
        for v in 0..n {
            x[v] = (y[v] - mean) / norm;
        }
    }
    x
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundedSearch {
    pub trials: usize,
    pub seed: u64,
    pub rule: SubsetRule,
    /// lambda to use for the spectral lower bound; measured when `None`.
    pub lambda: Option<f64>,
    pub fiedler_iterations: usize,
    pub local_passes: usize,
}

impl Default for BoundedSearch {
    fn default() -> Self {
        Self {
            trials: 32,
            seed: 0,
            rule: SubsetRule::AtMostHalf,
            lambda: None,
            fiedler_iterations: 500,
            local_passes: 20,
        }
    }
}

/// Upper bound from witness search, paired with `(d - lambda)/2` for
/// regular graphs (0 otherwise).
pub fn expansion_upper_bound(g: &Graph, trials: usize, seed: u64) -> ExpansionReport {
    expansion_upper_bound_with(g, &BoundedSearch { trials, seed, ..Default::default() })
}

pub fn expansion_upper_bound_with(g: &Graph, search: &BoundedSearch) -> ExpansionReport {
    let n = g.n();
    let max = search.rule.max_size(n);
    let lower_bound = match (g.regular_degree(), search.lambda) {
        (Some(d), Some(lam)) => ((d as f64 - lam) / 2.0).max(0.0),
        (Some(d), None) if n >= 2 => second_eigenvalue_abs(g, &SpectralOptions::default())
            .map(|s| ((d as f64 - s.lambda) / 2.0).max(0.0))
            .unwrap_or(0.0),
        _ => 0.0,
    };
    let connected = is_connected(g);
    if max == 0 {
        return ExpansionReport {
            mode: ExpansionMode::Bounded,
            subset_rule: search.rule,
            value: None,
            lower_bound,
            upper_bound: f64::INFINITY,
            witness: VertexSet::empty(n),
            witness_boundary: 0,
            connected,
        };
    }
    let mut rng = rng::stream(search.seed, Stream::Sampling);
    let mut best: Option<(usize, usize, Vec<usize>)> = None;
    let consider = |order: &[usize], best: &mut Option<(usize, usize, Vec<usize>)>| {
        if let Some((b, s)) = best_prefix(g, order, max) {
            if best.as_ref().is_none_or(|(bb, bs, _)| ratio_cmp(b, s, *bb, *bs) == Ordering::Less) {
                *best = Some((b, s, order[..s].to_vec()));
            }
        }
    };

    let mut seen = vec![false; n];
    for _ in 0..search.trials.max(1) {
        let root = rng::uniform_below(&mut rng, n as u64) as usize;
        let order = bfs_order(g, root, max, &mut rng, &mut seen);
        consider(&order, &mut best);
    }

    let fiedler = fiedler_vector(g, search.fiedler_iterations, &mut rng);
    let mut sweep: Vec<usize> = (0..n).collect();
    sweep.sort_by(|&a, &b| fiedler[a].total_cmp(&fiedler[b]).then(a.cmp(&b)));
    consider(&sweep, &mut best);
    sweep.reverse();
    consider(&sweep, &mut best);

    let (_, _, start) = best.expect("some prefix was evaluated");
    let mut cut = Cut::new(g);
    for &v in &start {
        cut.add(v);
    }
    local_search(&mut cut, max, search.local_passes, &mut rng);

    ExpansionReport {
        mode: ExpansionMode::Bounded,
        subset_rule: search.rule,
        value: None,
        lower_bound,
        upper_bound: cut.boundary as f64 / cut.size as f64,
        witness: cut.members(),
        witness_boundary: cut.boundary,
        connected,
    }
}

/// Single-vertex moves (add a boundary neighbor or drop a member) in random
/// order, kept only when they strictly lower the ratio.
fn local_search(cut: &mut Cut<'_>, max: usize, passes: usize, rng: &mut rng::Rng) {
    let n = cut.g.n();
    for _ in 0..passes {
        let mut candidates: Vec<usize> =
            (0..n).filter(|&v| cut.inside[v] || cut.links[v] > 0).collect();
        rng::shuffle(rng, &mut candidates);
        let mut improved = false;
        for v in candidates {
            let (b, s) = (cut.boundary, cut.size);
            if cut.inside[v] {
                if s == 1 {
                    continue;
                }
                let nb = (b as isize - cut.delta_add(v)) as usize;
                if ratio_cmp(nb, s - 1, b, s) == Ordering::Less {
                    cut.remove(v);
                    improved = true;
                }
            } else if s < max {
                let nb = (b as isize + cut.delta_add(v)) as usize;
                if ratio_cmp(nb, s + 1, b, s) == Ordering::Less {
                    cut.add(v);
                    improved = true;
                }
            }
        }
        if !improved {
            break;
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoreExpansionReport {
    /// Connected sets evaluated (every prefix of every growth counts).
    pub evaluated: usize,
    pub samples: usize,
    /// Smallest sampled `|∂S|/|S|`; infinite for an empty core.
    pub min_ratio: f64,
    pub witness: VertexSet,
    pub witness_boundary: usize,
    /// pd/13.
    pub bound: f64,
    pub passed: bool,
}

/// Sampled evidence that the core expands by at least `pd/13`.
///
/// Sample `i` grows a breadth-first set from a random root towards a
/// log-uniform size in `1..=n/2`; every prefix is a connected set whose
/// ratio is checked. Sets never exceed half the core.
pub fn sampled_core_expansion(core: &Graph, p: Probability, d: usize, samples: usize, seed: u64) -> CoreExpansionReport {
    let n = core.n();
    let bound = p.as_f64() * d as f64 / 13.0;
    let max = n / 2;
    if max == 0 || samples == 0 {
        return CoreExpansionReport {
            evaluated: 0,
            samples: 0,
            min_ratio: f64::INFINITY,
            witness: VertexSet::empty(n),
            witness_boundary: 0,
            bound,
            passed: true,
        };
    }
    let grow = |i: usize, seen: &mut Vec<bool>| -> Vec<usize> {
        let mut rng = rng::stream(rng::derive_seed(seed, i as u64), Stream::Sampling);
        let root = rng::uniform_below(&mut rng, n as u64) as usize;
        let target = rng::log_uniform_size(&mut rng, 1, max);
        bfs_order(core, root, target, &mut rng, seen)
    };
    // (boundary, size, sample, evaluated)
    let best = (0..samples)
        .into_par_iter()
        .map_init(
            || (vec![false; n], Cut::new(core)),
            |(seen, cut), i| {
                let order = grow(i, seen);
                let mut best = (usize::MAX, 1usize);
                for &v in &order {
                    cut.add(v);
                    if ratio_cmp(cut.boundary, cut.size, best.0, best.1) == Ordering::Less {
                        best = (cut.boundary, cut.size);
                    }
                }
                for &v in &order {
                    cut.remove(v);
                }
                (best.0, best.1, i, order.len())
            },
        )
        .reduce(
            || (usize::MAX, 1, usize::MAX, 0),
            |a, b| {
                let evaluated = a.3 + b.3;
                let pick = match ratio_cmp(a.0, a.1, b.0, b.1) {
                    Ordering::Less => a,
                    Ordering::Greater => b,
                    Ordering::Equal => if (a.2, a.1) <= (b.2, b.1) { a } else { b },
                };
                (pick.0, pick.1, pick.2, evaluated)
            },
        );
    let (boundary, size, sample, evaluated) = best;
    let mut seen = vec![false; n];
    let order = grow(sample, &mut seen);
    let witness = VertexSet::from_members(n, order[..size].iter().copied());
    // boundary / size >= p d / 13
    let passed = p.cmp_scaled(boundary as u64 * 13, size as u64, 1, d as u64) != Ordering::Less;
    CoreExpansionReport {
        evaluated,
        samples,
        min_ratio: boundary as f64 / size as f64,
        witness,
        witness_boundary: boundary,
        bound,
        passed,
    }
}
