//! Second adjacency eigenvalue of regular hosts and the pseudo-randomness
//! audits that depend on it.

use std::collections::BinaryHeap;
use std::cmp::Reverse;

use nalgebra::{DMatrix, SymmetricEigen};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;
use rayon::prelude::*;
use thiserror::Error;

use crate::graph::{directed_pair_count, Graph, VertexSet};
use crate::rng::{self, Stream};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpectralError {
    #[error("graph is not regular (degrees range over {min}..={max})")]
    NotRegular { min: usize, max: usize },
    #[error("spectral gap needs at least 2 vertices")]
    TooSmall,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralOptions {
    pub tol: f64,
    pub max_iter: usize,
    /// Graphs with at most this many vertices use the dense eigensolver.
    pub dense_limit: usize,
    pub start_seed: u64,
}

impl Default for SpectralOptions {
    fn default() -> Self {
        Self { tol: 1e-9, max_iter: 100_000, dense_limit: 512, start_seed: 0xA11CE }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    DenseEigensolve,
    PowerIteration,
}

impl Method {
    pub fn as_str(&self) -> &'static str {
        match self {
            Method::DenseEigensolve => "dense-eigensolve",
            Method::PowerIteration => "power-iteration",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpectralSummary {
    pub d: usize,
    /// max(|mu_2|, |mu_n|).
    pub lambda: f64,
    /// lambda / sqrt(d).
    pub c: f64,
    pub method: Method,
    pub residual: f64,
    pub iterations: usize,
    pub converged: bool,
    /// Signed second-largest eigenvalue (dense route only).
    pub second: Option<f64>,
    /// Smallest eigenvalue (dense route only).
    pub smallest: Option<f64>,
}

fn require_regular(g: &Graph) -> Result<usize, SpectralError> {
    if g.n() < 2 {
        return Err(SpectralError::TooSmall);
    }
    g.regular_degree()
        .ok_or(SpectralError::NotRegular { min: g.min_degree(), max: g.max_degree() })
}

/// lambda of a regular graph, dense for small graphs and power iteration
/// otherwise. A power run that hits `max_iter` returns its best estimate
/// with `converged == false`.
pub fn second_eigenvalue_abs(g: &Graph, opts: &SpectralOptions) -> Result<SpectralSummary, SpectralError> {
    if g.n() <= opts.dense_limit {
        dense_lambda(g)
    } else {
        power_lambda(g, opts)
    }
}

/// All adjacency eigenvalues, descending.
pub fn dense_spectrum(g: &Graph) -> Vec<f64> {
    let eig = SymmetricEigen::new(adjacency_matrix(g));
    let mut values: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    values.sort_by(|a, b| b.total_cmp(a));
    values
}

fn adjacency_matrix(g: &Graph) -> DMatrix<f64> {
    let n = g.n();
    let mut a = DMatrix::zeros(n, n);
    for (u, v) in g.edges() {
        a[(u, v)] = 1.0;
        a[(v, u)] = 1.0;
    }
    a
}

pub fn dense_lambda(g: &Graph) -> Result<SpectralSummary, SpectralError> {
    let d = require_regular(g)?;
    let a = adjacency_matrix(g);
    let eig = SymmetricEigen::new(a.clone());
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.sort_by(|&i, &j| eig.eigenvalues[j].total_cmp(&eig.eigenvalues[i]));
    let second = eig.eigenvalues[order[1]];
    let smallest = eig.eigenvalues[order[g.n() - 1]];
    let pick = if second.abs() >= smallest.abs() { order[1] } else { order[g.n() - 1] };
    let mu = eig.eigenvalues[pick];
    let v = eig.eigenvectors.column(pick);
    let residual = (&a * v - v * mu).norm();
    let lambda = second.abs().max(smallest.abs());
    Ok(SpectralSummary {
        d,
        lambda,
        c: lambda / (d as f64).sqrt(),
        method: Method::DenseEigensolve,
        residual,
        iterations: 0,
        converged: true,
        second: Some(second),
        smallest: Some(smallest),
    })
}

const PARALLEL_ROWS: usize = 4096;

fn apply(g: &Graph, x: &[f64], y: &mut [f64]) {
    if g.n() < PARALLEL_ROWS {
        g.adjacency_apply(x, y);
    } else {
        // each row is summed serially, so the result does not depend on threads
        y.par_chunks_mut(PARALLEL_ROWS).enumerate().for_each(|(chunk, out)| {
            let base = chunk * PARALLEL_ROWS;
            for (i, o) in out.iter_mut().enumerate() {
                *o = g.neighbors(base + i).iter().map(|&u| x[u as usize]).sum();
            }
        });
    }
}

fn remove_mean(x: &mut [f64]) {
    let mean = x.iter().sum::<f64>() / x.len() as f64;
    x.iter_mut().for_each(|v| *v -= mean);
}

fn norm(x: &[f64]) -> f64 {
    x.iter().map(|v| v * v).sum::<f64>().sqrt()
}

/// Power iteration on the adjacency restricted to the complement of the
/// all-ones vector (an invariant subspace for regular graphs).
///
/// Iterating `x <- Ax / |Ax|` makes `|Ax|^2 = x'A^2x` converge to lambda^2
/// even when `mu_2` and `mu_n` have equal magnitude and opposite sign. The
/// residual is the relative `A^2` Rayleigh residual of the previous iterate,
/// which the next product gives for free.
pub fn power_lambda(g: &Graph, opts: &SpectralOptions) -> Result<SpectralSummary, SpectralError> {
    let d = require_regular(g)?;
    let n = g.n();
    let mut start = SplitMix64::seed_from_u64(opts.start_seed);
    let mut x: Vec<f64> = (0..n)
        .map(|_| (start.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64) - 0.5)
        .collect();
    remove_mean(&mut x);
    let s = norm(&x);
    x.iter_mut().for_each(|v| *v /= s);
    let mut y = vec![0.0; n];
    let mut prev: Option<(Vec<f64>, f64)> = None;
    let mut residual = f64::INFINITY;
    let mut lambda = 0.0;
    let mut iterations = 0;
    let mut converged = false;
    while iterations < opts.max_iter.max(2) {
        apply(g, &x, &mut y);
        iterations += 1;
        remove_mean(&mut y);
        let rho = norm(&y);
        lambda = rho;
        if rho == 0.0 {
            residual = 0.0;
            converged = true;
            break;
        }
        if let Some((px, prho)) = &prev {
            let r: f64 = y.iter().zip(px).map(|(yi, xi)| (yi - prho * xi).powi(2)).sum::<f64>().sqrt();
            residual = r / prho;
            if residual <= opts.tol {
                converged = true;
                break;
            }
        }
        let next: Vec<f64> = y.iter().map(|v| v / rho).collect();
        prev = Some((std::mem::replace(&mut x, next), rho));
    }
    Ok(SpectralSummary {
        d,
        lambda,
        c: lambda / (d as f64).sqrt(),
        method: Method::PowerIteration,
        residual,
        iterations,
        converged,
        second: None,
        smallest: None,
    })
}

/// Lower bound `(d - lambda) / 2` on the edge expansion of a regular graph,
/// floored at zero.
pub fn spectral_expansion_lower_bound(g: &Graph, lambda: f64) -> Result<f64, SpectralError> {
    let d = require_regular(g)?;
    Ok(((d as f64 - lambda) / 2.0).max(0.0))
}

/// One audited `(S, T)` pair.
#[derive(Debug, Clone, PartialEq)]
pub struct PairDescriptor {
    /// Index of the random sample, `None` for the fixed pairs.
    pub sample: Option<usize>,
    pub s_size: usize,
    pub t_size: usize,
    pub directed_edges: usize,
    pub expected: f64,
    pub slack: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixingAuditReport {
    pub samples: usize,
    pub max_normalized_slack: f64,
    pub worst: PairDescriptor,
    pub violations: Vec<PairDescriptor>,
}

/// `|e(S,T) - d|S||T|/n| / (lambda sqrt(|S||T|))` for one pair.
pub fn normalized_slack(g: &Graph, d: usize, lambda: f64, s: &VertexSet, t: &VertexSet) -> PairDescriptor {
    let (a, b) = (s.len(), t.len());
    let directed_edges = directed_pair_count(g, s, t).expect("sets match the graph");
    let expected = d as f64 * a as f64 * b as f64 / g.n() as f64;
    let gap = (directed_edges as f64 - expected).abs();
    let scale = lambda * ((a * b) as f64).sqrt();
    let slack = if gap == 0.0 { 0.0 } else if scale == 0.0 { f64::INFINITY } else { gap / scale };
    PairDescriptor { sample: None, s_size: a, t_size: b, directed_edges, expected, slack }
}

/// Uniform random subset of `0..n` with `size` members.
pub(crate) fn random_subset(rng: &mut rng::Rng, n: usize, size: usize) -> VertexSet {
    let mut pool: Vec<usize> = (0..n).collect();
    for i in 0..size {
        let j = i + rng::uniform_below(rng, (n - i) as u64) as usize;
        pool.swap(i, j);
    }
    VertexSet::from_members(n, pool[..size].iter().copied())
}

/// Checks the expander mixing lemma on `num_samples` random pairs (each
/// side log-uniform in size) plus `(V, V)`, `({0}, {0})` and `({0}, {n-1})`.
pub fn mixing_lemma_audit(
    g: &Graph,
    lambda: f64,
    num_samples: usize,
    seed: u64,
) -> Result<MixingAuditReport, SpectralError> {
    let d = require_regular(g)?;
    let n = g.n();
    let mut fixed = vec![
        normalized_slack(g, d, lambda, &VertexSet::full(n), &VertexSet::full(n)),
        normalized_slack(g, d, lambda, &VertexSet::from_members(n, [0]), &VertexSet::from_members(n, [0])),
        normalized_slack(g, d, lambda, &VertexSet::from_members(n, [0]), &VertexSet::from_members(n, [n - 1])),
    ];
    let sampled: Vec<PairDescriptor> = (0..num_samples)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(rng::derive_seed(seed, i as u64), Stream::Sampling);
            let a = rng::log_uniform_size(&mut rng, 1, n);
            let b = rng::log_uniform_size(&mut rng, 1, n);
            let s = random_subset(&mut rng, n, a);
            let t = random_subset(&mut rng, n, b);
            PairDescriptor { sample: Some(i), ..normalized_slack(g, d, lambda, &s, &t) }
        })
        .collect();
    fixed.extend(sampled);
    let worst = fixed
        .iter()
        .max_by(|a, b| a.slack.total_cmp(&b.slack))
        .cloned()
        .expect("fixed pairs are always present");
    let violations: Vec<_> = fixed.iter().filter(|p| p.slack > 1.0).cloned().collect();
    Ok(MixingAuditReport {
        samples: fixed.len(),
        max_normalized_slack: worst.slack,
        worst,
        violations,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityReport {
    pub k: usize,
    /// Largest admissible |U|, `floor(c n / (k sqrt d))`.
    pub max_size: usize,
    /// `c sqrt(d) (1 + 1/k)`.
    pub bound: f64,
    pub evaluated: usize,
    pub worst_avg_degree: f64,
    pub worst_size: usize,
    /// worst_avg_degree / bound.
    pub worst_ratio: f64,
    pub violations: usize,
    /// Set when no nonempty set is admissible.
    pub skipped: bool,
}

/// Average degree of `G[U]`.
pub fn induced_average_degree(g: &Graph, u: &VertexSet) -> f64 {
    if u.is_empty() {
        return 0.0;
    }
    directed_pair_count(g, u, u).expect("set matches the graph") as f64 / u.len() as f64
}

/// Grows a dense set from `root` by repeatedly adding the outside vertex
/// with the most neighbors inside (lowest id among ties).
pub(crate) fn greedy_dense_set(g: &Graph, root: usize, size: usize) -> VertexSet {
    let n = g.n();
    let mut inside = VertexSet::empty(n);
    let mut links = vec![0usize; n];
    let mut heap = BinaryHeap::new();
    heap.push((0usize, Reverse(root)));
    while inside.len() < size {
        let v = match heap.pop() {
            Some((count, Reverse(v))) if !inside.contains(v) && count == links[v] => v,
            Some(_) => continue,
            None => match (0..n).find(|&v| !inside.contains(v)) {
                Some(v) => v,
                None => break,
            },
        };
        inside.insert(v);
        for &w in g.neighbors(v) {
            let w = w as usize;
            if !inside.contains(w) {
                links[w] += 1;
                heap.push((links[w], Reverse(w)));
            }
        }
    }
    inside
}

/// Checks that small sets are sparse: every admissible `U` has average
/// degree in `G[U]` at most `lambda (1 + 1/k)`. Each trial evaluates one
/// uniform random set and one greedily densified set of a log-uniform size.
pub fn density_bound_check(
    g: &Graph,
    lambda: f64,
    k: usize,
    trials: usize,
    seed: u64,
) -> Result<DensityReport, SpectralError> {
    assert!(k >= 1, "k must be a positive integer");
    let d = require_regular(g)?;
    let n = g.n();
    let bound = lambda * (1.0 + 1.0 / k as f64);
    let limit = lambda * n as f64 / (k as f64 * d as f64);
    let max_size = (limit.floor() as usize).min(n);
    let mut report = DensityReport {
        k,
        max_size,
        bound,
        evaluated: 0,
        worst_avg_degree: 0.0,
        worst_size: 0,
        worst_ratio: 0.0,
        violations: 0,
        skipped: max_size < 1,
    };
    if report.skipped {
        return Ok(report);
    }
    let results: Vec<(usize, f64, usize, f64)> = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = rng::stream(rng::derive_seed(seed, i as u64), Stream::Sampling);
            let size = rng::log_uniform_size(&mut rng, 1, max_size);
            let random = random_subset(&mut rng, n, size);
            let root = rng::uniform_below(&mut rng, n as u64) as usize;
            let dense = greedy_dense_set(g, root, size);
            (size, induced_average_degree(g, &random), dense.len(), induced_average_degree(g, &dense))
        })
        .collect();
    for (a, avg_a, b, avg_b) in results {
        for (size, avg) in [(a, avg_a), (b, avg_b)] {
            report.evaluated += 1;
            if avg > bound {
                report.violations += 1;
            }
            if avg > report.worst_avg_degree {
                report.worst_avg_degree = avg;
                report.worst_size = size;
            }
        }
    }
    report.worst_ratio = if bound > 0.0 { report.worst_avg_degree / bound } else { 0.0 };
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{complete_graph, cycle_graph, named, paley_graph, random_regular};
    use std::f64::consts::PI;

    #[test]
    fn complete_graph_lambda_is_one() {
        for n in [5, 12, 40] {
            let s = dense_lambda(&complete_graph(n).unwrap()).unwrap();
            assert!((s.lambda - 1.0).abs() < 1e-9, "n={n}: {}", s.lambda);
            // c = 1/sqrt(n-1)
            assert!((s.c - 1.0 / ((n - 1) as f64).sqrt()).abs() < 1e-9);
        }
    }

    #[test]
    fn four_cycle_hits_negative_branch() {
        let s = dense_lambda(&cycle_graph(4).unwrap()).unwrap();
        assert!((s.lambda - 2.0).abs() < 1e-12);
        assert!((s.smallest.unwrap() + 2.0).abs() < 1e-12);
        assert!(s.second.unwrap().abs() < 1e-12);
    }

    #[test]
    fn petersen_spectrum() {
        let spec = dense_spectrum(&named::petersen());
        let expect = [3.0, 1.0, 1.0, 1.0, 1.0, 1.0, -2.0, -2.0, -2.0, -2.0];
        for (a, b) in spec.iter().zip(expect) {
            assert!((a - b).abs() < 1e-9);
        }
        assert!((dense_lambda(&named::petersen()).unwrap().lambda - 2.0).abs() < 1e-9);
    }

    #[test]
    fn power_matches_dense_small() {
        let opts = SpectralOptions::default();
        for g in [
            complete_graph(9).unwrap(),
            cycle_graph(9).unwrap(),
            cycle_graph(10).unwrap(),
            named::petersen(),
            paley_graph(17).unwrap(),
            random_regular(60, 5, 3).unwrap(),
        ] {
            let a = dense_lambda(&g).unwrap();
            let b = power_lambda(&g, &opts).unwrap();
            assert!(b.converged, "{g:?}");
            assert!((a.lambda - b.lambda).abs() < 1e-8, "{g:?}: {} vs {}", a.lambda, b.lambda);
        }
    }

    #[test]
    fn odd_cycle_lambda() {
        // mu_n = -2cos(pi/n) dominates mu_2 = 2cos(2pi/n) in magnitude
        let s = dense_lambda(&cycle_graph(5).unwrap()).unwrap();
        assert!((s.second.unwrap() - 2.0 * (2.0 * PI / 5.0).cos()).abs() < 1e-12);
        assert!((s.lambda - 2.0 * (PI / 5.0).cos()).abs() < 1e-12);
    }

    #[test]
    fn rejects_irregular() {
        let e = second_eigenvalue_abs(&named::path(4), &SpectralOptions::default());
        assert_eq!(e, Err(SpectralError::NotRegular { min: 1, max: 2 }));
    }

    #[test]
    fn non_convergence_is_flagged() {
        let g = random_regular(600, 4, 1).unwrap();
        let opts = SpectralOptions { max_iter: 5, ..Default::default() };
        let s = second_eigenvalue_abs(&g, &opts).unwrap();
        assert_eq!(s.method, Method::PowerIteration);
        assert!(!s.converged);
        assert_eq!(s.iterations, 5);
        assert!(s.lambda > 0.0 && s.lambda <= 4.0);
    }

    #[test]
    fn lower_bound_values() {
        assert!((spectral_expansion_lower_bound(&complete_graph(5).unwrap(), 1.0).unwrap() - 1.5).abs() < 1e-15);
        let c8 = cycle_graph(8).unwrap();
        let lam = 2.0 * (PI / 4.0).cos();
        assert!((spectral_expansion_lower_bound(&c8, lam).unwrap() - 0.292_893_218_8).abs() < 1e-9);
        // bipartite: lambda = d
        let c6 = cycle_graph(6).unwrap();
        assert_eq!(spectral_expansion_lower_bound(&c6, 2.0).unwrap(), 0.0);
    }

    #[test]
    fn slack_examples() {
        let k5 = complete_graph(5).unwrap();
        let s = VertexSet::from_members(5, [0, 1]);
        let t = VertexSet::from_members(5, [1, 2]);
        let p = normalized_slack(&k5, 4, 1.0, &s, &t);
        assert_eq!(p.directed_edges, 3);
        assert!((p.expected - 3.2).abs() < 1e-12);
        assert!((p.slack - 0.1).abs() < 1e-12); // 0.2 / (1 * sqrt 4)
        let full = VertexSet::full(5);
        assert_eq!(normalized_slack(&k5, 4, 1.0, &full, &full).slack, 0.0);
    }

    #[test]
    fn audit_on_paley_has_no_violations() {
        let g = paley_graph(101).unwrap();
        let lam = dense_lambda(&g).unwrap().lambda;
        let r = mixing_lemma_audit(&g, lam, 500, 7).unwrap();
        assert_eq!(r.samples, 503);
        assert!(r.violations.is_empty());
        assert!(r.max_normalized_slack <= 1.0);
        // a deliberately tiny lambda must be caught
        let bad = mixing_lemma_audit(&g, 0.01, 50, 7).unwrap();
        assert!(!bad.violations.is_empty());
    }

    #[test]
    fn density_skips_when_vacuous() {
        // K_10, k = 1: c n / sqrt(d) = (1/3) * 10 / 3 = 10/9, so only singletons
        let g = complete_graph(10).unwrap();
        let r = density_bound_check(&g, 1.0, 1, 20, 1).unwrap();
        assert_eq!(r.max_size, 1);
        assert_eq!(r.worst_avg_degree, 0.0);
        let r = density_bound_check(&g, 1.0, 2, 20, 1).unwrap();
        assert!(r.skipped);
    }

    #[test]
    fn greedy_set_grows_connected_dense() {
        let g = named::dumbbell(6);
        let u = greedy_dense_set(&g, 0, 6);
        assert_eq!(u.to_vec(), vec![0, 1, 2, 3, 4, 5]);
    }
}
