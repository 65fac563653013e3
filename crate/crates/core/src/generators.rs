//! Host graph families: complete graphs, cycles, random regular graphs and
//! Paley graphs, plus a few small named graphs used as fixtures.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand_core::RngCore;
use thiserror::Error;

use crate::graph::{build_graph, Graph};
use crate::rng::{self, Stream};

/// Restart budget for the random regular sampler.
pub const MAX_RESTARTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GeneratorError {
    #[error("complete graph needs n >= 2, got {0}")]
    CompleteTooSmall(usize),
    #[error("cycle needs n >= 3, got {0}")]
    CycleTooSmall(usize),
    #[error("n*d must be even (n={n}, d={d})")]
    OddDegreeSum { n: usize, d: usize },
    #[error("random regular graph needs 3 <= d < n (n={n}, d={d})")]
    DegreeOutOfRange { n: usize, d: usize },
    #[error("no simple {d}-regular graph on {n} vertices after {attempts} attempts")]
    RestartBudgetExhausted { n: usize, d: usize, attempts: usize },
    #[error("paley graph needs a prime q with q = 1 mod 4, got {0}")]
    InvalidPaleyOrder(usize),
    #[error("{0} requires a degree")]
    MissingDegree(Family),
    #[error("unknown graph family {0:?}")]
    UnknownFamily(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Complete,
    Cycle,
    RandomRegular,
    Paley,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Complete => "complete",
            Family::Cycle => "cycle",
            Family::RandomRegular => "random-regular",
            Family::Paley => "paley",
        })
    }
}

impl FromStr for Family {
    type Err = GeneratorError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "complete" => Ok(Family::Complete),
            "cycle" => Ok(Family::Cycle),
            "random-regular" => Ok(Family::RandomRegular),
            "paley" => Ok(Family::Paley),
            other => Err(GeneratorError::UnknownFamily(other.to_string())),
        }
    }
}

/// Which host to build. For Paley graphs `n` is the prime order `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSpec {
    pub family: Family,
    pub n: usize,
    pub d: Option<usize>,
    pub seed: u64,
}

impl GeneratorSpec {
    pub fn generate(&self) -> Result<Graph, GeneratorError> {
        match self.family {
            Family::Complete => complete_graph(self.n),
            Family::Cycle => cycle_graph(self.n),
            Family::RandomRegular => {
                let d = self.d.ok_or(GeneratorError::MissingDegree(self.family))?;
                random_regular(self.n, d, self.seed)
            }
            Family::Paley => paley_graph(self.n),
        }
    }
}

pub fn complete_graph(n: usize) -> Result<Graph, GeneratorError> {
    if n < 2 {
        return Err(GeneratorError::CompleteTooSmall(n));
    }
    let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    Ok(build_graph(n, &edges).expect("complete graph is simple"))
}

pub fn cycle_graph(n: usize) -> Result<Graph, GeneratorError> {
    if n < 3 {
        return Err(GeneratorError::CycleTooSmall(n));
    }
    let edges: Vec<_> = (0..n).map(|u| (u, (u + 1) % n)).collect();
    Ok(build_graph(n, &edges).expect("cycle is simple"))
}

/// Random simple `d`-regular graph from the pairing model.
///
/// The `n*d` half-edges are Fisher–Yates shuffled and paired consecutively.
/// Loops and repeated pairs are then removed, in pair-index order, by
/// switches: a bad pair `{a,b}` and a uniformly drawn pair `{c,e}` (with a
/// random orientation bit) become `{a,c}, {b,e}` whenever that creates no
/// loop or repeat. If `64 * n * d` proposals pass without finishing, the
/// whole pairing is redrawn from the same stream, at most [`MAX_RESTARTS`]
/// times. Everything is drawn from the generation stream of `seed`.
pub fn random_regular(n: usize, d: usize, seed: u64) -> Result<Graph, GeneratorError> {
    if (n * d) % 2 == 1 {
        return Err(GeneratorError::OddDegreeSum { n, d });
    }
    if d < 3 || d >= n {
        return Err(GeneratorError::DegreeOutOfRange { n, d });
    }
    let mut rng = rng::stream(seed, Stream::Generation);
    let mut half_edges = vec![0u32; n * d];
    for _ in 0..MAX_RESTARTS {
        for (i, h) in half_edges.iter_mut().enumerate() {
            *h = (i / d) as u32;
        }
        rng::shuffle(&mut rng, &mut half_edges);
        let pairs: Vec<(u32, u32)> = half_edges.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        if let Some(pairs) = repair_pairing(pairs, 64 * n * d, &mut rng) {
            let edges: Vec<_> = pairs.iter().map(|&(a, b)| (a as usize, b as usize)).collect();
            return Ok(build_graph(n, &edges).expect("repaired pairing is simple"));
        }
    }
    Err(GeneratorError::RestartBudgetExhausted { n, d, attempts: MAX_RESTARTS })
}

fn key(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

fn repair_pairing(
    mut pairs: Vec<(u32, u32)>,
    budget: usize,
    rng: &mut rng::Rng,
) -> Option<Vec<(u32, u32)>> {
    let mut count: HashMap<(u32, u32), u32> = HashMap::with_capacity(pairs.len());
    for &(a, b) in &pairs {
        *count.entry(key(a, b)).or_default() += 1;
    }
    let bad = |p: (u32, u32), count: &HashMap<(u32, u32), u32>| p.0 == p.1 || count[&key(p.0, p.1)] > 1;
    let worklist: Vec<usize> = (0..pairs.len()).filter(|&i| bad(pairs[i], &count)).collect();
    let mut proposals = 0usize;
    for i in worklist {
        while bad(pairs[i], &count) {
            if proposals == budget {
                return None;
            }
            proposals += 1;
            let j = rng::uniform_below(rng, pairs.len() as u64) as usize;
            if j == i {
                continue;
            }
            let (a, b) = pairs[i];
            let (c, e) = if rng.next_u64() & 1 == 0 { pairs[j] } else { (pairs[j].1, pairs[j].0) };
            let (x, y) = (key(a, c), key(b, e));
            if a == c || b == e || x == y {
                continue;
            }
            let old_i = key(a, b);
            let old_j = key(c, e);
            // the two new pairs must not already exist once i and j are gone
            let present = |k: (u32, u32)| {
                let mut c = count.get(&k).copied().unwrap_or(0);
                if k == old_i {
                    c -= 1;
                }
                if k == old_j {
                    c -= 1;
                }
                c > 0
            };
            if present(x) || present(y) {
                continue;
            }
            for old in [old_i, old_j] {
                let c = count.get_mut(&old).unwrap();
                *c -= 1;
                if *c == 0 {
                    count.remove(&old);
                }
            }
            *count.entry(x).or_default() += 1;
            *count.entry(y).or_default() += 1;
            pairs[i] = (a, c);
            pairs[j] = (b, e);
        }
    }
    Some(pairs)
}

fn is_prime(q: usize) -> bool {
    q >= 2 && (2..).take_while(|p| p * p <= q).all(|p| !q.is_multiple_of(p))
}

/// Paley graph on `Z_q`: `u ~ v` iff `u - v` is a nonzero square mod `q`.
pub fn paley_graph(q: usize) -> Result<Graph, GeneratorError> {
    if !is_prime(q) || q % 4 != 1 {
        return Err(GeneratorError::InvalidPaleyOrder(q));
    }
    let mut residue = vec![false; q];
    for x in 1..q {
        residue[x * x % q] = true;
    }
    let edges: Vec<_> = (0..q)
        .flat_map(|u| (u + 1..q).map(move |v| (u, v)))
        .filter(|&(u, v)| residue[v - u])
        .collect();
    Ok(build_graph(q, &edges).expect("paley graph is simple"))
}

/// Small fixed graphs used by tests and examples.
pub mod named {
    use super::*;

    /// Petersen graph: outer 5-cycle, inner pentagram, spokes.
    pub fn petersen() -> Graph {
        let mut edges = Vec::new();
        for i in 0..5 {
            edges.push((i, (i + 1) % 5));
            edges.push((5 + i, 5 + (i + 2) % 5));
            edges.push((i, 5 + i));
        }
        build_graph(10, &edges).expect("petersen is simple")
    }

    pub fn path(n: usize) -> Graph {
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        build_graph(n, &edges).expect("path is simple")
    }

    /// Two copies of `K_k` joined by one bridge between vertex `k-1` and `k`.
    pub fn dumbbell(k: usize) -> Graph {
        let mut edges = Vec::new();
        for base in [0, k] {
            for u in 0..k {
                for v in u + 1..k {
                    edges.push((base + u, base + v));
                }
            }
        }
        edges.push((k - 1, k));
        build_graph(2 * k, &edges).expect("dumbbell is simple")
    }
}
