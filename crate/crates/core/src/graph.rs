//! Immutable simple undirected graphs and the edge-counting conventions
//! used throughout the crate.

use std::cmp::Reverse;
use std::fmt;

use fixedbitset::FixedBitSet;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("endpoint {vertex} out of range for {n} vertices")]
    EndpointOutOfRange { vertex: usize, n: usize },
    #[error("vertex set over {set} vertices used with a graph on {graph}")]
    UniverseMismatch { set: usize, graph: usize },
}

/// A set of vertices of a graph with `universe` vertices.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    bits: FixedBitSet,
}

impl VertexSet {
    pub fn empty(universe: usize) -> Self {
        Self { bits: FixedBitSet::with_capacity(universe) }
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        Self { bits }
    }

    /// Panics if a member is `>= universe`.
    pub fn from_members<I: IntoIterator<Item = usize>>(universe: usize, members: I) -> Self {
        let mut set = Self::empty(universe);
        for v in members {
            set.insert(v);
        }
        set
    }

    pub fn universe(&self) -> usize {
        self.bits.len()
    }

    pub fn len(&self) -> usize {
        self.bits.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_clear()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.bits.contains(v)
    }

    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe(), "vertex {v} outside universe {}", self.universe());
        !self.bits.put(v)
    }

    pub fn remove(&mut self, v: usize) {
        self.bits.set(v, false);
    }

    /// Members in ascending order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.bits.ones()
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    pub fn complement(&self) -> Self {
        let mut bits = self.bits.clone();
        bits.toggle_range(..);
        Self { bits }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.union_with(&other.bits);
        Self { bits }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.intersect_with(&other.bits);
        Self { bits }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut bits = self.bits.clone();
        bits.difference_with(&other.bits);
        Self { bits }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.bits.is_subset(&other.bits)
    }

    pub fn min(&self) -> Option<usize> {
        self.bits.minimum()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// Simple undirected graph on vertices `0..n` in compressed sparse rows.
///
/// Neighbor lists are strictly ascending, symmetric, loop-free and free of
/// parallel edges. Isolated vertices are part of the graph.
#[derive(Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<u32>,
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.n())
            .field("m", &self.m())
            .finish()
    }
}

/// Builds a graph, rejecting loops, duplicates (in either orientation) and
/// out-of-range endpoints.
pub fn build_graph(n: usize, edges: &[(usize, usize)]) -> Result<Graph, GraphError> {
    assert!(n <= u32::MAX as usize, "vertex ids are stored as u32");
    let mut degree = vec![0usize; n];
    for &(u, v) in edges {
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::EndpointOutOfRange { vertex: w, n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        degree[u] += 1;
        degree[v] += 1;
    }
    let mut offsets = Vec::with_capacity(n + 1);
    offsets.push(0);
    for d in &degree {
        offsets.push(offsets.last().unwrap() + d);
    }
    let mut fill = offsets[..n].to_vec();
    let mut neighbors = vec![0u32; offsets[n]];
    for &(u, v) in edges {
        neighbors[fill[u]] = v as u32;
        fill[u] += 1;
        neighbors[fill[v]] = u as u32;
        fill[v] += 1;
    }
    for u in 0..n {
        let row = &mut neighbors[offsets[u]..offsets[u + 1]];
        row.sort_unstable();
        if let Some(w) = row.windows(2).find(|w| w[0] == w[1]) {
            let v = w[0] as usize;
            return Err(GraphError::DuplicateEdge(u.min(v), u.max(v)));
        }
    }
    Ok(Graph { offsets, neighbors })
}

impl Graph {
    pub fn edgeless(n: usize) -> Self {
        Self { offsets: vec![0; n + 1], neighbors: Vec::new() }
    }

    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[u32] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n() && v < self.n() && self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v` in ascending lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    /// The common degree if every vertex has the same degree.
    pub fn regular_degree(&self) -> Option<usize> {
        if self.n() == 0 {
            return None;
        }
        let d = self.degree(0);
        (0..self.n()).all(|v| self.degree(v) == d).then_some(d)
    }

    /// `y = A x` for the adjacency matrix `A`.
    pub fn adjacency_apply(&self, x: &[f64], y: &mut [f64]) {
        for (v, out) in y.iter_mut().enumerate() {
            *out = self.neighbors(v).iter().map(|&u| x[u as usize]).sum();
        }
    }

    fn check_universe(&self, s: &VertexSet) -> Result<(), GraphError> {
        if s.universe() == self.n() {
            Ok(())
        } else {
            Err(GraphError::UniverseMismatch { set: s.universe(), graph: self.n() })
        }
    }
}

/// Old-to-new vertex relabelling produced by [`induced_subgraph`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Relabel {
    forward: Vec<Option<usize>>,
    backward: Vec<usize>,
}

impl Relabel {
    pub fn new_id(&self, old: usize) -> Option<usize> {
        self.forward.get(old).copied().flatten()
    }

    pub fn old_id(&self, new: usize) -> usize {
        self.backward[new]
    }

    /// Old ids in new-id order (ascending).
    pub fn kept(&self) -> &[usize] {
        &self.backward
    }
}

/// Subgraph on `keep`, relabelled to `0..|keep|` in ascending order.
pub fn induced_subgraph(g: &Graph, keep: &VertexSet) -> Result<(Graph, Relabel), GraphError> {
    g.check_universe(keep)?;
    let backward = keep.to_vec();
    let mut forward = vec![None; g.n()];
    for (new, &old) in backward.iter().enumerate() {
        forward[old] = Some(new);
    }
    let mut offsets = Vec::with_capacity(backward.len() + 1);
    offsets.push(0);
    let mut neighbors = Vec::new();
    for &old in &backward {
        // forward is monotone, so mapped rows stay ascending
        neighbors.extend(g.neighbors(old).iter().filter_map(|&u| forward[u as usize].map(|x| x as u32)));
        offsets.push(neighbors.len());
    }
    Ok((Graph { offsets, neighbors }, Relabel { forward, backward }))
}

/// Number of ordered pairs `(u, v)` with `u ∈ s`, `v ∈ t` and `uv` an edge.
pub fn directed_pair_count(g: &Graph, s: &VertexSet, t: &VertexSet) -> Result<usize, GraphError> {
    g.check_universe(s)?;
    g.check_universe(t)?;
    Ok(s.iter()
        .map(|u| g.neighbors(u).iter().filter(|&&v| t.contains(v as usize)).count())
        .sum())
}

/// Number of edges with exactly one endpoint in `s`.
pub fn boundary_edge_count(g: &Graph, s: &VertexSet) -> Result<usize, GraphError> {
    directed_pair_count(g, s, &s.complement())
}

/// Connected components, largest first; equal sizes ordered by smallest member.
pub fn connected_components(g: &Graph) -> Vec<VertexSet> {
    let labels = component_labels(g);
    let count = labels.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut sets = vec![VertexSet::empty(g.n()); count];
    for (v, &c) in labels.iter().enumerate() {
        sets[c].insert(v);
    }
    // labels are assigned in order of smallest member, so a stable sort keeps ties right
    sets.sort_by_key(|s| Reverse(s.len()));
    sets
}

/// Per-vertex component index, components numbered by their smallest vertex.
pub fn component_labels(g: &Graph) -> Vec<usize> {
    const UNSEEN: usize = usize::MAX;
    let mut label = vec![UNSEEN; g.n()];
    let mut stack = Vec::new();
    let mut next = 0;
    for root in 0..g.n() {
        if label[root] != UNSEEN {
            continue;
        }
        label[root] = next;
        stack.push(root);
        while let Some(u) = stack.pop() {
            for &w in g.neighbors(u) {
                let w = w as usize;
                if label[w] == UNSEEN {
                    label[w] = next;
                    stack.push(w);
                }
            }
        }
        next += 1;
    }
    label
}

pub fn is_connected(g: &Graph) -> bool {
    g.n() <= 1 || component_labels(g).iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        build_graph(n, &edges).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        let edges: Vec<_> = (0..n).map(|u| (u, (u + 1) % n)).collect();
        build_graph(n, &edges).unwrap()
    }

    fn set(n: usize, xs: &[usize]) -> VertexSet {
        VertexSet::from_members(n, xs.iter().copied())
    }

    #[test]
    fn triangle() {
        let g = build_graph(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!((g.n(), g.m()), (3, 3));
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 1), (0, 2), (1, 2)]);
        assert_eq!(g.regular_degree(), Some(2));
    }

    #[test]
    fn build_errors_are_distinct() {
        assert_eq!(build_graph(2, &[(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert_eq!(build_graph(4, &[(0, 1), (1, 0)]), Err(GraphError::DuplicateEdge(0, 1)));
        assert_eq!(
            build_graph(3, &[(0, 3)]),
            Err(GraphError::EndpointOutOfRange { vertex: 3, n: 3 })
        );
    }

    #[test]
    fn induced_k4_to_k3() {
        let (h, map) = induced_subgraph(&complete(4), &set(4, &[0, 1, 2])).unwrap();
        assert_eq!(h, complete(3));
        assert_eq!(map.kept(), &[0, 1, 2]);
        assert_eq!(map.new_id(3), None);
    }

    #[test]
    fn induced_identity() {
        let g = cycle(7);
        let (h, map) = induced_subgraph(&g, &VertexSet::full(7)).unwrap();
        assert_eq!(h, g);
        assert!((0..7).all(|v| map.new_id(v) == Some(v)));
    }

    #[test]
    fn induced_cycle_subset() {
        // C_5 on {0,1,3}: only 0-1 survives (1-2, 2-3, 3-4, 4-0 lose an endpoint)
        let (h, map) = induced_subgraph(&cycle(5), &set(5, &[0, 1, 3])).unwrap();
        assert_eq!(h.edges().collect::<Vec<_>>(), vec![(0, 1)]);
        assert_eq!(map.old_id(2), 3);
    }

    #[test]
    fn directed_pairs_k5() {
        // pairs: (0,1),(0,2),(1,2) -> (1,1) is not an edge
        let g = complete(5);
        assert_eq!(directed_pair_count(&g, &set(5, &[0, 1]), &set(5, &[1, 2])).unwrap(), 3);
        let all = VertexSet::full(5);
        assert_eq!(directed_pair_count(&g, &all, &all).unwrap(), 2 * g.m());
        assert_eq!(directed_pair_count(&g, &VertexSet::empty(5), &all).unwrap(), 0);
    }

    #[test]
    fn boundary_counts() {
        let g = complete(4);
        assert_eq!(boundary_edge_count(&g, &set(4, &[0])).unwrap(), 3);
        assert_eq!(boundary_edge_count(&g, &set(4, &[0, 1])).unwrap(), 4);
        assert_eq!(boundary_edge_count(&g, &VertexSet::full(4)).unwrap(), 0);
    }

    #[test]
    fn universe_mismatch() {
        let g = complete(4);
        assert!(matches!(
            boundary_edge_count(&g, &VertexSet::empty(5)),
            Err(GraphError::UniverseMismatch { set: 5, graph: 4 })
        ));
    }

    #[test]
    fn components() {
        assert_eq!(connected_components(&cycle(6)).len(), 1);
        let singletons = connected_components(&Graph::edgeless(4));
        assert_eq!(singletons.iter().map(|s| s.to_vec()).collect::<Vec<_>>(), vec![vec![0], vec![1], vec![2], vec![3]]);
        let two = build_graph(6, &[(3, 4), (4, 5), (3, 5), (0, 1), (1, 2), (0, 2)]).unwrap();
        let comps = connected_components(&two);
        assert_eq!(comps[0].to_vec(), vec![0, 1, 2]);
        assert_eq!(comps[1].to_vec(), vec![3, 4, 5]);
        let mixed = build_graph(5, &[(3, 4), (1, 2), (2, 0)]).unwrap();
        let comps = connected_components(&mixed);
        assert_eq!(comps[0].to_vec(), vec![0, 1, 2]);
        assert_eq!(comps[1].to_vec(), vec![3, 4]);
    }
}
