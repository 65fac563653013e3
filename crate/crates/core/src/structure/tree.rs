//! Labeled trees, centroids and the balanced-subtree extraction.

use std::collections::VecDeque;

use thiserror::Error;

use crate::graph::{Graph, VertexSet};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TreeError {
    #[error("tree is empty")]
    Empty,
    #[error("parent/label arrays do not match the vertex list")]
    LengthMismatch,
    #[error("parent pointers do not form a single rooted tree")]
    NotATree,
    #[error("component is not connected")]
    Disconnected,
    #[error("S fraction {s_count}/{size} is below 1/{k}")]
    Unbalanced { s_count: usize, size: usize, k: usize },
    #[error("target size {target} must lie in 1..={max}")]
    TargetOutOfRange { target: usize, max: usize },
    #[error("k must be at least 1")]
    ZeroK,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Label {
    S,
    I,
}

/// A rooted tree over vertices of some graph.
///
/// Position `i` describes vertex `vertices[i]`; `parent[i]` is a position,
/// and the root is its own parent.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledTree {
    vertices: Vec<usize>,
    parent: Vec<usize>,
    label: Vec<Label>,
}

impl LabeledTree {
    pub fn new(vertices: Vec<usize>, parent: Vec<usize>, label: Vec<Label>) -> Result<Self, TreeError> {
        let n = vertices.len();
        if n == 0 {
            return Err(TreeError::Empty);
        }
        if parent.len() != n || label.len() != n {
            return Err(TreeError::LengthMismatch);
        }
        if parent.iter().any(|&p| p >= n) || parent.iter().enumerate().filter(|&(i, &p)| i == p).count() != 1 {
            return Err(TreeError::NotATree);
        }
        // every vertex must reach the root without revisiting
        let mut state = vec![0u8; n]; // 0 unknown, 1 on path, 2 reaches root
        for start in 0..n {
            let mut path = Vec::new();
            let mut v = start;
            while state[v] == 0 {
                state[v] = 1;
                path.push(v);
                if parent[v] == v {
                    break;
                }
                v = parent[v];
            }
            if state[v] == 1 && parent[v] != v {
                return Err(TreeError::NotATree);
            }
            for u in path {
                state[u] = 2;
            }
        }
        Ok(Self { vertices, parent, label })
    }

    /// Decodes a Prüfer sequence over `0..seq.len()+2`.
    pub fn from_prufer(seq: &[usize], label: Vec<Label>) -> Result<Self, TreeError> {
        let n = seq.len() + 2;
        if label.len() != n || seq.iter().any(|&x| x >= n) {
            return Err(TreeError::LengthMismatch);
        }
        let mut degree = vec![1usize; n];
        for &x in seq {
            degree[x] += 1;
        }
        let mut adj = vec![Vec::new(); n];
        let mut leaves: std::collections::BTreeSet<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
        for &x in seq {
            let leaf = leaves.pop_first().expect("prufer decoding always has a leaf");
            adj[leaf].push(x);
            adj[x].push(leaf);
            degree[x] -= 1;
            if degree[x] == 1 {
                leaves.insert(x);
            }
        }
        let a = leaves.pop_first().unwrap();
        let b = leaves.pop_first().unwrap();
        adj[a].push(b);
        adj[b].push(a);
        Ok(Self::rooted_from_adjacency((0..n).collect(), &adj, label, 0))
    }

    fn rooted_from_adjacency(vertices: Vec<usize>, adj: &[Vec<usize>], label: Vec<Label>, root: usize) -> Self {
        let n = vertices.len();
        let mut parent = vec![usize::MAX; n];
        parent[root] = root;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            for &w in &adj[u] {
                if parent[w] == usize::MAX {
                    parent[w] = u;
                    queue.push_back(w);
                }
            }
        }
        Self { vertices, parent, label }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// Original vertex ids by position.
    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    pub fn labels(&self) -> &[Label] {
        &self.label
    }

    pub fn parent_positions(&self) -> &[usize] {
        &self.parent
    }

    /// Original id of the parent of the vertex at position `i`.
    pub fn parent_id(&self, i: usize) -> usize {
        self.vertices[self.parent[i]]
    }

    pub fn s_count(&self) -> usize {
        self.label.iter().filter(|&&l| l == Label::S).count()
    }

    /// Tree edges as original-id pairs `(child, parent)`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).filter(|&i| self.parent[i] != i).map(|i| (self.vertices[i], self.parent_id(i)))
    }

    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.len()];
        for (i, &p) in self.parent.iter().enumerate() {
            if p != i {
                adj[i].push(p);
                adj[p].push(i);
            }
        }
        for row in &mut adj {
            row.sort_by_key(|&j| self.vertices[j]);
        }
        adj
    }
}

/// Centroid of the live part of a tree: minimises the largest component
/// left after deleting it, lowest original id among ties.
fn centroid(adj: &[Vec<usize>], alive: &[bool], ids: &[usize]) -> (usize, usize) {
    let root = (0..adj.len()).find(|&v| alive[v]).expect("live part is nonempty");
    let mut order = vec![root];
    let mut parent = vec![usize::MAX; adj.len()];
    parent[root] = root;
    let mut i = 0;
    while i < order.len() {
        let u = order[i];
        i += 1;
        for &w in &adj[u] {
            if alive[w] && parent[w] == usize::MAX {
                parent[w] = u;
                order.push(w);
            }
        }
    }
    let total = order.len();
    let mut size = vec![1usize; adj.len()];
    let mut heaviest_child = vec![0usize; adj.len()];
    for &u in order.iter().rev() {
        let p = parent[u];
        if p != u {
            size[p] += size[u];
            heaviest_child[p] = heaviest_child[p].max(size[u]);
        }
    }
    order
        .iter()
        .map(|&v| (heaviest_child[v].max(total - size[v]), ids[v], v))
        .min()
        .map(|(worst, _, v)| (v, worst))
        .unwrap()
}

/// Original id of the centroid of `t`. Every component of `t - v` has at
/// most `floor(|t|/2)` vertices.
pub fn tree_centroid(t: &LabeledTree) -> usize {
    let alive = vec![true; t.len()];
    let (v, _) = centroid(&t.adjacency(), &alive, &t.vertices);
    t.vertices[v]
}

/// Largest component size left by deleting the centroid.
pub fn centroid_max_component(t: &LabeledTree) -> usize {
    let alive = vec![true; t.len()];
    centroid(&t.adjacency(), &alive, &t.vertices).1
}

struct Part {
    members: Vec<usize>,
    s: usize,
}

impl Part {
    /// `s / size >= 1/k`.
    fn dense_enough(&self, k: usize) -> bool {
        self.s * k >= self.members.len()
    }
}

/// Finds a subtree with between `t_target` and `2 t_target - 1` vertices in
/// which at least a `1/k` fraction carry label `S`.
///
/// Repeatedly splits at the centroid: descend into a branch of size at least
/// `t_target` or its complement, whichever keeps the fraction; otherwise drop
/// a branch whose fraction is at most `1/k`; otherwise every branch is
/// strictly above `1/k` and branches are attached to the centroid until the
/// size reaches `t_target`.
pub fn extract_balanced_subtree(t: &LabeledTree, t_target: usize, k: usize) -> Result<LabeledTree, TreeError> {
    if k == 0 {
        return Err(TreeError::ZeroK);
    }
    let n = t.len();
    let s_total = t.s_count();
    if s_total * k < n {
        return Err(TreeError::Unbalanced { s_count: s_total, size: n, k });
    }
    if t_target == 0 || 2 * t_target > n {
        return Err(TreeError::TargetOutOfRange { target: t_target, max: n / 2 });
    }
    let adj = t.adjacency();
    let is_s: Vec<bool> = t.label.iter().map(|&l| l == Label::S).collect();
    let mut alive = vec![true; n];
    let mut live = n;
    let part_of = |members: Vec<usize>| Part { s: members.iter().filter(|&&v| is_s[v]).count(), members };

    let chosen: Vec<usize> = loop {
        debug_assert!(live >= 2 * t_target);
        let (c, _) = centroid(&adj, &alive, &t.vertices);
        let branches: Vec<Part> = adj[c]
            .iter()
            .filter(|&&nb| alive[nb])
            .map(|&nb| part_of(collect_branch(&adj, &alive, c, nb)))
            .collect();
        let complement = |b: &Part, alive: &[bool]| -> Part {
            let mut skip = vec![false; n];
            b.members.iter().for_each(|&v| skip[v] = true);
            part_of((0..n).filter(|&v| alive[v] && !skip[v]).collect())
        };

        let next = if let Some(big) = branches.iter().find(|b| b.members.len() >= t_target) {
            let rest = complement(big, &alive);
            if big.dense_enough(k) { part_of(big.members.clone()) } else { rest }
        } else if let Some(sparse) = branches.iter().find(|b| b.s * k <= b.members.len()) {
            complement(sparse, &alive)
        } else {
            let mut acc = vec![c];
            for b in &branches {
                if acc.len() >= t_target {
                    break;
                }
                acc.extend(&b.members);
            }
            break acc;
        };
        debug_assert!(next.dense_enough(k) && next.members.len() >= t_target);
        if next.members.len() < 2 * t_target {
            break next.members;
        }
        alive.iter_mut().for_each(|a| *a = false);
        next.members.iter().for_each(|&v| alive[v] = true);
        live = next.members.len();
    };
    Ok(subtree(t, &adj, chosen))
}

fn collect_branch(adj: &[Vec<usize>], alive: &[bool], center: usize, start: usize) -> Vec<usize> {
    let mut out = vec![start];
    let mut stack = vec![(start, center)];
    while let Some((u, from)) = stack.pop() {
        for &w in &adj[u] {
            if w != from && alive[w] {
                out.push(w);
                stack.push((w, u));
            }
        }
    }
    out
}

/// Restricts `t` to the connected position set `members`, keeping the input
/// order and rooting at the first member.
fn subtree(t: &LabeledTree, adj: &[Vec<usize>], mut members: Vec<usize>) -> LabeledTree {
    members.sort_unstable();
    let mut local = vec![usize::MAX; t.len()];
    for (i, &v) in members.iter().enumerate() {
        local[v] = i;
    }
    let sub_adj: Vec<Vec<usize>> = members
        .iter()
        .map(|&v| adj[v].iter().filter(|&&w| local[w] != usize::MAX).map(|&w| local[w]).collect())
        .collect();
    let vertices = members.iter().map(|&v| t.vertices[v]).collect();
    let label = members.iter().map(|&v| t.label[v]).collect();
    LabeledTree::rooted_from_adjacency(vertices, &sub_adj, label, 0)
}

/// Breadth-first spanning tree of the connected set `component`, rooted at
/// its smallest vertex and visiting neighbors in ascending order. Vertices
/// are listed in discovery order; members of `s_labels` get label `S`.
pub fn spanning_tree(g: &Graph, component: &VertexSet, s_labels: &VertexSet) -> Result<LabeledTree, TreeError> {
    let root = component.min().ok_or(TreeError::Empty)?;
    let mut position = vec![usize::MAX; g.n()];
    let mut vertices = vec![root];
    let mut parent = vec![0];
    position[root] = 0;
    let mut i = 0;
    while i < vertices.len() {
        let u = vertices[i];
        for &w in g.neighbors(u) {
            let w = w as usize;
            if component.contains(w) && position[w] == usize::MAX {
                position[w] = vertices.len();
                vertices.push(w);
                parent.push(i);
            }
        }
        i += 1;
    }
    if vertices.len() != component.len() {
        return Err(TreeError::Disconnected);
    }
    let label = vertices.iter().map(|&v| if s_labels.contains(v) { Label::S } else { Label::I }).collect();
    Ok(LabeledTree { vertices, parent, label })
}
