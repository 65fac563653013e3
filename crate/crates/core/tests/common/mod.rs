//! Brute-force oracles shared by the integration tests. Nothing here calls
//! the library's algorithms; only plain loops over edge lists.
#![allow(dead_code)]

use perc_lab::Graph;

pub fn edge_list(g: &Graph) -> Vec<(usize, usize)> {
    let mut edges = Vec::new();
    for u in 0..g.n() {
        for &w in g.neighbors(u) {
            let w = w as usize;
            if u < w {
                edges.push((u, w));
            }
        }
    }
    edges
}

/// Ordered pairs `(u, v)` with `u` in `s`, `v` in `t` and `uv` an edge.
pub fn directed_edges(edges: &[(usize, usize)], s: &[bool], t: &[bool]) -> usize {
    edges.iter().map(|&(u, v)| usize::from(s[u] && t[v]) + usize::from(s[v] && t[u])).sum()
}

pub fn boundary(edges: &[(usize, usize)], s: &[bool]) -> usize {
    edges.iter().filter(|&&(u, v)| s[u] != s[v]).count()
}

/// Component label per vertex by repeated relaxation.
pub fn components(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut label: Vec<usize> = (0..n).collect();
    loop {
        let mut changed = false;
        for &(u, v) in edges {
            let m = label[u].min(label[v]);
            if label[u] != m || label[v] != m {
                label[u] = m;
                label[v] = m;
                changed = true;
            }
        }
        if !changed {
            return label;
        }
    }
}

/// Minimum of `|∂S|/|S|` over nonempty `S` with `|S| <= max_size`, as a
/// reduced fraction `(boundary, size)`.
pub fn brute_expansion(n: usize, edges: &[(usize, usize)], max_size: usize) -> (usize, usize) {
    let mut best = (usize::MAX, 1usize);
    for mask in 1u32..(1u32 << n) {
        let size = mask.count_ones() as usize;
        if size > max_size {
            continue;
        }
        let b = edges.iter().filter(|&&(u, v)| ((mask >> u) & 1) != ((mask >> v) & 1)).count();
        if b * best.1 < best.0.saturating_mul(size) {
            best = (b, size);
        }
    }
    best
}

/// Every Prüfer sequence over `0..n`, in lexicographic order.
pub fn prufer_sequences(n: usize) -> Vec<Vec<usize>> {
    let len = n.saturating_sub(2);
    let total = n.pow(len as u32);
    (0..total)
        .map(|mut code| {
            let mut seq = vec![0; len];
            for slot in seq.iter_mut().rev() {
                *slot = code % n;
                code /= n;
            }
            seq
        })
        .collect()
}

/// Edges of the tree with the given Prüfer sequence, by the textbook
/// smallest-leaf rule.
pub fn prufer_edges(seq: &[usize]) -> Vec<(usize, usize)> {
    let n = seq.len() + 2;
    let mut degree = vec![1; n];
    for &x in seq {
        degree[x] += 1;
    }
    let mut edges = Vec::new();
    for &x in seq {
        let leaf = (0..n).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf, x));
        degree[leaf] = 0;
        degree[x] -= 1;
    }
    let rest: Vec<usize> = (0..n).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// True iff `members` induce a connected subgraph of the edge set.
pub fn induces_connected(members: &[usize], edges: &[(usize, usize)]) -> bool {
    if members.is_empty() {
        return false;
    }
    let mut reached = vec![members[0]];
    let mut changed = true;
    while changed {
        changed = false;
        for &(u, v) in edges {
            let (a, b) = (members.contains(&u), members.contains(&v));
            if a && b {
                let (ru, rv) = (reached.contains(&u), reached.contains(&v));
                if ru != rv {
                    reached.push(if ru { v } else { u });
                    changed = true;
                }
            }
        }
    }
    reached.len() == members.len()
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn jacobi_eigenvalues(mut a: Vec<Vec<f64>>) -> Vec<f64> {
    let n = a.len();
    for _ in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off < 1e-22 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q].abs() < 1e-300 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(|x, y| y.total_cmp(x));
    ev
}

pub fn adjacency_matrix(g: &Graph) -> Vec<Vec<f64>> {
    let mut a = vec![vec![0.0; g.n()]; g.n()];
    for (u, v) in edge_list(g) {
        a[u][v] = 1.0;
        a[v][u] = 1.0;
    }
    a
}

/// `max(|mu_2|, |mu_n|)` from the Jacobi spectrum.
pub fn oracle_lambda(g: &Graph) -> f64 {
    let ev = jacobi_eigenvalues(adjacency_matrix(g));
    ev[1].abs().max(ev[ev.len() - 1].abs())
}
