//! Forest and pseudoforest surgery: hitting long cycles, cutting forests into
//! small pieces, unfolding unicyclic graphs into trees whose square covers
//! them, and chaining a forest into a spanning tree.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;

use crate::graph::Graph;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TreeError {
    #[error("component of vertex {vertex} in part {part} has more than one cycle")]
    NotUnicyclic { part: usize, vertex: usize },
    #[error("input must be acyclic")]
    Cyclic,
    #[error("input must be connected")]
    Disconnected,
    #[error("the number of pieces r must be at least 1")]
    ZeroPieces,
    #[error("component size cap must be at least 1")]
    ZeroCap,
    #[error("joining {components} components needs a degree cap of at least 2, got {cap}")]
    DegreeCapTooSmall { components: usize, cap: usize },
    #[error("a spanning tree needs at least one vertex")]
    EmptyForest,
}

/// Outcome of the cleanup step shared by the embedders.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CleanupPlan {
    /// Sorted removed vertices (cycle hits and forest cuts).
    pub removed: Vec<usize>,
    /// For each part, the vertex sets of the components of the part with
    /// the removed vertices deleted (singletons included).
    pub residual_parts: Vec<Vec<Vec<usize>>>,
}

/// Vertices of the 2-core (the union of cycles, for a pseudoforest).
fn two_core(g: &Graph) -> Vec<bool> {
    let n = g.vertex_count();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut alive = vec![true; n];
    let mut queue: VecDeque<usize> = (0..n).filter(|&v| deg[v] <= 1).collect();
    while let Some(v) = queue.pop_front() {
        if !alive[v] {
            continue;
        }
        alive[v] = false;
        for &w in g.neighbors(v) {
            if alive[w] {
                deg[w] -= 1;
                if deg[w] == 1 {
                    queue.push_back(w);
                }
            }
        }
    }
    alive
}

/// Per component: (vertex count, edge count).
fn component_sizes(g: &Graph, label: &[usize], count: usize) -> Vec<(usize, usize)> {
    let mut sizes = vec![(0, 0); count];
    for v in 0..g.vertex_count() {
        sizes[label[v]].0 += 1;
        sizes[label[v]].1 += g.degree(v);
    }
    for s in &mut sizes {
        s.1 /= 2;
    }
    sizes
}

/// One cycle vertex (the smallest) from every cyclic component with at
/// least `size_threshold` vertices, over all parts; sorted and deduplicated.
pub fn cycle_hitting_set(parts: &[Graph], size_threshold: usize) -> Result<Vec<usize>, TreeError> {
    let mut hits = Vec::new();
    for (pi, part) in parts.iter().enumerate() {
        let (label, count) = part.component_labels();
        let sizes = component_sizes(part, &label, count);
        if let Some(c) = sizes.iter().position(|&(v, e)| e > v) {
            let vertex = label.iter().position(|&l| l == c).expect("component has a vertex");
            return Err(TreeError::NotUnicyclic { part: pi, vertex });
        }
        let core = two_core(part);
        let mut chosen = vec![false; count];
        for v in 0..part.vertex_count() {
            let c = label[v];
            let (verts, edges) = sizes[c];
            if core[v] && !chosen[c] && edges == verts && verts >= size_threshold {
                chosen[c] = true;
                hits.push(v);
            }
        }
    }
    hits.sort_unstable();
    hits.dedup();
    Ok(hits)
}

/// Removes at most `r` vertices so that every remaining component has at
/// most `ceil(v(F)/r)` vertices.
pub fn split_forest(f: &Graph, r: usize) -> Result<Vec<usize>, TreeError> {
    if r == 0 {
        return Err(TreeError::ZeroPieces);
    }
    let n = f.vertex_count();
    if n == 0 {
        return Ok(Vec::new());
    }
    split_forest_with_cap(f, n.div_ceil(r))
}

/// Greedy post-order cutting: a vertex is removed as soon as the uncut part
/// of its subtree exceeds `cap`. Every cut accounts for more than `cap`
/// vertices, so at most `v(F)/(cap+1)` vertices are removed.
pub fn split_forest_with_cap(f: &Graph, cap: usize) -> Result<Vec<usize>, TreeError> {
    if cap == 0 {
        return Err(TreeError::ZeroCap);
    }
    if !f.is_forest() {
        return Err(TreeError::Cyclic);
    }
    let n = f.vertex_count();
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    for root in 0..n {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut stack = vec![root];
        while let Some(u) = stack.pop() {
            order.push(u);
            for &w in f.neighbors(u) {
                if !seen[w] {
                    seen[w] = true;
                    parent[w] = u;
                    stack.push(w);
                }
            }
        }
    }
    let mut pending = vec![1usize; n];
    let mut cut = Vec::new();
    for &v in order.iter().rev() {
        if pending[v] > cap {
            cut.push(v);
            pending[v] = 0;
        }
        if parent[v] != usize::MAX {
            pending[parent[v]] += pending[v];
        }
    }
    cut.sort_unstable();
    Ok(cut)
}

/// Replaces the cycle `v1 .. vk` (starting at its smallest vertex, heading
/// to the smaller neighbor) of every cyclic component by the path
/// `v1 vk v2 v(k-1) ..`. The result is a forest `T` on the same vertices with
/// `Δ(T) <= Δ(H)` and every edge of `H` at distance at most 2 in `T`.
pub fn pseudoforest_to_forest(h: &Graph) -> Result<Graph, TreeError> {
    let (label, count) = h.component_labels();
    let sizes = component_sizes(h, &label, count);
    if let Some(c) = sizes.iter().position(|&(v, e)| e > v) {
        let vertex = label.iter().position(|&l| l == c).expect("component has a vertex");
        return Err(TreeError::NotUnicyclic { part: 0, vertex });
    }
    let core = two_core(h);
    let mut pairs: Vec<(usize, usize)> = h.edges().filter(|&(u, v)| !(core[u] && core[v])).collect();
    let mut done = vec![false; count];
    for start in 0..h.vertex_count() {
        if !core[start] || done[label[start]] {
            continue;
        }
        done[label[start]] = true;
        let mut cyc = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        loop {
            let next = h.neighbors(cur).iter().copied().filter(|&w| core[w] && w != prev).min().expect("cycle continues");
            if next == start {
                break;
            }
            cyc.push(next);
            prev = cur;
            cur = next;
        }
        let k = cyc.len();
        let mut zigzag = Vec::with_capacity(k);
        let (mut lo, mut hi) = (0, k - 1);
        while lo < hi {
            zigzag.push(cyc[lo]);
            zigzag.push(cyc[hi]);
            lo += 1;
            hi -= 1;
        }
        if lo == hi {
            zigzag.push(cyc[lo]);
        }
        for w in zigzag.windows(2) {
            pairs.push((w[0].min(w[1]), w[0].max(w[1])));
        }
    }
    Ok(Graph::from_normalized(h.vertex_count(), pairs))
}

/// Spanning tree `T` of a connected graph with at most one cycle such that
/// `Δ(T) <= Δ(H)` and `H ⊆ T²`. Trees are returned unchanged.
pub fn unicyclic_to_tree(h: &Graph) -> Result<Graph, TreeError> {
    if !h.is_connected() {
        return Err(TreeError::Disconnected);
    }
    pseudoforest_to_forest(h)
}

/// Chains the components of a forest into one spanning tree by joining a
/// leaf (or isolated vertex) of each component to one of the next.
pub fn forest_to_spanning_tree(f: &Graph, d_cap: usize) -> Result<Graph, TreeError> {
    let n = f.vertex_count();
    if n == 0 {
        return Err(TreeError::EmptyForest);
    }
    if !f.is_forest() {
        return Err(TreeError::Cyclic);
    }
    let comps = f.components();
    if comps.len() >= 2 && d_cap < 2 {
        return Err(TreeError::DegreeCapTooSmall { components: comps.len(), cap: d_cap });
    }
    let ends: Vec<(usize, usize)> = comps
        .iter()
        .map(|c| {
            if c.len() == 1 {
                (c[0], c[0])
            } else {
                let mut leaves = c.iter().copied().filter(|&v| f.degree(v) == 1);
                let first = leaves.next().expect("a tree with an edge has two leaves");
                let last = leaves.next_back().expect("a tree with an edge has two leaves");
                (first, last)
            }
        })
        .collect();
    let mut pairs = f.edge_vec();
    for w in ends.windows(2) {
        let (u, v) = (w[0].1, w[1].0);
        pairs.push((u.min(v), u.max(v)));
    }
    Ok(Graph::from_normalized(n, pairs))
}

/// Removes one cycle vertex from each cyclic component of size at least
/// `threshold`, then cuts what is left of those large components into pieces
/// of at most `cap` vertices. Small components pass through untouched.
pub fn cleanup(parts: &[Graph], threshold: usize, cap: usize) -> Result<CleanupPlan, TreeError> {
    let hits = cycle_hitting_set(parts, threshold)?;
    let n = parts.first().map_or(0, Graph::vertex_count);
    let mut removed_flag = vec![false; n];
    for &v in &hits {
        removed_flag[v] = true;
    }
    let mut cuts = Vec::new();
    for part in parts {
        let (label, count) = part.component_labels();
        let sizes = component_sizes(part, &label, count);
        let large: Vec<bool> = (0..n).map(|v| sizes[label[v]].0 >= threshold).collect();
        let forest = part.filter_edges(|u, v| large[u] && !removed_flag[u] && !removed_flag[v]);
        cuts.extend(split_forest_with_cap(&forest, cap)?);
    }
    for &v in &cuts {
        removed_flag[v] = true;
    }
    let removed: Vec<usize> = (0..n).filter(|&v| removed_flag[v]).collect();
    let residual_parts = parts
        .iter()
        .map(|part| {
            part.isolate(&removed_flag).components().into_iter().filter(|c| !removed_flag[c[0]]).collect()
        })
        .collect();
    Ok(CleanupPlan { removed, residual_parts })
}
