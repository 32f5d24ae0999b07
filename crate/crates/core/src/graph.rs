//! Simple undirected graphs on contiguous vertex ids, stored as compressed
//! adjacency (CSR) with sorted neighbor lists.

use alloc::collections::VecDeque;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge ({u}, {v}) has an endpoint outside 0..{n}")]
    EndpointOutOfRange { u: usize, v: usize, n: usize },
    #[error("self-loop ({0}, {0}) is not allowed")]
    SelfLoop(usize),
    #[error("vertex {vertex} is outside 0..{n}")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("blowup factor must be at least 1")]
    ZeroBlowup,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
}

impl Graph {
    /// Graph on `n` vertices and no edges.
    pub fn empty(n: usize) -> Self {
        Graph { offsets: vec![0; n + 1], neighbors: Vec::new() }
    }

    /// Builds a graph from an edge list, collapsing duplicates.
    pub fn from_edge_list(n: usize, pairs: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut norm = Vec::with_capacity(pairs.len());
        for &(u, v) in pairs {
            if u >= n || v >= n {
                return Err(GraphError::EndpointOutOfRange { u, v, n });
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            norm.push(if u < v { (u, v) } else { (v, u) });
        }
        Ok(Self::from_normalized(n, norm))
    }

    /// `pairs` must satisfy u < v < n; duplicates are allowed.
    pub(crate) fn from_normalized(n: usize, mut pairs: Vec<(usize, usize)>) -> Self {
        pairs.sort_unstable();
        pairs.dedup();
        let mut deg = vec![0usize; n];
        for &(u, v) in &pairs {
            deg[u] += 1;
            deg[v] += 1;
        }
        let mut offsets = vec![0usize; n + 1];
        for i in 0..n {
            offsets[i + 1] = offsets[i] + deg[i];
        }
        let mut fill = offsets.clone();
        let mut neighbors = vec![0usize; offsets[n]];
        for &(u, v) in &pairs {
            neighbors[fill[u]] = v;
            fill[u] += 1;
            neighbors[fill[v]] = u;
            fill[v] += 1;
        }
        for i in 0..n {
            neighbors[offsets[i]..offsets[i + 1]].sort_unstable();
        }
        Graph { offsets, neighbors }
    }

    /// Builds from per-vertex neighbor lists that are already symmetric,
    /// sorted and loop-free.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let total = adj.iter().map(Vec::len).sum();
        let mut neighbors = Vec::with_capacity(total);
        for list in adj {
            neighbors.extend_from_slice(&list);
            offsets.push(neighbors.len());
        }
        Graph { offsets, neighbors }
    }

    pub fn vertex_count(&self) -> usize {
        self.offsets.len() - 1
    }

    pub fn edge_count(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.neighbors[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn max_degree(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let n = self.vertex_count();
        u < n && v < n && self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.vertex_count())
            .flat_map(move |u| self.neighbors(u).iter().copied().filter(move |&v| v > u).map(move |v| (u, v)))
    }

    pub fn edge_vec(&self) -> Vec<(usize, usize)> {
        self.edges().collect()
    }

    /// Component label per vertex (labels in order of smallest vertex) and
    /// the number of components.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let n = self.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut count = 0;
        let mut stack = Vec::new();
        for s in 0..n {
            if label[s] != usize::MAX {
                continue;
            }
            label[s] = count;
            stack.push(s);
            while let Some(u) = stack.pop() {
                for &w in self.neighbors(u) {
                    if label[w] == usize::MAX {
                        label[w] = count;
                        stack.push(w);
                    }
                }
            }
            count += 1;
        }
        (label, count)
    }

    /// Vertex lists of the connected components, each sorted, ordered by
    /// smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let (label, count) = self.component_labels();
        let mut comps = vec![Vec::new(); count];
        for (v, &c) in label.iter().enumerate() {
            comps[c].push(v);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.vertex_count() <= 1 || self.component_labels().1 == 1
    }

    /// True when every component has fewer edges than vertices.
    pub fn is_forest(&self) -> bool {
        self.edge_count() + self.component_labels().1 == self.vertex_count()
    }

    /// BFS distances from `src`, `usize::MAX` for unreachable vertices.
    /// Exploration stops at depth `limit`.
    pub fn bfs_distances(&self, src: usize, limit: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.vertex_count()];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            if dist[u] == limit {
                continue;
            }
            for &w in self.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Pairs at distance one or two.
    pub fn square(&self) -> Graph {
        let n = self.vertex_count();
        let mut mark = vec![usize::MAX; n];
        let mut adj = Vec::with_capacity(n);
        for u in 0..n {
            let mut list = Vec::new();
            mark[u] = u;
            for &w in self.neighbors(u) {
                if mark[w] != u {
                    mark[w] = u;
                    list.push(w);
                }
                for &x in self.neighbors(w) {
                    if mark[x] != u {
                        mark[x] = u;
                        list.push(x);
                    }
                }
            }
            list.sort_unstable();
            adj.push(list);
        }
        Graph::from_sorted_adjacency(adj)
    }

    /// Replaces each vertex `u` by the clique `{u*b, .., u*b + b - 1}` and
    /// joins classes of adjacent vertices completely.
    pub fn blowup(&self, b: usize) -> Result<Graph, GraphError> {
        if b == 0 {
            return Err(GraphError::ZeroBlowup);
        }
        let n = self.vertex_count();
        let mut adj = Vec::with_capacity(n * b);
        for u in 0..n {
            let mut classes: Vec<usize> = self.neighbors(u).to_vec();
            let pos = classes.binary_search(&u).unwrap_err();
            classes.insert(pos, u);
            for s in 0..b {
                let me = u * b + s;
                let mut list = Vec::with_capacity(classes.len() * b);
                for &c in &classes {
                    for s2 in 0..b {
                        let other = c * b + s2;
                        if other != me {
                            list.push(other);
                        }
                    }
                }
                adj.push(list);
            }
        }
        Ok(Graph::from_sorted_adjacency(adj))
    }

    /// Subgraph induced by `set`, relabeled by the sorted order of `set`.
    pub fn induced(&self, set: &[usize]) -> Result<Graph, GraphError> {
        self.induced_with_map(set).map(|(g, _)| g)
    }

    /// Like [`Graph::induced`], also returning the sorted, deduplicated
    /// vertex list: new id `i` corresponds to old vertex `map[i]`.
    pub fn induced_with_map(&self, set: &[usize]) -> Result<(Graph, Vec<usize>), GraphError> {
        let n = self.vertex_count();
        let mut verts = set.to_vec();
        verts.sort_unstable();
        verts.dedup();
        if let Some(&bad) = verts.iter().find(|&&v| v >= n) {
            return Err(GraphError::VertexOutOfRange { vertex: bad, n });
        }
        let mut new_id = vec![usize::MAX; n];
        for (i, &v) in verts.iter().enumerate() {
            new_id[v] = i;
        }
        let adj = verts
            .iter()
            .map(|&v| self.neighbors(v).iter().filter(|&&w| new_id[w] != usize::MAX).map(|&w| new_id[w]).collect())
            .collect();
        Ok((Graph::from_sorted_adjacency(adj), verts))
    }

    /// Number of edges with both endpoints flagged in `inside`.
    pub fn edges_within(&self, inside: &[bool]) -> usize {
        (0..self.vertex_count())
            .filter(|&u| inside[u])
            .map(|u| self.neighbors(u).iter().filter(|&&w| w > u && inside[w]).count())
            .sum()
    }

    /// Graph on the same vertex set keeping only the edges accepted by `keep`.
    pub fn filter_edges(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Graph {
        let pairs = self.edges().filter(|&(u, v)| keep(u, v)).collect();
        Graph::from_normalized(self.vertex_count(), pairs)
    }

    /// Removes all edges incident to vertices flagged in `removed`; the
    /// vertex set is unchanged.
    pub fn isolate(&self, removed: &[bool]) -> Graph {
        self.filter_edges(|u, v| !removed[u] && !removed[v])
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Graph")
            .field("n", &self.vertex_count())
            .field("edges", &self.edge_vec())
            .finish()
    }
}

/// One copy of an edge in the `b`-fold duplicated edge multiset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MultiEdge {
    pub u: usize,
    pub v: usize,
    /// Copy index in `1..=b`.
    pub copy: usize,
}

/// The edge multiset `H^(b)`: every edge of `H` repeated `b` times with
/// distinct copy indices.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MultiEdgeSet {
    pub edges: Vec<MultiEdge>,
}

impl MultiEdgeSet {
    pub fn new(edges: Vec<MultiEdge>) -> Self {
        MultiEdgeSet { edges }
    }

    /// All copies `1..=b` of every edge of `g`, in lexicographic order.
    pub fn duplicate(g: &Graph, b: usize) -> Self {
        let mut edges = Vec::with_capacity(g.edge_count() * b);
        for (u, v) in g.edges() {
            for copy in 1..=b {
                edges.push(MultiEdge { u, v, copy });
            }
        }
        MultiEdgeSet { edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }
}

/// Complete graph on `n` vertices.
pub fn complete(n: usize) -> Graph {
    let adj = (0..n).map(|u| (0..n).filter(|&w| w != u).collect()).collect();
    Graph::from_sorted_adjacency(adj)
}

/// Cycle `0 - 1 - .. - (n-1) - 0`; requires `n >= 3`.
pub fn cycle(n: usize) -> Graph {
    let pairs: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Graph::from_edge_list(n, &pairs).expect("cycle needs n >= 3")
}

/// Path `0 - 1 - .. - (n-1)`.
pub fn path(n: usize) -> Graph {
    let pairs: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::from_edge_list(n, &pairs).expect("valid path")
}

/// Disjoint union, relabeling the second graph after the first.
pub fn disjoint_union(a: &Graph, b: &Graph) -> Graph {
    let shift = a.vertex_count();
    let mut pairs = a.edge_vec();
    pairs.extend(b.edges().map(|(u, v)| (u + shift, v + shift)));
    Graph::from_normalized(shift + b.vertex_count(), pairs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn from_edge_list_dedups_and_rejects_loops() {
        let tri = Graph::from_edge_list(3, &[(0, 1), (1, 2), (0, 2)]).unwrap();
        assert_eq!(tri.edge_count(), 3);
        let g = Graph::from_edge_list(4, &[(0, 1), (1, 0), (0, 1)]).unwrap();
        assert_eq!(g.edge_count(), 1);
        assert_eq!(Graph::from_edge_list(2, &[(0, 0)]), Err(GraphError::SelfLoop(0)));
        assert!(matches!(Graph::from_edge_list(2, &[(0, 2)]), Err(GraphError::EndpointOutOfRange { .. })));
    }

    #[test]
    fn square_examples() {
        assert_eq!(path(3).square(), complete(3));
        assert_eq!(cycle(4).square(), complete(4));
        assert_eq!(Graph::empty(5).square(), Graph::empty(5));
    }

    #[test]
    fn blowup_examples() {
        assert_eq!(Graph::empty(1).blowup(3).unwrap(), complete(3));
        assert_eq!(path(2).blowup(2).unwrap(), complete(4));
        let k6 = complete(3).blowup(2).unwrap();
        assert_eq!(k6.edge_count(), 15);
        assert_eq!(k6, complete(6));
        assert_eq!(path(2).blowup(0), Err(GraphError::ZeroBlowup));
    }

    #[test]
    fn induced_examples() {
        assert_eq!(complete(4).induced(&[0, 1, 2]).unwrap(), complete(3));
        assert_eq!(cycle(7).induced(&[]).unwrap().vertex_count(), 0);
        assert_eq!(cycle(5).induced(&[0, 1, 3]).unwrap().edge_count(), 1);
        assert!(cycle(5).induced(&[9]).is_err());
        let g = cycle(6);
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(g.induced(&all).unwrap(), g);
    }

    #[test]
    fn components_and_forest() {
        let g = disjoint_union(&cycle(3), &path(4));
        assert_eq!(g.components(), vec![vec![0, 1, 2], vec![3, 4, 5, 6]]);
        assert!(!g.is_forest());
        assert!(path(5).is_forest());
        assert_eq!(path(5).bfs_distances(0, 2), vec![0, 1, 2, usize::MAX, usize::MAX]);
    }
}
