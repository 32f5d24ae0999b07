//! Partition of the `b`-fold duplicated edge set of a graph into
//! `ceil(b * m(H))` parts whose components are simple with at most one cycle.
//!
//! A simple edge set is a pseudoforest exactly when it can be oriented so
//! that every vertex has in-degree at most one. A decomposition into `k`
//! parts is therefore the same thing as routing each edge `e` to `b`
//! distinct labels `l`, each label charged to a slot `(w, l)` at one of the
//! endpoints `w` of `e`, with every slot used at most once. That is an
//! integral flow problem, solved here with Dinic's algorithm; the density
//! bound guarantees the flow saturates every edge.

use alloc::vec;
use alloc::vec::Vec;

use crate::density::{density, DensityError};
use crate::dsu::Dsu;
use crate::flow::FlowNetwork;
use crate::graph::{Graph, MultiEdge, MultiEdgeSet};
use crate::rational::{ceil_usize, from_usize, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DecompError {
    #[error("the duplication factor b must be at least 1")]
    ZeroCopies,
    #[error("decomposition needs m(H) >= 1, but m(H) = {0}")]
    DensityBelowOne(Rational),
    #[error(transparent)]
    Density(#[from] DensityError),
    #[error("partition flow saturated only {routed} of {needed} edge copies")]
    Unsaturated { routed: usize, needed: usize },
}

/// Assignment of every copy of every edge to a part.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Decomposition {
    pub n: usize,
    pub b: usize,
    pub k: usize,
    /// `(copy, part)` pairs in lexicographic `(u, v, copy)` order; parts are
    /// numbered from 0.
    pub assignment: Vec<(MultiEdge, usize)>,
}

impl Decomposition {
    pub fn part_edges(&self, part: usize) -> MultiEdgeSet {
        MultiEdgeSet::new(self.assignment.iter().filter(|(_, p)| *p == part).map(|(e, _)| *e).collect())
    }

    /// Every part as a simple graph on the full vertex set.
    pub fn parts(&self) -> Vec<Graph> {
        let mut pairs = vec![Vec::new(); self.k];
        for (e, p) in &self.assignment {
            pairs[*p].push((e.u, e.v));
        }
        pairs.into_iter().map(|ps| Graph::from_normalized(self.n, ps)).collect()
    }

    /// Checks the three structural guarantees against `h`: the part count,
    /// exact `b`-fold coverage of every edge, and independence of every part.
    pub fn is_valid_for(&self, h: &Graph) -> bool {
        if self.n != h.vertex_count() || self.assignment.len() != self.b * h.edge_count() {
            return false;
        }
        if let Ok(rep) = density(h) {
            if self.k != ceil_usize(&(rep.density * from_usize(self.b))) {
                return false;
            }
        }
        let mut copies: Vec<MultiEdge> = self.assignment.iter().map(|(e, _)| *e).collect();
        copies.sort_unstable();
        if copies != MultiEdgeSet::duplicate(h, self.b).edges {
            return false;
        }
        self.assignment.iter().all(|(_, p)| *p < self.k)
            && (0..self.k).all(|p| bicircular_independent(&self.part_edges(p), self.n))
    }
}

/// True iff no pair repeats (and no loop occurs) and every connected
/// component has at most as many edges as vertices.
pub fn bicircular_independent(edges: &MultiEdgeSet, n: usize) -> bool {
    let mut pairs = Vec::with_capacity(edges.len());
    for e in &edges.edges {
        if e.u >= n || e.v >= n || e.u == e.v {
            return false;
        }
        pairs.push((e.u.min(e.v), e.u.max(e.v)));
    }
    pairs.sort_unstable();
    if pairs.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let mut dsu = Dsu::new(n);
    pairs.iter().all(|&(u, v)| {
        let (verts, edges) = dsu.add_edge(u, v);
        edges <= verts
    })
}

pub fn decompose(h: &Graph, b: usize) -> Result<Decomposition, DecompError> {
    if b == 0 {
        return Err(DecompError::ZeroCopies);
    }
    let m_h = density(h)?.density;
    if m_h < from_usize(1) {
        return Err(DecompError::DensityBelowOne(m_h));
    }
    let k = ceil_usize(&(m_h * from_usize(b)));
    let n = h.vertex_count();
    let edges = h.edge_vec();
    let e_count = edges.len();

    let s = 0;
    let t = 1;
    let edge_node = |i: usize| 2 + i;
    let label_node = |i: usize, l: usize| 2 + e_count + i * k + l;
    let slot_node = |w: usize, l: usize| 2 + e_count + e_count * k + w * k + l;
    let mut net = FlowNetwork::new(2 + e_count + e_count * k + n * k);
    let mut label_arcs = Vec::with_capacity(e_count * k);
    for (i, &(u, v)) in edges.iter().enumerate() {
        net.add_arc(s, edge_node(i), b as i64);
        for l in 0..k {
            label_arcs.push(net.add_arc(edge_node(i), label_node(i, l), 1));
            net.add_arc(label_node(i, l), slot_node(u, l), 1);
            net.add_arc(label_node(i, l), slot_node(v, l), 1);
        }
    }
    for w in 0..n {
        for l in 0..k {
            net.add_arc(slot_node(w, l), t, 1);
        }
    }
    let routed = net.max_flow(s, t) as usize;
    if routed != b * e_count {
        return Err(DecompError::Unsaturated { routed, needed: b * e_count });
    }
    let mut assignment = Vec::with_capacity(b * e_count);
    for (i, &(u, v)) in edges.iter().enumerate() {
        let mut copy = 0;
        for l in 0..k {
            if net.flow_on(label_arcs[i * k + l]) == 1 {
                copy += 1;
                assignment.push((MultiEdge { u, v, copy }, l));
            }
        }
        debug_assert_eq!(copy, b);
    }
    Ok(Decomposition { n, b, k, assignment })
}
