//! Exact maximum subgraph density `m(H) = max e(H')/v(H')`.

use alloc::vec;
use alloc::vec::Vec;

use crate::flow::{FlowNetwork, INF};
use crate::graph::Graph;
use crate::rational::{ratio, Rational};

/// Above this many vertices the flow-based method is used.
pub const EXHAUSTIVE_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DensityReport {
    pub density: Rational,
    /// Sorted vertex set whose induced subgraph attains `density`.
    pub witness: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum DensityError {
    #[error("density is undefined for a graph with no vertices")]
    EmptyGraph,
    #[error("exhaustive search supports at most {limit} vertices, got {n}")]
    TooLargeForExhaustive { n: usize, limit: usize },
}

pub fn density(h: &Graph) -> Result<DensityReport, DensityError> {
    if h.vertex_count() <= EXHAUSTIVE_LIMIT {
        density_exhaustive(h)
    } else {
        density_flow(h)
    }
}

/// Tries every nonempty vertex subset.
pub fn density_exhaustive(h: &Graph) -> Result<DensityReport, DensityError> {
    let n = h.vertex_count();
    if n == 0 {
        return Err(DensityError::EmptyGraph);
    }
    if n > EXHAUSTIVE_LIMIT {
        return Err(DensityError::TooLargeForExhaustive { n, limit: EXHAUSTIVE_LIMIT });
    }
    let adj: Vec<u32> = (0..n).map(|v| h.neighbors(v).iter().fold(0u32, |m, &w| m | (1 << w))).collect();
    let full = 1usize << n;
    let mut edges = vec![0u16; full];
    let (mut best_e, mut best_s, mut best_mask) = (0u64, 1u64, 1usize);
    for mask in 1..full {
        let low = mask.trailing_zeros() as usize;
        let rest = mask & (mask - 1);
        let e = edges[rest] + (adj[low] & rest as u32).count_ones() as u16;
        edges[mask] = e;
        let s = mask.count_ones() as u64;
        if (e as u64) * best_s > best_e * s {
            best_e = e as u64;
            best_s = s;
            best_mask = mask;
        }
    }
    let witness = (0..n).filter(|&v| best_mask >> v & 1 == 1).collect();
    Ok(DensityReport { density: ratio(best_e as i64, best_s as i64), witness })
}

/// Dinkelbach iteration over exact ratios: each round solves
/// `max_S q*e(S) - p*|S|` as a minimum cut in the edge/vertex closure
/// network and stops when no subset beats the current ratio `p/q`.
pub fn density_flow(h: &Graph) -> Result<DensityReport, DensityError> {
    let n = h.vertex_count();
    if n == 0 {
        return Err(DensityError::EmptyGraph);
    }
    let edges = h.edge_vec();
    if edges.is_empty() {
        return Ok(DensityReport { density: Rational::from_integer(0.into()), witness: vec![0] });
    }
    let m = edges.len();
    let (mut p, mut q) = (m as i64, n as i64);
    let mut witness: Vec<usize> = (0..n).collect();
    loop {
        let (s, t) = (0, 1);
        let mut net = FlowNetwork::new(2 + m + n);
        for (i, &(u, v)) in edges.iter().enumerate() {
            net.add_arc(s, 2 + i, q);
            net.add_arc(2 + i, 2 + m + u, INF);
            net.add_arc(2 + i, 2 + m + v, INF);
        }
        for v in 0..n {
            net.add_arc(2 + m + v, t, p);
        }
        let cut = net.max_flow(s, t);
        if q * m as i64 - cut <= 0 {
            break;
        }
        let side = net.source_side(s);
        let inside: Vec<bool> = (0..n).map(|v| side[2 + m + v]).collect();
        let size = inside.iter().filter(|&&b| b).count() as i64;
        let e = h.edges_within(&inside) as i64;
        debug_assert!(e * q > p * size);
        p = e;
        q = size;
        witness = (0..n).filter(|&v| inside[v]).collect();
    }
    Ok(DensityReport { density: ratio(p, q), witness })
}

/// True when the whole graph attains its maximum density.
pub fn is_balanced(f: &Graph) -> bool {
    let n = f.vertex_count();
    match density(f) {
        Ok(rep) => rep.density == ratio(f.edge_count() as i64, n as i64),
        Err(_) => false,
    }
}
