#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use unigraph_core::Graph;

/// Graph on `n` vertices from a list of candidate pairs (loops dropped).
pub fn graph_from(n: usize, pairs: &[(usize, usize)]) -> Graph {
    let clean: Vec<_> = pairs.iter().copied().filter(|&(u, v)| u != v && u < n && v < n).collect();
    Graph::from_edge_list(n, &clean).unwrap()
}

pub fn arb_graph(max_n: usize, max_pairs: usize) -> impl Strategy<Value = Graph> {
    (1..=max_n).prop_flat_map(move |n| {
        proptest::collection::vec((0..n, 0..n), 0..=max_pairs).prop_map(move |p| graph_from(n, &p))
    })
}

/// max e(S)/|S| over nonempty vertex subsets, by enumeration.
pub fn brute_density(g: &Graph) -> BigRational {
    let n = g.vertex_count();
    assert!(n <= 16);
    let edges = g.edge_vec();
    let mut best = (0u64, 1u64);
    for mask in 1u32..(1 << n) {
        let v = mask.count_ones() as u64;
        let e = edges.iter().filter(|&&(a, b)| mask >> a & 1 == 1 && mask >> b & 1 == 1).count() as u64;
        if e * best.1 > best.0 * v {
            best = (e, v);
        }
    }
    BigRational::new(BigInt::from(best.0), BigInt::from(best.1))
}

/// Simple, loop free, and every component has at most as many edges as
/// vertices.
pub fn is_pseudoforest(n: usize, pairs: &[(usize, usize)]) -> bool {
    let mut sorted: Vec<_> = pairs.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    sorted.sort();
    if sorted.windows(2).any(|w| w[0] == w[1]) || sorted.iter().any(|&(u, v)| u == v) {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut Vec<usize>, x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        let mut y = x;
        while p[y] != r {
            let nx = p[y];
            p[y] = r;
            y = nx;
        }
        r
    }
    for &(u, v) in &sorted {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a] = b;
    }
    let mut verts = vec![0usize; n];
    let mut edges = vec![0usize; n];
    for x in 0..n {
        let r = find(&mut parent, x);
        verts[r] += 1;
    }
    for &(u, _) in &sorted {
        let r = find(&mut parent, u);
        edges[r] += 1;
    }
    (0..n).all(|r| edges[r] <= verts[r])
}

/// All-pairs BFS distances (usize::MAX when unreachable).
pub fn distances(g: &Graph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    (0..n)
        .map(|s| {
            let mut d = vec![usize::MAX; n];
            d[s] = 0;
            let mut q = std::collections::VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &w in g.neighbors(u) {
                    if d[w] == usize::MAX {
                        d[w] = d[u] + 1;
                        q.push_back(w);
                    }
                }
            }
            d
        })
        .collect()
}

/// Random tree (Prüfer-free: attach each vertex to a random earlier one),
/// relabelled by a permutation.
pub fn random_forest(n: usize, keep_prob: f64, seed: u64) -> Graph {
    use rand::{Rng, SeedableRng};
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for v in 1..n {
        if r.gen_bool(keep_prob) {
            pairs.push((r.gen_range(0..v), v));
        }
    }
    Graph::from_edge_list(n, &pairs).unwrap()
}
