//! Random guest graphs.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::density::is_balanced;
use crate::graph::{complete, Graph};
use crate::seed::rng;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GenError {
    #[error("lift order {n} is not divisible by the base order {base}")]
    NotDivisible { n: usize, base: usize },
    #[error("no balanced graph with density {a}/{b} on at most {max_v} vertices")]
    NotFound { a: usize, b: usize, max_v: usize },
    #[error("invalid parameters: {0}")]
    InvalidParameters(&'static str),
}

/// Union of `d` random functional graphs: in each layer every vertex picks
/// one random out-neighbor. Loops are never drawn and repeated pairs merge.
pub fn gen_union_unicyclic(n: usize, d: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut pairs = Vec::with_capacity(n * d);
    if n >= 2 {
        for _ in 0..d {
            for v in 0..n {
                let mut u = r.gen_range(0..n - 1);
                if u >= v {
                    u += 1;
                }
                pairs.push((u.min(v), u.max(v)));
            }
        }
    }
    Graph::from_edge_list(n, &pairs).expect("pairs are in range and loop-free")
}

/// Random lift of `f`: vertex `x` of class `i` has id `i * (n / v(F)) + x`,
/// and every base edge `ij` becomes a uniform perfect matching between
/// classes `i` and `j`.
pub fn gen_lift(f: &Graph, n: usize, seed: u64) -> Result<Graph, GenError> {
    let base = f.vertex_count();
    if base == 0 || !n.is_multiple_of(base) {
        return Err(GenError::NotDivisible { n, base });
    }
    let s = n / base;
    let mut r = rng(seed);
    let mut pairs = Vec::with_capacity(s * f.edge_count());
    let mut perm: Vec<usize> = (0..s).collect();
    for (i, j) in f.edges() {
        perm.shuffle(&mut r);
        pairs.extend((0..s).map(|x| (i * s + x, j * s + perm[x])));
    }
    Ok(Graph::from_edge_list(n, &pairs).expect("lift pairs are in range"))
}

/// A balanced graph with `e/v = a/b` on at most `max_v` vertices. Integer
/// densities use `K_{2d+1}`; other ratios search edge sets in
/// lexicographic order, smallest vertex count first.
pub fn find_balanced(a: usize, b: usize, max_v: usize) -> Result<Graph, GenError> {
    if b == 0 || a < b {
        return Err(GenError::InvalidParameters("need a >= b >= 1"));
    }
    if a.is_multiple_of(b) && 2 * (a / b) < max_v {
        return Ok(complete(2 * (a / b) + 1));
    }
    for v in 1..=max_v.min(crate::density::EXHAUSTIVE_LIMIT) {
        if !(a * v).is_multiple_of(b) {
            continue;
        }
        let e = a * v / b;
        let all: Vec<(usize, usize)> = (0..v).flat_map(|x| (x + 1..v).map(move |y| (x, y))).collect();
        if e > all.len() {
            continue;
        }
        if let Some(g) = search_edge_sets(v, e, &all) {
            return Ok(g);
        }
    }
    Err(GenError::NotFound { a, b, max_v })
}

fn search_edge_sets(v: usize, e: usize, all: &[(usize, usize)]) -> Option<Graph> {
    let mut idx: Vec<usize> = (0..e).collect();
    loop {
        let mut deg = vec![0usize; v];
        for &i in &idx {
            deg[all[i].0] += 1;
            deg[all[i].1] += 1;
        }
        // Deleting a vertex of degree below e/v would raise the ratio.
        if deg.iter().all(|&x| x * v >= e) {
            let pairs: Vec<(usize, usize)> = idx.iter().map(|&i| all[i]).collect();
            let g = Graph::from_edge_list(v, &pairs).expect("valid pairs");
            if is_balanced(&g) {
                return Some(g);
            }
        }
        let mut k = e;
        loop {
            if k == 0 {
                return None;
            }
            k -= 1;
            if idx[k] != k + all.len() - e {
                break;
            }
        }
        idx[k] += 1;
        for j in k + 1..e {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Like [`gen_union_unicyclic`], but an out-neighbor is only accepted when
/// both endpoints still have degree below `max_deg` and the pair is new.
/// A vertex that finds no such partner after a bounded number of draws
/// contributes no edge to that layer.
pub fn gen_bounded_degree(n: usize, d: usize, max_deg: usize, seed: u64) -> Graph {
    let mut r = rng(seed);
    let mut deg = vec![0usize; n];
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut pairs = Vec::new();
    if n >= 2 {
        let mut order: Vec<usize> = (0..n).collect();
        for _ in 0..d {
            order.shuffle(&mut r);
            for &v in &order {
                if deg[v] >= max_deg {
                    continue;
                }
                for _ in 0..64 {
                    let mut u = r.gen_range(0..n - 1);
                    if u >= v {
                        u += 1;
                    }
                    if deg[u] < max_deg && !adj[v].contains(&u) {
                        adj[v].push(u);
                        adj[u].push(v);
                        deg[u] += 1;
                        deg[v] += 1;
                        pairs.push((u, v));
                        break;
                    }
                }
            }
        }
    }
    Graph::from_edge_list(n, &pairs).expect("pairs are in range and loop-free")
}
