//! Random regular graphs with a spectral certificate.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::graph::Graph;
use crate::seed::{derive_seed, rng, Rng};

/// Default accuracy of [`second_eigenvalue`].
pub const DEFAULT_TOL: f64 = 1e-6;
/// Full rejection rounds of the pairing model before switching to swaps.
const PAIRING_REJECTIONS: usize = 50;
const LANCZOS_MAX_STEPS: usize = 1500;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ExpanderError {
    #[error("no {t}-regular graph on {m} vertices: m*t is odd")]
    Parity { m: usize, t: usize },
    #[error("degree {t} must be smaller than the vertex count {m}")]
    DegreeTooLarge { m: usize, t: usize },
    #[error("pairing repair did not converge")]
    RetryCapExceeded,
    #[error("graph is not regular")]
    NotRegular,
    #[error("eigenvalue iteration stopped with residual {residual:e}")]
    NotConverged { residual: f64 },
    #[error("no candidate met lambda <= 3 sqrt(t) within {retries} attempts; best lambda {best:?}")]
    AllRetriesFailed { retries: usize, best: Option<f64> },
}

/// A `t`-regular graph whose second largest absolute eigenvalue is at most
/// `lambda_bound = lambda + tol <= 3 sqrt(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct CertifiedExpander {
    pub graph: Graph,
    pub t: usize,
    /// Computed second largest absolute eigenvalue.
    pub lambda: f64,
    pub tol: f64,
    pub lambda_bound: f64,
    /// Seed that produced `graph`.
    pub seed: u64,
}

impl CertifiedExpander {
    /// Re-certifies a stored graph.
    pub fn certify(graph: Graph, seed: u64, tol: f64) -> Result<Self, ExpanderError> {
        let t = regular_degree(&graph).ok_or(ExpanderError::NotRegular)?;
        let lambda = second_eigenvalue(&graph, tol)?;
        if lambda + tol > 3.0 * libm::sqrt(t as f64) {
            return Err(ExpanderError::AllRetriesFailed { retries: 1, best: Some(lambda) });
        }
        Ok(CertifiedExpander { graph, t, lambda, tol, lambda_bound: lambda + tol, seed })
    }

    pub fn m(&self) -> usize {
        self.graph.vertex_count()
    }
}

fn regular_degree(g: &Graph) -> Option<usize> {
    let t = if g.vertex_count() == 0 { 0 } else { g.degree(0) };
    (0..g.vertex_count()).all(|v| g.degree(v) == t).then_some(t)
}

/// Uniform-ish simple `t`-regular graph on `m` vertices from the pairing
/// model. Dense requests (`2t > m - 1`) are answered by complementing a
/// sparse one.
pub fn random_regular(m: usize, t: usize, seed: u64) -> Result<Graph, ExpanderError> {
    if t > 0 && t >= m {
        return Err(ExpanderError::DegreeTooLarge { m, t });
    }
    if (m * t) % 2 == 1 {
        return Err(ExpanderError::Parity { m, t });
    }
    if t == 0 {
        return Ok(Graph::empty(m));
    }
    if 2 * t > m - 1 {
        let sparse = random_regular(m, m - 1 - t, seed)?;
        let adj = (0..m)
            .map(|u| (0..m).filter(|&w| w != u && !sparse.has_edge(u, w)).collect())
            .collect();
        return Ok(Graph::from_sorted_adjacency(adj));
    }
    let mut rng = rng(seed);
    let mut points: Vec<usize> = (0..m).flat_map(|v| core::iter::repeat_n(v, t)).collect();
    for _ in 0..PAIRING_REJECTIONS {
        points.shuffle(&mut rng);
        let pairs = pairs_of(&points);
        if is_simple(&pairs) {
            return Ok(Graph::from_normalized(m, pairs));
        }
    }
    let pairs = repair(pairs_of(&points), &mut rng, 1000 * m * t)?;
    Ok(Graph::from_normalized(m, pairs))
}

fn pairs_of(points: &[usize]) -> Vec<(usize, usize)> {
    points.chunks_exact(2).map(|c| (c[0].min(c[1]), c[0].max(c[1]))).collect()
}

fn is_simple(pairs: &[(usize, usize)]) -> bool {
    let mut sorted = pairs.to_vec();
    sorted.sort_unstable();
    sorted.iter().all(|&(u, v)| u != v) && sorted.windows(2).all(|w| w[0] != w[1])
}

/// Random double-edge swaps applied to loops and repeated pairs until the
/// pairing is simple.
fn repair(mut pairs: Vec<(usize, usize)>, rng: &mut Rng, cap: usize) -> Result<Vec<(usize, usize)>, ExpanderError> {
    let mut mult: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for &p in &pairs {
        *mult.entry(p).or_insert(0) += 1;
    }
    let bad = |p: (usize, usize), mult: &BTreeMap<(usize, usize), usize>| p.0 == p.1 || mult[&p] > 1;
    let norm = |a: usize, b: usize| (a.min(b), a.max(b));
    for _ in 0..cap {
        let Some(i) = (0..pairs.len()).find(|&i| bad(pairs[i], &mult)) else {
            return Ok(pairs);
        };
        let j = rng.gen_range(0..pairs.len());
        if i == j {
            continue;
        }
        let ((a, b), (c, d)) = (pairs[i], pairs[j]);
        let (x, y) = if rng.gen_bool(0.5) { (norm(a, c), norm(b, d)) } else { (norm(a, d), norm(b, c)) };
        if x.0 == x.1 || y.0 == y.1 || x == y || mult.get(&x).is_some_and(|&k| k > 0) || mult.get(&y).is_some_and(|&k| k > 0) {
            continue;
        }
        for old in [pairs[i], pairs[j]] {
            *mult.get_mut(&old).expect("present") -= 1;
        }
        *mult.entry(x).or_insert(0) += 1;
        *mult.entry(y).or_insert(0) += 1;
        pairs[i] = x;
        pairs[j] = y;
    }
    Err(ExpanderError::RetryCapExceeded)
}

/// Second largest absolute adjacency eigenvalue of a regular graph, i.e.
/// the spectral radius on the complement of the all-ones vector.
///
/// Lanczos with full reorthogonalization runs on that complement from a
/// fixed pseudo-random start; it stops once both extreme Ritz pairs have
/// residual at most `tol`, or when the Krylov space becomes invariant (then
/// the Ritz values are exact).
pub fn second_eigenvalue(g: &Graph, tol: f64) -> Result<f64, ExpanderError> {
    regular_degree(g).ok_or(ExpanderError::NotRegular)?;
    let n = g.vertex_count();
    if n <= 1 {
        return Ok(0.0);
    }
    let mut rng = rng(0x5eed_1a2c);
    let mut q: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    deflate(&mut q);
    normalize(&mut q);
    let mut basis: Vec<Vec<f64>> = Vec::new();
    let mut alpha: Vec<f64> = Vec::new();
    let mut beta: Vec<f64> = Vec::new();
    let scale = g.max_degree().max(1) as f64;
    let max_steps = (n - 1).min(LANCZOS_MAX_STEPS);
    loop {
        let mut w: Vec<f64> = (0..n).map(|u| g.neighbors(u).iter().map(|&v| q[v]).sum()).collect();
        let a = dot(&q, &w);
        axpy(-a, &q, &mut w);
        if let (Some(prev), Some(&b)) = (basis.last(), beta.last()) {
            axpy(-b, prev, &mut w);
        }
        for _ in 0..2 {
            for v in basis.iter().chain(core::iter::once(&q)) {
                let c = dot(v, &w);
                axpy(-c, v, &mut w);
            }
            deflate(&mut w);
        }
        alpha.push(a);
        basis.push(q);
        let b = libm::sqrt(dot(&w, &w));
        let steps = alpha.len();
        let (theta_min, theta_max, r_min, r_max) = extreme_ritz(&alpha, &beta, b);
        let last_residual = r_min.max(r_max);
        let invariant = b <= 1e-10 * scale;
        if invariant || steps >= n - 1 || (steps >= 2 && last_residual <= tol) {
            return Ok(libm::fabs(theta_min).max(libm::fabs(theta_max)));
        }
        if steps >= max_steps {
            return Err(ExpanderError::NotConverged { residual: last_residual });
        }
        beta.push(b);
        q = w.into_iter().map(|x| x / b).collect();
    }
}

fn deflate(v: &mut [f64]) {
    let mean = v.iter().sum::<f64>() / v.len() as f64;
    v.iter_mut().for_each(|x| *x -= mean);
}

fn normalize(v: &mut [f64]) {
    let norm = libm::sqrt(dot(v, v));
    v.iter_mut().for_each(|x| *x /= norm);
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn axpy(a: f64, x: &[f64], y: &mut [f64]) {
    y.iter_mut().zip(x).for_each(|(yi, xi)| *yi += a * xi);
}

/// Smallest and largest eigenvalue of the tridiagonal matrix with diagonal
/// `alpha` and off-diagonal `beta`, with residual estimates `|b * s_last|`.
fn extreme_ritz(alpha: &[f64], beta: &[f64], b: f64) -> (f64, f64, f64, f64) {
    let k = alpha.len();
    let mut d = alpha.to_vec();
    let mut e: Vec<f64> = beta.to_vec();
    e.push(0.0);
    let mut z = vec![0.0; k];
    z[k - 1] = 1.0;
    tql_last_row(&mut d, &mut e, &mut z);
    let (mut lo, mut hi) = (0, 0);
    for i in 1..k {
        if d[i] < d[lo] {
            lo = i;
        }
        if d[i] > d[hi] {
            hi = i;
        }
    }
    (d[lo], d[hi], libm::fabs(b * z[lo]), libm::fabs(b * z[hi]))
}

/// Implicit QL on a symmetric tridiagonal matrix (`e[i]` couples `i` and
/// `i + 1`), accumulating only one row `z` of the eigenvector matrix.
fn tql_last_row(d: &mut [f64], e: &mut [f64], z: &mut [f64]) {
    let n = d.len();
    for l in 0..n {
        let mut iterations = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = libm::fabs(d[m]) + libm::fabs(d[m + 1]);
                if libm::fabs(e[m]) <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l || iterations >= 100 {
                break;
            }
            iterations += 1;
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = libm::hypot(g, 1.0);
            g = d[m] - d[l] + e[l] / (g + libm::copysign(r, g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = libm::hypot(f, g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                let zf = z[i + 1];
                z[i + 1] = s * z[i] + c * zf;
                z[i] = c * z[i] - s * zf;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

/// Draws random regular graphs with fresh child seeds until one passes
/// `lambda + tol <= 3 sqrt(t)`.
pub fn make_expander(m: usize, t: usize, seed: u64, retries: usize) -> Result<CertifiedExpander, ExpanderError> {
    make_expander_with_tol(m, t, seed, retries, DEFAULT_TOL)
}

pub fn make_expander_with_tol(m: usize, t: usize, seed: u64, retries: usize, tol: f64) -> Result<CertifiedExpander, ExpanderError> {
    let threshold = 3.0 * libm::sqrt(t as f64);
    let mut best: Option<f64> = None;
    for attempt in 0..retries {
        let s = derive_seed(seed, attempt as u64);
        let graph = random_regular(m, t, s)?;
        let lambda = second_eigenvalue(&graph, tol)?;
        if lambda + tol <= threshold {
            return Ok(CertifiedExpander { graph, t, lambda, tol, lambda_bound: lambda + tol, seed: s });
        }
        best = Some(best.map_or(lambda, |b: f64| b.min(lambda)));
    }
    Err(ExpanderError::AllRetriesFailed { retries, best })
}

/// Endpoint of a simple random walk of `steps` steps from `start`.
pub fn random_walk(g: &Graph, start: usize, steps: usize, rng: &mut Rng) -> usize {
    let mut v = start;
    for _ in 0..steps {
        let nb = g.neighbors(v);
        if nb.is_empty() {
            break;
        }
        v = nb[rng.gen_range(0..nb.len())];
    }
    v
}

/// Empirical frequency with which `steps`-step walks from `start` end at
/// `target`.
pub fn walk_hit_frequency(g: &Graph, start: usize, target: usize, steps: usize, samples: usize, seed: u64) -> f64 {
    let mut rng = rng(seed);
    let hits = (0..samples).filter(|_| random_walk(g, start, steps, &mut rng) == target).count();
    hits as f64 / samples.max(1) as f64
}
