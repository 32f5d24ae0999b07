//! Embedding verification and the edge lower bound for universal graphs.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::density::is_balanced;
use crate::embed::Embedding;
use crate::graph::Graph;
use crate::host::UniversalHost;
use crate::rational::{from_usize, to_f64, Rational};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VerifyError {
    #[error("embedding covers {got} vertices, guest has {expected}")]
    MissingVertex { expected: usize, got: usize },
    #[error("guest vertex {vertex} maps to {id}, outside the host (size {count})")]
    OutOfRange { vertex: usize, id: usize, count: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum BoundError {
    #[error("F is not balanced")]
    Unbalanced,
    #[error("F has no edges")]
    NoEdges,
    #[error("n = {n} is not divisible by v(F) = {v}")]
    NotDivisible { n: usize, v: usize },
}

/// True iff `emb` is injective and maps every guest edge to a host edge,
/// judged by the host's own edge rule.
pub fn verify_embedding(h: &Graph, host: &UniversalHost, emb: &Embedding) -> Result<bool, VerifyError> {
    let n = h.vertex_count();
    if emb.map.len() != n {
        return Err(VerifyError::MissingVertex { expected: n, got: emb.map.len() });
    }
    let count = host.vertex_count();
    if let Some((vertex, &id)) = emb.map.iter().enumerate().find(|(_, &id)| id >= count) {
        return Err(VerifyError::OutOfRange { vertex, id, count });
    }
    let mut sorted = emb.map.clone();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Ok(false);
    }
    Ok(h.edges().all(|(u, v)| host.is_adjacent(emb.map[u], emb.map[v])))
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub f: Graph,
    pub n: usize,
    pub m_f: Rational,
    /// `n^{2 - 1/m(F)} / (9 v(F))`.
    pub bound: f64,
    /// The same value as an exact rational, when `n` is a perfect `p`-th
    /// power for `m(F) = p/q` in lowest terms.
    pub bound_exact: Option<Rational>,
    pub counting_lhs_log: Option<f64>,
    pub counting_rhs_log: Option<f64>,
}

impl BoundReport {
    /// Whether `M` passes the counting necessity condition (strict `>`).
    pub fn sufficient(&self) -> Option<bool> {
        Some(self.counting_lhs_log? > self.counting_rhs_log?)
    }
}

fn reduced(f: &Graph) -> (usize, usize) {
    let (e, v) = (f.edge_count(), f.vertex_count());
    let g = gcd(e, v);
    (e / g, v / g)
}

fn gcd(a: usize, b: usize) -> usize {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Exact `r` with `r^k = n`, if any.
fn exact_root(n: usize, k: u32) -> Option<u128> {
    let guess = libm::round(libm::pow(n as f64, 1.0 / k as f64)) as u128;
    (guess.saturating_sub(1)..=guess + 1).find(|&r| r.checked_pow(k) == Some(n as u128))
}

pub fn lower_bound(f: &Graph, n: usize) -> Result<BoundReport, BoundError> {
    let (e, v) = (f.edge_count(), f.vertex_count());
    if e == 0 {
        return Err(BoundError::NoEdges);
    }
    if !is_balanced(f) {
        return Err(BoundError::Unbalanced);
    }
    if !n.is_multiple_of(v) {
        return Err(BoundError::NotDivisible { n, v });
    }
    let (p, q) = reduced(f);
    let m_f = Rational::new(BigInt::from(p), BigInt::from(q));
    let denom = from_usize(9 * v);
    // n^{2 - q/p} = (n^{1/p})^{2p - q}
    let bound_exact = exact_root(n, p as u32).map(|r| Rational::from_integer(BigInt::from(r).pow((2 * p - q) as u32)) / &denom);
    let bound = match &bound_exact {
        Some(x) => to_f64(x),
        None => libm::pow(n as f64, 2.0 - q as f64 / p as f64) / (9 * v) as f64,
    };
    Ok(BoundReport { f: f.clone(), n, m_f, bound, bound_exact, counting_lhs_log: None, counting_rhs_log: None })
}

fn ln_factorial(x: f64) -> f64 {
    libm::lgamma(x + 1.0)
}

/// Natural logs of `C(M, N) n!` and `(n / (3 v(F)))^N` with `N = n e(F)/v(F)`.
/// The left side is `-inf` when `M < N`.
pub fn check_counting_inequality(f: &Graph, n: usize, big_m: u64) -> Result<BoundReport, BoundError> {
    let mut report = lower_bound(f, n)?;
    let (e, v) = (f.edge_count(), f.vertex_count());
    let big_n = (n / v * e) as f64;
    let m = big_m as f64;
    let lhs = if m < big_n {
        f64::NEG_INFINITY
    } else {
        ln_factorial(m) - ln_factorial(big_n) - ln_factorial(m - big_n) + ln_factorial(n as f64)
    };
    let rhs = big_n * libm::log(n as f64 / (3 * v) as f64);
    report.counting_lhs_log = Some(lhs);
    report.counting_rhs_log = Some(rhs);
    Ok(report)
}

/// `ceil(bound)` as an integer, using the exact value when available.
pub fn bound_ceiling(report: &BoundReport) -> u64 {
    match &report.bound_exact {
        Some(x) => {
            let c = x.ceil().to_integer();
            if c.is_zero() {
                0
            } else {
                c.to_u64().unwrap_or(u64::MAX)
            }
        }
        None => libm::ceil(report.bound) as u64,
    }
}
