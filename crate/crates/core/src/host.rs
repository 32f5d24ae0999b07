//! The three universal host graphs and their vertex codec.
//!
//! Every host has the same shape: a coordinate graph Γ on `[m]^dim`, blown
//! up by `blowup_size`, plus `apex_size` apex vertices adjacent to all
//! other vertices. Two distinct tuples are Γ-adjacent when at least
//! `threshold` of their coordinates are related, where the coordinate
//! relation is equality (unbounded family) or "equal or within distance 2
//! in the expander" (integer and rational families).
//!
//! Vertex ids: a product vertex with tuple index `c` (coordinate 0 most
//! significant, base `m`) and slot `s` has id `c * blowup_size + s`; apex
//! `k` has id `m^dim * blowup_size + k`.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::expander::{make_expander_with_tol, CertifiedExpander, ExpanderError, DEFAULT_TOL};
use crate::graph::Graph;

/// Hosts above this many edges are only available as implicit views.
pub const MATERIALIZE_LIMIT: u128 = 10_000_000;
/// Expander degree used by the integer family unless overridden.
pub const DEFAULT_INTEGER_T: usize = 4;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Unbounded,
    Integer,
    Rational,
}

impl Family {
    pub fn name(self) -> &'static str {
        match self {
            Family::Unbounded => "unbounded",
            Family::Integer => "integer",
            Family::Rational => "rational",
        }
    }

    pub fn parse(s: &str) -> Option<Family> {
        match s {
            "unbounded" => Some(Family::Unbounded),
            "integer" => Some(Family::Integer),
            "rational" => Some(Family::Rational),
            _ => None,
        }
    }
}

/// A density bound `a/b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct DensityParam {
    pub a: usize,
    pub b: usize,
}

impl DensityParam {
    pub fn integer(d: usize) -> Self {
        DensityParam { a: d, b: 1 }
    }

    pub fn ceil(self) -> usize {
        self.a.div_ceil(self.b)
    }
}

impl fmt::Display for DensityParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b == 1 {
            write!(f, "{}", self.a)
        } else {
            write!(f, "{}/{}", self.a, self.b)
        }
    }
}

/// How the expander degree `t` is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TPolicy {
    /// Integer family: [`DEFAULT_INTEGER_T`]; rational family:
    /// `2^ceil(sqrt(log2 n))`, lowered to `m - 1` when that is not below `m`.
    FamilyDefault,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructionParams {
    /// `m = ceil(c_integer * n^(1/d))` for the integer family.
    pub c_integer: f64,
    /// Blowup `ceil(2^(c_rational * sqrt(log2 n)))` for the rational family.
    pub c_rational: f64,
    pub t_policy: TPolicy,
    /// Apex budget multiplier; `None` means `6 t`.
    pub v_plus_factor: Option<f64>,
    /// Reservation fraction of the constrained tree embedder.
    pub beta: f64,
    /// Allowed fraction of forbidden coordinates per tree vertex.
    pub eps: f64,
    pub seed: u64,
    pub expander_retries: usize,
    pub tol: f64,
}

impl Default for ConstructionParams {
    fn default() -> Self {
        ConstructionParams {
            c_integer: 2.0,
            c_rational: 2.0,
            t_policy: TPolicy::FamilyDefault,
            v_plus_factor: None,
            beta: 0.5,
            eps: 0.5,
            seed: 0,
            expander_retries: 20,
            tol: DEFAULT_TOL,
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum HostError {
    #[error("coordinate alphabet m = {m} is below 4; n is too small for this construction")]
    AlphabetTooSmall { m: usize },
    #[error("invalid density parameters: {0}")]
    InvalidDensity(&'static str),
    #[error("expander degree t = {t} is not below m = {m}")]
    DegreeTooLarge { t: usize, m: usize },
    #[error(transparent)]
    Expander(#[from] ExpanderError),
    #[error("supplied expander does not match: expected {expected_m} vertices of degree {expected_t}")]
    ExpanderMismatch { expected_m: usize, expected_t: usize },
    #[error("host has {edges} edges, above the materialization limit {limit}")]
    TooLargeToMaterialize { edges: u128, limit: u128 },
    #[error("vertex id {id} is outside 0..{count}")]
    IdOutOfRange { id: usize, count: usize },
    #[error("malformed product vertex")]
    BadProductVertex,
}

/// A vertex of a host: a coordinate tuple with a blowup slot, or an apex.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ProductVertex {
    Product { coords: Vec<usize>, slot: usize },
    Apex(usize),
}

#[derive(Debug, Clone)]
pub struct UniversalHost {
    pub family: Family,
    pub n: usize,
    pub density: DensityParam,
    pub max_degree: Option<usize>,
    pub m: usize,
    pub dim: usize,
    /// Minimum number of related coordinates for Γ-adjacency.
    pub threshold: usize,
    pub blowup_size: usize,
    pub apex_size: usize,
    pub expander: Option<CertifiedExpander>,
    pub params: ConstructionParams,
    /// Row-major `m x m` bit matrix of the coordinate relation; `None`
    /// means plain equality.
    relation: Option<Vec<u64>>,
    words: usize,
    related_pairs: u128,
    tuple_count: usize,
}

/// Smallest `m` with `m^e >= n`.
fn int_root_ceil(n: usize, e: usize) -> usize {
    let mut m = 1usize;
    while !pow_at_least(m, e, n) {
        m += 1;
    }
    m
}

fn pow_at_least(base: usize, e: usize, n: usize) -> bool {
    let mut acc: u128 = 1;
    for _ in 0..e {
        acc *= base as u128;
        if acc >= n as u128 {
            return true;
        }
    }
    acc >= n as u128
}

fn log2(n: usize) -> f64 {
    libm::log2(n.max(1) as f64)
}

/// Default rational-family degree `2^ceil(sqrt(log2 n))`.
pub fn sqrt_log_degree(n: usize) -> usize {
    1usize << (libm::ceil(libm::sqrt(log2(n))) as u32)
}

pub fn build_unbounded(n: usize, d: usize) -> Result<UniversalHost, HostError> {
    if d == 0 {
        return Err(HostError::InvalidDensity("d must be at least 1"));
    }
    let mut m = 1usize;
    while !pow_at_least(m, d + 1, n) {
        m *= 2;
    }
    if m < 4 {
        return Err(HostError::AlphabetTooSmall { m });
    }
    let apex = (2 * d * n).div_ceil(m);
    Ok(UniversalHost::new(Family::Unbounded, n, DensityParam::integer(d), None, m, d, 1, 3 * m + 3, apex, None, ConstructionParams::default()))
}

pub fn build_integer(n: usize, d: usize, max_degree: usize, params: ConstructionParams) -> Result<UniversalHost, HostError> {
    assemble_integer(n, d, max_degree, params, None)
}

/// Integer-family host, optionally reusing a previously certified expander.
pub fn assemble_integer(
    n: usize,
    d: usize,
    max_degree: usize,
    params: ConstructionParams,
    expander: Option<CertifiedExpander>,
) -> Result<UniversalHost, HostError> {
    if d == 0 || max_degree == 0 {
        return Err(HostError::InvalidDensity("d and D must be at least 1"));
    }
    let t = match params.t_policy {
        TPolicy::FamilyDefault => DEFAULT_INTEGER_T,
        TPolicy::Fixed(t) => t,
    };
    let mut m = libm::ceil(params.c_integer * libm::pow(n.max(1) as f64, 1.0 / d as f64)) as usize;
    m = m.max(t + 1);
    if (m * t) % 2 == 1 {
        m += 1;
    }
    let expander = obtain_expander(m, t, &params, expander)?;
    let factor = params.v_plus_factor.unwrap_or(6.0 * t as f64);
    let apex = libm::ceil(factor * (d * n) as f64 / m as f64) as usize;
    Ok(UniversalHost::new(Family::Integer, n, DensityParam::integer(d), Some(max_degree), m, d, 1, 1, apex, Some(expander), params))
}

pub fn build_rational(n: usize, a: usize, b: usize, max_degree: usize, params: ConstructionParams) -> Result<UniversalHost, HostError> {
    assemble_rational(n, a, b, max_degree, params, None)
}

pub fn assemble_rational(
    n: usize,
    a: usize,
    b: usize,
    max_degree: usize,
    params: ConstructionParams,
    expander: Option<CertifiedExpander>,
) -> Result<UniversalHost, HostError> {
    if b == 0 || a < b {
        return Err(HostError::InvalidDensity("need a >= b >= 1"));
    }
    let mut m = int_root_ceil(n.max(1), a);
    let t = match params.t_policy {
        TPolicy::FamilyDefault => sqrt_log_degree(n).min(m.saturating_sub(1)),
        TPolicy::Fixed(t) => t,
    };
    if t >= m {
        return Err(HostError::DegreeTooLarge { t, m });
    }
    if (m * t) % 2 == 1 {
        m += 1;
    }
    let expander = obtain_expander(m, t, &params, expander)?;
    let blowup = libm::ceil(libm::exp2(params.c_rational * libm::sqrt(log2(n)))) as usize;
    Ok(UniversalHost::new(Family::Rational, n, DensityParam { a, b }, Some(max_degree), m, a, b, blowup.max(1), 0, Some(expander), params))
}

fn obtain_expander(m: usize, t: usize, params: &ConstructionParams, given: Option<CertifiedExpander>) -> Result<CertifiedExpander, HostError> {
    match given {
        Some(x) if x.m() == m && x.t == t => Ok(x),
        Some(_) => Err(HostError::ExpanderMismatch { expected_m: m, expected_t: t }),
        None => Ok(make_expander_with_tol(m, t, params.seed, params.expander_retries, params.tol)?),
    }
}

impl UniversalHost {
    #[allow(clippy::too_many_arguments)]
    fn new(
        family: Family,
        n: usize,
        density: DensityParam,
        max_degree: Option<usize>,
        m: usize,
        dim: usize,
        threshold: usize,
        blowup_size: usize,
        apex_size: usize,
        expander: Option<CertifiedExpander>,
        params: ConstructionParams,
    ) -> Self {
        let words = m.div_ceil(64);
        let (relation, related_pairs) = match &expander {
            None => (None, m as u128),
            Some(x) => {
                let sq = x.graph.square();
                let mut bits = vec![0u64; m * words];
                let mut count = 0u128;
                for u in 0..m {
                    for &w in sq.neighbors(u).iter().chain(core::iter::once(&u)) {
                        bits[u * words + w / 64] |= 1 << (w % 64);
                        count += 1;
                    }
                }
                (Some(bits), count)
            }
        };
        let tuple_count = m.checked_pow(dim as u32).expect("tuple count fits usize");
        UniversalHost {
            family,
            n,
            density,
            max_degree,
            m,
            dim,
            threshold,
            blowup_size,
            apex_size,
            expander,
            params,
            relation,
            words,
            related_pairs,
            tuple_count,
        }
    }

    /// Number of coordinate tuples `m^dim`.
    pub fn tuple_count(&self) -> usize {
        self.tuple_count
    }

    pub fn product_count(&self) -> usize {
        self.tuple_count * self.blowup_size
    }

    pub fn vertex_count(&self) -> usize {
        self.product_count() + self.apex_size
    }

    /// Whether coordinate values `x` and `y` are related.
    pub fn related(&self, x: usize, y: usize) -> bool {
        match &self.relation {
            None => x == y,
            Some(bits) => bits[x * self.words + y / 64] >> (y % 64) & 1 == 1,
        }
    }

    pub fn tuple_index(&self, coords: &[usize]) -> usize {
        coords.iter().fold(0, |acc, &c| acc * self.m + c)
    }

    pub fn tuple_coords(&self, mut index: usize) -> Vec<usize> {
        let mut coords = vec![0; self.dim];
        for slot in coords.iter_mut().rev() {
            *slot = index % self.m;
            index /= self.m;
        }
        coords
    }

    /// Γ-adjacency of two tuple indices.
    pub fn gamma_adjacent(&self, mut i: usize, mut j: usize) -> bool {
        if i == j {
            return false;
        }
        let mut hits = 0;
        for _ in 0..self.dim {
            if self.related(i % self.m, j % self.m) {
                hits += 1;
                if hits >= self.threshold {
                    return true;
                }
            }
            i /= self.m;
            j /= self.m;
        }
        false
    }

    /// The host edge rule.
    pub fn is_adjacent(&self, x: usize, y: usize) -> bool {
        let count = self.vertex_count();
        if x == y || x >= count || y >= count {
            return false;
        }
        let products = self.product_count();
        if x >= products || y >= products {
            return true;
        }
        let (cx, cy) = (x / self.blowup_size, y / self.blowup_size);
        cx == cy || self.gamma_adjacent(cx, cy)
    }

    pub fn encode(&self, v: &ProductVertex) -> Result<usize, HostError> {
        match v {
            ProductVertex::Apex(k) if *k < self.apex_size => Ok(self.product_count() + k),
            ProductVertex::Product { coords, slot }
                if coords.len() == self.dim && *slot < self.blowup_size && coords.iter().all(|&c| c < self.m) =>
            {
                Ok(self.tuple_index(coords) * self.blowup_size + slot)
            }
            _ => Err(HostError::BadProductVertex),
        }
    }

    pub fn decode(&self, id: usize) -> Result<ProductVertex, HostError> {
        let count = self.vertex_count();
        if id >= count {
            return Err(HostError::IdOutOfRange { id, count });
        }
        let products = self.product_count();
        if id >= products {
            return Ok(ProductVertex::Apex(id - products));
        }
        Ok(ProductVertex::Product { coords: self.tuple_coords(id / self.blowup_size), slot: id % self.blowup_size })
    }

    /// Number of Γ edges, in closed form.
    pub fn gamma_edge_count(&self) -> u128 {
        let m2 = (self.m as u128) * (self.m as u128);
        let rho = self.related_pairs;
        let mut ordered: u128 = 0;
        for s in self.threshold..=self.dim {
            let term = binomial(self.dim as u128, s as u128) * rho.pow(s as u32) * (m2 - rho).pow((self.dim - s) as u32);
            ordered += term;
        }
        (ordered - self.tuple_count as u128) / 2
    }

    /// Exact number of host edges.
    pub fn edge_count(&self) -> u128 {
        let tuples = self.tuple_count as u128;
        let b = self.blowup_size as u128;
        let apex = self.apex_size as u128;
        let products = tuples * b;
        tuples * (b * (b - 1) / 2) + self.gamma_edge_count() * b * b + apex * (apex.saturating_sub(1)) / 2 + apex * products
    }

    /// Explicit graph, if it has at most [`MATERIALIZE_LIMIT`] edges.
    pub fn materialize(&self) -> Result<Graph, HostError> {
        let edges = self.edge_count();
        if edges > MATERIALIZE_LIMIT {
            return Err(HostError::TooLargeToMaterialize { edges, limit: MATERIALIZE_LIMIT });
        }
        let tuples = self.tuple_count;
        let b = self.blowup_size;
        let products = self.product_count();
        let total = self.vertex_count();
        let mut gamma: Vec<Vec<usize>> = vec![Vec::new(); tuples];
        for i in 0..tuples {
            for j in 0..tuples {
                if i == j || self.gamma_adjacent(i, j) {
                    gamma[i].push(j);
                }
            }
        }
        let mut adj = Vec::with_capacity(total);
        for c in 0..tuples {
            for s in 0..b {
                let me = c * b + s;
                let mut list = Vec::with_capacity(gamma[c].len() * b + self.apex_size);
                for &o in &gamma[c] {
                    list.extend((o * b..o * b + b).filter(|&x| x != me));
                }
                list.extend(products..total);
                adj.push(list);
            }
        }
        for k in 0..self.apex_size {
            let me = products + k;
            adj.push((0..total).filter(|&x| x != me).collect());
        }
        Ok(Graph::from_sorted_adjacency(adj))
    }

    /// Apex vertex ids.
    pub fn apex_ids(&self) -> core::ops::Range<usize> {
        self.product_count()..self.vertex_count()
    }
}

fn binomial(n: u128, k: u128) -> u128 {
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}
