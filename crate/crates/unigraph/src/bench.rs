//! Batch drivers: host size sweeps and embedding success rates.

use std::time::Instant;

use rayon::prelude::*;
use unigraph_core::bounds::verify_embedding;
use unigraph_core::embed::{embed_integer, embed_rational, embed_unbounded};
use unigraph_core::gen::{find_balanced, gen_bounded_degree, gen_lift, gen_union_unicyclic};
use unigraph_core::host::{build_integer, build_rational, build_unbounded, ConstructionParams, DensityParam, Family, UniversalHost};
use unigraph_core::seed::derive_seed;
use unigraph_core::Graph;

/// Environment variable capping batch parallelism.
pub const THREADS_VAR: &str = "UNIGRAPH_THREADS";

/// Runs `f` on a pool limited by `UNIGRAPH_THREADS` (all cores if unset).
pub fn with_pool<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    let threads = std::env::var(THREADS_VAR).ok().and_then(|v| v.parse::<usize>().ok()).unwrap_or(0);
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(_) => f(),
    }
}

/// Least-squares slope of `ln y` against `ln x`.
pub fn fitted_exponent(points: &[(f64, f64)]) -> f64 {
    let k = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|p| p.0.ln()).collect();
    let ys: Vec<f64> = points.iter().map(|p| p.1.ln()).collect();
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let num: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let den: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    num / den
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub n: usize,
    pub host_edges: u128,
    pub success_rate: f64,
    pub mean_seconds: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchTable {
    pub rows: Vec<BenchRow>,
    pub exponent: f64,
}

impl BenchTable {
    pub fn to_text(&self) -> String {
        let mut s = String::from("n\te_host\tfitted_exponent\tsuccess_rate\tmean_seconds\n");
        for r in &self.rows {
            s.push_str(&format!("{}\t{}\t{:.4}\t{:.3}\t{:.6}\n", r.n, r.host_edges, self.exponent, r.success_rate, r.mean_seconds));
        }
        s
    }
}

pub fn build_host(family: Family, n: usize, density: DensityParam, max_degree: usize, seed: u64) -> Result<UniversalHost, unigraph_core::host::HostError> {
    let params = ConstructionParams { seed, ..ConstructionParams::default() };
    match family {
        Family::Unbounded => build_unbounded(n, density.ceil()),
        Family::Integer => build_integer(n, density.ceil(), max_degree, params),
        Family::Rational => build_rational(n, density.a, density.b, max_degree, params),
    }
}

/// A random guest suited to the family.
pub fn sample_guest(family: Family, n: usize, density: DensityParam, max_degree: usize, seed: u64) -> Graph {
    match family {
        Family::Unbounded => gen_union_unicyclic(n, density.ceil(), seed),
        Family::Integer => gen_bounded_degree(n, density.ceil(), max_degree, seed),
        Family::Rational => match find_balanced(density.a, density.b, 8) {
            Ok(f) => {
                let order = n - n % f.vertex_count();
                gen_lift(&f, order, seed).expect("order is a multiple of v(F)")
            }
            Err(_) => gen_bounded_degree(n, density.a / density.b, max_degree, seed),
        },
    }
}

/// Embeds and verifies; returns success.
pub fn embed_and_verify(h: &Graph, host: &UniversalHost, seed: u64, retries: usize) -> bool {
    let emb = match host.family {
        Family::Unbounded => embed_unbounded(h, host),
        Family::Integer => embed_integer(h, host, seed),
        Family::Rational => embed_rational(h, host, seed, retries),
    };
    matches!(emb.map(|e| verify_embedding(h, host, &e)), Ok(Ok(true)))
}

pub fn run_bench(
    family: Family,
    density: DensityParam,
    max_degree: usize,
    n_list: &[usize],
    samples: usize,
    seed: u64,
) -> Result<BenchTable, unigraph_core::host::HostError> {
    let mut rows = Vec::new();
    for &n in n_list {
        let host = build_host(family, n, density, max_degree, seed)?;
        let results: Vec<(bool, f64)> = with_pool(|| {
            (0..samples)
                .into_par_iter()
                .map(|k| {
                    let s = derive_seed(seed, (n * samples + k) as u64);
                    let h = sample_guest(family, n, density, max_degree, s);
                    let start = Instant::now();
                    let ok = embed_and_verify(&h, &host, s, 50);
                    (ok, start.elapsed().as_secs_f64())
                })
                .collect()
        });
        let k = samples.max(1) as f64;
        rows.push(BenchRow {
            n,
            host_edges: host.edge_count(),
            success_rate: results.iter().filter(|r| r.0).count() as f64 / k,
            mean_seconds: results.iter().map(|r| r.1).sum::<f64>() / k,
        });
    }
    let points: Vec<(f64, f64)> = rows.iter().map(|r| (r.n as f64, r.host_edges as f64)).collect();
    let exponent = if points.len() >= 2 { fitted_exponent(&points) } else { f64::NAN };
    Ok(BenchTable { rows, exponent })
}
