mod common;

use common::brute_density;
use unigraph_core::density::{density, is_balanced};
use unigraph_core::gen::{find_balanced, gen_bounded_degree, gen_lift, gen_union_unicyclic};
use unigraph_core::graph::{complete, cycle};
use num_bigint::BigInt;
use num_rational::BigRational;

#[test]
fn lifts_keep_density() {
    let bases = [cycle(3), complete(4), find_balanced(5, 4, 6).unwrap(), find_balanced(4, 3, 6).unwrap(), cycle(5)];
    for f in &bases {
        assert!(is_balanced(f));
        let mf = brute_density(f);
        let v = f.vertex_count();
        for seed in 0..4 {
            for n in (v..=60).step_by(v * 3) {
                let l = gen_lift(f, n, seed).unwrap();
                assert_eq!(l.edge_count(), n / v * f.edge_count());
                assert_eq!(l.max_degree(), f.max_degree());
                assert_eq!(density(&l).unwrap().density, mf, "n {n}");
            }
        }
    }
}

#[test]
fn union_density_bound() {
    for d in 1..=3 {
        for seed in 0..5 {
            let g = gen_union_unicyclic(512, d, seed);
            assert!(density(&g).unwrap().density <= BigRational::from_integer(BigInt::from(d)));
        }
    }
}

#[test]
fn bounded_degree_structure() {
    let g = gen_bounded_degree(2000, 2, 4, 1);
    assert!(g.max_degree() <= 4);
    assert!(density(&g).unwrap().density <= BigRational::from_integer(BigInt::from(2)));
    let paths = gen_bounded_degree(500, 1, 2, 2);
    assert!(paths.max_degree() <= 2);
    for c in paths.components() {
        let (sub, _) = paths.induced_with_map(&c).unwrap();
        assert!(sub.edge_count() <= sub.vertex_count());
    }
    assert_eq!(gen_bounded_degree(0, 2, 4, 0).vertex_count(), 0);
}

#[test]
fn balanced_search_results() {
    for (a, b) in [(1, 1), (3, 2), (2, 1), (5, 4), (4, 3), (5, 3), (7, 4)] {
        let f = find_balanced(a, b, 8).unwrap();
        assert!(is_balanced(&f));
        assert_eq!(f.edge_count() * b, f.vertex_count() * a, "{a}/{b}");
    }
}
