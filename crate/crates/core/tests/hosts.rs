use rand::{Rng, SeedableRng};
use unigraph_core::host::{build_integer, build_rational, build_unbounded, ConstructionParams, HostError, ProductVertex, TPolicy};

#[test]
fn codec_round_trips_on_random_ids() {
    let hosts = [
        build_unbounded(1024, 2).unwrap(),
        build_integer(500, 2, 4, ConstructionParams::default()).unwrap(),
        build_rational(1000, 3, 2, 3, ConstructionParams::default()).unwrap(),
    ];
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    for h in &hosts {
        for _ in 0..100_000 / hosts.len() {
            let id = r.gen_range(0..h.vertex_count());
            assert_eq!(h.encode(&h.decode(id).unwrap()).unwrap(), id);
        }
        assert_eq!(h.encode(&ProductVertex::Product { coords: vec![0; h.dim], slot: 0 }).unwrap(), 0);
        assert_eq!(h.decode(h.vertex_count() - 1).unwrap(), if h.apex_size > 0 { ProductVertex::Apex(h.apex_size - 1) } else { ProductVertex::Product { coords: vec![h.m - 1; h.dim], slot: h.blowup_size - 1 } });
    }
}

#[test]
fn integer_host_shape() {
    let h = build_integer(2000, 2, 4, ConstructionParams::default()).unwrap();
    assert_eq!(h.m % 2, 0);
    assert!(h.m as f64 >= 2.0 * 2000f64.sqrt());
    assert_eq!(h.tuple_count(), h.m * h.m);
    let x = h.expander.as_ref().unwrap();
    assert!((0..h.m).all(|v| x.graph.degree(v) == x.t));
    // Pick two values at distance >= 3 in the expander: tuples built from them are not adjacent.
    let far = (0..h.m).find(|&y| !h.related(0, y)).unwrap();
    let a = h.encode(&ProductVertex::Product { coords: vec![0, 0], slot: 0 }).unwrap();
    let b = h.encode(&ProductVertex::Product { coords: vec![far, far], slot: 0 }).unwrap();
    assert!(!h.is_adjacent(a, b));
    let c = h.encode(&ProductVertex::Product { coords: vec![0, far], slot: 0 }).unwrap();
    assert!(h.is_adjacent(a, c));
    let apex = h.apex_ids().start;
    assert!((0..h.vertex_count()).filter(|&v| v != apex).all(|v| h.is_adjacent(apex, v)));
}

#[test]
fn materialized_integer_host_matches_closed_form() {
    let h = build_integer(100, 2, 4, ConstructionParams::default()).unwrap();
    let g = h.materialize().unwrap();
    assert_eq!(g.edge_count() as u128, h.edge_count());
    let mut r = rand_chacha::ChaCha8Rng::seed_from_u64(9);
    for _ in 0..20_000 {
        let (x, y) = (r.gen_range(0..g.vertex_count()), r.gen_range(0..g.vertex_count()));
        assert_eq!(g.has_edge(x, y), h.is_adjacent(x, y));
    }
}

#[test]
fn rational_rule_specialisations() {
    let all = build_rational(729, 3, 3, 3, ConstructionParams { t_policy: TPolicy::Fixed(2), ..Default::default() }).unwrap();
    let enc = |c: [usize; 3]| all.encode(&ProductVertex::Product { coords: c.to_vec(), slot: 0 }).unwrap();
    let far = (0..all.m).find(|&y| !all.related(0, y)).unwrap();
    assert!(all.is_adjacent(enc([0, 0, 0]), enc([0, 0, 1])) == all.related(0, 1));
    assert!(!all.is_adjacent(enc([0, 0, 0]), enc([0, 0, far])));
    let one = build_rational(50, 1, 1, 3, ConstructionParams { t_policy: TPolicy::Fixed(2), ..Default::default() }).unwrap();
    assert_eq!(one.tuple_count(), one.m);
    let g = one.materialize().unwrap();
    let sq = one.expander.as_ref().unwrap().graph.square();
    let b = one.blowup_size;
    for x in 0..one.m {
        for y in 0..one.m {
            if x != y {
                assert_eq!(g.has_edge(x * b, y * b), sq.has_edge(x, y));
            }
        }
    }
    assert!(matches!(
        build_rational(4096, 3, 2, 3, ConstructionParams { t_policy: TPolicy::Fixed(16), ..Default::default() }),
        Err(HostError::DegreeTooLarge { .. })
    ));
}

#[test]
fn unbounded_edge_growth_is_bounded_relative_to_target() {
    for n in [256usize, 512, 1024] {
        let h = build_unbounded(n, 2).unwrap();
        let ratio = h.edge_count() as f64 / (n as f64).powf(5.0 / 3.0);
        assert!(ratio < 1000.0, "n {n}: ratio {ratio}");
    }
}
