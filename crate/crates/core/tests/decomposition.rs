mod common;

use common::{arb_graph, brute_density, is_pseudoforest};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use unigraph_core::graph::complete;
use unigraph_core::matroid::{bicircular_independent, decompose};
use unigraph_core::{MultiEdge, MultiEdgeSet};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn parts_cover_and_are_pseudoforests(g in arb_graph(12, 40), b in 1usize..=3) {
        let m = brute_density(&g);
        prop_assume!(m >= BigRational::from_integer(BigInt::from(1)));
        let dec = decompose(&g, b).unwrap();
        let expected = (m * BigRational::from_integer(BigInt::from(b))).ceil().to_integer();
        prop_assert_eq!(BigInt::from(dec.k), expected);
        for (u, v) in g.edges() {
            let mut parts: Vec<usize> = dec.assignment.iter().filter(|(e, _)| (e.u, e.v) == (u, v)).map(|(_, p)| *p).collect();
            prop_assert_eq!(parts.len(), b);
            parts.sort();
            parts.dedup();
            prop_assert_eq!(parts.len(), b, "copies of one edge share a part");
        }
        for p in 0..dec.k {
            let pairs: Vec<_> = dec.assignment.iter().filter(|(_, q)| *q == p).map(|(e, _)| (e.u, e.v)).collect();
            prop_assert!(is_pseudoforest(g.vertex_count(), &pairs));
        }
        prop_assert!(dec.is_valid_for(&g));
    }

    #[test]
    fn independence_oracle_agrees(g in arb_graph(10, 20)) {
        let set = MultiEdgeSet::duplicate(&g, 1);
        prop_assert_eq!(bicircular_independent(&set, g.vertex_count()), is_pseudoforest(g.vertex_count(), &g.edge_vec()));
    }
}

#[test]
fn duplicated_edges_are_dependent() {
    let set = MultiEdgeSet::new(vec![MultiEdge { u: 0, v: 1, copy: 1 }, MultiEdge { u: 0, v: 1, copy: 2 }]);
    assert!(!bicircular_independent(&set, 2));
}

#[test]
fn dense_graph_decomposes() {
    let g = complete(12);
    let dec = decompose(&g, 2).unwrap();
    assert_eq!(dec.k, 11);
    assert!(dec.is_valid_for(&g));
}
