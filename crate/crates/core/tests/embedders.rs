use unigraph_core::bounds::verify_embedding;
use unigraph_core::embed::{
    embed_integer, embed_rational, embed_tree_constrained, embed_unbounded, EmbedError, Embedding, TreeEmbedOptions,
};
use unigraph_core::expander::make_expander;
use unigraph_core::gen::{gen_bounded_degree, gen_lift, gen_union_unicyclic};
use unigraph_core::graph::{complete, cycle, disjoint_union, path};
use unigraph_core::host::{build_integer, build_rational, build_unbounded, ConstructionParams};
use unigraph_core::seed::rng;
use unigraph_core::Graph;

fn triangles(k: usize) -> Graph {
    (0..k).fold(Graph::empty(0), |acc, _| disjoint_union(&acc, &cycle(3)))
}

#[test]
fn unbounded_triangles_respect_phase_bound() {
    let host = build_unbounded(512, 2).unwrap();
    let h = triangles(512 / 3);
    let emb = embed_unbounded(&h, &host).unwrap();
    assert!(verify_embedding(&h, &host, &emb).unwrap());
    let m = host.m as f64;
    for (i, &size) in emb.stats.phase_max_bucket.iter().enumerate() {
        assert!(size as f64 <= 512.0 / m.powi(i as i32 + 1) + 2.0 * m + 3.0);
    }
}

#[test]
fn unbounded_edgeless_and_random_guests() {
    let host = build_unbounded(512, 2).unwrap();
    let empty = Graph::empty(512);
    assert!(verify_embedding(&empty, &host, &embed_unbounded(&empty, &host).unwrap()).unwrap());
    for seed in 0..10 {
        let h = gen_union_unicyclic(512, 2, seed);
        let emb = embed_unbounded(&h, &host).unwrap();
        assert!(verify_embedding(&h, &host, &emb).unwrap());
    }
    let too_dense = complete(7);
    assert!(matches!(embed_unbounded(&too_dense, &host), Err(EmbedError::DensityTooHigh { .. })));
}

#[test]
fn constrained_tree_embedding_on_large_expander() {
    let x = make_expander(1000, 16, 1, 20).unwrap();
    let len = 1000 / (4 * 16);
    let t = path(len);
    let full = vec![vec![true; 1000]; len];
    let opts = TreeEmbedOptions::default();
    let img = embed_tree_constrained(&t, &x.graph, 16, &full, opts, &mut rng(4)).unwrap();
    let mut sorted = img.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), len);
    assert!(t.edges().all(|(u, v)| x.graph.has_edge(img[u], img[v])));

    let single = embed_tree_constrained(&Graph::empty(1), &x.graph, 16, &full[..1], opts, &mut rng(0)).unwrap();
    assert_eq!(single.len(), 1);

    let mut restricted = full.clone();
    for s in restricted.iter_mut() {
        for v in 0..1000 {
            s[v] = v % 2 == 0 || v % 3 == 0;
        }
    }
    let img = embed_tree_constrained(&t, &x.graph, 16, &restricted, opts, &mut rng(5)).unwrap();
    assert!(img.iter().all(|&v| v % 2 == 0 || v % 3 == 0));

    let mut tiny = full.clone();
    tiny[3] = (0..1000).map(|v| v < 100).collect();
    assert!(matches!(
        embed_tree_constrained(&t, &x.graph, 16, &tiny, opts, &mut rng(0)),
        Err(EmbedError::SetTooSmall { vertex: 3, .. })
    ));
    assert!(matches!(
        embed_tree_constrained(&path(100), &x.graph, 16, &vec![vec![true; 1000]; 100], opts, &mut rng(0)),
        Err(EmbedError::TreeTooLarge { .. })
    ));
}

#[test]
fn integer_family_end_to_end() {
    let host = build_integer(2000, 2, 4, ConstructionParams::default()).unwrap();
    let empty = Graph::empty(2000);
    assert!(verify_embedding(&empty, &host, &embed_integer(&empty, &host, 0).unwrap()).unwrap());
    for seed in 0..3 {
        let h = gen_bounded_degree(2000, 2, 4, seed);
        let emb = embed_integer(&h, &host, seed).unwrap();
        assert!(verify_embedding(&h, &host, &emb).unwrap());
        assert_eq!(emb.stats.phase_max_bucket.last(), Some(&1));
    }
}

#[test]
fn rational_family_end_to_end() {
    let host = build_rational(4096, 3, 2, 3, ConstructionParams::default()).unwrap();
    let h = gen_lift(&complete(4), 4096, 2).unwrap();
    let emb = embed_rational(&h, &host, 2, 50).unwrap();
    assert!(verify_embedding(&h, &host, &emb).unwrap());
    assert_eq!(emb.stats.phase_bound.len(), 3);
    let empty = Graph::empty(100);
    assert!(verify_embedding(&empty, &host, &embed_rational(&empty, &host, 0, 5).unwrap()).unwrap());
}

#[test]
fn verifier_rejects_broken_maps() {
    let host = build_unbounded(512, 2).unwrap();
    let h = gen_union_unicyclic(512, 2, 1);
    let emb = embed_unbounded(&h, &host).unwrap();
    let mut collide = emb.clone();
    collide.map[1] = collide.map[0];
    assert!(!verify_embedding(&h, &host, &collide).unwrap());
    let short = Embedding { map: emb.map[..10].to_vec(), stats: Default::default() };
    assert!(verify_embedding(&h, &host, &short).is_err());
    let mut out = emb;
    out.map[0] = host.vertex_count();
    assert!(verify_embedding(&h, &host, &out).is_err());
}
