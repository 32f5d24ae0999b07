use proptest::prelude::*;
use unigraph::core::embed::{embed_unbounded, EmbedStats, Embedding};
use unigraph::core::expander::make_expander;
use unigraph::core::graph::complete;
use unigraph::core::host::{build_integer, build_unbounded, ConstructionParams, TPolicy};
use unigraph::core::matroid::decompose;
use unigraph::core::Graph;
use unigraph::io::*;

proptest! {
    #[test]
    fn graph_text_round_trip(n in 1usize..40, pairs in proptest::collection::vec((0usize..40, 0usize..40), 0..80)) {
        let clean: Vec<_> = pairs.into_iter().filter(|&(u, v)| u < n && v < n && u != v).collect();
        let g = Graph::from_edge_list(n, &clean).unwrap();
        prop_assert_eq!(parse_graph(&write_graph(&g)).unwrap(), g);
    }
}

#[test]
fn graph_parse_errors_and_comments() {
    let g = parse_graph("# triangle\n3 3\n0 1\n1 2 # inline\n\n2 0\n").unwrap();
    assert_eq!(g.edge_count(), 3);
    assert!(matches!(parse_graph("3 2\n0 1\n"), Err(FormatError::Parse { .. })));
    assert!(matches!(parse_graph("3 1\n0 x\n"), Err(FormatError::Parse { line: 2, .. })));
    assert!(matches!(parse_graph("3 1\n0 7\n"), Err(FormatError::Graph(_))));
    assert!(parse_graph("").is_err());
}

#[test]
fn decomposition_round_trip() {
    let dec = decompose(&complete(5), 2).unwrap();
    let text = write_decomposition(&dec);
    assert!(text.starts_with("2 4\n"));
    assert_eq!(parse_decomposition(&text, 5).unwrap(), dec);
    assert!(parse_decomposition("1 1\n0 9 1 0\n", 5).is_err());
}

#[test]
fn expander_cache_round_trip() {
    let x = make_expander(64, 4, 2, 20).unwrap();
    let back = parse_expander(&write_expander(&x)).unwrap();
    assert_eq!(back.graph, x.graph);
    assert_eq!(back.seed, x.seed);
    assert!((back.lambda - x.lambda).abs() < 1e-9);
    assert!(parse_expander(&write_graph(&x.graph)).is_err());
}

#[test]
fn descriptor_round_trip_and_mismatch() {
    let params = ConstructionParams { seed: 7, t_policy: TPolicy::Fixed(4), v_plus_factor: Some(10.0), ..Default::default() };
    let host = build_integer(300, 2, 4, params).unwrap();
    let desc = HostDescriptor::of(&host, Some("x.expander".into()), None);
    let parsed = HostDescriptor::parse(&desc.to_text()).unwrap();
    assert_eq!(parsed, desc);
    let rebuilt = parsed.rebuild(host.expander.clone()).unwrap();
    assert_eq!(rebuilt.vertex_count(), host.vertex_count());
    let mut wrong = desc.clone();
    wrong.apex_size += 1;
    assert!(matches!(wrong.rebuild(host.expander.clone()), Err(FormatError::Mismatch { field: "apex", .. })));
    assert_eq!(parse_density("3/2").map(|d| (d.a, d.b)), Some((3, 2)));
    assert!(HostDescriptor::parse("family integer\n").is_err());
}

#[test]
fn host_files_and_embedding_text() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("h.host");
    let host = build_unbounded(200, 2).unwrap();
    let hash = save_host(&host, &path, false).unwrap();
    let (loaded, hash2) = load_host(&path).unwrap();
    assert_eq!(hash, hash2);
    assert_eq!(hash.len(), 64);
    assert_eq!(loaded.vertex_count(), host.vertex_count());

    let h = unigraph::core::gen::gen_union_unicyclic(200, 2, 1);
    let emb = embed_unbounded(&h, &host).unwrap();
    let (back, recorded) = parse_embedding(&write_embedding(&emb, &hash)).unwrap();
    assert_eq!(recorded, hash);
    assert_eq!(back.map, emb.map);
    let partial = Embedding { map: vec![0, 1], stats: EmbedStats::default() };
    let text = write_embedding(&partial, "abc").replace("1 1\n", "");
    assert!(parse_embedding(&text).is_err());

    let int = build_integer(300, 2, 4, ConstructionParams::default()).unwrap();
    let ipath = dir.path().join("i.host");
    save_host(&int, &ipath, true).unwrap();
    assert!(dir.path().join("i.host.expander").exists());
    let g = parse_graph(&std::fs::read_to_string(dir.path().join("i.host.graph")).unwrap()).unwrap();
    assert_eq!(g.edge_count() as u128, int.edge_count());
    let (reloaded, _) = load_host(&ipath).unwrap();
    assert_eq!(reloaded.expander.unwrap().graph, int.expander.unwrap().graph);
}
