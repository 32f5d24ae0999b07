use std::ffi::OsString;
use std::path::Path;

use unigraph::bench::fitted_exponent;
use unigraph::cli::run;

fn call(args: &[&str]) -> (i32, String) {
    let mut out = Vec::new();
    let argv: Vec<OsString> = std::iter::once("unigraph").chain(args.iter().copied()).map(OsString::from).collect();
    let code = run(argv, &mut out).unwrap();
    (code, String::from_utf8(out).unwrap())
}

fn p(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn build_embed_verify_cycle() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let (code, out) = call(&["build", "--family", "unbounded", "--n", "300", "--d", "2", "--out", &p(d, "u.host")]);
    assert_eq!(code, 0);
    assert!(out.contains("unbounded host"));
    call(&["gen", "--kind", "unicyclic-union", "--n", "300", "--d", "2", "--seed", "4", "--out", &p(d, "h.graph")]);
    assert_eq!(call(&["embed", "--host", &p(d, "u.host"), "--input", &p(d, "h.graph"), "--out", &p(d, "e.emb")]).0, 0);
    let (code, out) = call(&["verify", "--host", &p(d, "u.host"), "--input", &p(d, "h.graph"), "--embedding", &p(d, "e.emb")]);
    assert_eq!((code, out.trim()), (0, "valid"));

    // Two guest vertices on one host vertex.
    let text = std::fs::read_to_string(d.join("e.emb")).unwrap();
    let mut lines: Vec<String> = text.lines().map(String::from).collect();
    let first_target = lines[1].split_whitespace().nth(1).unwrap().to_string();
    lines[2] = format!("1 {first_target}");
    std::fs::write(d.join("bad.emb"), lines.join("\n") + "\n").unwrap();
    let (code, _) = call(&["verify", "--host", &p(d, "u.host"), "--input", &p(d, "h.graph"), "--embedding", &p(d, "bad.emb")]);
    assert_eq!(code, 1);

    // An embedding recorded against a different host.
    call(&["build", "--family", "unbounded", "--n", "300", "--d", "3", "--out", &p(d, "other.host")]);
    let (code, out) = call(&["verify", "--host", &p(d, "other.host"), "--input", &p(d, "h.graph"), "--embedding", &p(d, "e.emb")]);
    assert_eq!(code, 1);
    assert!(out.contains("not"));
}

#[test]
fn integer_and_rational_through_cli() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    assert_eq!(call(&["build", "--family", "integer", "--n", "500", "--d", "2", "--D", "4", "--seed", "3", "--out", &p(d, "i.host")]).0, 0);
    call(&["gen", "--kind", "bounded-degree", "--n", "500", "--d", "2", "--D", "4", "--out", &p(d, "b.graph")]);
    assert_eq!(call(&["embed", "--host", &p(d, "i.host"), "--input", &p(d, "b.graph"), "--seed", "1", "--out", &p(d, "i.emb")]).0, 0);
    assert_eq!(call(&["verify", "--host", &p(d, "i.host"), "--input", &p(d, "b.graph"), "--embedding", &p(d, "i.emb")]).0, 0);

    std::fs::write(d.join("k4.graph"), "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    assert_eq!(call(&["build", "--family", "rational", "--n", "512", "--d", "3/2", "--D", "3", "--out", &p(d, "r.host")]).0, 0);
    call(&["gen", "--kind", "lift", "--n", "512", "--base", &p(d, "k4.graph"), "--out", &p(d, "l.graph")]);
    assert_eq!(call(&["embed", "--host", &p(d, "r.host"), "--input", &p(d, "l.graph"), "--retries", "50", "--out", &p(d, "r.emb")]).0, 0);
    assert_eq!(call(&["verify", "--host", &p(d, "r.host"), "--input", &p(d, "l.graph"), "--embedding", &p(d, "r.emb")]).0, 0);

    let mut out = Vec::new();
    let bad = ["unigraph", "build", "--family", "integer", "--n", "500", "--d", "3/2", "--out", "x"].map(OsString::from);
    assert!(run(bad, &mut out).is_err());
}

#[test]
fn bound_and_bench_output() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    std::fs::write(d.join("k4.graph"), "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n").unwrap();
    let (_, out) = call(&["bound", "--base", &p(d, "k4.graph"), "--n", "1000000"]);
    assert!(out.contains("m(F) = 3/2") && out.contains("25000000/9"));
    let (_, out) = call(&["bound", "--base", &p(d, "k4.graph"), "--n", "10000", "--M", "100000000"]);
    assert!(out.contains("sufficient") && !out.contains("insufficient"));
    let (_, out) = call(&["bound", "--base", &p(d, "k4.graph"), "--n", "10000", "--M", "5984"]);
    assert!(out.contains("insufficient"));

    std::env::set_var("UNIGRAPH_THREADS", "1");
    let (code, out) = call(&["bench", "--family", "unbounded", "--d", "2", "--n-list", "128,256", "--samples", "3", "--seed", "1"]);
    assert_eq!(code, 0);
    let rows: Vec<&str> = out.lines().collect();
    assert_eq!(rows[0], "n\te_host\tfitted_exponent\tsuccess_rate\tmean_seconds");
    assert_eq!(rows.len(), 3);
    assert!(rows[1].starts_with("128\t") && rows[1].contains("1.000"));
}

#[test]
fn exponent_fit() {
    let pts: Vec<(f64, f64)> = [10.0f64, 20.0, 40.0].iter().map(|&n| (n, 3.0 * n.powf(1.5))).collect();
    assert!((fitted_exponent(&pts) - 1.5).abs() < 1e-12);
}

#[test]
fn usage_errors() {
    let mut out = Vec::new();
    assert!(run(["unigraph", "build", "--n", "5"].map(OsString::from), &mut out).is_err());
    assert!(run(["unigraph", "gen", "--kind", "lift", "--n", "8", "--out", "/nonexistent/x"].map(OsString::from), &mut out).is_err());
}
