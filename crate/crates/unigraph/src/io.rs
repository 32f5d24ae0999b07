//! Text formats for graphs, decompositions, certified expanders, host
//! descriptors and embeddings.
//!
//! All formats are line based; blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use unigraph_core::embed::{EmbedStats, Embedding};
use unigraph_core::expander::{CertifiedExpander, ExpanderError};
use unigraph_core::host::{
    assemble_integer, assemble_rational, build_unbounded, ConstructionParams, DensityParam, Family, HostError, TPolicy,
    UniversalHost,
};
use unigraph_core::matroid::Decomposition;
use unigraph_core::{Graph, GraphError, MultiEdge};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Host(#[from] HostError),
    #[error(transparent)]
    Expander(#[from] ExpanderError),
    #[error("descriptor field {field} is {stored}, rebuilding gives {rebuilt}")]
    Mismatch { field: &'static str, stored: String, rebuilt: String },
    #[error("missing field {0}")]
    MissingField(&'static str),
}

pub fn read_file(path: &Path) -> Result<String, FormatError> {
    fs::read_to_string(path).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

pub fn write_file(path: &Path, text: &str) -> Result<(), FormatError> {
    fs::write(path, text).map_err(|source| FormatError::Io { path: path.to_path_buf(), source })
}

/// Non-empty, non-comment lines with their 1-based numbers.
fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn numbers<const K: usize>(line: usize, s: &str) -> Result<[usize; K], FormatError> {
    let parts: Vec<&str> = s.split_whitespace().collect();
    if parts.len() != K {
        return Err(FormatError::Parse { line, msg: format!("expected {K} fields, found {}", parts.len()) });
    }
    let mut out = [0usize; K];
    for (slot, p) in out.iter_mut().zip(parts) {
        *slot = p.parse().map_err(|_| FormatError::Parse { line, msg: format!("not a nonnegative integer: {p:?}") })?;
    }
    Ok(out)
}

/// `n m` header followed by `m` lines `u v`.
pub fn parse_graph(text: &str) -> Result<Graph, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(FormatError::Parse { line: 0, msg: "empty graph file".into() })?;
    let [n, m] = numbers::<2>(hl, header)?;
    let mut pairs = Vec::with_capacity(m);
    for (line, l) in lines {
        let [u, v] = numbers::<2>(line, l)?;
        pairs.push((u, v));
    }
    if pairs.len() != m {
        return Err(FormatError::Parse { line: hl, msg: format!("header promises {m} edges, file has {}", pairs.len()) });
    }
    Ok(Graph::from_edge_list(n, &pairs)?)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.vertex_count(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

/// `b k` header followed by `u v copy part` lines.
pub fn write_decomposition(dec: &Decomposition) -> String {
    let mut s = format!("{} {}\n", dec.b, dec.k);
    for (e, p) in &dec.assignment {
        let _ = writeln!(s, "{} {} {} {}", e.u, e.v, e.copy, p);
    }
    s
}

pub fn parse_decomposition(text: &str, n: usize) -> Result<Decomposition, FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(FormatError::Parse { line: 0, msg: "empty decomposition file".into() })?;
    let [b, k] = numbers::<2>(hl, header)?;
    let mut assignment = Vec::new();
    for (line, l) in lines {
        let [u, v, copy, part] = numbers::<4>(line, l)?;
        if u >= n || v >= n || part >= k {
            return Err(FormatError::Parse { line, msg: "vertex or part out of range".into() });
        }
        assignment.push((MultiEdge { u, v, copy }, part));
    }
    Ok(Decomposition { n, b, k, assignment })
}

/// Graph format plus a trailer `lambda <value> tol <value> seed <value>`.
pub fn write_expander(x: &CertifiedExpander) -> String {
    let mut s = write_graph(&x.graph);
    let _ = writeln!(s, "# certificate");
    let _ = writeln!(s, "lambda {:e} tol {:e} seed {}", x.lambda, x.tol, x.seed);
    s
}

/// Reads an expander cache and re-certifies the stored graph.
pub fn parse_expander(text: &str) -> Result<CertifiedExpander, FormatError> {
    let (trailer_line, trailer) = content_lines(text)
        .filter(|(_, l)| l.starts_with("lambda"))
        .last()
        .ok_or(FormatError::MissingField("lambda"))?;
    let fields: Vec<&str> = trailer.split_whitespace().collect();
    let bad = || FormatError::Parse { line: trailer_line, msg: "expected `lambda L tol T seed S`".into() };
    if fields.len() != 6 || fields[2] != "tol" || fields[4] != "seed" {
        return Err(bad());
    }
    let tol: f64 = fields[3].parse().map_err(|_| bad())?;
    let seed: u64 = fields[5].parse().map_err(|_| bad())?;
    let body: String = text.lines().filter(|l| !l.trim_start().starts_with("lambda")).map(|l| format!("{l}\n")).collect();
    let graph = parse_graph(&body)?;
    Ok(CertifiedExpander::certify(graph, seed, tol)?)
}

/// Everything needed to rebuild a host deterministically.
#[derive(Debug, Clone, PartialEq)]
pub struct HostDescriptor {
    pub family: Family,
    pub n: usize,
    pub density: DensityParam,
    pub max_degree: Option<usize>,
    pub m: usize,
    pub blowup_size: usize,
    pub apex_size: usize,
    pub params: ConstructionParams,
    /// Expander cache file, relative to the descriptor.
    pub expander: Option<String>,
    pub graph: Option<String>,
}

pub fn parse_density(s: &str) -> Option<DensityParam> {
    match s.split_once('/') {
        Some((a, b)) => Some(DensityParam { a: a.trim().parse().ok()?, b: b.trim().parse().ok()? }),
        None => Some(DensityParam::integer(s.trim().parse().ok()?)),
    }
}

impl HostDescriptor {
    pub fn of(host: &UniversalHost, expander: Option<String>, graph: Option<String>) -> Self {
        HostDescriptor {
            family: host.family,
            n: host.n,
            density: host.density,
            max_degree: host.max_degree,
            m: host.m,
            blowup_size: host.blowup_size,
            apex_size: host.apex_size,
            params: host.params,
            expander,
            graph,
        }
    }

    pub fn to_text(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let _ = writeln!(s, "family {}", self.family.name());
        let _ = writeln!(s, "n {}", self.n);
        let _ = writeln!(s, "density {}", self.density);
        if let Some(d) = self.max_degree {
            let _ = writeln!(s, "max_degree {d}");
        }
        let _ = writeln!(s, "m {}", self.m);
        let _ = writeln!(s, "blowup {}", self.blowup_size);
        let _ = writeln!(s, "apex {}", self.apex_size);
        let _ = writeln!(s, "c_integer {}", p.c_integer);
        let _ = writeln!(s, "c_rational {}", p.c_rational);
        match p.t_policy {
            TPolicy::FamilyDefault => s.push_str("t_policy default\n"),
            TPolicy::Fixed(t) => {
                let _ = writeln!(s, "t_policy {t}");
            }
        }
        if let Some(f) = p.v_plus_factor {
            let _ = writeln!(s, "v_plus_factor {f}");
        }
        let _ = writeln!(s, "beta {}", p.beta);
        let _ = writeln!(s, "eps {}", p.eps);
        let _ = writeln!(s, "seed {}", p.seed);
        let _ = writeln!(s, "expander_retries {}", p.expander_retries);
        let _ = writeln!(s, "tol {:e}", p.tol);
        if let Some(e) = &self.expander {
            let _ = writeln!(s, "expander {e}");
        }
        if let Some(g) = &self.graph {
            let _ = writeln!(s, "graph {g}");
        }
        s
    }

    pub fn parse(text: &str) -> Result<Self, FormatError> {
        let mut kv = std::collections::BTreeMap::new();
        for (line, l) in content_lines(text) {
            let (k, v) = l
                .split_once(char::is_whitespace)
                .ok_or(FormatError::Parse { line, msg: "expected `key value`".into() })?;
            kv.insert(k.to_string(), (line, v.trim().to_string()));
        }
        fn get<'a>(kv: &'a std::collections::BTreeMap<String, (usize, String)>, key: &'static str) -> Result<&'a (usize, String), FormatError> {
            kv.get(key).ok_or(FormatError::MissingField(key))
        }
        fn num<T: std::str::FromStr>(kv: &std::collections::BTreeMap<String, (usize, String)>, key: &'static str) -> Result<T, FormatError> {
            let (line, v) = get(kv, key)?;
            v.parse().map_err(|_| FormatError::Parse { line: *line, msg: format!("bad value for {key}: {v:?}") })
        }
        let (fl, fam) = get(&kv, "family")?;
        let family = Family::parse(fam).ok_or(FormatError::Parse { line: *fl, msg: format!("unknown family {fam:?}") })?;
        let (dl, dens) = get(&kv, "density")?;
        let density = parse_density(dens).ok_or(FormatError::Parse { line: *dl, msg: format!("bad density {dens:?}") })?;
        let t_policy = match get(&kv, "t_policy")?.1.as_str() {
            "default" => TPolicy::FamilyDefault,
            _ => TPolicy::Fixed(num(&kv, "t_policy")?),
        };
        let params = ConstructionParams {
            c_integer: num(&kv, "c_integer")?,
            c_rational: num(&kv, "c_rational")?,
            t_policy,
            v_plus_factor: if kv.contains_key("v_plus_factor") { Some(num(&kv, "v_plus_factor")?) } else { None },
            beta: num(&kv, "beta")?,
            eps: num(&kv, "eps")?,
            seed: num(&kv, "seed")?,
            expander_retries: num(&kv, "expander_retries")?,
            tol: num(&kv, "tol")?,
        };
        Ok(HostDescriptor {
            family,
            n: num(&kv, "n")?,
            density,
            max_degree: if kv.contains_key("max_degree") { Some(num(&kv, "max_degree")?) } else { None },
            m: num(&kv, "m")?,
            blowup_size: num(&kv, "blowup")?,
            apex_size: num(&kv, "apex")?,
            params,
            expander: kv.get("expander").map(|(_, v)| v.clone()),
            graph: kv.get("graph").map(|(_, v)| v.clone()),
        })
    }

    /// Rebuilds the host, reusing the cached expander when one is given, and
    /// checks the derived sizes against the stored ones.
    pub fn rebuild(&self, expander: Option<CertifiedExpander>) -> Result<UniversalHost, FormatError> {
        let d = self.density;
        let degree = self.max_degree.ok_or(FormatError::MissingField("max_degree"));
        let host = match self.family {
            Family::Unbounded => build_unbounded(self.n, d.ceil())?,
            Family::Integer => assemble_integer(self.n, d.ceil(), degree?, self.params, expander)?,
            Family::Rational => assemble_rational(self.n, d.a, d.b, degree?, self.params, expander)?,
        };
        for (field, stored, rebuilt) in [
            ("m", self.m, host.m),
            ("blowup", self.blowup_size, host.blowup_size),
            ("apex", self.apex_size, host.apex_size),
        ] {
            if stored != rebuilt {
                return Err(FormatError::Mismatch { field, stored: stored.to_string(), rebuilt: rebuilt.to_string() });
            }
        }
        Ok(host)
    }
}

/// Hex SHA-256 of a descriptor's text; embeddings record it so a mapping is
/// never checked against the wrong host.
pub fn descriptor_hash(text: &str) -> String {
    hex::encode(Sha256::digest(text.as_bytes()))
}

fn sibling(path: &Path, suffix: &str) -> (PathBuf, String) {
    let name = format!("{}{suffix}", path.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default());
    (path.with_file_name(&name), name)
}

/// Writes the descriptor to `path`, the expander cache to `path.expander`
/// and, if requested, the explicit graph to `path.graph`.
pub fn save_host(host: &UniversalHost, path: &Path, materialize: bool) -> Result<String, FormatError> {
    let expander = match &host.expander {
        Some(x) => {
            let (file, name) = sibling(path, ".expander");
            write_file(&file, &write_expander(x))?;
            Some(name)
        }
        None => None,
    };
    let graph = if materialize {
        let (file, name) = sibling(path, ".graph");
        write_file(&file, &write_graph(&host.materialize()?))?;
        Some(name)
    } else {
        None
    };
    let text = HostDescriptor::of(host, expander, graph).to_text();
    write_file(path, &text)?;
    Ok(descriptor_hash(&text))
}

/// Loads a host written by [`save_host`]; returns it with its hash.
pub fn load_host(path: &Path) -> Result<(UniversalHost, String), FormatError> {
    let text = read_file(path)?;
    let desc = HostDescriptor::parse(&text)?;
    let expander = match &desc.expander {
        Some(name) => Some(parse_expander(&read_file(&path.with_file_name(name))?)?),
        None => None,
    };
    Ok((desc.rebuild(expander)?, descriptor_hash(&text)))
}

/// Header `n_guest hash`, then one `h g` line per guest vertex.
pub fn write_embedding(emb: &Embedding, hash: &str) -> String {
    let mut s = format!("{} {hash}\n", emb.map.len());
    for (h, g) in emb.map.iter().enumerate() {
        let _ = writeln!(s, "{h} {g}");
    }
    s
}

/// Returns the embedding and the host hash it was recorded against.
pub fn parse_embedding(text: &str) -> Result<(Embedding, String), FormatError> {
    let mut lines = content_lines(text);
    let (hl, header) = lines.next().ok_or(FormatError::Parse { line: 0, msg: "empty embedding file".into() })?;
    let mut fields = header.split_whitespace();
    let n: usize = fields
        .next()
        .and_then(|x| x.parse().ok())
        .ok_or(FormatError::Parse { line: hl, msg: "expected `n_guest hash`".into() })?;
    let hash = fields.next().ok_or(FormatError::Parse { line: hl, msg: "missing host hash".into() })?.to_string();
    let mut map = vec![usize::MAX; n];
    for (line, l) in lines {
        let [h, g] = numbers::<2>(line, l)?;
        if h >= n {
            return Err(FormatError::Parse { line, msg: format!("guest vertex {h} out of range") });
        }
        map[h] = g;
    }
    if let Some(h) = map.iter().position(|&g| g == usize::MAX) {
        return Err(FormatError::Parse { line: 0, msg: format!("guest vertex {h} is not mapped") });
    }
    Ok((Embedding { map, stats: EmbedStats::default() }, hash))
}
