//! The `unigraph` command line tool.

use std::ffi::OsString;
use std::path::PathBuf;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use unigraph_core::bounds::{check_counting_inequality, lower_bound, verify_embedding};
use unigraph_core::embed::{embed_integer, embed_rational, embed_unbounded};
use unigraph_core::gen::{gen_bounded_degree, gen_lift, gen_union_unicyclic};
use unigraph_core::host::{Family, UniversalHost};

use crate::bench::{build_host, run_bench};
use crate::io::{load_host, parse_density, parse_embedding, parse_graph, read_file, save_host, write_embedding, write_file, write_graph};

#[derive(Parser, Debug)]
#[command(name = "unigraph", version, about = "Build sparse universal graphs, embed guests, verify embeddings")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FamilyArg {
    Unbounded,
    Integer,
    Rational,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Unbounded => Family::Unbounded,
            FamilyArg::Integer => Family::Integer,
            FamilyArg::Rational => Family::Rational,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GenKind {
    UnicyclicUnion,
    Lift,
    BoundedDegree,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build a host and write its descriptor.
    Build {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        /// Density bound, `A` or `A/B`.
        #[arg(long)]
        d: String,
        /// Maximum guest degree (integer and rational families).
        #[arg(long = "D")]
        max_degree: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Also write the explicit edge list next to the descriptor.
        #[arg(long)]
        materialize: bool,
        #[arg(long)]
        out: PathBuf,
    },
    /// Embed a guest graph into a host.
    Embed {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Redraw budget per phase (rational family).
        #[arg(long, default_value_t = 50)]
        retries: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Check an embedding against the host edge rule; exit status 0 or 1.
    Verify {
        #[arg(long)]
        host: PathBuf,
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        embedding: PathBuf,
    },
    /// Generate a guest graph.
    Gen {
        #[arg(long, value_enum)]
        kind: GenKind,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long = "D", default_value_t = 4)]
        max_degree: usize,
        #[arg(long)]
        base: Option<PathBuf>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Edge lower bound for hosts containing all lifts of a balanced graph.
    Bound {
        #[arg(long)]
        base: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long = "M")]
        big_m: Option<u64>,
    },
    /// Host sizes and embedding success rates over a sweep of n.
    Bench {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        d: String,
        #[arg(long = "D")]
        max_degree: Option<usize>,
        #[arg(long, value_delimiter = ',')]
        n_list: Vec<usize>,
        #[arg(long, default_value_t = 10)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Runs one command, writing human-readable output to `out`. Returns the
/// process exit status.
pub fn run(args: impl IntoIterator<Item = OsString>, out: &mut impl std::io::Write) -> Result<i32> {
    let cli = Cli::try_parse_from(args)?;
    match cli.command {
        Command::Build { family, n, d, max_degree, seed, materialize, out: path } => {
            let density = parse_density(&d).ok_or_else(|| anyhow!("bad density {d:?}"))?;
            let family: Family = family.into();
            if family == Family::Integer && density.b != 1 {
                bail!("the integer family needs an integer density, got {density}");
            }
            let degree = max_degree.unwrap_or(2 * density.ceil());
            let host = build_host(family, n, density, degree, seed)?;
            let hash = save_host(&host, &path, materialize)?;
            writeln!(out, "{} host: {} vertices, {} edges, m = {}, hash {hash}", family.name(), host.vertex_count(), host.edge_count(), host.m)?;
            Ok(0)
        }
        Command::Embed { host, input, seed, retries, out: path } => {
            let (host, hash) = load_host(&host)?;
            let h = parse_graph(&read_file(&input)?).with_context(|| format!("reading {}", input.display()))?;
            let emb = embed(&h, &host, seed, retries)?;
            write_file(&path, &write_embedding(&emb, &hash))?;
            writeln!(out, "embedded {} vertices ({} on apexes)", h.vertex_count(), emb.stats.apex_used)?;
            Ok(0)
        }
        Command::Verify { host, input, embedding } => {
            let (host, hash) = load_host(&host)?;
            let h = parse_graph(&read_file(&input)?)?;
            let (emb, recorded) = parse_embedding(&read_file(&embedding)?)?;
            if recorded != hash {
                writeln!(out, "invalid: embedding was made for host {recorded}, not {hash}")?;
                return Ok(1);
            }
            match verify_embedding(&h, &host, &emb) {
                Ok(true) => {
                    writeln!(out, "valid")?;
                    Ok(0)
                }
                Ok(false) => {
                    writeln!(out, "invalid")?;
                    Ok(1)
                }
                Err(e) => {
                    writeln!(out, "invalid: {e}")?;
                    Ok(1)
                }
            }
        }
        Command::Gen { kind, n, d, max_degree, base, seed, out: path } => {
            let g = match kind {
                GenKind::UnicyclicUnion => gen_union_unicyclic(n, d, seed),
                GenKind::BoundedDegree => gen_bounded_degree(n, d, max_degree, seed),
                GenKind::Lift => {
                    let base = base.ok_or_else(|| anyhow!("--base is required for lifts"))?;
                    gen_lift(&parse_graph(&read_file(&base)?)?, n, seed)?
                }
            };
            write_file(&path, &write_graph(&g))?;
            writeln!(out, "{} vertices, {} edges, max degree {}", g.vertex_count(), g.edge_count(), g.max_degree())?;
            Ok(0)
        }
        Command::Bound { base, n, big_m } => {
            let f = parse_graph(&read_file(&base)?)?;
            let report = match big_m {
                Some(m) => check_counting_inequality(&f, n, m)?,
                None => lower_bound(&f, n)?,
            };
            writeln!(out, "m(F) = {}", report.m_f)?;
            match &report.bound_exact {
                Some(x) => writeln!(out, "bound = {x} ({:.6e})", report.bound)?,
                None => writeln!(out, "bound = {:.6e}", report.bound)?,
            }
            if let (Some(l), Some(r), Some(ok)) = (report.counting_lhs_log, report.counting_rhs_log, report.sufficient()) {
                writeln!(out, "ln lhs = {l:.6e}, ln rhs = {r:.6e}: M is {}", if ok { "sufficient" } else { "insufficient" })?;
            }
            Ok(0)
        }
        Command::Bench { family, d, max_degree, n_list, samples, seed } => {
            let density = parse_density(&d).ok_or_else(|| anyhow!("bad density {d:?}"))?;
            let degree = max_degree.unwrap_or(2 * density.ceil());
            let table = run_bench(family.into(), density, degree, &n_list, samples, seed)?;
            write!(out, "{}", table.to_text())?;
            Ok(0)
        }
    }
}

fn embed(h: &unigraph_core::Graph, host: &UniversalHost, seed: u64, retries: usize) -> Result<unigraph_core::embed::Embedding> {
    Ok(match host.family {
        Family::Unbounded => embed_unbounded(h, host)?,
        Family::Integer => embed_integer(h, host, seed)?,
        Family::Rational => embed_rational(h, host, seed, retries)?,
    })
}
