//! Embedding engines for the three host families.

use alloc::collections::{BTreeMap, VecDeque};
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng as _;

use crate::density::DensityError;
use crate::discrepancy::{partition_pow2, DiscrepancyError, VectorFamily};
use crate::graph::Graph;
use crate::host::{Family, UniversalHost};
use crate::matroid::{decompose, DecompError};
use crate::rational::{ratio, Rational};
use crate::seed::{derive_seed, rng, Rng};
use crate::tree::{cleanup, forest_to_spanning_tree, pseudoforest_to_forest, unicyclic_to_tree, TreeError};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EmbedError {
    #[error("host was built for the {0} family")]
    WrongFamily(&'static str),
    #[error("guest has {guest} vertices but the host targets n = {n}")]
    GuestTooLarge { guest: usize, n: usize },
    #[error("guest needs {parts} pseudoforest parts, the host supports {allowed}")]
    DensityTooHigh { parts: usize, allowed: usize },
    #[error("guest max degree {degree} exceeds the host bound {bound}")]
    DegreeTooHigh { degree: usize, bound: usize },
    #[error("{needed} vertices need an apex but only {available} exist")]
    ApexOverflow { needed: usize, available: usize },
    #[error("bucket {bucket} holds {size} vertices, capacity {capacity}")]
    BucketOverflow { bucket: usize, size: usize, capacity: usize },
    #[error("phase {phase}: bucket {bucket} has {size} vertices, above the phase bound {bound}")]
    InvariantViolated { phase: usize, bucket: usize, size: usize, bound: f64 },
    #[error("phase {phase}: {attempts} draws all left bucket {bucket} (class {class}) at {size} > {cap}")]
    RetryCapExceeded { phase: usize, attempts: usize, bucket: usize, class: usize, size: usize, cap: f64 },
    #[error("tree of {size} vertices exceeds the size bound {bound}")]
    TreeTooLarge { size: usize, bound: usize },
    #[error("allowed set of tree vertex {vertex} has {size} elements, needs {needed}")]
    SetTooSmall { vertex: usize, size: usize, needed: usize },
    #[error("filtration set of tree vertex {vertex} is empty")]
    FiltrationEmpty { vertex: usize },
    #[error("could not place tree vertex {vertex} after {attempts} attempts")]
    ExtensionFailed { vertex: usize, attempts: usize },
    #[error("input is not a tree")]
    NotATree,
    #[error("host has no expander")]
    MissingExpander,
    #[error(transparent)]
    Decomposition(#[from] DecompError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Discrepancy(#[from] DiscrepancyError),
}

/// Diagnostics collected while embedding.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct EmbedStats {
    /// Largest bucket after each phase.
    pub phase_max_bucket: Vec<usize>,
    /// The bound that bucket was checked against.
    pub phase_bound: Vec<f64>,
    pub apex_used: usize,
    /// Redraws (rational family) or tree re-embeddings (integer family).
    pub retries: usize,
    /// Rational family: `|U_0| + (Δ(A)+1) * 4 log2 n`.
    pub class_bound: Option<f64>,
}

/// Injective map from guest vertices to host vertex ids.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub map: Vec<usize>,
    pub stats: EmbedStats,
}

/// Assigns distinct slots `0..len` to the members of each bucket.
/// Returns `(vertex, bucket, slot)` triples.
pub fn finalize_blowup_assignment(
    buckets: &BTreeMap<usize, Vec<usize>>,
    capacity: usize,
) -> Result<Vec<(usize, usize, usize)>, EmbedError> {
    let mut out = Vec::new();
    for (&bucket, members) in buckets {
        if members.len() > capacity {
            return Err(EmbedError::BucketOverflow { bucket, size: members.len(), capacity });
        }
        out.extend(members.iter().enumerate().map(|(slot, &v)| (v, bucket, slot)));
    }
    Ok(out)
}

/// Splits `h` into `count` simple parts covering each edge `b` times.
fn pseudoforest_parts(h: &Graph, b: usize, count: usize) -> Result<Vec<Graph>, EmbedError> {
    let n = h.vertex_count();
    let mut parts = match decompose(h, b) {
        Ok(dec) => dec.parts(),
        Err(DecompError::DensityBelowOne(_)) | Err(DecompError::Density(DensityError::EmptyGraph)) => {
            if h.edge_count() == 0 {
                Vec::new()
            } else {
                vec![h.clone(); b]
            }
        }
        Err(e) => return Err(e.into()),
    };
    if parts.len() > count {
        return Err(EmbedError::DensityTooHigh { parts: parts.len(), allowed: count });
    }
    parts.resize(count, Graph::empty(n));
    Ok(parts)
}

fn check_guest(h: &Graph, host: &UniversalHost, family: Family) -> Result<(), EmbedError> {
    if host.family != family {
        return Err(EmbedError::WrongFamily(host.family.name()));
    }
    if h.vertex_count() > host.n {
        return Err(EmbedError::GuestTooLarge { guest: h.vertex_count(), n: host.n });
    }
    if let Some(bound) = host.max_degree {
        if h.max_degree() > bound {
            return Err(EmbedError::DegreeTooHigh { degree: h.max_degree(), bound });
        }
    }
    Ok(())
}

fn assign_apexes(removed: &[usize], host: &UniversalHost, map: &mut [usize]) -> Result<(), EmbedError> {
    if removed.len() > host.apex_size {
        return Err(EmbedError::ApexOverflow { needed: removed.len(), available: host.apex_size });
    }
    let base = host.apex_ids().start;
    for (k, &v) in removed.iter().enumerate() {
        map[v] = base + k;
    }
    Ok(())
}

fn finish(
    host: &UniversalHost,
    prefix: &[usize],
    alive: &[bool],
    mut map: Vec<usize>,
    stats: EmbedStats,
) -> Result<Embedding, EmbedError> {
    let mut buckets: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for v in (0..prefix.len()).filter(|&v| alive[v]) {
        buckets.entry(prefix[v]).or_default().push(v);
    }
    for (v, tuple, slot) in finalize_blowup_assignment(&buckets, host.blowup_size)? {
        map[v] = tuple * host.blowup_size + slot;
    }
    Ok(Embedding { map, stats })
}

fn bucket_sizes(prefix: &[usize], alive: &[bool]) -> BTreeMap<usize, usize> {
    let mut sizes = BTreeMap::new();
    for v in (0..prefix.len()).filter(|&v| alive[v]) {
        *sizes.entry(prefix[v]).or_insert(0) += 1;
    }
    sizes
}

/// Embeds a guest of density at most `d` into the unbounded-family host.
///
/// Each phase fixes one coordinate: the components of one pseudoforest part
/// are split into `m` groups by [`partition_pow2`] so that every existing
/// bucket is shared out evenly, and a whole component always lands on a
/// single coordinate value.
pub fn embed_unbounded(h: &Graph, host: &UniversalHost) -> Result<Embedding, EmbedError> {
    check_guest(h, host, Family::Unbounded)?;
    let n = h.vertex_count();
    let m = host.m;
    let d = host.dim;
    let parts = pseudoforest_parts(h, 1, d)?;
    let plan = cleanup(&parts, m, m)?;
    let mut map = vec![usize::MAX; n];
    assign_apexes(&plan.removed, host, &mut map)?;
    let mut alive = vec![true; n];
    for &v in &plan.removed {
        alive[v] = false;
    }
    let mut stats = EmbedStats { apex_used: plan.removed.len(), ..EmbedStats::default() };
    let mut prefix = vec![0usize; n];
    let scale = ratio(1, m as i64);
    let mut m_pow: u128 = 1;
    for (phase, comps) in plan.residual_parts.iter().enumerate() {
        let mut dims: BTreeMap<usize, usize> = BTreeMap::new();
        for v in (0..n).filter(|&v| alive[v]) {
            let next = dims.len();
            dims.entry(prefix[v]).or_insert(next);
        }
        let vectors: Vec<Vec<Rational>> = comps
            .iter()
            .map(|c| {
                let mut counts = vec![0i64; dims.len()];
                for &v in c {
                    counts[dims[&prefix[v]]] += 1;
                }
                counts.into_iter().map(|x| ratio(x, 1) * &scale).collect()
            })
            .collect();
        let family = VectorFamily::new(dims.len(), vectors)?;
        let split = partition_pow2(&family, m)?;
        for (value, group) in split.parts.iter().enumerate() {
            for &ci in group {
                for &v in &comps[ci] {
                    prefix[v] = prefix[v] * m + value;
                }
            }
        }
        m_pow *= m as u128;
        let sizes = bucket_sizes(&prefix, &alive);
        let (bucket, size) = sizes.iter().map(|(&b, &s)| (b, s)).max_by_key(|&(_, s)| s).unwrap_or((0, 0));
        let allowed = host.n as u128 + (2 * m as u128 + 3) * m_pow;
        let bound = allowed as f64 / m_pow as f64;
        stats.phase_max_bucket.push(size);
        stats.phase_bound.push(bound);
        if size as u128 * m_pow > allowed {
            return Err(EmbedError::InvariantViolated { phase: phase + 1, bucket, size, bound });
        }
    }
    finish(host, &prefix, &alive, map, stats)
}

/// Rooted BFS structure of a tree: order, parent, children.
struct Rooted {
    order: Vec<usize>,
    parent: Vec<usize>,
    children: Vec<Vec<usize>>,
}

fn root_tree(t: &Graph, root: usize) -> Result<Rooted, EmbedError> {
    let n = t.vertex_count();
    if n == 0 || t.edge_count() + 1 != n {
        return Err(EmbedError::NotATree);
    }
    let mut parent = vec![usize::MAX; n];
    let mut children = vec![Vec::new(); n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut queue = VecDeque::from([root]);
    seen[root] = true;
    while let Some(u) = queue.pop_front() {
        order.push(u);
        for &w in t.neighbors(u) {
            if !seen[w] {
                seen[w] = true;
                parent[w] = u;
                children[u].push(w);
                queue.push_back(w);
            }
        }
    }
    if order.len() != n {
        return Err(EmbedError::NotATree);
    }
    Ok(Rooted { order, parent, children })
}

/// Maps `root` to `start` and every other tree vertex to a uniformly random
/// neighbor of its parent's image.
pub fn random_tree_hom(t: &Graph, root: usize, start: usize, g: &Graph, rng: &mut Rng) -> Vec<usize> {
    let rooted = root_tree(t, root).expect("random_tree_hom needs a tree");
    let mut image = vec![usize::MAX; t.vertex_count()];
    image[root] = start;
    for &u in &rooted.order[1..] {
        let nb = g.neighbors(image[rooted.parent[u]]);
        image[u] = nb[rng.gen_range(0..nb.len())];
    }
    image
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeEmbedOptions {
    pub eps: f64,
    pub beta: f64,
    /// Fresh random restarts before giving up.
    pub attempts: usize,
}

impl Default for TreeEmbedOptions {
    fn default() -> Self {
        TreeEmbedOptions { eps: 0.5, beta: 0.5, attempts: 20 }
    }
}

/// Injective homomorphism of the tree `t` into the `t_deg`-regular graph `g`
/// with `φ(v) ∈ allowed[v]`.
///
/// Candidate images are filtered bottom-up: a host vertex is usable for `v`
/// only if it lies in `allowed[v]` and has at least `⌈(1-β) t⌉` usable
/// neighbors for each child. Vertices are then placed in BFS order, each
/// child at a free usable neighbor of its parent's image; when none is free,
/// an alternating path re-routes already placed leaves of the frontier.
pub fn embed_tree_constrained(
    t: &Graph,
    g: &Graph,
    t_deg: usize,
    allowed: &[Vec<bool>],
    opts: TreeEmbedOptions,
    rng: &mut Rng,
) -> Result<Vec<usize>, EmbedError> {
    let k = t.vertex_count();
    let m = g.vertex_count();
    let bound = (m / (3 * t_deg.max(1))).max(1);
    if k > bound {
        return Err(EmbedError::TreeTooLarge { size: k, bound });
    }
    let needed = libm::ceil((1.0 - opts.eps) * m as f64) as usize;
    for (vertex, set) in allowed.iter().enumerate().take(k) {
        let size = set.iter().filter(|&&x| x).count();
        if size < needed {
            return Err(EmbedError::SetTooSmall { vertex, size, needed });
        }
    }
    let rooted = root_tree(t, 0)?;
    let theta = (libm::ceil((1.0 - opts.beta) * t_deg as f64) as usize).max(1);
    let mut usable: Vec<Vec<bool>> = vec![Vec::new(); k];
    for &v in rooted.order.iter().rev() {
        let set: Vec<bool> = (0..m)
            .map(|x| {
                allowed[v][x]
                    && rooted.children[v].iter().all(|&c| g.neighbors(x).iter().filter(|&&y| usable[c][y]).count() >= theta)
            })
            .collect();
        if !set.iter().any(|&b| b) {
            return Err(EmbedError::FiltrationEmpty { vertex: v });
        }
        usable[v] = set;
    }
    let roots: Vec<usize> = (0..m).filter(|&x| usable[0][x]).collect();
    let mut last_failure = 0;
    for _ in 0..opts.attempts.max(1) {
        let start = roots[rng.gen_range(0..roots.len())];
        match place_tree(&rooted, g, &usable, start, rng) {
            Ok(image) => return Ok(image),
            Err(v) => last_failure = v,
        }
    }
    Err(EmbedError::ExtensionFailed { vertex: last_failure, attempts: opts.attempts.max(1) })
}

fn place_tree(rooted: &Rooted, g: &Graph, usable: &[Vec<bool>], start: usize, rng: &mut Rng) -> Result<Vec<usize>, usize> {
    let k = rooted.order.len();
    let mut image = vec![usize::MAX; k];
    let mut owner: BTreeMap<usize, usize> = BTreeMap::new();
    let mut expanded = vec![false; k];
    image[rooted.order[0]] = start;
    owner.insert(start, rooted.order[0]);
    for &v in &rooted.order {
        expanded[v] = true;
        for &c in &rooted.children[v] {
            let mut free: Vec<usize> =
                g.neighbors(image[v]).iter().copied().filter(|&y| usable[c][y] && !owner.contains_key(&y)).collect();
            if let Some(&y) = free.choose(rng) {
                image[c] = y;
                owner.insert(y, c);
                continue;
            }
            free.clear();
            if !augment(rooted, g, usable, c, &mut image, &mut owner, &expanded) {
                return Err(c);
            }
        }
    }
    Ok(image)
}

/// Alternating-path search: `c` takes a spot held by a movable vertex, which
/// moves to another spot next to its own parent's image, and so on until a
/// free spot is reached. Movable vertices are placed but not yet expanded,
/// so moving them keeps every placed edge intact.
fn augment(
    rooted: &Rooted,
    g: &Graph,
    usable: &[Vec<bool>],
    c: usize,
    image: &mut [usize],
    owner: &mut BTreeMap<usize, usize>,
    expanded: &[bool],
) -> bool {
    let mut came_from: BTreeMap<usize, usize> = BTreeMap::new();
    let mut queue = VecDeque::from([c]);
    while let Some(w) = queue.pop_front() {
        let anchor = image[rooted.parent[w]];
        for &y in g.neighbors(anchor) {
            if !usable[w][y] || came_from.contains_key(&y) {
                continue;
            }
            match owner.get(&y) {
                None => {
                    let mut spot = y;
                    let mut mover = w;
                    loop {
                        let old = image[mover];
                        image[mover] = spot;
                        owner.insert(spot, mover);
                        if mover == c {
                            return true;
                        }
                        spot = old;
                        mover = came_from[&old];
                    }
                }
                Some(&u) if u != w && !expanded[u] && rooted.parent[u] != usize::MAX => {
                    came_from.insert(y, w);
                    queue.push_back(u);
                }
                _ => {}
            }
        }
    }
    false
}

/// Largest `c` with `c^d <= n^e`.
fn bucket_cap(n: usize, d: usize, e: usize) -> usize {
    let target = (n as u128).pow(e as u32);
    let mut c = libm::floor(libm::pow(n as f64, e as f64 / d as f64)) as u128 + 1;
    while c > 0 && c.pow(d as u32) > target {
        c -= 1;
    }
    while (c + 1).pow(d as u32) <= target {
        c += 1;
    }
    c as usize
}

/// Embeds a guest of density at most `d` and maximum degree at most `D`
/// into the integer-family host. Buckets never exceed `n^{(d-i)/d}` after
/// phase `i`, so the final tuples are distinct.
pub fn embed_integer(h: &Graph, host: &UniversalHost, seed: u64) -> Result<Embedding, EmbedError> {
    check_guest(h, host, Family::Integer)?;
    let expander = host.expander.as_ref().ok_or(EmbedError::MissingExpander)?;
    let g = &expander.graph;
    let t_deg = expander.t;
    let n = h.vertex_count();
    let m = host.m;
    let d = host.dim;
    let parts = pseudoforest_parts(h, 1, d)?;
    let cap = (m / (3 * t_deg)).max(1);
    let plan = cleanup(&parts, cap + 1, cap)?;
    let mut map = vec![usize::MAX; n];
    assign_apexes(&plan.removed, host, &mut map)?;
    let mut alive = vec![true; n];
    for &v in &plan.removed {
        alive[v] = false;
    }
    let opts = TreeEmbedOptions { eps: host.params.eps, beta: host.params.beta, attempts: 20 };
    let mut stats = EmbedStats { apex_used: plan.removed.len(), ..EmbedStats::default() };
    let mut prefix = vec![0usize; n];
    let mut rng = rng(seed);
    for (phase, comps) in plan.residual_parts.iter().enumerate() {
        let limit = bucket_cap(host.n, d, d - phase - 1);
        let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for comp in comps {
            let (sub, _) = parts[phase].induced_with_map(comp).expect("component vertices are in range");
            let tree = unicyclic_to_tree(&sub)?;
            let allowed: Vec<Vec<bool>> = comp
                .iter()
                .map(|&w| (0..m).map(|x| counts.get(&(prefix[w], x)).copied().unwrap_or(0) < limit).collect())
                .collect();
            let mut image = None;
            let mut last_err = None;
            for attempt in 0..=host.params.expander_retries {
                let mut local = crate::seed::rng(derive_seed(rng.gen(), attempt as u64));
                match embed_tree_constrained(&tree, g, t_deg, &allowed, opts, &mut local) {
                    Ok(img) => {
                        image = Some(img);
                        break;
                    }
                    Err(e @ (EmbedError::ExtensionFailed { .. } | EmbedError::FiltrationEmpty { .. })) => {
                        stats.retries += 1;
                        last_err = Some(e);
                    }
                    Err(e) => return Err(e),
                }
            }
            let image = match image {
                Some(img) => img,
                None => return Err(last_err.expect("at least one attempt ran")),
            };
            for (local_v, &w) in comp.iter().enumerate() {
                *counts.entry((prefix[w], image[local_v])).or_insert(0) += 1;
                prefix[w] = prefix[w] * m + image[local_v];
            }
        }
        let sizes = bucket_sizes(&prefix, &alive);
        let (bucket, size) = sizes.iter().map(|(&b, &s)| (b, s)).max_by_key(|&(_, s)| s).unwrap_or((0, 0));
        stats.phase_max_bucket.push(size);
        stats.phase_bound.push(limit as f64);
        if size > limit {
            return Err(EmbedError::InvariantViolated { phase: phase + 1, bucket, size, bound: limit as f64 });
        }
    }
    finish(host, &prefix, &alive, map, stats)
}

/// A bucket that breaks the rational-family phase bound.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BucketViolation {
    pub bucket: usize,
    pub class: usize,
    pub size: usize,
}

/// Phase bound `max{2 n^{(a-i)/a}, 4 log2 n}` for the rational family.
pub fn rational_phase_cap(n: usize, a: usize, phase: usize) -> f64 {
    let main = 2.0 * libm::pow(n as f64, (a - phase) as f64 / a as f64);
    main.max(4.0 * libm::log2(n.max(2) as f64))
}

/// Largest `(prefix, class)` bucket, if it exceeds `cap`. Vertices with no
/// class are ignored.
pub fn rational_phase_violation(prefix: &[usize], class: &[Option<usize>], cap: f64) -> Option<BucketViolation> {
    let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for (v, c) in class.iter().enumerate() {
        if let Some(c) = *c {
            *counts.entry((prefix[v], c)).or_insert(0) += 1;
        }
    }
    counts
        .into_iter()
        .filter(|&(_, size)| size as f64 > cap)
        .max_by_key(|&(_, size)| size)
        .map(|((bucket, class), size)| BucketViolation { bucket, class, size })
}

/// Bitset rows of the auxiliary graph: `u ~ v` when they are within
/// distance `radius` in some tree.
fn auxiliary_graph(trees: &[Graph], n: usize, radius: usize) -> Vec<Vec<u64>> {
    let words = n.div_ceil(64);
    let mut rows = vec![vec![0u64; words]; n];
    for t in trees {
        for (u, row) in rows.iter_mut().enumerate() {
            for (v, &dist) in t.bfs_distances(u, radius).iter().enumerate() {
                if v != u && dist <= radius {
                    row[v / 64] |= 1 << (v % 64);
                }
            }
        }
    }
    rows
}

fn has_bit(row: &[u64], v: usize) -> bool {
    row[v / 64] >> (v % 64) & 1 == 1
}

/// Proper coloring of `vertices` in the auxiliary graph with `classes`
/// colors, smallest class first, followed by balancing moves.
fn equitable_coloring(rows: &[Vec<u64>], vertices: &[usize], classes: usize) -> Vec<Option<usize>> {
    let n = rows.len();
    let mut color: Vec<Option<usize>> = vec![None; n];
    let mut members: Vec<Vec<usize>> = vec![Vec::new(); classes];
    let conflicts = |color: &[Option<usize>], v: usize, c: usize, members: &[Vec<usize>]| {
        members[c].iter().any(|&u| u != v && has_bit(&rows[v], u)) && color[v] != Some(c)
    };
    for &v in vertices {
        let mut order: Vec<usize> = (0..classes).collect();
        order.sort_by_key(|&c| (members[c].len(), c));
        let c = order
            .into_iter()
            .find(|&c| !conflicts(&color, v, c, &members))
            .expect("Δ+1 colors always leave a free class");
        color[v] = Some(c);
        members[c].push(v);
    }
    loop {
        let (big, small) = match (
            (0..classes).max_by_key(|&c| (members[c].len(), usize::MAX - c)),
            (0..classes).min_by_key(|&c| (members[c].len(), c)),
        ) {
            (Some(b), Some(s)) => (b, s),
            _ => break,
        };
        if members[big].len() <= members[small].len() + 1 {
            break;
        }
        let movable = members[big].iter().position(|&v| !conflicts(&color, v, small, &members));
        match movable {
            Some(i) => {
                let v = members[big].swap_remove(i);
                color[v] = Some(small);
                members[small].push(v);
            }
            None => break,
        }
    }
    color
}

/// Embeds a guest of density at most `a/b` and maximum degree at most `D`
/// into the rational-family host via random tree homomorphisms, one per
/// coordinate, redrawn until the phase bound holds.
pub fn embed_rational(h: &Graph, host: &UniversalHost, seed: u64, retry_cap: usize) -> Result<Embedding, EmbedError> {
    check_guest(h, host, Family::Rational)?;
    let expander = host.expander.as_ref().ok_or(EmbedError::MissingExpander)?;
    let g = &expander.graph;
    let n = h.vertex_count();
    let (a, b) = (host.density.a, host.density.b);
    if n == 0 {
        return Ok(Embedding { map: Vec::new(), stats: EmbedStats::default() });
    }
    let parts = pseudoforest_parts(h, b, a)?;
    let d_cap = host.max_degree.unwrap_or(2).max(2);
    let trees = parts
        .iter()
        .map(|p| pseudoforest_to_forest(p).and_then(|f| forest_to_spanning_tree(&f, d_cap)))
        .collect::<Result<Vec<_>, _>>()?;
    let log_n = libm::log2(host.n.max(2) as f64);
    let radius = libm::floor(16.0 * libm::sqrt(log_n)) as usize;
    let rows = auxiliary_graph(&trees, n, radius);
    let aux_degree = rows.iter().map(|r| r.iter().map(|w| w.count_ones() as usize).sum::<usize>()).max().unwrap_or(0);
    let root = 0usize;
    let in_u0: Vec<bool> = (0..n).map(|v| v == root || has_bit(&rows[root], v)).collect();
    let rest: Vec<usize> = (0..n).filter(|&v| !in_u0[v]).collect();
    let class = equitable_coloring(&rows, &rest, aux_degree + 1);
    let u0_size = in_u0.iter().filter(|&&x| x).count();
    let mut stats = EmbedStats {
        class_bound: Some(u0_size as f64 + (aux_degree + 1) as f64 * 4.0 * log_n),
        ..EmbedStats::default()
    };
    let m = host.m;
    let mut prefix = vec![0usize; n];
    for (phase, tree) in trees.iter().enumerate() {
        let cap = rational_phase_cap(host.n, a, phase + 1);
        let mut accepted = None;
        let mut worst = None;
        for attempt in 0..retry_cap.max(1) {
            let mut r = rng(derive_seed(derive_seed(seed, phase as u64), attempt as u64));
            let start = r.gen_range(0..m);
            let image = random_tree_hom(tree, root, start, g, &mut r);
            let next: Vec<usize> = (0..n).map(|v| prefix[v] * m + image[v]).collect();
            match rational_phase_violation(&next, &class, cap) {
                None => {
                    accepted = Some(next);
                    break;
                }
                Some(v) => {
                    stats.retries += 1;
                    worst = Some(v);
                }
            }
        }
        match accepted {
            Some(next) => prefix = next,
            None => {
                let v = worst.expect("a rejected draw was recorded");
                return Err(EmbedError::RetryCapExceeded {
                    phase: phase + 1,
                    attempts: retry_cap.max(1),
                    bucket: v.bucket,
                    class: v.class,
                    size: v.size,
                    cap,
                });
            }
        }
        let mut counts: BTreeMap<(usize, usize), usize> = BTreeMap::new();
        for v in 0..n {
            if let Some(c) = class[v] {
                *counts.entry((prefix[v], c)).or_insert(0) += 1;
            }
        }
        stats.phase_max_bucket.push(counts.values().copied().max().unwrap_or(0));
        stats.phase_bound.push(cap);
    }
    finish(host, &prefix, &vec![true; n], vec![usize::MAX; n], stats)
}
