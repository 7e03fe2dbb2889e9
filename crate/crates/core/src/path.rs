//! Simple paths, canonical path codes, and disjoint path covers of a query.
//!
//! A path's *code* interleaves vertex and edge labels along the path. Each
//! undirected path has two codes (one per direction); the smaller one is its
//! canonical code, and paths whose two codes coincide are *iso* paths. Data
//! graph paths are indexed by canonical code, and a query is matched one
//! cover path at a time.

use rustc_hash::FxHasher;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Range;

use crate::error::{Error, Result};
use crate::graph::{Alphabet, LabeledGraph};

/// Paths longer than this are refused unless the caller raises the cap.
pub const DEFAULT_MAX_LEN_CAP: usize = 4;

/// The default maximum path size.
pub const DEFAULT_MAX_LEN: usize = 2;

/// Sequence `v_0, ..., v_k` of distinct vertices joined by edges.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SimplePath {
    vertices: Vec<usize>,
}

impl SimplePath {
    /// Panics on fewer than two vertices.
    pub fn new(vertices: Vec<usize>) -> Self {
        assert!(vertices.len() >= 2, "a path needs at least one edge");
        Self { vertices }
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Number of edges.
    pub fn size(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn reversed(&self) -> Self {
        let mut vertices = self.vertices.clone();
        vertices.reverse();
        Self { vertices }
    }

    /// Edges as `(min, max)` pairs, in path order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices
            .windows(2)
            .map(|w| (w[0].min(w[1]), w[0].max(w[1])))
    }

    pub fn is_valid_in(&self, g: &LabeledGraph) -> bool {
        let n = g.vertex_count();
        if self.vertices.iter().any(|&v| v >= n) {
            return false;
        }
        let mut seen = vec![false; n];
        for &v in &self.vertices {
            if std::mem::replace(&mut seen[v], true) {
                return false;
            }
        }
        self.vertices.windows(2).all(|w| g.has_edge(w[0], w[1]))
    }
}

/// `l(v_0) l(v_0,v_1) l(v_1) ... l(v_k)`, compared lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PathCode(Vec<u32>);

impl PathCode {
    pub fn of(g: &LabeledGraph, vertices: &[usize]) -> Self {
        let mut symbols = Vec::with_capacity(2 * vertices.len() - 1);
        symbols.push(g.label(vertices[0]).0);
        for w in vertices.windows(2) {
            let edge = g
                .edge_label(w[0], w[1])
                .expect("consecutive path vertices are adjacent");
            symbols.push(edge.0);
            symbols.push(g.label(w[1]).0);
        }
        Self(symbols)
    }

    pub fn symbols(&self) -> &[u32] {
        &self.0
    }

    /// A hash of the symbols, equal for equal codes.
    pub fn fingerprint(&self) -> u64 {
        let mut h = FxHasher::default();
        self.0.hash(&mut h);
        h.finish()
    }

    /// Number of edges the code describes.
    pub fn size(&self) -> usize {
        self.0.len() / 2
    }

    pub fn reversed(&self) -> Self {
        let mut symbols = self.0.clone();
        symbols.reverse();
        Self(symbols)
    }

    pub fn is_palindrome(&self) -> bool {
        let s = &self.0;
        (0..s.len() / 2).all(|i| s[i] == s[s.len() - 1 - i])
    }

    /// Spells the code out with label names, e.g. `AXAYB`.
    pub fn display<'a>(&'a self, alphabet: &'a Alphabet) -> impl fmt::Display + 'a {
        DisplayCode {
            code: self,
            alphabet,
        }
    }
}

struct DisplayCode<'a> {
    code: &'a PathCode,
    alphabet: &'a Alphabet,
}

impl fmt::Display for DisplayCode<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, &s) in self.code.0.iter().enumerate() {
            let table = if i % 2 == 0 {
                &self.alphabet.vertices
            } else {
                &self.alphabet.edges
            };
            match table.name(crate::graph::Label(s)) {
                Some(name) => f.write_str(name)?,
                None => write!(f, "?{s}")?,
            }
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Orientation {
    Forward,
    Reversed,
}

/// A path stored in its canonical orientation.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CanonicalPath {
    path: SimplePath,
    code: PathCode,
    is_iso: bool,
    orientation: Orientation,
}

impl CanonicalPath {
    /// Reorients `path` so that its code is the smaller of the two. Iso paths
    /// keep their input direction.
    pub fn new(g: &LabeledGraph, path: SimplePath) -> Self {
        let forward = PathCode::of(g, path.vertices());
        let backward = forward.reversed();
        if backward < forward {
            Self {
                path: path.reversed(),
                code: backward,
                is_iso: false,
                orientation: Orientation::Reversed,
            }
        } else {
            Self {
                is_iso: backward == forward,
                path,
                code: forward,
                orientation: Orientation::Forward,
            }
        }
    }

    pub fn path(&self) -> &SimplePath {
        &self.path
    }

    pub fn vertices(&self) -> &[usize] {
        self.path.vertices()
    }

    pub fn size(&self) -> usize {
        self.path.size()
    }

    pub fn code(&self) -> &PathCode {
        &self.code
    }

    pub fn is_iso(&self) -> bool {
        self.is_iso
    }

    /// Whether the input direction had to be flipped to reach the canonical one.
    pub fn orientation(&self) -> Orientation {
        self.orientation
    }
}

/// Iso test: the vertex labels and edge labels read the same from both ends.
pub fn classify_iso(p: &SimplePath, g: &LabeledGraph) -> bool {
    let v = p.vertices();
    let k = v.len() - 1;
    (0..v.len() / 2).all(|i| {
        g.label(v[i]) == g.label(v[k - i])
            && g.edge_label(v[i], v[i + 1]) == g.edge_label(v[k - i - 1], v[k - i])
    })
}

/// `min(code(p), code(p^r))`.
pub fn canonical_code(p: &SimplePath, g: &LabeledGraph) -> PathCode {
    let forward = PathCode::of(g, p.vertices());
    let backward = forward.reversed();
    forward.min(backward)
}

/// Every undirected simple path of `1..=max_len` edges, once each, in
/// canonical orientation, sorted by (code, vertices).
pub fn enumerate_paths(g: &LabeledGraph, max_len: usize) -> Result<Vec<CanonicalPath>> {
    enumerate_paths_capped(g, max_len, DEFAULT_MAX_LEN_CAP)
}

pub fn enumerate_paths_capped(
    g: &LabeledGraph,
    max_len: usize,
    cap: usize,
) -> Result<Vec<CanonicalPath>> {
    check_max_len(max_len, cap)?;
    let mut out = Vec::new();
    let mut stack = Vec::with_capacity(max_len + 1);
    let mut on_path = vec![false; g.vertex_count()];
    let mut code = Vec::with_capacity(2 * max_len + 1);
    for start in 0..g.vertex_count() {
        stack.push(start);
        code.push(g.label(start).0);
        on_path[start] = true;
        extend(g, max_len, &mut stack, &mut code, &mut on_path, &mut out);
        code.pop();
        on_path[start] = false;
        stack.pop();
    }
    out.sort_unstable_by(|a, b| {
        a.code
            .cmp(&b.code)
            .then_with(|| a.vertices().cmp(b.vertices()))
    });
    Ok(out)
}

pub(crate) fn check_max_len(max_len: usize, cap: usize) -> Result<()> {
    if max_len == 0 {
        return Err(Error::MaxLZero);
    }
    if max_len > cap {
        return Err(Error::MaxLTooLarge {
            requested: max_len,
            cap,
        });
    }
    Ok(())
}

/// How `code` compares with its own reversal.
fn compare_with_reversal(code: &[u32]) -> std::cmp::Ordering {
    let n = code.len();
    (0..n / 2)
        .map(|i| code[i].cmp(&code[n - 1 - i]))
        .find(|o| o.is_ne())
        .unwrap_or(std::cmp::Ordering::Equal)
}

fn extend(
    g: &LabeledGraph,
    max_len: usize,
    stack: &mut Vec<usize>,
    code: &mut Vec<u32>,
    on_path: &mut [bool],
    out: &mut Vec<CanonicalPath>,
) {
    let last = *stack.last().expect("stack holds the start vertex");
    for nb in g.neighbors_by_index(last) {
        if on_path[nb.vertex] {
            continue;
        }
        stack.push(nb.vertex);
        code.push(nb.edge_label.0);
        code.push(g.label(nb.vertex).0);
        on_path[nb.vertex] = true;
        // each undirected path is reached once from each end; keep one
        let order = compare_with_reversal(code);
        let keep = match order {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Equal => stack[0] < nb.vertex,
            std::cmp::Ordering::Greater => false,
        };
        if keep {
            out.push(CanonicalPath {
                path: SimplePath {
                    vertices: stack.clone(),
                },
                is_iso: order.is_eq(),
                code: PathCode(code.clone()),
                orientation: Orientation::Forward,
            });
        }
        if stack.len() <= max_len {
            extend(g, max_len, stack, code, on_path, out);
        }
        on_path[nb.vertex] = false;
        code.truncate(code.len() - 2);
        stack.pop();
    }
}

/// Data-side path index: every path of a graph up to `max_len`, looked up by
/// canonical code. Built once per data graph.
///
/// Paths are stored flat and addressed by id, sorted by code so equal codes
/// form one id range. A dataset holds one table per graph, so the layout is
/// kept compact.
#[derive(Clone, Debug)]
pub struct PathTable {
    max_len: usize,
    /// Vertices of path `i` in canonical orientation, at `i * (max_len + 1)`.
    vertices: Vec<u32>,
    /// Code of path `i`, at `i * (2 max_len + 1)`.
    codes: Vec<u32>,
    sizes: Vec<u8>,
    iso: Vec<bool>,
    /// Open-addressed (code fingerprint, first id, end id) per distinct
    /// code; `end == 0` marks an empty slot. A miss usually costs one cache
    /// line, which matters when each lookup hits a different, cold graph.
    slots: Vec<(u64, u32, u32)>,
    shift: u32,
    /// One bit per code fingerprint. Stored inline, so most misses are
    /// settled without touching `slots`.
    signature: [u64; 4],
}

fn signature_bit(fp: u64) -> (usize, u64) {
    let b = (fp >> 8) as usize & 255;
    (b / 64, 1 << (b % 64))
}

impl PathTable {
    pub fn build(g: &LabeledGraph, max_len: usize) -> Result<Self> {
        Self::build_capped(g, max_len, DEFAULT_MAX_LEN_CAP)
    }

    pub fn build_capped(g: &LabeledGraph, max_len: usize, cap: usize) -> Result<Self> {
        Ok(Self::from_paths(
            max_len,
            enumerate_paths_capped(g, max_len, cap)?,
        ))
    }

    /// `paths` must not be longer than `max_len`.
    pub fn from_paths(max_len: usize, mut paths: Vec<CanonicalPath>) -> Self {
        if !paths.is_sorted_by(|a, b| a.code <= b.code) {
            paths.sort_by(|a, b| a.code.cmp(&b.code));
        }
        let (vstride, cstride) = (max_len + 1, 2 * max_len + 1);
        let mut table = Self {
            max_len,
            vertices: vec![0; paths.len() * vstride],
            codes: vec![0; paths.len() * cstride],
            sizes: Vec::with_capacity(paths.len()),
            iso: Vec::with_capacity(paths.len()),
            slots: Vec::new(),
            shift: 0,
            signature: [0; 4],
        };
        for (i, p) in paths.iter().enumerate() {
            assert!(
                p.size() <= max_len,
                "path of size {} in a table for maxL = {max_len}",
                p.size()
            );
            for (slot, &v) in table.vertices[i * vstride..].iter_mut().zip(p.vertices()) {
                *slot = v as u32;
            }
            table.codes[i * cstride..][..p.code.0.len()].copy_from_slice(&p.code.0);
            table.sizes.push(p.size() as u8);
            table.iso.push(p.is_iso);
        }

        let mut groups = Vec::new();
        let mut start = 0;
        for i in 1..=paths.len() {
            if i == paths.len() || paths[i].code != paths[start].code {
                groups.push((paths[start].code.fingerprint(), start as u32, i as u32));
                start = i;
            }
        }
        let capacity = (2 * groups.len()).next_power_of_two().max(2);
        table.shift = 64 - capacity.trailing_zeros();
        table.slots = vec![(0, 0, 0); capacity];
        for g in groups {
            let (w, bit) = signature_bit(g.0);
            table.signature[w] |= bit;
            let mut i = (g.0 >> table.shift) as usize;
            while table.slots[i].2 != 0 {
                i = (i + 1) & (capacity - 1);
            }
            table.slots[i] = g;
        }
        table
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn len(&self) -> usize {
        self.sizes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sizes.is_empty()
    }

    /// Vertices of path `id`, in canonical orientation.
    pub fn vertices(&self, id: usize) -> &[u32] {
        &self.vertices[id * (self.max_len + 1)..][..self.sizes[id] as usize + 1]
    }

    pub fn code_symbols(&self, id: usize) -> &[u32] {
        &self.codes[id * (2 * self.max_len + 1)..][..2 * self.sizes[id] as usize + 1]
    }

    pub fn is_iso(&self, id: usize) -> bool {
        self.iso[id]
    }

    /// Ids of the paths whose canonical code is `code`.
    pub fn with_code(&self, code: &PathCode) -> Range<usize> {
        let fp = code.fingerprint();
        let (w, bit) = signature_bit(fp);
        if self.signature[w] & bit == 0 {
            return 0..0;
        }
        let mask = self.slots.len() - 1;
        let mut i = (fp >> self.shift) as usize;
        loop {
            let (f, start, end) = self.slots[i];
            if end == 0 {
                return 0..0;
            }
            if f == fp && self.code_symbols(start as usize) == code.symbols() {
                return start as usize..end as usize;
            }
            i = (i + 1) & mask;
        }
    }
}

/// What is left of a query while the cover is being built.
#[derive(Clone, Debug)]
pub struct ResidualGraph {
    n: usize,
    adjacent: Vec<bool>,
    /// Neighbors in the original graph; BFS filters them by `adjacent`.
    neighbors: Vec<Vec<usize>>,
    degree: Vec<usize>,
    edges: usize,
}

impl ResidualGraph {
    pub fn new(g: &LabeledGraph) -> Self {
        let n = g.vertex_count();
        let mut residual = Self {
            n,
            adjacent: vec![false; n * n],
            neighbors: (0..n)
                .map(|v| g.neighbors_by_index(v).iter().map(|nb| nb.vertex).collect())
                .collect(),
            degree: vec![0; n],
            edges: 0,
        };
        for e in g.edges() {
            residual.set(e.u, e.v, true);
        }
        residual
    }

    fn set(&mut self, u: usize, v: usize, present: bool) {
        if self.adjacent[u * self.n + v] == present {
            return;
        }
        self.adjacent[u * self.n + v] = present;
        self.adjacent[v * self.n + u] = present;
        if present {
            self.degree[u] += 1;
            self.degree[v] += 1;
            self.edges += 1;
        } else {
            self.degree[u] -= 1;
            self.degree[v] -= 1;
            self.edges -= 1;
        }
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adjacent[u * self.n + v]
    }

    pub fn edge_count(&self) -> usize {
        self.edges
    }

    pub fn contains_path(&self, p: &SimplePath) -> bool {
        p.edges().all(|(u, v)| self.has_edge(u, v))
    }

    pub fn remove_path(&mut self, p: &SimplePath) {
        for (u, v) in p.edges() {
            self.set(u, v, false);
        }
    }

    fn restore_path(&mut self, p: &SimplePath) {
        for (u, v) in p.edges() {
            self.set(u, v, true);
        }
    }

    /// Connected once vertices without remaining edges are ignored. An
    /// edgeless residual counts as connected.
    pub fn is_connected(&self) -> bool {
        let Some(start) = (0..self.n).find(|&v| self.degree[v] > 0) else {
            return true;
        };
        let mut seen = vec![false; self.n];
        seen[start] = true;
        let mut reached = 1;
        let mut stack = vec![start];
        while let Some(u) = stack.pop() {
            for &w in &self.neighbors[u] {
                if !seen[w] && self.has_edge(u, w) {
                    seen[w] = true;
                    reached += 1;
                    stack.push(w);
                }
            }
        }
        reached == self.degree.iter().filter(|&&d| d > 0).count()
    }
}

/// Whether `residual` minus the edges of `p` is still connected (ignoring
/// vertices left without edges). `p`'s edges must be in `residual`.
pub fn connectivity_after_removal(residual: &ResidualGraph, p: &SimplePath) -> bool {
    let mut scratch = residual.clone();
    scratch.remove_path(p);
    scratch.is_connected()
}

/// Edge-disjoint paths covering every edge of a query, with the number of
/// cover paths through each query vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCover {
    paths: Vec<CanonicalPath>,
    max_len: usize,
    vertex_freq: Vec<usize>,
}

impl PathCover {
    pub fn paths(&self) -> &[CanonicalPath] {
        &self.paths
    }

    pub fn len(&self) -> usize {
        self.paths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.paths.is_empty()
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    pub fn vertex_freq(&self) -> &[usize] {
        &self.vertex_freq
    }
}

/// Greedy cover: scan `paths` longest first (ties in the given order) and
/// take the first path that still lies in the residual query and whose
/// removal keeps the residual connected. After every pick the scan restarts
/// from the top, so a path skipped earlier gets another chance once its
/// neighbors are gone.
pub fn cover(q: &LabeledGraph, paths: &[CanonicalPath]) -> Result<PathCover> {
    let max_len = paths.iter().map(CanonicalPath::size).max().unwrap_or(1);
    let mut order: Vec<&CanonicalPath> = paths.iter().collect();
    order.sort_by_key(|p| std::cmp::Reverse(p.size()));

    let mut residual = ResidualGraph::new(q);
    // taken, or lost an edge to a taken path; either way never eligible again
    let mut dead = vec![false; order.len()];
    let mut chosen = Vec::new();
    while residual.edge_count() > 0 {
        let mut picked = false;
        for (i, p) in order.iter().enumerate() {
            if dead[i] {
                continue;
            }
            if !residual.contains_path(p.path()) {
                dead[i] = true;
                continue;
            }
            residual.remove_path(p.path());
            if residual.is_connected() {
                dead[i] = true;
                chosen.push((*p).clone());
                picked = true;
                break;
            }
            residual.restore_path(p.path());
        }
        if !picked {
            return Err(Error::CoverIncomplete {
                remaining: residual.edge_count(),
            });
        }
    }

    let mut vertex_freq = vec![0; q.vertex_count()];
    for p in &chosen {
        for &u in p.vertices() {
            vertex_freq[u] += 1;
        }
    }
    Ok(PathCover {
        paths: chosen,
        max_len,
        vertex_freq,
    })
}

/// Convenience: enumerate the query's paths and cover it.
pub fn cover_query(q: &LabeledGraph, max_len: usize) -> Result<PathCover> {
    let paths = enumerate_paths_capped(q, max_len, max_len.max(DEFAULT_MAX_LEN_CAP))?;
    let mut c = cover(q, &paths)?;
    c.max_len = max_len;
    Ok(c)
}

/// Reorders a cover so each path overlaps the vertices of the paths before it
/// as much as possible. The first path maximizes the summed cover frequency
/// of its vertices. Ties go to the earlier path.
pub fn order_cover(q: &LabeledGraph, c: &PathCover) -> PathCover {
    let mut remaining: Vec<&CanonicalPath> = c.paths.iter().collect();
    let mut ordered = Vec::with_capacity(remaining.len());
    let mut seen = vec![false; q.vertex_count()];

    let first = argmax_first(&remaining, |p| {
        p.vertices()
            .iter()
            .map(|&u| c.vertex_freq[u])
            .sum::<usize>()
    });
    if let Some(i) = first {
        let p = remaining.remove(i);
        p.vertices().iter().for_each(|&u| seen[u] = true);
        ordered.push(p.clone());
    }
    while !remaining.is_empty() {
        let i = argmax_first(&remaining, |p| {
            p.vertices().iter().filter(|&&u| seen[u]).count()
        })
        .expect("remaining is nonempty");
        let p = remaining.remove(i);
        p.vertices().iter().for_each(|&u| seen[u] = true);
        ordered.push(p.clone());
    }
    PathCover {
        paths: ordered,
        max_len: c.max_len,
        vertex_freq: c.vertex_freq.clone(),
    }
}

fn argmax_first<T>(items: &[T], score: impl Fn(&T) -> usize) -> Option<usize> {
    let mut best: Option<(usize, usize)> = None;
    for (i, item) in items.iter().enumerate() {
        let s = score(item);
        if best.is_none_or(|(_, b)| s > b) {
            best = Some((i, s));
        }
    }
    best.map(|(i, _)| i)
}

/// `2|E| / (|V| (|V| - 1))`.
pub fn query_density(q: &LabeledGraph) -> f64 {
    q.density()
}

/// `|E_q| / |V_q| < maxL`.
pub fn edge_ratio_bound_holds(q: &LabeledGraph, max_len: usize) -> bool {
    (q.edge_count() as f64) / (q.vertex_count() as f64) < max_len as f64
}

/// `d_q < 2 maxL / (|V_q| - 1)`, the same bound phrased through density.
pub fn density_bound_holds(q: &LabeledGraph, max_len: usize) -> bool {
    let n = q.vertex_count();
    if n < 2 {
        return true;
    }
    query_density(q) < 2.0 * max_len as f64 / (n as f64 - 1.0)
}
