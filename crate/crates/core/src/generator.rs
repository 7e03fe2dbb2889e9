//! Synthetic datasets and query extraction.
//!
//! A dataset is described by four numbers: graph count `N`, average edge
//! count `E`, average density `D` and label alphabet size `L`. The usual
//! shorthand `Syn10K.E30.D5.L50` reads as 10,000 graphs of about 30 edges,
//! density 0.5 and 50 labels (the `D` field is density times ten).

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{Alphabet, Connectivity, Label, LabeledGraph};
use crate::io::{GraphDataset, QuerySet};

/// Per-graph edge counts are uniform in `E ± EDGE_JITTER * E`.
pub const EDGE_JITTER: f64 = 0.2;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GenParams {
    pub graphs: usize,
    pub avg_edges: usize,
    pub density: f64,
    pub labels: usize,
    pub seed: u64,
}

impl GenParams {
    pub fn new(graphs: usize, avg_edges: usize, density: f64, labels: usize) -> Self {
        Self {
            graphs,
            avg_edges,
            density,
            labels,
            seed: 0,
        }
    }

    pub fn with_seed(self, seed: u64) -> Self {
        Self { seed, ..self }
    }

    /// Inclusive range of per-graph edge counts.
    pub fn edge_range(&self) -> (usize, usize) {
        let jitter = (self.avg_edges as f64 * EDGE_JITTER).floor() as usize;
        (
            self.avg_edges.saturating_sub(jitter).max(1),
            self.avg_edges + jitter,
        )
    }

    fn check(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InfeasibleParameters(m));
        if self.graphs == 0 || self.avg_edges == 0 || self.labels == 0 {
            return bad("graph count, edge count and label count must be positive".into());
        }
        if !(self.density > 0.0 && self.density <= 1.0) {
            return bad(format!("density {} is outside (0, 1]", self.density));
        }
        let (lo, hi) = self.edge_range();
        for e in [lo, hi] {
            let v = vertices_for(e, self.density);
            if e + 1 < v {
                return bad(format!(
                    "{e} edges at density {} need {v} vertices, more than a spanning tree allows",
                    self.density
                ));
            }
        }
        Ok(())
    }
}

/// `Syn<N>.E<E>.D<D*10>.L<L>`, with `K`/`M` suffixes on `N`.
impl fmt::Display for GenParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = match self.graphs {
            g if g >= 1_000_000 && g % 1_000_000 == 0 => format!("{}M", g / 1_000_000),
            g if g >= 1_000 && g % 1_000 == 0 => format!("{}K", g / 1_000),
            g => g.to_string(),
        };
        let d = self.density * 10.0;
        write!(f, "Syn{n}.E{}.D{d}.L{}", self.avg_edges, self.labels)
    }
}

impl FromStr for GenParams {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Config(format!("`{s}` is not of the form Syn<N>.E<E>.D<D>.L<L>"));
        let parts: Vec<&str> = s.split('.').collect();
        let [syn, e, d, l] = parts.as_slice() else {
            return Err(bad());
        };
        let n = syn.strip_prefix("Syn").ok_or_else(bad)?;
        let (digits, scale) = match n.chars().last() {
            Some('K' | 'k') => (&n[..n.len() - 1], 1_000),
            Some('M' | 'm') => (&n[..n.len() - 1], 1_000_000),
            _ => (n, 1),
        };
        let graphs = digits.parse::<usize>().map_err(|_| bad())? * scale;
        let avg_edges = e
            .strip_prefix('E')
            .and_then(|x| x.parse().ok())
            .ok_or_else(bad)?;
        let density = d
            .strip_prefix('D')
            .and_then(|x| x.parse::<f64>().ok())
            .ok_or_else(bad)?
            / 10.0;
        let labels = l
            .strip_prefix('L')
            .and_then(|x| x.parse().ok())
            .ok_or_else(bad)?;
        Ok(Self::new(graphs, avg_edges, density, labels))
    }
}

/// `|V|` with `2|E| / (|V|(|V|-1))` closest to `density`, at least 3.
pub fn vertices_for(edges: usize, density: f64) -> usize {
    let v = (1.0 + (1.0 + 8.0 * edges as f64 / density).sqrt()) / 2.0;
    (v.round() as usize).max(3)
}

/// Vertex labels `"0".."L-1"` and edge labels `"0".."L-1"`, interned in that
/// order so ids are stable across runs.
pub fn numbered_alphabet(labels: usize) -> Alphabet {
    let names: Vec<String> = (0..labels).map(|i| i.to_string()).collect();
    Alphabet::with_labels(
        names.iter().map(String::as_str),
        names.iter().map(String::as_str),
    )
}

pub fn generate_dataset(params: &GenParams) -> Result<GraphDataset> {
    params.check()?;
    let alphabet = numbered_alphabet(params.labels);
    let vertex_labels: Vec<Label> = (0..params.labels)
        .map(|i| alphabet.vertices.get(&i.to_string()).expect("interned"))
        .collect();
    let edge_labels: Vec<Label> = (0..params.labels)
        .map(|i| alphabet.edges.get(&i.to_string()).expect("interned"))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let (lo, hi) = params.edge_range();
    let mut ds = GraphDataset::new(alphabet);
    for i in 0..params.graphs {
        let target = rng.gen_range(lo..=hi);
        let n = vertices_for(target, params.density);
        let edges = target.clamp(n - 1, n * (n - 1) / 2);
        let g = random_connected_graph(&mut rng, n, edges, &vertex_labels, &edge_labels)?;
        ds.push(i.to_string(), g)?;
    }
    Ok(ds)
}

/// A random spanning tree on `n` vertices plus random extra edges up to
/// `edges`, with labels drawn uniformly from the given lists.
pub fn random_connected_graph<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    edges: usize,
    vertex_labels: &[Label],
    edge_labels: &[Label],
) -> Result<LabeledGraph> {
    if n == 0 || edges + 1 < n || edges > n * (n - 1) / 2 {
        return Err(Error::InfeasibleParameters(format!(
            "a connected simple graph on {n} vertices cannot have {edges} edges"
        )));
    }
    let labels: Vec<Label> = (0..n)
        .map(|_| *vertex_labels.choose(rng).expect("labels"))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut present = HashSet::new();
    let mut list = Vec::with_capacity(edges);
    for i in 1..n {
        let (a, b) = (order[i], order[rng.gen_range(0..i)]);
        present.insert((a.min(b), a.max(b)));
        list.push((a, b));
    }
    let mut missing: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|p| !present.contains(p))
        .collect();
    missing.shuffle(rng);
    list.extend(missing.into_iter().take(edges - (n - 1)));
    let labeled: Vec<_> = list
        .into_iter()
        .map(|(u, v)| (u, v, *edge_labels.choose(rng).expect("labels")))
        .collect();
    LabeledGraph::build(labels, &labeled, Connectivity::Require)
}

/// Extracts `count` connected queries of exactly `size` edges. Returns the
/// query set and the index of each query's source graph.
pub fn extract_queries_with_sources(
    ds: &GraphDataset,
    size: usize,
    count: usize,
    seed: u64,
) -> Result<(QuerySet, Vec<usize>)> {
    let eligible: Vec<usize> = (0..ds.len())
        .filter(|&i| ds.graph(i).edge_count() >= size && ds.graph(i).is_connected())
        .collect();
    if eligible.is_empty() || size == 0 {
        return Err(Error::InfeasibleQuerySize { size });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut queries = GraphDataset::new(ds.alphabet().clone());
    let mut sources = Vec::with_capacity(count);
    for i in 0..count {
        let src = *eligible.choose(&mut rng).expect("nonempty");
        let q = grow_query(&mut rng, ds.graph(src), size);
        queries.push(format!("q{i}.src{}", ds.ids()[src]), q)?;
        sources.push(src);
    }
    Ok((QuerySet::new(format!("Q{size}"), size, queries)?, sources))
}

pub fn extract_queries(
    ds: &GraphDataset,
    size: usize,
    count: usize,
    seed: u64,
) -> Result<QuerySet> {
    extract_queries_with_sources(ds, size, count, seed).map(|(qs, _)| qs)
}

/// Grows a connected edge set from a random edge by repeatedly adding a
/// random edge touching the vertices reached so far, then renumbers the
/// vertices randomly.
fn grow_query(rng: &mut ChaCha8Rng, g: &LabeledGraph, size: usize) -> LabeledGraph {
    let all = g.edges();
    let mut taken = vec![false; all.len()];
    let mut reached = vec![false; g.vertex_count()];
    let mut frontier: Vec<usize> = Vec::new();
    let mut chosen = Vec::with_capacity(size);
    let edge_index = |u: usize, v: usize| {
        let key = (u.min(v), u.max(v));
        all.binary_search_by(|e| (e.u, e.v).cmp(&key))
            .expect("edge exists")
    };
    let reach = |v: usize, reached: &mut Vec<bool>, frontier: &mut Vec<usize>| {
        if !reached[v] {
            reached[v] = true;
            frontier.extend(
                g.neighbors_by_index(v)
                    .iter()
                    .map(|nb| edge_index(v, nb.vertex)),
            );
        }
    };
    let first = rng.gen_range(0..all.len());
    frontier.push(first);
    while chosen.len() < size {
        let k = rng.gen_range(0..frontier.len());
        let e = frontier.swap_remove(k);
        if taken[e] {
            continue;
        }
        taken[e] = true;
        chosen.push(e);
        reach(all[e].u, &mut reached, &mut frontier);
        reach(all[e].v, &mut reached, &mut frontier);
    }

    let mut vertices: Vec<usize> = (0..g.vertex_count()).filter(|&v| reached[v]).collect();
    vertices.shuffle(rng);
    let mut renumber = vec![usize::MAX; g.vertex_count()];
    for (new, &old) in vertices.iter().enumerate() {
        renumber[old] = new;
    }
    let labels = vertices.iter().map(|&v| g.label(v)).collect();
    let edges: Vec<_> = chosen
        .iter()
        .map(|&e| (renumber[all[e].u], renumber[all[e].v], all[e].label))
        .collect();
    LabeledGraph::build(labels, &edges, Connectivity::Require).expect("grown edge set is connected")
}
