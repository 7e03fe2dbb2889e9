//! Random small labeled pairs shared by the property and acceptance suites.
#![allow(dead_code)]

use fastiso::LabeledGraph;
use fastiso::generator::{extract_queries, numbered_alphabet, random_connected_graph};
use fastiso::graph::{Alphabet, Label};
use fastiso::io::GraphDataset;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

pub const MAX_QUERY_VERTICES: usize = 6;
pub const MAX_DATA_VERTICES: usize = 9;
pub const MAX_VERTEX_LABELS: usize = 4;
pub const MAX_EDGE_LABELS: usize = 3;

pub struct Pair {
    pub q: LabeledGraph,
    pub g: LabeledGraph,
}

pub fn alphabet() -> Alphabet {
    numbered_alphabet(MAX_VERTEX_LABELS)
}

fn labels(alphabet: &Alphabet, vertex: usize, edge: usize) -> (Vec<Label>, Vec<Label>) {
    let v = (0..vertex)
        .map(|i| alphabet.vertices.get(&i.to_string()).unwrap())
        .collect();
    let e = (0..edge)
        .map(|i| alphabet.edges.get(&i.to_string()).unwrap())
        .collect();
    (v, e)
}

/// A connected graph with `n` vertices and a random feasible edge count.
pub fn random_graph(rng: &mut impl Rng, n: usize, vl: &[Label], el: &[Label]) -> LabeledGraph {
    let edges = rng.gen_range(n.saturating_sub(1)..=n * (n - 1) / 2);
    random_connected_graph(rng, n, edges, vl, el).unwrap()
}

/// Half of the pairs draw the query independently; the other half grow it
/// out of the data graph, so positives are common.
pub fn random_pair(rng: &mut impl Rng) -> Pair {
    let a = alphabet();
    let (vl, el) = labels(
        &a,
        rng.gen_range(1..=MAX_VERTEX_LABELS),
        rng.gen_range(1..=MAX_EDGE_LABELS),
    );
    let n = rng.gen_range(1..=MAX_DATA_VERTICES);
    let g = random_graph(rng, n, &vl, &el);
    if g.edge_count() > 0 && rng.gen_bool(0.5) {
        let size = rng.gen_range(1..=g.edge_count().min(MAX_QUERY_VERTICES - 1));
        let mut ds = GraphDataset::new(a);
        ds.push("g", g.clone()).unwrap();
        let qs = extract_queries(&ds, size, 1, rng.r#gen()).unwrap();
        return Pair {
            q: qs.queries().graph(0).clone(),
            g,
        };
    }
    let n = rng.gen_range(1..=MAX_QUERY_VERTICES);
    let q = random_graph(rng, n, &vl, &el);
    Pair { q, g }
}

pub fn random_pairs(seed: u64, count: usize) -> Vec<Pair> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_pair(&mut rng)).collect()
}

/// A connected query with exactly `edges` edges and a random vertex count.
pub fn random_query_with_edges(rng: &mut impl Rng, edges: usize) -> LabeledGraph {
    let a = alphabet();
    let (vl, el) = labels(&a, MAX_VERTEX_LABELS, MAX_EDGE_LABELS);
    let min_n = (2..).find(|n| n * (n - 1) / 2 >= edges).unwrap();
    let n = rng.gen_range(min_n..=edges + 1);
    random_connected_graph(rng, n, edges, &vl, &el).unwrap()
}
