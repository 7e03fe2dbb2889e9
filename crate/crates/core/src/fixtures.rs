//! Small hand-built graphs used throughout the docs and tests.
//!
//! Labels are interned in alphabetical order (`A < B`, `X < Y < Z`) so that
//! canonical path codes compare the same way as their spelled-out strings.

use crate::graph::{Alphabet, Label, LabeledGraph, build_graph};

fn alphabet() -> Alphabet {
    Alphabet::with_labels(["A", "B"], ["X", "Y", "Z"])
}

fn graph(alphabet: &Alphabet, vertices: &[&str], edges: &[(usize, usize, &str)]) -> LabeledGraph {
    let labels = vertices
        .iter()
        .map(|v| alphabet.vertices.get(v).expect("vertex label interned"))
        .collect();
    let edges: Vec<(usize, usize, Label)> = edges
        .iter()
        .map(|&(u, v, l)| (u, v, alphabet.edges.get(l).expect("edge label interned")))
        .collect();
    build_graph(labels, &edges).expect("fixture is a valid graph")
}

/// Five-vertex data graph `v1..v5` (indices 0..4):
///
/// ```text
/// v1:A --X-- v2:A
///  | \        / |
///  Y   Y    Y   Y
///  |     \/     |
/// v3:B -Z- v4:B -Z- v5:B
/// ```
///
/// Edges: (v1,v2,X) (v1,v3,Y) (v1,v4,Y) (v2,v4,Y) (v2,v5,Y) (v3,v4,Z) (v4,v5,Z).
pub fn data_graph(alphabet: &Alphabet) -> LabeledGraph {
    graph(
        alphabet,
        &["A", "A", "B", "B", "B"],
        &[
            (0, 1, "X"),
            (0, 2, "Y"),
            (0, 3, "Y"),
            (1, 3, "Y"),
            (1, 4, "Y"),
            (2, 3, "Z"),
            (3, 4, "Z"),
        ],
    )
}

/// Triangle query `u1:A, u2:B, u3:B` with edges (u1,u2,Y) (u1,u3,Y) (u2,u3,Z).
pub fn triangle_query(alphabet: &Alphabet) -> LabeledGraph {
    graph(
        alphabet,
        &["A", "B", "B"],
        &[(0, 1, "Y"), (0, 2, "Y"), (1, 2, "Z")],
    )
}

/// The triangle query together with the five-vertex data graph. The query
/// has exactly four embeddings:
///
/// | | u1 | u2 | u3 |
/// |---|---|---|---|
/// | f1 | v1 | v3 | v4 |
/// | f2 | v1 | v4 | v3 |
/// | f3 | v2 | v4 | v5 |
/// | f4 | v2 | v5 | v4 |
pub fn sample_pair() -> (Alphabet, LabeledGraph, LabeledGraph) {
    let a = alphabet();
    let q = triangle_query(&a);
    let g = data_graph(&a);
    (a, q, g)
}

/// The four embeddings of [`sample_pair`], as image vectors (0-based).
pub const SAMPLE_PAIR_WITNESSES: [[usize; 3]; 4] = [[0, 2, 3], [0, 3, 2], [1, 3, 4], [1, 4, 3]];

/// Two isomorphic labeled 4-cycles `G1` (u1..u4) and `G2` (v1..v4) with
/// exactly two isomorphisms:
/// `f1 = (v1, v2, v4, v3)` and `f2 = (v2, v1, v3, v4)`.
pub fn square_pair() -> (Alphabet, LabeledGraph, LabeledGraph) {
    let a = alphabet();
    let g1 = graph(
        &a,
        &["A", "A", "B", "B"],
        &[(0, 3, "X"), (3, 1, "Y"), (1, 2, "X"), (2, 0, "Y")],
    );
    let g2 = graph(
        &a,
        &["A", "A", "B", "B"],
        &[(0, 2, "X"), (2, 1, "Y"), (1, 3, "X"), (3, 0, "Y")],
    );
    (a, g1, g2)
}

pub const SQUARE_PAIR_WITNESSES: [[usize; 4]; 2] = [[0, 1, 3, 2], [1, 0, 2, 3]];

/// Star tree centred on a `B` vertex with two `A` leaves over `Y` edges and
/// two `B` leaves over `Z` edges (t4 is the hub). It embeds four times in
/// [`data_graph`], always onto the same edge set.
pub fn hub_star(alphabet: &Alphabet) -> LabeledGraph {
    graph(
        alphabet,
        &["A", "A", "B", "B", "B"],
        &[(0, 3, "Y"), (1, 3, "Y"), (2, 3, "Z"), (4, 3, "Z")],
    )
}

/// Complete graph on `n` vertices, all labels `A`/`X`.
pub fn complete_graph(alphabet: &Alphabet, n: usize) -> LabeledGraph {
    let a = alphabet.vertices.get("A").expect("A interned");
    let x = alphabet.edges.get("X").expect("X interned");
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            edges.push((u, v, x));
        }
    }
    build_graph(vec![a; n], &edges).expect("complete graph is valid")
}

/// Default fixture alphabet: vertices `A, B`, edges `X, Y, Z`.
pub fn sample_alphabet() -> Alphabet {
    alphabet()
}

/// Path `0 - 1 - ... - n`, all labels `A`/`X`.
pub fn chain(alphabet: &Alphabet, edges: usize) -> LabeledGraph {
    let a = alphabet.vertices.get("A").expect("A interned");
    let x = alphabet.edges.get("X").expect("X interned");
    let list: Vec<_> = (0..edges).map(|i| (i, i + 1, x)).collect();
    build_graph(vec![a; edges + 1], &list).expect("chain is valid")
}

/// Star with `leaves` leaves; the hub is vertex 0.
pub fn star(alphabet: &Alphabet, leaves: usize) -> LabeledGraph {
    let a = alphabet.vertices.get("A").expect("A interned");
    let x = alphabet.edges.get("X").expect("X interned");
    let list: Vec<_> = (1..=leaves).map(|i| (0, i, x)).collect();
    build_graph(vec![a; leaves + 1], &list).expect("star is valid")
}
