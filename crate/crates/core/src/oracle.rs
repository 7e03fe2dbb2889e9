//! Brute-force reference matcher.
//!
//! Tries every injective, label-preserving assignment and keeps those that
//! pass [`verify_mapping`]. It shares no pruning with the engines, so it can
//! serve as ground truth for them.

use std::collections::BTreeSet;
use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Mapping, verify_mapping};

pub const ORACLE_MAX_QUERY_VERTICES: usize = 8;
pub const ORACLE_MAX_DATA_VERTICES: usize = 12;

/// Every embedding of `q` in `g`, in lexicographic order of the image vector.
pub fn oracle_enumerate(q: &LabeledGraph, g: &LabeledGraph) -> Result<Vec<Mapping>> {
    let (nq, ng) = (q.vertex_count(), g.vertex_count());
    if nq > ORACLE_MAX_QUERY_VERTICES || ng > ORACLE_MAX_DATA_VERTICES {
        return Err(Error::TooLargeForOracle {
            query: nq,
            data: ng,
            max_query: ORACLE_MAX_QUERY_VERTICES,
            max_data: ORACLE_MAX_DATA_VERTICES,
        });
    }
    let candidates: Vec<Vec<usize>> = (0..nq)
        .map(|u| (0..ng).filter(|&v| g.label(v) == q.label(u)).collect())
        .collect();
    let mut out = Vec::new();
    let mut mapping = Mapping::new(nq, ng);
    assign(q, g, &candidates, 0, &mut mapping, &mut out)?;
    Ok(out)
}

fn assign(
    q: &LabeledGraph,
    g: &LabeledGraph,
    candidates: &[Vec<usize>],
    u: usize,
    mapping: &mut Mapping,
    out: &mut Vec<Mapping>,
) -> Result<()> {
    if u == candidates.len() {
        if verify_mapping(q, g, mapping)? {
            out.push(mapping.clone());
        }
        return Ok(());
    }
    for &v in &candidates[u] {
        if mapping.assign(u, v) {
            assign(q, g, candidates, u + 1, mapping, out)?;
            mapping.unassign(u);
        }
    }
    Ok(())
}

/// Keeps the first witness for each distinct image subgraph (image vertex
/// set and image edge set). Embeddings that differ only by an automorphism
/// of the query collapse together.
pub fn oracle_dedupe_redundant(
    witnesses: &[Mapping],
    q: &LabeledGraph,
    _g: &LabeledGraph,
) -> Vec<Mapping> {
    let mut seen = HashSet::new();
    witnesses
        .iter()
        .filter(|m| {
            let vertices: BTreeSet<usize> =
                (0..q.vertex_count()).filter_map(|u| m.image(u)).collect();
            let edges: BTreeSet<(usize, usize)> = q
                .edges()
                .iter()
                .filter_map(|e| {
                    let (a, b) = (m.image(e.u)?, m.image(e.v)?);
                    Some((a.min(b), a.max(b)))
                })
                .collect();
            seen.insert((vertices, edges))
        })
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{Label, build_graph};

    fn images(ms: &[Mapping]) -> Vec<Vec<usize>> {
        ms.iter().map(|m| m.images().unwrap()).collect()
    }

    #[test]
    fn sample_pair_embeddings() {
        let (_, q, g) = fixtures::sample_pair();
        let all = oracle_enumerate(&q, &g).unwrap();
        assert_eq!(
            images(&all),
            fixtures::SAMPLE_PAIR_WITNESSES.map(|w| w.to_vec()).to_vec()
        );
        assert_eq!(oracle_dedupe_redundant(&all, &q, &g).len(), 2);
    }

    #[test]
    fn square_pair_bijections() {
        let (_, g1, g2) = fixtures::square_pair();
        let all = oracle_enumerate(&g1, &g2).unwrap();
        assert_eq!(
            images(&all),
            fixtures::SQUARE_PAIR_WITNESSES.map(|w| w.to_vec()).to_vec()
        );
    }

    #[test]
    fn hub_star_collapses() {
        let (a, _, g) = fixtures::sample_pair();
        let t = fixtures::hub_star(&a);
        let all = oracle_enumerate(&t, &g).unwrap();
        assert_eq!(all.len(), 4);
        assert_eq!(oracle_dedupe_redundant(&all, &t, &g).len(), 1);
    }

    #[test]
    fn single_witness_is_unchanged() {
        let (_, q, g) = fixtures::sample_pair();
        let all = oracle_enumerate(&q, &g).unwrap();
        let one = &all[..1];
        assert_eq!(oracle_dedupe_redundant(one, &q, &g), one.to_vec());
    }

    #[test]
    fn label_disjoint_pair_is_empty() {
        let (_, _, g) = fixtures::sample_pair();
        let q = build_graph(vec![Label(5), Label(6)], &[(0, 1, Label(1))]).unwrap();
        assert!(oracle_enumerate(&q, &g).unwrap().is_empty());
    }

    #[test]
    fn size_guard() {
        let a = fixtures::sample_alphabet();
        let big = fixtures::chain(&a, 12);
        let (_, q, _) = fixtures::sample_pair();
        assert!(matches!(
            oracle_enumerate(&q, &big),
            Err(Error::TooLargeForOracle { .. })
        ));
        assert!(matches!(
            oracle_enumerate(&big, &big),
            Err(Error::TooLargeForOracle { .. })
        ));
    }
}
