//! Ullman-style baseline: label and degree filtering, input vertex order.

use std::time::Instant;

use crate::graph::LabeledGraph;

use super::vertex::{self, VertexPlan};
use super::{DataIndex, MatchMode, MatchOutcome, VertexCandidates};

/// `Cand(u) = { v : l(u) = l(v), deg(u) <= deg(v) }`.
pub fn ullman_candidates(q: &LabeledGraph, data: &DataIndex<'_>) -> VertexCandidates {
    VertexCandidates::new(
        (0..q.vertex_count())
            .map(|u| candidates_of(q, data, u))
            .collect(),
    )
}

fn candidates_of(q: &LabeledGraph, data: &DataIndex<'_>, u: usize) -> Vec<usize> {
    let g = data.graph();
    data.vertices_with_label(q.label(u))
        .iter()
        .copied()
        .filter(|&v| g.degree(v) >= q.degree(u))
        .collect()
}

#[derive(Clone, Debug)]
pub struct UllmanQuery<'q> {
    q: &'q LabeledGraph,
    plan: VertexPlan,
}

impl<'q> UllmanQuery<'q> {
    pub fn new(q: &'q LabeledGraph) -> Self {
        Self {
            q,
            plan: VertexPlan::new(q, (0..q.vertex_count()).collect()),
        }
    }

    pub fn run(
        &self,
        data: &DataIndex<'_>,
        mode: MatchMode,
        deadline: Option<Instant>,
    ) -> MatchOutcome {
        let candidates =
            VertexCandidates::until_empty(self.q.vertex_count(), &self.plan.order, |u| {
                candidates_of(self.q, data, u)
            });
        vertex::run(
            self.q,
            data.graph(),
            &self.plan,
            &candidates,
            mode,
            deadline,
        )
    }
}

pub fn ullman_match(q: &LabeledGraph, g: &LabeledGraph, mode: MatchMode) -> MatchOutcome {
    UllmanQuery::new(q).run(&DataIndex::new(g), mode, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{Label, build_graph, verify_mapping};

    #[test]
    fn sample_candidates() {
        let (_, q, g) = fixtures::sample_pair();
        let cands = ullman_candidates(&q, &DataIndex::new(&g));
        assert_eq!(cands.of(0), &[0, 1]);
        // B vertices of degree >= 2: v3, v4, v5
        assert_eq!(cands.of(1), &[2, 3, 4]);
    }

    #[test]
    fn reflexive_candidates() {
        let (_, _, g) = fixtures::sample_pair();
        let cands = ullman_candidates(&g, &DataIndex::new(&g));
        for v in 0..g.vertex_count() {
            assert!(cands.of(v).contains(&v));
        }
    }

    #[test]
    fn sample_pair_has_four_embeddings() {
        let (_, q, g) = fixtures::sample_pair();
        let out = ullman_match(&q, &g, MatchMode::CountAll);
        assert!(out.found);
        assert_eq!(out.count, 4);
        let mut images: Vec<_> = out.witnesses.iter().map(|m| m.images().unwrap()).collect();
        images.sort();
        assert_eq!(
            images,
            fixtures::SAMPLE_PAIR_WITNESSES.map(|w| w.to_vec()).to_vec()
        );
        for m in &out.witnesses {
            assert!(verify_mapping(&q, &g, m).unwrap());
        }
        assert_eq!(out.stats.search_order, vec![0, 1, 2]);
    }

    #[test]
    fn square_pair_has_two_isomorphisms() {
        let (_, g1, g2) = fixtures::square_pair();
        let out = ullman_match(&g1, &g2, MatchMode::CountAll);
        let mut images: Vec<_> = out.witnesses.iter().map(|m| m.images().unwrap()).collect();
        images.sort();
        assert_eq!(
            images,
            fixtures::SQUARE_PAIR_WITNESSES.map(|w| w.to_vec()).to_vec()
        );
    }

    #[test]
    fn absent_labels_never_recurse() {
        let (_, _, g) = fixtures::sample_pair();
        let q = build_graph(vec![Label(7), Label(8)], &[(0, 1, Label(1))]).unwrap();
        let out = ullman_match(&q, &g, MatchMode::Boolean);
        assert!(!out.found);
        assert_eq!(out.stats.recursive_calls, 0);
    }

    #[test]
    fn witness_mode_returns_a_valid_mapping() {
        let (_, q, g) = fixtures::sample_pair();
        let out = ullman_match(&q, &g, MatchMode::Witness);
        assert!(out.found && out.count == 1);
        assert!(verify_mapping(&q, &g, out.witness.as_ref().unwrap()).unwrap());
    }
}
