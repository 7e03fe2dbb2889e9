//! Fast-ON: neighborhood-inclusion candidates and a connectivity-first
//! visiting order over Ullman's search skeleton.

use std::time::Instant;

use crate::graph::LabeledGraph;
use crate::neighborhood::{DistinctNeighborhoodTable, NeighborhoodIndex};

use super::vertex::{self, VertexPlan};
use super::{DataIndex, MatchMode, MatchOutcome, VertexCandidates};

/// Visiting order: the highest-degree vertex first, then repeatedly the
/// vertex with the most edges into the already ordered prefix. Ties go to
/// the smallest index.
pub fn order_vertices(q: &LabeledGraph) -> Vec<usize> {
    let n = q.vertex_count();
    if n == 0 {
        return Vec::new();
    }
    let mut order = Vec::with_capacity(n);
    let mut placed = vec![false; n];
    // edges from each unplaced vertex into the prefix
    let mut links = vec![0usize; n];

    let first = (0..n).fold(0, |best, u| {
        if q.degree(u) > q.degree(best) {
            u
        } else {
            best
        }
    });
    let mut next = first;
    loop {
        placed[next] = true;
        order.push(next);
        for nb in q.neighbors_by_index(next) {
            links[nb.vertex] += 1;
        }
        let Some(u) =
            (0..n)
                .filter(|&u| !placed[u])
                .fold(None, |best: Option<usize>, u| match best {
                    Some(b) if links[b] >= links[u] => Some(b),
                    _ => Some(u),
                })
        else {
            break;
        };
        next = u;
    }
    order
}

/// `Cand(u) = { v : l(u) = l(v), NL_q(u) ⊆ NL_G(v) }`, the inclusion read
/// from the cached bit matrix.
pub fn fast_on_candidates(
    q: &LabeledGraph,
    data: &DataIndex<'_>,
    index: &NeighborhoodIndex<'_>,
) -> VertexCandidates {
    VertexCandidates::new(
        (0..q.vertex_count())
            .map(|u| candidates_of(q, data, index, u))
            .collect(),
    )
}

fn candidates_of(
    q: &LabeledGraph,
    data: &DataIndex<'_>,
    index: &NeighborhoodIndex<'_>,
    u: usize,
) -> Vec<usize> {
    data.vertices_with_label(q.label(u))
        .iter()
        .copied()
        .filter(|&v| index.includes(u, v))
        .collect()
}

#[derive(Clone, Debug)]
pub struct FastOnQuery<'q> {
    q: &'q LabeledGraph,
    plan: VertexPlan,
    neighborhoods: DistinctNeighborhoodTable,
}

impl<'q> FastOnQuery<'q> {
    pub fn new(q: &'q LabeledGraph) -> Self {
        Self {
            q,
            plan: VertexPlan::new(q, order_vertices(q)),
            neighborhoods: DistinctNeighborhoodTable::build(q),
        }
    }

    pub fn order(&self) -> &[usize] {
        &self.plan.order
    }

    pub fn index<'d>(&'d self, data: &'d DataIndex<'_>) -> NeighborhoodIndex<'d> {
        NeighborhoodIndex::from_tables(&self.neighborhoods, data.neighborhoods())
    }

    pub fn candidates(&self, data: &DataIndex<'_>) -> VertexCandidates {
        fast_on_candidates(self.q, data, &self.index(data))
    }

    pub fn run(
        &self,
        data: &DataIndex<'_>,
        mode: MatchMode,
        deadline: Option<Instant>,
    ) -> MatchOutcome {
        let index = NeighborhoodIndex::lazy(&self.neighborhoods, data.neighborhoods());
        let candidates =
            VertexCandidates::until_empty(self.q.vertex_count(), &self.plan.order, |u| {
                candidates_of(self.q, data, &index, u)
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

pub fn fast_on_match(q: &LabeledGraph, g: &LabeledGraph, mode: MatchMode) -> MatchOutcome {
    FastOnQuery::new(q).run(&DataIndex::new(g), mode, None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::graph::{Label, build_graph, verify_mapping};

    #[test]
    fn triangle_order_uses_lowest_index_ties() {
        let (_, q, _) = fixtures::sample_pair();
        assert_eq!(order_vertices(&q), vec![0, 1, 2]);
    }

    #[test]
    fn star_starts_at_hub() {
        let x = Label(0);
        let s = build_graph(vec![Label(0); 4], &[(0, 3, x), (1, 3, x), (2, 3, x)]).unwrap();
        assert_eq!(order_vertices(&s)[0], 3);
    }

    #[test]
    fn chain_starts_in_the_middle() {
        let a = fixtures::sample_alphabet();
        let chain = fixtures::chain(&a, 2);
        assert_eq!(order_vertices(&chain), vec![1, 0, 2]);
    }

    #[test]
    fn order_keeps_prefix_connected() {
        let a = fixtures::sample_alphabet();
        let g = fixtures::data_graph(&a);
        let order = order_vertices(&g);
        // v4 has degree 4
        assert_eq!(order[0], 3);
        for i in 1..order.len() {
            assert!(order[..i].iter().any(|&w| g.has_edge(order[i], w)));
        }
    }

    #[test]
    fn sample_candidates_and_matches() {
        let (_, q, g) = fixtures::sample_pair();
        let data = DataIndex::new(&g);
        let query = FastOnQuery::new(&q);
        let cands = query.candidates(&data);
        assert!(cands.of(0).contains(&0));
        assert_eq!(cands.of(0), &[0, 1]);
        // {(A,Y),(B,Z)} fits v3, v4, v5
        assert_eq!(cands.of(1), &[2, 3, 4]);
        let out = query.run(&data, MatchMode::CountAll, None);
        assert_eq!(out.count, 4);
        assert!(
            out.witnesses
                .iter()
                .all(|m| verify_mapping(&q, &g, m).unwrap())
        );
    }

    #[test]
    fn uncontained_neighborhood_prunes_everything() {
        let (a, _, g) = fixtures::sample_pair();
        // A vertex with three B-Z neighbors exists nowhere in the data graph
        let av = a.vertices.get("A").unwrap();
        let bv = a.vertices.get("B").unwrap();
        let z = a.edges.get("Z").unwrap();
        let q = build_graph(vec![av, bv, bv, bv], &[(0, 1, z), (0, 2, z), (0, 3, z)]).unwrap();
        let out = fast_on_match(&q, &g, MatchMode::Boolean);
        assert!(!out.found);
        assert_eq!(out.stats.recursive_calls, 0);
    }
}
