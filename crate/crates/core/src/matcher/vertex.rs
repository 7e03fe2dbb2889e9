//! Depth-first vertex-at-a-time search shared by Ullman and Fast-ON.

use std::time::Instant;

use crate::graph::{Label, LabeledGraph, Mapping};

use super::{MatchMode, MatchOutcome, VertexCandidates, past};

/// Search plan: the visiting order, and for each level the edges back to
/// query vertices bound at earlier levels.
#[derive(Clone, Debug)]
pub(crate) struct VertexPlan {
    pub order: Vec<usize>,
    pub back_edges: Vec<Vec<(usize, Label)>>,
}

impl VertexPlan {
    pub fn new(q: &LabeledGraph, order: Vec<usize>) -> Self {
        let mut level_of = vec![usize::MAX; q.vertex_count()];
        for (level, &u) in order.iter().enumerate() {
            level_of[u] = level;
        }
        let back_edges = order
            .iter()
            .enumerate()
            .map(|(level, &u)| {
                q.neighbors_by_index(u)
                    .iter()
                    .filter(|nb| level_of[nb.vertex] < level)
                    .map(|nb| (nb.vertex, nb.edge_label))
                    .collect()
            })
            .collect();
        Self { order, back_edges }
    }
}

enum Flow {
    Continue,
    Stop,
}

struct Search<'a> {
    g: &'a LabeledGraph,
    plan: &'a VertexPlan,
    candidates: &'a VertexCandidates,
    mode: MatchMode,
    deadline: Option<Instant>,
    mapping: Mapping,
    outcome: MatchOutcome,
}

impl Search<'_> {
    fn recurse(&mut self, level: usize) -> Flow {
        self.outcome.stats.recursive_calls += 1;
        if past(self.deadline, self.outcome.stats.recursive_calls) {
            self.outcome.timed_out = true;
            return Flow::Stop;
        }
        let u = self.plan.order[level];
        let last = level + 1 == self.plan.order.len();
        for &v in self.candidates.of(u) {
            if self.mapping.is_matched(v) {
                continue;
            }
            if !self.matchable(level, v) {
                self.outcome.stats.failed_checks += 1;
                continue;
            }
            self.mapping.assign(u, v);
            let flow = if last {
                let mapping = &self.mapping;
                self.outcome.record(self.mode, || mapping.clone());
                match self.mode {
                    MatchMode::CountAll => Flow::Continue,
                    _ => Flow::Stop,
                }
            } else {
                self.recurse(level + 1)
            };
            self.mapping.unassign(u);
            if let Flow::Stop = flow {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }

    /// Every query edge back into the bound prefix must exist in `G` with
    /// the same label.
    fn matchable(&self, level: usize, v: usize) -> bool {
        self.plan.back_edges[level].iter().all(|&(w, label)| {
            let image = self.mapping.image(w).expect("earlier levels are bound");
            self.g.edge_label(v, image) == Some(label)
        })
    }
}

pub(crate) fn run(
    q: &LabeledGraph,
    g: &LabeledGraph,
    plan: &VertexPlan,
    candidates: &VertexCandidates,
    mode: MatchMode,
    deadline: Option<Instant>,
) -> MatchOutcome {
    let mut outcome = MatchOutcome::default();
    outcome.stats.candidate_total = candidates.total();
    if candidates.any_empty() || q.vertex_count() > g.vertex_count() {
        return outcome;
    }
    outcome.stats.search_order = plan.order.clone();
    let mut search = Search {
        g,
        plan,
        candidates,
        mode,
        deadline,
        mapping: Mapping::new(q.vertex_count(), g.vertex_count()),
        outcome,
    };
    search.recurse(0);
    debug_assert!(search.mapping.images().is_none() || q.vertex_count() == 0);
    search.outcome
}
