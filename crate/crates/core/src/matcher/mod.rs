//! Subgraph-isomorphism engines.
//!
//! All three engines decide the same predicate, "is `q` isomorphic to a
//! subgraph of `G`", and differ only in how they prune:
//!
//! * [`ullman`]: one query vertex per level in input order, candidates
//!   filtered by label and degree.
//! * [`fast_on`]: candidates filtered by labeled-neighborhood inclusion,
//!   vertices visited in a connectivity-maximizing order.
//! * [`fast_p`]: one query *path* per level over an ordered edge-disjoint
//!   path cover, stitched together through shared vertex images.
//!
//! Per-data-graph preprocessing lives in [`DataIndex`] so it can be reused
//! across queries; per-query preprocessing lives in [`PreparedQuery`].

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::graph::{Label, LabeledGraph, Mapping};
use crate::neighborhood::DistinctNeighborhoodTable;
use crate::path::PathTable;

pub mod fast_on;
pub mod fast_p;
pub mod ullman;
mod vertex;

pub use fast_on::{FastOnQuery, fast_on_candidates, fast_on_match, order_vertices};
pub use fast_p::{
    FastPQuery, FastPSearch, MaxLChoice, PathCandidate, PathCandidates, StitchState,
    choose_max_len, fast_p_candidates, fast_p_match,
};
pub use ullman::{UllmanQuery, ullman_candidates, ullman_match};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum MatchMode {
    /// Stop at the first embedding.
    #[default]
    Boolean,
    /// Stop at the first embedding and return it.
    Witness,
    /// Enumerate every embedding (no automorphism collapsing).
    CountAll,
}

impl FromStr for MatchMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "boolean" => Ok(Self::Boolean),
            "witness" => Ok(Self::Witness),
            "count-all" => Ok(Self::CountAll),
            other => Err(Error::Config(format!("unknown mode `{other}`"))),
        }
    }
}

impl fmt::Display for MatchMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Boolean => "boolean",
            Self::Witness => "witness",
            Self::CountAll => "count-all",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Engine {
    Ullman,
    FastOn,
    FastP,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Ullman, Engine::FastOn, Engine::FastP];

    pub fn name(self) -> &'static str {
        match self {
            Self::Ullman => "ullman",
            Self::FastOn => "fast-on",
            Self::FastP => "fast-p",
        }
    }
}

impl FromStr for Engine {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ullman" => Ok(Self::Ullman),
            "fast-on" => Ok(Self::FastOn),
            "fast-p" => Ok(Self::FastP),
            other => Err(Error::Config(format!("unknown engine `{other}`"))),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Invocations of the recursive search procedure.
    pub recursive_calls: u64,
    /// Candidates rejected by the structural (neighbor / stitching) check.
    pub failed_checks: u64,
    /// Sum of candidate-set sizes over all query vertices or cover paths.
    pub candidate_total: u64,
    /// Query vertices in the order the search binds them; empty when
    /// candidate filtering alone settled the answer.
    pub search_order: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchOutcome {
    pub found: bool,
    /// First embedding found, in witness and count-all modes.
    pub witness: Option<Mapping>,
    /// Every embedding, in count-all mode only.
    pub witnesses: Vec<Mapping>,
    pub count: u64,
    pub stats: SearchStats,
    /// The deadline passed before the search finished; `found == false` is
    /// then inconclusive.
    pub timed_out: bool,
}

impl MatchOutcome {
    pub(crate) fn record(&mut self, mode: MatchMode, witness: impl FnOnce() -> Mapping) {
        self.found = true;
        self.count += 1;
        match mode {
            MatchMode::Boolean => {}
            MatchMode::Witness => self.witness = Some(witness()),
            MatchMode::CountAll => {
                let m = witness();
                if self.witness.is_none() {
                    self.witness = Some(m.clone());
                }
                self.witnesses.push(m);
            }
        }
    }
}

/// Per-query-vertex candidate images.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexCandidates {
    lists: Vec<Vec<usize>>,
}

impl VertexCandidates {
    pub fn new(lists: Vec<Vec<usize>>) -> Self {
        Self { lists }
    }

    pub fn of(&self, u: usize) -> &[usize] {
        &self.lists[u]
    }

    pub fn lists(&self) -> &[Vec<usize>] {
        &self.lists
    }

    pub fn total(&self) -> u64 {
        self.lists.iter().map(|l| l.len() as u64).sum()
    }

    pub fn any_empty(&self) -> bool {
        self.lists.iter().any(Vec::is_empty)
    }

    /// Lists for `n` vertices filled in `order`. Filling stops at the first
    /// empty list, since the search cannot succeed past it; later lists stay
    /// empty.
    pub(crate) fn until_empty(
        n: usize,
        order: &[usize],
        mut cand: impl FnMut(usize) -> Vec<usize>,
    ) -> Self {
        let mut lists = vec![Vec::new(); n];
        for &u in order {
            lists[u] = cand(u);
            if lists[u].is_empty() {
                break;
            }
        }
        Self { lists }
    }
}

/// Data-graph preprocessing shared by every query run against it: vertices
/// bucketed by label, the distinct-neighborhood table, and optionally the
/// path table.
#[derive(Clone, Debug)]
pub struct DataIndex<'g> {
    graph: &'g LabeledGraph,
    /// Vertices grouped by label; `label_runs` holds (label, end) per group
    /// in label order.
    by_label: Vec<usize>,
    label_runs: Vec<(Label, usize)>,
    neighborhoods: DistinctNeighborhoodTable,
    paths: Option<PathTable>,
}

impl<'g> DataIndex<'g> {
    /// Index without a path table (enough for the vertex-at-a-time engines).
    pub fn new(graph: &'g LabeledGraph) -> Self {
        let mut by_label: Vec<usize> = (0..graph.vertex_count()).collect();
        by_label.sort_by_key(|&v| graph.label(v));
        let mut label_runs: Vec<(Label, usize)> = Vec::new();
        for (i, &v) in by_label.iter().enumerate() {
            match label_runs.last_mut() {
                Some((l, end)) if *l == graph.label(v) => *end = i + 1,
                _ => label_runs.push((graph.label(v), i + 1)),
            }
        }
        Self {
            graph,
            by_label,
            label_runs,
            neighborhoods: DistinctNeighborhoodTable::build(graph),
            paths: None,
        }
    }

    /// Index including every path of up to `max_len` edges.
    pub fn with_paths(graph: &'g LabeledGraph, max_len: usize) -> Result<Self> {
        let mut index = Self::new(graph);
        index.paths = Some(PathTable::build(graph, max_len)?);
        Ok(index)
    }

    pub fn with_path_table(graph: &'g LabeledGraph, table: PathTable) -> Self {
        let mut index = Self::new(graph);
        index.paths = Some(table);
        index
    }

    pub fn graph(&self) -> &'g LabeledGraph {
        self.graph
    }

    pub fn vertices_with_label(&self, label: Label) -> &[usize] {
        match self.label_runs.binary_search_by_key(&label, |r| r.0) {
            Ok(i) => {
                let start = if i == 0 { 0 } else { self.label_runs[i - 1].1 };
                &self.by_label[start..self.label_runs[i].1]
            }
            Err(_) => &[],
        }
    }

    pub fn neighborhoods(&self) -> &DistinctNeighborhoodTable {
        &self.neighborhoods
    }

    pub fn paths(&self) -> Option<&PathTable> {
        self.paths.as_ref()
    }
}

/// A query preprocessed for one engine.
#[derive(Clone, Debug)]
pub enum PreparedQuery<'q> {
    Ullman(UllmanQuery<'q>),
    FastOn(FastOnQuery<'q>),
    FastP(FastPQuery<'q>),
}

impl<'q> PreparedQuery<'q> {
    pub fn new(engine: Engine, q: &'q LabeledGraph, max_len: usize) -> Result<Self> {
        Ok(match engine {
            Engine::Ullman => Self::Ullman(UllmanQuery::new(q)),
            Engine::FastOn => Self::FastOn(FastOnQuery::new(q)),
            Engine::FastP => Self::FastP(FastPQuery::new(q, max_len)?),
        })
    }

    pub fn engine(&self) -> Engine {
        match self {
            Self::Ullman(_) => Engine::Ullman,
            Self::FastOn(_) => Engine::FastOn,
            Self::FastP(_) => Engine::FastP,
        }
    }

    /// Fast-P needs `data` to carry a path table built with the same maxL.
    pub fn run(
        &self,
        data: &DataIndex<'_>,
        mode: MatchMode,
        deadline: Option<Instant>,
    ) -> Result<MatchOutcome> {
        match self {
            Self::Ullman(p) => Ok(p.run(data, mode, deadline)),
            Self::FastOn(p) => Ok(p.run(data, mode, deadline)),
            Self::FastP(p) => p.run(data, mode, deadline),
        }
    }
}

/// Runs `engine` on one pair without any caching.
pub fn match_with(
    engine: Engine,
    q: &LabeledGraph,
    g: &LabeledGraph,
    max_len: usize,
    mode: MatchMode,
) -> Result<MatchOutcome> {
    match engine {
        Engine::Ullman => Ok(ullman_match(q, g, mode)),
        Engine::FastOn => Ok(fast_on_match(q, g, mode)),
        Engine::FastP => fast_p_match(q, g, max_len, mode),
    }
}

/// Deadline checks are amortized over this many recursive calls.
pub(crate) const DEADLINE_STRIDE: u64 = 256;

pub(crate) fn past(deadline: Option<Instant>, calls: u64) -> bool {
    match deadline {
        Some(d) if calls.is_multiple_of(DEADLINE_STRIDE) => Instant::now() >= d,
        _ => false,
    }
}
