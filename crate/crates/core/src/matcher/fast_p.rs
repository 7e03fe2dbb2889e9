//! Fast-P: path-at-a-time search over an ordered edge-disjoint path cover.
//!
//! Each cover path is matched to a data path with the same canonical code
//! whose vertices also pass the neighborhood-inclusion test position by
//! position. Paths share query vertices; per-vertex counters and the image
//! map `h` keep the shared vertices consistent across levels.

use std::time::Instant;

use log::warn;

use crate::error::{Error, Result};
use crate::graph::{LabeledGraph, Mapping, verify_mapping};
use crate::neighborhood::{DistinctNeighborhoodTable, NeighborhoodIndex};
use crate::path::{
    CanonicalPath, DEFAULT_MAX_LEN, DEFAULT_MAX_LEN_CAP, PathCover, PathTable, check_max_len,
    cover_query, edge_ratio_bound_holds, order_cover,
};

use super::{DataIndex, MatchMode, MatchOutcome, past};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MaxLChoice {
    pub max_len: usize,
    /// `|E_q| / |V_q| < maxL` holds for the chosen value.
    pub satisfies_bound: bool,
}

/// Picks maxL for a query. An explicit request is honored as is. Otherwise 2
/// when the edge-ratio bound already holds there, else the smallest value up
/// to `cap` that satisfies it, else `cap` (and the caller should prefer
/// Fast-ON).
pub fn choose_max_len(q: &LabeledGraph, requested: Option<usize>, cap: usize) -> MaxLChoice {
    if let Some(max_len) = requested {
        let satisfies_bound = edge_ratio_bound_holds(q, max_len);
        if !satisfies_bound {
            warn!(
                "maxL = {max_len} violates |E|/|V| < maxL ({} edges, {} vertices)",
                q.edge_count(),
                q.vertex_count()
            );
        }
        return MaxLChoice {
            max_len,
            satisfies_bound,
        };
    }
    let cap = cap.max(1);
    if DEFAULT_MAX_LEN <= cap && edge_ratio_bound_holds(q, DEFAULT_MAX_LEN) {
        return MaxLChoice {
            max_len: DEFAULT_MAX_LEN,
            satisfies_bound: true,
        };
    }
    match (DEFAULT_MAX_LEN + 1..=cap).find(|&l| edge_ratio_bound_holds(q, l)) {
        Some(max_len) => MaxLChoice {
            max_len,
            satisfies_bound: true,
        },
        None => MaxLChoice {
            max_len: cap,
            satisfies_bound: false,
        },
    }
}

/// A data path aligned with a cover path: `vertices[j]` is the image of the
/// cover path's `j`-th vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathCandidate {
    /// Id of the undirected data path in the [`PathTable`].
    pub path_id: usize,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PathCandidates {
    lists: Vec<Vec<PathCandidate>>,
}

impl PathCandidates {
    pub fn of(&self, i: usize) -> &[PathCandidate] {
        &self.lists[i]
    }

    pub fn lists(&self) -> &[Vec<PathCandidate>] {
        &self.lists
    }

    pub fn total(&self) -> u64 {
        self.lists.iter().map(|l| l.len() as u64).sum()
    }

    pub fn any_empty(&self) -> bool {
        self.lists.iter().any(Vec::is_empty)
    }
}

/// Candidates for every cover path: same canonical code, and every aligned
/// vertex pair passes the inclusion test. Non-iso paths have exactly one
/// label-consistent alignment. Iso paths try both, and each passing
/// orientation is a separate candidate.
pub fn fast_p_candidates(
    cover: &PathCover,
    table: &PathTable,
    index: &NeighborhoodIndex<'_>,
) -> PathCandidates {
    PathCandidates {
        lists: cover
            .paths()
            .iter()
            .map(|p| path_candidates(p, table, index))
            .collect(),
    }
}

fn path_candidates(
    p: &CanonicalPath,
    table: &PathTable,
    index: &NeighborhoodIndex<'_>,
) -> Vec<PathCandidate> {
    let qv = p.vertices();
    let mut list = Vec::new();
    for id in table.with_code(p.code()) {
        let dv = table.vertices(id);
        if qv
            .iter()
            .zip(dv)
            .all(|(&u, &v)| index.includes(u, v as usize))
        {
            list.push(PathCandidate {
                path_id: id,
                vertices: dv.iter().map(|&v| v as usize).collect(),
            });
        }
        if p.is_iso()
            && qv
                .iter()
                .zip(dv.iter().rev())
                .all(|(&u, &v)| index.includes(u, v as usize))
        {
            list.push(PathCandidate {
                path_id: id,
                vertices: dv.iter().rev().map(|&v| v as usize).collect(),
            });
        }
    }
    list
}

/// Like [`fast_p_candidates`] but gives up at the first cover path without
/// candidates, returning only the number of candidates seen so far.
fn candidates_or_total(
    cover: &PathCover,
    table: &PathTable,
    index: &NeighborhoodIndex<'_>,
) -> Result<PathCandidates, u64> {
    let mut lists = Vec::new();
    let mut total = 0;
    for p in cover.paths() {
        let list = path_candidates(p, table, index);
        if list.is_empty() {
            return Err(total);
        }
        total += list.len() as u64;
        lists.push(list);
    }
    Ok(PathCandidates { lists })
}

/// Mutable bookkeeping of one search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StitchState {
    /// Assigned cover paths through each query vertex.
    pub query_count: Vec<u32>,
    /// Assigned data paths through each data vertex.
    pub data_count: Vec<u32>,
    /// `h`: image of each query vertex.
    pub image: Vec<Option<usize>>,
    /// Preimage of each data vertex.
    pub inverse: Vec<Option<usize>>,
    /// Data paths currently in use, by table id.
    pub path_used: Vec<bool>,
    /// Candidate index chosen for each cover path at the current depth.
    pub assignment: Vec<Option<usize>>,
    pub found: bool,
}

impl StitchState {
    fn new(
        query_vertices: usize,
        data_vertices: usize,
        data_paths: usize,
        cover_len: usize,
    ) -> Self {
        Self {
            query_count: vec![0; query_vertices],
            data_count: vec![0; data_vertices],
            image: vec![None; query_vertices],
            inverse: vec![None; data_vertices],
            path_used: vec![false; data_paths],
            assignment: vec![None; cover_len],
            found: false,
        }
    }

    /// Every counter is zero and no vertex or path is bound.
    pub fn is_clear(&self) -> bool {
        self.query_count.iter().all(|&c| c == 0)
            && self.data_count.iter().all(|&c| c == 0)
            && self.image.iter().all(Option::is_none)
            && self.inverse.iter().all(Option::is_none)
            && !self.path_used.iter().any(|&b| b)
            && self.assignment.iter().all(Option::is_none)
    }

    fn matchable(&self, qv: &[usize], c: &PathCandidate) -> bool {
        if self.path_used[c.path_id] {
            return false;
        }
        qv.iter().zip(&c.vertices).all(|(&u, &v)| {
            let fresh = self.query_count[u] == 0 && self.data_count[v] == 0;
            let consistent = self.image[u] == Some(v);
            let free = self.inverse[v].is_none_or(|w| w == u);
            (fresh || consistent) && free
        })
    }

    fn bind(&mut self, qv: &[usize], c: &PathCandidate) {
        self.path_used[c.path_id] = true;
        for (&u, &v) in qv.iter().zip(&c.vertices) {
            self.query_count[u] += 1;
            self.data_count[v] += 1;
            self.image[u] = Some(v);
            self.inverse[v] = Some(u);
        }
    }

    fn unbind(&mut self, qv: &[usize], c: &PathCandidate) {
        self.path_used[c.path_id] = false;
        for (&u, &v) in qv.iter().zip(&c.vertices) {
            self.query_count[u] -= 1;
            self.data_count[v] -= 1;
            // a vertex shared with an earlier path keeps its image
            if self.query_count[u] == 0 {
                self.image[u] = None;
                self.inverse[v] = None;
            }
        }
    }

    fn mapping(&self, data_vertices: usize) -> Mapping {
        let images: Vec<usize> = self
            .image
            .iter()
            .map(|v| v.expect("complete assignment"))
            .collect();
        Mapping::from_images(&images, data_vertices).expect("stitched images are injective")
    }
}

/// A query prepared for Fast-P: its ordered cover and neighborhood table.
#[derive(Clone, Debug)]
pub struct FastPQuery<'q> {
    q: &'q LabeledGraph,
    cover: PathCover,
    neighborhoods: DistinctNeighborhoodTable,
    search_order: Vec<usize>,
}

impl<'q> FastPQuery<'q> {
    pub fn new(q: &'q LabeledGraph, max_len: usize) -> Result<Self> {
        Self::with_cap(q, max_len, DEFAULT_MAX_LEN_CAP)
    }

    pub fn with_cap(q: &'q LabeledGraph, max_len: usize, cap: usize) -> Result<Self> {
        check_max_len(max_len, cap)?;
        let cover = order_cover(q, &cover_query(q, max_len)?);
        let mut seen = vec![false; q.vertex_count()];
        let mut search_order = Vec::with_capacity(q.vertex_count());
        for p in cover.paths() {
            for &u in p.vertices() {
                if !seen[u] {
                    seen[u] = true;
                    search_order.push(u);
                }
            }
        }
        if cover.is_empty() {
            search_order.push(0);
        }
        Ok(Self {
            q,
            cover,
            neighborhoods: DistinctNeighborhoodTable::build(q),
            search_order,
        })
    }

    pub fn query(&self) -> &'q LabeledGraph {
        self.q
    }

    /// The cover in search order.
    pub fn cover(&self) -> &PathCover {
        &self.cover
    }

    pub fn max_len(&self) -> usize {
        self.cover.max_len()
    }

    fn table<'d>(&self, data: &'d DataIndex<'_>) -> Result<&'d PathTable> {
        match data.paths() {
            Some(t) if t.max_len() >= self.max_len() => Ok(t),
            Some(t) => Err(Error::Config(format!(
                "data path table holds paths up to {} edges, query needs {}",
                t.max_len(),
                self.max_len()
            ))),
            None => Err(Error::Config("data index has no path table".into())),
        }
    }

    pub fn candidates(&self, data: &DataIndex<'_>) -> Result<PathCandidates> {
        let table = self.table(data)?;
        let index = NeighborhoodIndex::lazy(&self.neighborhoods, data.neighborhoods());
        Ok(fast_p_candidates(&self.cover, table, &index))
    }

    /// Sets up a search against `data`; the search itself runs in
    /// [`FastPSearch::run`].
    pub fn search<'s>(&'s self, data: &'s DataIndex<'_>) -> Result<FastPSearch<'s>> {
        let table = self.table(data)?;
        let index = NeighborhoodIndex::lazy(&self.neighborhoods, data.neighborhoods());
        let candidates = fast_p_candidates(&self.cover, table, &index);
        Ok(self.search_with(data, table, candidates))
    }

    fn search_with<'s>(
        &'s self,
        data: &'s DataIndex<'_>,
        table: &PathTable,
        candidates: PathCandidates,
    ) -> FastPSearch<'s> {
        let g = data.graph();
        FastPSearch {
            query: self,
            g,
            candidates,
            state: StitchState::new(
                self.q.vertex_count(),
                g.vertex_count(),
                table.len(),
                self.cover.len(),
            ),
            data_index: data,
        }
    }

    pub fn run(
        &self,
        data: &DataIndex<'_>,
        mode: MatchMode,
        deadline: Option<Instant>,
    ) -> Result<MatchOutcome> {
        let table = self.table(data)?;
        let index = NeighborhoodIndex::lazy(&self.neighborhoods, data.neighborhoods());
        let candidates = match candidates_or_total(&self.cover, table, &index) {
            Ok(c) => c,
            Err(candidate_total) => {
                let mut outcome = MatchOutcome::default();
                outcome.stats.candidate_total = candidate_total;
                return Ok(outcome);
            }
        };
        let mut search = self.search_with(data, table, candidates);
        let outcome = search.run(mode, deadline);
        debug_assert!(search.state().is_clear());
        Ok(outcome)
    }
}

enum Flow {
    Continue,
    Stop,
}

/// One Fast-P search over a single data graph.
pub struct FastPSearch<'s> {
    query: &'s FastPQuery<'s>,
    g: &'s LabeledGraph,
    data_index: &'s DataIndex<'s>,
    candidates: PathCandidates,
    state: StitchState,
}

impl FastPSearch<'_> {
    pub fn candidates(&self) -> &PathCandidates {
        &self.candidates
    }

    /// Bookkeeping after the last run; clear whenever a run has returned.
    pub fn state(&self) -> &StitchState {
        &self.state
    }

    pub fn run(&mut self, mode: MatchMode, deadline: Option<Instant>) -> MatchOutcome {
        let mut outcome = MatchOutcome::default();
        outcome.stats.candidate_total = self.candidates.total();
        self.state.found = false;
        let q = self.query.q;
        if q.vertex_count() > self.g.vertex_count() {
            return outcome;
        }
        if self.query.cover.is_empty() {
            outcome.stats.search_order = self.query.search_order.clone();
            self.single_vertex(mode, &mut outcome);
        } else if !self.candidates.any_empty() {
            outcome.stats.search_order = self.query.search_order.clone();
            self.recurse(0, mode, deadline, &mut outcome);
        }
        self.state.found = outcome.found;
        outcome
    }

    /// Edgeless query: one vertex, matched by label alone.
    fn single_vertex(&self, mode: MatchMode, outcome: &mut MatchOutcome) {
        outcome.stats.recursive_calls += 1;
        let n = self.g.vertex_count();
        for &v in self.data_index.vertices_with_label(self.query.q.label(0)) {
            outcome.record(mode, || {
                Mapping::from_images(&[v], n).expect("single image")
            });
            if mode != MatchMode::CountAll {
                break;
            }
        }
    }

    fn recurse(
        &mut self,
        level: usize,
        mode: MatchMode,
        deadline: Option<Instant>,
        outcome: &mut MatchOutcome,
    ) -> Flow {
        outcome.stats.recursive_calls += 1;
        if past(deadline, outcome.stats.recursive_calls) {
            outcome.timed_out = true;
            return Flow::Stop;
        }
        let query = self.query;
        let cover = &query.cover;
        let qv = cover.paths()[level].vertices();
        let last = level + 1 == cover.len();
        for ci in 0..self.candidates.lists[level].len() {
            let c = &self.candidates.lists[level][ci];
            if !self.state.matchable(qv, c) {
                outcome.stats.failed_checks += 1;
                continue;
            }
            self.state.bind(qv, c);
            self.state.assignment[level] = Some(ci);
            let flow = if last {
                let m = self.state.mapping(self.g.vertex_count());
                debug_assert!(verify_mapping(query.q, self.g, &m).unwrap_or(false));
                outcome.record(mode, || m);
                match mode {
                    MatchMode::CountAll => Flow::Continue,
                    _ => Flow::Stop,
                }
            } else {
                self.recurse(level + 1, mode, deadline, outcome)
            };
            self.state.assignment[level] = None;
            let c = &self.candidates.lists[level][ci];
            self.state.unbind(qv, c);
            if let Flow::Stop = flow {
                return Flow::Stop;
            }
        }
        Flow::Continue
    }
}

/// Runs Fast-P on one pair, building the data path table on the spot.
pub fn fast_p_match(
    q: &LabeledGraph,
    g: &LabeledGraph,
    max_len: usize,
    mode: MatchMode,
) -> Result<MatchOutcome> {
    let query = FastPQuery::new(q, max_len)?;
    let data = DataIndex::with_paths(g, max_len)?;
    query.run(&data, mode, None)
}
