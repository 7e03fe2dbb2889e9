//! Labeled neighborhoods and the cached inclusion matrix.
//!
//! Inclusion between two labeled neighborhoods is a necessary condition for
//! mapping one vertex onto another. Many vertices share a neighborhood, so
//! each graph keeps a table of its *distinct* neighborhoods plus a position
//! array, and a query/data pair materializes one bit per pair of distinct
//! neighborhoods. A per-vertex test is then a single bit read.

use std::borrow::Cow;
use std::cell::{Cell, OnceCell};
use std::collections::HashMap;
use std::collections::hash_map::Entry;

use crate::error::{Error, Result};
use crate::graph::{Label, LabeledGraph};

/// Sorted multiset of `(neighbor label, edge label)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabeledNeighborhood {
    entries: Vec<(Label, Label)>,
}

impl LabeledNeighborhood {
    pub fn from_entries(mut entries: Vec<(Label, Label)>) -> Self {
        entries.sort_unstable();
        Self { entries }
    }

    pub fn entries(&self) -> &[(Label, Label)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_subset_of(&self, other: &Self) -> bool {
        multiset_includes(self, other)
    }
}

pub fn compute_neighborhood(g: &LabeledGraph, u: usize) -> Result<LabeledNeighborhood> {
    if u >= g.vertex_count() {
        return Err(Error::IndexOutOfRange {
            index: u,
            len: g.vertex_count(),
        });
    }
    Ok(neighborhood_of(g, u))
}

fn neighborhood_of(g: &LabeledGraph, u: usize) -> LabeledNeighborhood {
    // adjacency is already ordered by (neighbor label, edge label)
    LabeledNeighborhood {
        entries: g
            .neighbors(u)
            .iter()
            .map(|nb| (g.label(nb.vertex), nb.edge_label))
            .collect(),
    }
}

/// `a ⊆ b` as multisets, by a two-pointer merge over the sorted entries.
pub fn multiset_includes(a: &LabeledNeighborhood, b: &LabeledNeighborhood) -> bool {
    sorted_includes(&a.entries, &b.entries)
}

fn sorted_includes<T: Ord>(a: &[T], b: &[T]) -> bool {
    if a.len() > b.len() {
        return false;
    }
    let mut j = 0;
    for x in a {
        while j < b.len() && b[j] < *x {
            j += 1;
        }
        if j == b.len() || b[j] != *x {
            return false;
        }
        j += 1;
    }
    true
}

/// Distinct neighborhoods of one graph and each vertex's slot among them.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistinctNeighborhoodTable {
    dln: Vec<LabeledNeighborhood>,
    position: Vec<usize>,
}

impl DistinctNeighborhoodTable {
    pub fn build(g: &LabeledGraph) -> Self {
        let mut dln = Vec::new();
        let mut slots: HashMap<LabeledNeighborhood, usize> = HashMap::new();
        let mut position = Vec::with_capacity(g.vertex_count());
        for u in 0..g.vertex_count() {
            // hashing is only a lookup aid: the map compares keys in full
            let slot = match slots.entry(neighborhood_of(g, u)) {
                Entry::Occupied(e) => *e.get(),
                Entry::Vacant(e) => {
                    let slot = dln.len();
                    dln.push(e.key().clone());
                    e.insert(slot);
                    slot
                }
            };
            position.push(slot);
        }
        Self { dln, position }
    }

    pub fn len(&self) -> usize {
        self.dln.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dln.is_empty()
    }

    pub fn neighborhoods(&self) -> &[LabeledNeighborhood] {
        &self.dln
    }

    pub fn position(&self, u: usize) -> usize {
        self.position[u]
    }

    pub fn positions(&self) -> &[usize] {
        &self.position
    }

    pub fn neighborhood_of(&self, u: usize) -> &LabeledNeighborhood {
        &self.dln[self.position[u]]
    }
}

/// Row-major bit matrix over (query DLN slot, data DLN slot).
///
/// A matrix is either filled up front ([`InclusionMatrix::build`]) or filled
/// cell by cell on first use ([`InclusionMatrix::lazy`]), which pays off when
/// most cells are never read because the vertex labels already differ. A
/// lazy matrix allocates nothing until its first cell is computed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InclusionMatrix {
    rows: usize,
    cols: usize,
    words_per_row: usize,
    lazy: bool,
    /// Word `2w` holds value bits, word `2w + 1` marks computed cells.
    words: OnceCell<Vec<Cell<u64>>>,
}

impl InclusionMatrix {
    pub fn build(query: &DistinctNeighborhoodTable, data: &DistinctNeighborhoodTable) -> Self {
        let m = Self {
            lazy: false,
            ..Self::lazy(query, data)
        };
        for (i, a) in query.dln.iter().enumerate() {
            for (j, b) in data.dln.iter().enumerate() {
                m.record(i, j, multiset_includes(a, b));
            }
        }
        m
    }

    pub fn lazy(query: &DistinctNeighborhoodTable, data: &DistinctNeighborhoodTable) -> Self {
        let cols = data.len();
        Self {
            rows: query.len(),
            cols,
            words_per_row: cols.div_ceil(64),
            lazy: true,
            words: OnceCell::new(),
        }
    }

    #[inline]
    fn word(&self, row: usize, col: usize) -> (usize, u64) {
        debug_assert!(row < self.rows && col < self.cols);
        (2 * (row * self.words_per_row + col / 64), 1 << (col % 64))
    }

    fn words(&self) -> &[Cell<u64>] {
        self.words
            .get_or_init(|| vec![Cell::new(0); 2 * self.rows * self.words_per_row])
    }

    /// The cell, or `None` if a lazy matrix has not computed it yet.
    #[inline]
    pub fn cached(&self, row: usize, col: usize) -> Option<bool> {
        let (w, bit) = self.word(row, col);
        let words = self.words.get()?;
        if self.lazy && words[w + 1].get() & bit == 0 {
            return None;
        }
        Some(words[w].get() & bit != 0)
    }

    /// The cell of an eagerly built matrix.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        self.cached(row, col).expect("cell has not been computed")
    }

    fn record(&self, row: usize, col: usize, value: bool) {
        let (w, bit) = self.word(row, col);
        let words = self.words();
        words[w + 1].set(words[w + 1].get() | bit);
        if value {
            words[w].set(words[w].get() | bit);
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_lazy(&self) -> bool {
        self.lazy
    }

    /// Ones among the cells computed so far.
    pub fn count_ones(&self) -> usize {
        self.words.get().map_or(0, |w| {
            w.iter()
                .step_by(2)
                .map(|c| c.get().count_ones() as usize)
                .sum()
        })
    }
}

/// Everything needed to test `NL_q(u) ⊆ NL_G(v)` in O(1) for one pair.
#[derive(Clone, Debug)]
pub struct NeighborhoodIndex<'a> {
    pub query: Cow<'a, DistinctNeighborhoodTable>,
    pub data: &'a DistinctNeighborhoodTable,
    pub matrix: InclusionMatrix,
}

impl<'a> NeighborhoodIndex<'a> {
    /// Pairs a query with a data-side table built (and cached) elsewhere.
    pub fn with_data_table(q: &LabeledGraph, data: &'a DistinctNeighborhoodTable) -> Self {
        let query = DistinctNeighborhoodTable::build(q);
        let matrix = InclusionMatrix::build(&query, data);
        Self {
            query: Cow::Owned(query),
            data,
            matrix,
        }
    }

    /// Both tables prebuilt; the matrix is filled immediately.
    pub fn from_tables(
        query: &'a DistinctNeighborhoodTable,
        data: &'a DistinctNeighborhoodTable,
    ) -> Self {
        let matrix = InclusionMatrix::build(query, data);
        Self {
            query: Cow::Borrowed(query),
            data,
            matrix,
        }
    }

    /// Both tables prebuilt; matrix cells are computed on first use.
    pub fn lazy(query: &'a DistinctNeighborhoodTable, data: &'a DistinctNeighborhoodTable) -> Self {
        let matrix = InclusionMatrix::lazy(query, data);
        Self {
            query: Cow::Borrowed(query),
            data,
            matrix,
        }
    }

    #[inline]
    pub fn includes(&self, u: usize, v: usize) -> bool {
        let (row, col) = (self.query.position(u), self.data.position(v));
        self.matrix.cached(row, col).unwrap_or_else(|| {
            let value = multiset_includes(&self.query.dln[row], &self.data.dln[col]);
            self.matrix.record(row, col, value);
            value
        })
    }
}

/// Builds both tables and the matrix for `(q, g)`.
pub fn build_index(
    q: &LabeledGraph,
    g: &LabeledGraph,
) -> (
    DistinctNeighborhoodTable,
    DistinctNeighborhoodTable,
    InclusionMatrix,
) {
    let query = DistinctNeighborhoodTable::build(q);
    let data = DistinctNeighborhoodTable::build(g);
    let matrix = InclusionMatrix::build(&query, &data);
    (query, data, matrix)
}
