//! Labeled graphs, label interning and vertex mappings.
//!
//! A [`LabeledGraph`] is undirected and simple. Vertices are dense `0..n`
//! indices; labels are small integers interned through a [`LabelTable`] held
//! by whoever owns the graphs (usually a [`GraphDataset`](crate::io::GraphDataset)).

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};

/// An interned vertex or edge label.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(pub u32);

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Edge label used when the input carries none. Always id 0 of an edge table.
pub const DEFAULT_EDGE_LABEL: Label = Label(0);

/// String-to-id table. Interning is a bijection: equal strings get equal ids.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LabelTable {
    names: Vec<String>,
    ids: HashMap<String, Label>,
}

impl LabelTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// A table whose id 0 is the empty string, i.e. the unlabeled-edge label.
    pub fn with_default_edge_label() -> Self {
        let mut table = Self::new();
        table.intern("");
        table
    }

    pub fn intern(&mut self, name: &str) -> Label {
        if let Some(&label) = self.ids.get(name) {
            return label;
        }
        let label = Label(self.names.len() as u32);
        self.names.push(name.to_owned());
        self.ids.insert(name.to_owned(), label);
        label
    }

    pub fn get(&self, name: &str) -> Option<Label> {
        self.ids.get(name).copied()
    }

    pub fn name(&self, label: Label) -> Option<&str> {
        self.names.get(label.0 as usize).map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Label, &str)> {
        self.names
            .iter()
            .enumerate()
            .map(|(i, n)| (Label(i as u32), n.as_str()))
    }
}

/// Vertex and edge label tables shared by every graph of a dataset and the
/// queries run against it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Alphabet {
    pub vertices: LabelTable,
    pub edges: LabelTable,
}

impl Default for Alphabet {
    fn default() -> Self {
        Self {
            vertices: LabelTable::new(),
            edges: LabelTable::with_default_edge_label(),
        }
    }
}

impl Alphabet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Interns the given names in order, so ids follow the caller's ordering.
    pub fn with_labels<'a>(
        vertices: impl IntoIterator<Item = &'a str>,
        edges: impl IntoIterator<Item = &'a str>,
    ) -> Self {
        let mut alphabet = Self::new();
        for v in vertices {
            alphabet.vertices.intern(v);
        }
        for e in edges {
            alphabet.edges.intern(e);
        }
        alphabet
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Neighbor {
    pub vertex: usize,
    pub edge_label: Label,
}

/// An undirected edge stored with `u < v`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub label: Label,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Connectivity {
    /// Reject graphs with more than one component.
    #[default]
    Require,
    /// Accept disconnected graphs (some transaction datasets contain them).
    Allow,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabeledGraph {
    labels: Vec<Label>,
    edges: Vec<Edge>,
    /// `adjacency[offsets[v]..offsets[v + 1]]` are the neighbors of `v`.
    offsets: Vec<usize>,
    /// Per vertex, sorted by (neighbor label, edge label, neighbor index).
    adjacency: Vec<Neighbor>,
    /// Same neighbors sorted by index, for edge lookups.
    by_index: Vec<Neighbor>,
    connected: bool,
}

/// Builds a connected labeled graph. See [`LabeledGraph::build`].
pub fn build_graph(
    vertex_labels: Vec<Label>,
    edges: &[(usize, usize, Label)],
) -> Result<LabeledGraph> {
    LabeledGraph::build(vertex_labels, edges, Connectivity::Require)
}

impl LabeledGraph {
    pub fn build(
        vertex_labels: Vec<Label>,
        edges: &[(usize, usize, Label)],
        connectivity: Connectivity,
    ) -> Result<Self> {
        let n = vertex_labels.len();
        if n == 0 {
            return Err(Error::EmptyGraph);
        }
        let mut by_index: Vec<Vec<Neighbor>> = vec![Vec::new(); n];
        let mut edge_list = Vec::with_capacity(edges.len());
        for &(u, v, label) in edges {
            for idx in [u, v] {
                if idx >= n {
                    return Err(Error::IndexOutOfRange { index: idx, len: n });
                }
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            by_index[u].push(Neighbor {
                vertex: v,
                edge_label: label,
            });
            by_index[v].push(Neighbor {
                vertex: u,
                edge_label: label,
            });
            edge_list.push(Edge {
                u: u.min(v),
                v: u.max(v),
                label,
            });
        }
        for (u, list) in by_index.iter_mut().enumerate() {
            list.sort_by_key(|nb| nb.vertex);
            if let Some(w) = list.windows(2).find(|w| w[0].vertex == w[1].vertex) {
                return Err(Error::DuplicateEdge {
                    u: u.min(w[0].vertex),
                    v: u.max(w[0].vertex),
                });
            }
        }
        edge_list.sort();

        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut adjacency = Vec::with_capacity(2 * edge_list.len());
        for list in &by_index {
            let start = adjacency.len();
            adjacency.extend_from_slice(list);
            adjacency[start..]
                .sort_by_key(|nb| (vertex_labels[nb.vertex], nb.edge_label, nb.vertex));
            offsets.push(adjacency.len());
        }
        let by_index = by_index.concat();

        let mut graph = Self {
            labels: vertex_labels,
            edges: edge_list,
            offsets,
            adjacency,
            by_index,
            connected: false,
        };
        match graph.first_unreachable() {
            None => graph.connected = true,
            Some(unreached) if connectivity == Connectivity::Require => {
                return Err(Error::Disconnected { unreached });
            }
            Some(_) => {}
        }
        Ok(graph)
    }

    fn first_unreachable(&self) -> Option<usize> {
        let n = self.labels.len();
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for nb in self.neighbors_by_index(u) {
                if !seen[nb.vertex] {
                    seen[nb.vertex] = true;
                    queue.push_back(nb.vertex);
                }
            }
        }
        seen.iter().position(|s| !s)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    /// Number of edges, the graph's size `|G|`.
    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn label(&self, v: usize) -> Label {
        self.labels[v]
    }

    pub fn labels(&self) -> &[Label] {
        &self.labels
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn neighbors(&self, v: usize) -> &[Neighbor] {
        &self.adjacency[self.offsets[v]..self.offsets[v + 1]]
    }

    /// Neighbors ordered by vertex index.
    pub fn neighbors_by_index(&self, v: usize) -> &[Neighbor] {
        &self.by_index[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn edge_label(&self, u: usize, v: usize) -> Option<Label> {
        let list = self.neighbors_by_index(u);
        list.binary_search_by_key(&v, |nb| nb.vertex)
            .ok()
            .map(|i| list[i].edge_label)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.edge_label(u, v).is_some()
    }

    pub fn is_connected(&self) -> bool {
        self.connected
    }

    /// `2|E| / (|V| (|V| - 1))`, zero for a single vertex.
    pub fn density(&self) -> f64 {
        let n = self.vertex_count() as f64;
        if n < 2.0 {
            return 0.0;
        }
        2.0 * self.edge_count() as f64 / (n * (n - 1.0))
    }

    /// The same graph with every edge label replaced by `label`.
    pub fn with_uniform_edge_label(&self, label: Label) -> Self {
        let edges: Vec<_> = self.edges.iter().map(|e| (e.u, e.v, label)).collect();
        let connectivity = if self.connected {
            Connectivity::Require
        } else {
            Connectivity::Allow
        };
        Self::build(self.labels.clone(), &edges, connectivity)
            .expect("relabeling keeps a valid graph valid")
    }
}

/// A partial injective map from query vertices to data vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Mapping {
    image: Vec<Option<usize>>,
    matched: Vec<bool>,
}

impl Mapping {
    pub fn new(query_vertices: usize, data_vertices: usize) -> Self {
        Self {
            image: vec![None; query_vertices],
            matched: vec![false; data_vertices],
        }
    }

    /// Complete mapping `u -> images[u]`. Returns `None` if `images` is not
    /// injective or refers past `data_vertices`.
    pub fn from_images(images: &[usize], data_vertices: usize) -> Option<Self> {
        let mut m = Self::new(images.len(), data_vertices);
        for (u, &v) in images.iter().enumerate() {
            if v >= data_vertices || !m.assign(u, v) {
                return None;
            }
        }
        Some(m)
    }

    /// Maps `u` to `v` unless `v` is already taken. Overwrites a previous
    /// image of `u`.
    pub fn assign(&mut self, u: usize, v: usize) -> bool {
        if self.matched[v] {
            return self.image[u] == Some(v);
        }
        if let Some(old) = self.image[u] {
            self.matched[old] = false;
        }
        self.image[u] = Some(v);
        self.matched[v] = true;
        true
    }

    pub fn unassign(&mut self, u: usize) {
        if let Some(v) = self.image[u].take() {
            self.matched[v] = false;
        }
    }

    pub fn image(&self, u: usize) -> Option<usize> {
        self.image[u]
    }

    pub fn is_matched(&self, v: usize) -> bool {
        self.matched[v]
    }

    pub fn is_complete(&self) -> bool {
        self.image.iter().all(Option::is_some)
    }

    pub fn query_len(&self) -> usize {
        self.image.len()
    }

    /// Images of a complete mapping.
    pub fn images(&self) -> Option<Vec<usize>> {
        self.image.iter().copied().collect()
    }
}

/// Checks that `m` is a subgraph-isomorphism witness from `q` into `g`:
/// injective, vertex labels preserved, and every query edge maps onto a data
/// edge carrying the same label.
pub fn verify_mapping(q: &LabeledGraph, g: &LabeledGraph, m: &Mapping) -> Result<bool> {
    if m.query_len() != q.vertex_count() {
        return Err(Error::IncompleteMapping(
            m.query_len().min(q.vertex_count()),
        ));
    }
    let mut images = Vec::with_capacity(q.vertex_count());
    for u in 0..q.vertex_count() {
        match m.image(u) {
            Some(v) => images.push(v),
            None => return Err(Error::IncompleteMapping(u)),
        }
    }
    let mut used = vec![false; g.vertex_count()];
    for (u, &v) in images.iter().enumerate() {
        if v >= g.vertex_count() || used[v] || q.label(u) != g.label(v) {
            return Ok(false);
        }
        used[v] = true;
    }
    Ok(q.edges()
        .iter()
        .all(|e| g.edge_label(images[e.u], images[e.v]) == Some(e.label)))
}
