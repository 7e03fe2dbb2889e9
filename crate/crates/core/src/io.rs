//! Line-based transaction format for graph datasets and query sets.
//!
//! ```text
//! # comment
//! t # g0
//! v 0 C
//! v 1 O
//! e 0 1 double
//! ```
//!
//! `t # <id>` starts a graph, `v <index> <label>` declares vertex `index`
//! (0-based, contiguous), `e <u> <v> [label]` adds an undirected edge. An
//! edge without a label gets the default (empty) edge label. Blank lines and
//! lines starting with `#` are ignored.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use log::warn;

use crate::error::{Error, Result};
use crate::graph::{Alphabet, Connectivity, DEFAULT_EDGE_LABEL, Label, LabeledGraph};

/// What to do with a data graph that has more than one component.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum DisconnectedPolicy {
    /// Keep the graph and log a warning.
    #[default]
    Warn,
    /// Fail with a validation error.
    Reject,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ReadOptions {
    /// Replace every edge label by the default label.
    pub strip_edge_labels: bool,
    pub disconnected: DisconnectedPolicy,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DatasetStats {
    pub graphs: usize,
    pub avg_vertices: f64,
    pub avg_edges: f64,
    pub avg_density: f64,
}

/// Graphs sharing one label alphabet, each with its original id.
#[derive(Clone, Debug, Default)]
pub struct GraphDataset {
    alphabet: Alphabet,
    ids: Vec<String>,
    graphs: Vec<LabeledGraph>,
    source: Option<PathBuf>,
}

impl GraphDataset {
    pub fn new(alphabet: Alphabet) -> Self {
        Self {
            alphabet,
            ..Self::default()
        }
    }

    /// Adds a graph whose labels were interned in this dataset's alphabet.
    pub fn push(&mut self, id: impl Into<String>, graph: LabeledGraph) -> Result<()> {
        let id = id.into();
        let (nv, ne) = (self.alphabet.vertices.len(), self.alphabet.edges.len());
        let unknown_vertex = graph.labels().iter().any(|l| l.0 as usize >= nv);
        let unknown_edge = graph.edges().iter().any(|e| e.label.0 as usize >= ne);
        if unknown_vertex || unknown_edge {
            return Err(Error::Validation {
                graph_id: id,
                source: Box::new(Error::Config(
                    "label missing from the dataset alphabet".into(),
                )),
            });
        }
        self.ids.push(id);
        self.graphs.push(graph);
        Ok(())
    }

    pub fn alphabet(&self) -> &Alphabet {
        &self.alphabet
    }

    pub fn graphs(&self) -> &[LabeledGraph] {
        &self.graphs
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn graph(&self, i: usize) -> &LabeledGraph {
        &self.graphs[i]
    }

    pub fn len(&self) -> usize {
        self.graphs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.graphs.is_empty()
    }

    /// File the dataset was read from, if any.
    pub fn source(&self) -> Option<&Path> {
        self.source.as_deref()
    }

    /// The first `n` graphs (all of them if `n` is larger).
    pub fn prefix(&self, n: usize) -> Self {
        let n = n.min(self.len());
        Self {
            alphabet: self.alphabet.clone(),
            ids: self.ids[..n].to_vec(),
            graphs: self.graphs[..n].to_vec(),
            source: self.source.clone(),
        }
    }

    pub fn stats(&self) -> DatasetStats {
        let n = self.graphs.len();
        let mean = |f: &dyn Fn(&LabeledGraph) -> f64| {
            if n == 0 {
                0.0
            } else {
                self.graphs.iter().map(f).sum::<f64>() / n as f64
            }
        };
        DatasetStats {
            graphs: n,
            avg_vertices: mean(&|g| g.vertex_count() as f64),
            avg_edges: mean(&|g| g.edge_count() as f64),
            avg_density: mean(&|g| g.density()),
        }
    }

    /// Every edge relabeled with the default label. Idempotent.
    pub fn strip_edge_labels(&self) -> Self {
        let mut alphabet = self.alphabet.clone();
        alphabet.edges = Alphabet::default().edges;
        Self {
            alphabet,
            ids: self.ids.clone(),
            graphs: self
                .graphs
                .iter()
                .map(|g| g.with_uniform_edge_label(DEFAULT_EDGE_LABEL))
                .collect(),
            source: self.source.clone(),
        }
    }

    /// Same ids, vertex labels and labeled edges, compared by label name
    /// rather than interned id.
    pub fn same_structure(&self, other: &Self) -> bool {
        self.ids == other.ids
            && self.graphs.len() == other.graphs.len()
            && self
                .graphs
                .iter()
                .zip(&other.graphs)
                .all(|(a, b)| spelled(&self.alphabet, a) == spelled(&other.alphabet, b))
    }
}

type Spelled<'a> = (Vec<&'a str>, Vec<(usize, usize, &'a str)>);

fn spelled<'a>(alphabet: &'a Alphabet, g: &LabeledGraph) -> Spelled<'a> {
    let name = |table: &'a crate::graph::LabelTable, l: Label| table.name(l).unwrap_or("?");
    let vertices = g
        .labels()
        .iter()
        .map(|&l| name(&alphabet.vertices, l))
        .collect();
    let mut edges: Vec<_> = g
        .edges()
        .iter()
        .map(|e| (e.u, e.v, name(&alphabet.edges, e.label)))
        .collect();
    edges.sort();
    (vertices, edges)
}

/// A named set of connected queries, each with exactly `size` edges.
#[derive(Clone, Debug)]
pub struct QuerySet {
    name: String,
    size: usize,
    queries: GraphDataset,
}

impl QuerySet {
    pub fn new(name: impl Into<String>, size: usize, queries: GraphDataset) -> Result<Self> {
        for (id, q) in queries.ids().iter().zip(queries.graphs()) {
            let problem = if !q.is_connected() {
                Some("query is not connected".to_string())
            } else if q.edge_count() != size {
                Some(format!(
                    "query has {} edges, expected {size}",
                    q.edge_count()
                ))
            } else {
                None
            };
            if let Some(message) = problem {
                return Err(Error::Validation {
                    graph_id: id.clone(),
                    source: Box::new(Error::Config(message)),
                });
            }
        }
        Ok(Self {
            name: name.into(),
            size,
            queries,
        })
    }

    /// Takes the nominal size from a `Q<i>` name, or else from the first query.
    pub fn from_dataset(name: impl Into<String>, queries: GraphDataset) -> Result<Self> {
        let name = name.into();
        let size = nominal_size(&name)
            .or_else(|| queries.graphs().first().map(LabeledGraph::edge_count))
            .unwrap_or(0);
        Self::new(name, size, queries)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn queries(&self) -> &GraphDataset {
        &self.queries
    }

    pub fn len(&self) -> usize {
        self.queries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queries.is_empty()
    }

    /// The first `n` queries.
    pub fn prefix(&self, n: usize) -> Self {
        Self {
            name: self.name.clone(),
            size: self.size,
            queries: self.queries.prefix(n),
        }
    }
}

/// `Q12` -> 12, also for names like `Q12.txt` or `sparse.Q12`.
pub fn nominal_size(name: &str) -> Option<usize> {
    let stem = Path::new(name).file_stem()?.to_str()?;
    stem.rsplit(['.', '_', '-'])
        .find_map(|part| part.strip_prefix('Q').and_then(|d| d.parse().ok()))
}

pub fn read_dataset(path: impl AsRef<Path>, options: &ReadOptions) -> Result<GraphDataset> {
    read_dataset_with_alphabet(path, options, Alphabet::default())
}

/// Reads a dataset, interning labels on top of `alphabet`. Use the data
/// set's alphabet when reading queries so equal names get equal ids.
pub fn read_dataset_with_alphabet(
    path: impl AsRef<Path>,
    options: &ReadOptions,
    alphabet: Alphabet,
) -> Result<GraphDataset> {
    let path = path.as_ref();
    let text = fs::read_to_string(path)?;
    let mut ds = parse_dataset(&text, options, alphabet)?;
    ds.source = Some(path.to_path_buf());
    Ok(ds)
}

/// Reads a query set; queries must be connected.
pub fn read_query_set(
    path: impl AsRef<Path>,
    options: &ReadOptions,
    alphabet: Alphabet,
) -> Result<QuerySet> {
    let path = path.as_ref();
    let options = ReadOptions {
        disconnected: DisconnectedPolicy::Reject,
        ..*options
    };
    let ds = read_dataset_with_alphabet(path, &options, alphabet)?;
    let name = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("queries");
    QuerySet::from_dataset(name, ds)
}

struct Pending {
    id: String,
    vertices: Vec<Label>,
    edges: Vec<(usize, usize, Label)>,
}

pub fn parse_dataset(
    text: &str,
    options: &ReadOptions,
    alphabet: Alphabet,
) -> Result<GraphDataset> {
    let mut ds = GraphDataset::new(alphabet);
    let mut current: Option<Pending> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let err = |message: String| Error::Parse { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = trimmed.split_whitespace().collect();
        match fields[0] {
            "t" => {
                if let Some(g) = current.take() {
                    finish(&mut ds, g, options)?;
                }
                let id = match fields.get(1) {
                    Some(&"#") if fields.len() >= 3 => fields[2..].join(" "),
                    Some(&"#") | None => format!("{}", ds.len()),
                    Some(_) => fields[1..].join(" "),
                };
                current = Some(Pending {
                    id,
                    vertices: Vec::new(),
                    edges: Vec::new(),
                });
            }
            "v" => {
                let g = current
                    .as_mut()
                    .ok_or_else(|| err("vertex before any `t` line".into()))?;
                if fields.len() != 3 {
                    return Err(err(format!(
                        "expected `v <index> <label>`, got `{trimmed}`"
                    )));
                }
                let index: usize = fields[1]
                    .parse()
                    .map_err(|_| err(format!("bad vertex index `{}`", fields[1])))?;
                if index != g.vertices.len() {
                    return Err(err(format!(
                        "vertex {index} out of order, expected {}",
                        g.vertices.len()
                    )));
                }
                g.vertices.push(ds.alphabet.vertices.intern(fields[2]));
            }
            "e" => {
                let g = current
                    .as_mut()
                    .ok_or_else(|| err("edge before any `t` line".into()))?;
                if !(3..=4).contains(&fields.len()) {
                    return Err(err(format!(
                        "expected `e <u> <v> [label]`, got `{trimmed}`"
                    )));
                }
                let end = |s: &str| {
                    s.parse::<usize>()
                        .map_err(|_| err(format!("bad edge endpoint `{s}`")))
                };
                let (u, v) = (end(fields[1])?, end(fields[2])?);
                let label = match fields.get(3) {
                    Some(name) if !options.strip_edge_labels => ds.alphabet.edges.intern(name),
                    _ => DEFAULT_EDGE_LABEL,
                };
                g.edges.push((u, v, label));
            }
            other => return Err(err(format!("unknown record type `{other}`"))),
        }
    }
    if let Some(g) = current.take() {
        finish(&mut ds, g, options)?;
    }
    Ok(ds)
}

fn finish(ds: &mut GraphDataset, g: Pending, options: &ReadOptions) -> Result<()> {
    let validation = |source: Error| Error::Validation {
        graph_id: g.id.clone(),
        source: Box::new(source),
    };
    let graph = LabeledGraph::build(g.vertices.clone(), &g.edges, Connectivity::Allow)
        .map_err(validation)?;
    if !graph.is_connected() {
        match options.disconnected {
            DisconnectedPolicy::Warn => warn!("graph `{}` is not connected", g.id),
            DisconnectedPolicy::Reject => {
                let strict = LabeledGraph::build(g.vertices, &g.edges, Connectivity::Require);
                return Err(validation(strict.expect_err("graph is disconnected")));
            }
        }
    }
    ds.push(g.id.clone(), graph)
}

/// Serializes `ds`; a header comment records the counts.
pub fn format_dataset(ds: &GraphDataset) -> String {
    let stats = ds.stats();
    let mut out = String::new();
    let _ = writeln!(
        out,
        "# {} graphs, {:.2} vertices and {:.2} edges on average",
        stats.graphs, stats.avg_vertices, stats.avg_edges
    );
    let vname = |l: Label| ds.alphabet.vertices.name(l).unwrap_or("?");
    let ename = |l: Label| ds.alphabet.edges.name(l).unwrap_or("?");
    for (id, g) in ds.ids.iter().zip(&ds.graphs) {
        let _ = writeln!(out, "t # {id}");
        for (v, &l) in g.labels().iter().enumerate() {
            let _ = writeln!(out, "v {v} {}", vname(l));
        }
        for e in g.edges() {
            match ename(e.label) {
                "" => writeln!(out, "e {} {}", e.u, e.v),
                name => writeln!(out, "e {} {} {name}", e.u, e.v),
            }
            .expect("writing to a String");
        }
    }
    out
}

pub fn write_dataset(ds: &GraphDataset, path: impl AsRef<Path>) -> Result<()> {
    fs::write(path, format_dataset(ds))?;
    Ok(())
}
