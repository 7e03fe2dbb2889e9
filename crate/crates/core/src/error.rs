use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate edge ({u}, {v})")]
    DuplicateEdge { u: usize, v: usize },

    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),

    #[error("graph is not connected: vertex {unreached} is unreachable from vertex 0")]
    Disconnected { unreached: usize },

    #[error("vertex index {index} out of range for a graph with {len} vertices")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("graph has no vertices")]
    EmptyGraph,

    #[error("mapping is incomplete: query vertex {0} has no image")]
    IncompleteMapping(usize),

    #[error("maxL = {requested} exceeds the configured cap of {cap}")]
    MaxLTooLarge { requested: usize, cap: usize },

    #[error("maxL must be at least 1")]
    MaxLZero,

    #[error("path cover left {remaining} query edges uncovered")]
    CoverIncomplete { remaining: usize },

    #[error(
        "graphs too large for the brute-force oracle (|Vq| = {query} > {max_query} or |VG| = {data} > {max_data})"
    )]
    TooLargeForOracle {
        query: usize,
        data: usize,
        max_query: usize,
        max_data: usize,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("graph `{graph_id}`: {source}")]
    Validation {
        graph_id: String,
        #[source]
        source: Box<Error>,
    },

    #[error("infeasible generator parameters: {0}")]
    InfeasibleParameters(String),

    #[error("no data graph has at least {size} edges")]
    InfeasibleQuerySize { size: usize },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
