//! Labeled subgraph isomorphism with three interchangeable engines.
//!
//! * Ullman's backtracking baseline.
//! * Fast-ON, which prunes candidates by labeled-neighborhood inclusion and
//!   visits query vertices in a connectivity-first order.
//! * Fast-P, which matches a query one path at a time over an edge-disjoint
//!   path cover.
//!
//! Around the engines sit a brute-force oracle, a text dataset format, a
//! synthetic dataset generator and a benchmark harness.
//!
//! ```
//! use fastiso::fixtures;
//! use fastiso::matcher::{Engine, MatchMode, match_with};
//!
//! let (_, q, g) = fixtures::sample_pair();
//! for engine in Engine::ALL {
//!     let out = match_with(engine, &q, &g, 2, MatchMode::CountAll).unwrap();
//!     assert_eq!(out.count, 4);
//! }
//! ```

pub mod bench;
pub mod error;
pub mod fixtures;
pub mod generator;
pub mod graph;
pub mod io;
pub mod matcher;
pub mod neighborhood;
pub mod oracle;
pub mod path;

pub use error::{Error, Result};
pub use graph::{Alphabet, Label, LabelTable, LabeledGraph, Mapping, build_graph, verify_mapping};
pub use matcher::{Engine, MatchMode, MatchOutcome, match_with};
pub use oracle::{oracle_dedupe_redundant, oracle_enumerate};

// The guide's code blocks run as doc-tests, one module per chapter.
#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/graphs.md")]
    mod graphs {}
    #[doc = include_str!("../../../book/src/neighborhoods.md")]
    mod neighborhoods {}
    #[doc = include_str!("../../../book/src/paths.md")]
    mod paths {}
    #[doc = include_str!("../../../book/src/engines.md")]
    mod engines {}
    #[doc = include_str!("../../../book/src/datasets.md")]
    mod datasets {}
    #[doc = include_str!("../../../book/src/benchmarking.md")]
    mod benchmarking {}
}
