//! Structure learning over Markov equivalence classes of Bayesian networks.
//!
//! Classes are represented by their essential graphs. The crate provides the
//! graph machinery (chordality, essential graph construction and validation,
//! class enumeration), the inclusion boundary neighbourhood of a class with
//! incremental score deltas, decomposable scores over categorical data, a
//! greedy hill climber, and brute-force oracles for small graphs.

pub mod chordal;
pub mod error;
pub mod essential;
pub mod graph;
pub mod io;
pub mod neighbourhood;
pub mod oracle;
pub mod scoring;
pub mod search;

pub use error::{DataError, GraphError, ParseError, SearchError};
pub use essential::{essentialize, validate_essential, EssentialGraph};
pub use graph::{MixedGraph, VStructure, VertexId, VertexSet};
pub use io::{format_graph, parse_graph, NamedGraph};
pub use neighbourhood::{inclusion_boundary, EnumerationLimits, Neighbour, Neighbourhood};
pub use scoring::{Dataset, Metric, Scorer};
pub use search::{hill_climb, SearchConfig, SearchTrace};
