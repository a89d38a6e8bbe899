use thiserror::Error;

use crate::essential::Violation;

/// Errors raised by graph construction and the graph algorithms built on it.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("vertices {a} and {b} are already adjacent")]
    EdgePresent { a: usize, b: usize },
    #[error("no arrow {a} -> {b}")]
    NoArrow { a: usize, b: usize },
    #[error("no line {a} -- {b}")]
    NoLine { a: usize, b: usize },
    #[error("graph contains arrows; an undirected graph is required")]
    NotUndirected,
    #[error("undirected graph is not chordal")]
    NotChordal,
    #[error("graph is not a DAG")]
    NotDag,
    #[error("prefix is not a sequence of distinct vertices inducing a complete subgraph")]
    PrefixNotComplete,
    #[error("ordering is not a permutation of the vertex set")]
    NotPermutation,
    #[error("graphs have different vertex counts ({0} vs {1})")]
    VertexCountMismatch(usize, usize),
    #[error("line {a} -- {b} lies in a triangle of lines with {h}")]
    TriangleOfLines { a: usize, b: usize, h: usize },
    #[error("not an essential graph: {0}")]
    NotEssential(Violation),
    #[error("vertex count {n} exceeds the enumeration limit of {max}")]
    TooManyVertices { n: usize, max: usize },
    #[error("graph has no consistent extension")]
    NoExtension,
    #[error("graph is not the edge union of any equivalence class")]
    UnknownClass,
}

/// Errors from the text graph format.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("missing `vertices:` header")]
    MissingHeader,
    #[error("line {line}: unknown vertex `{name}`")]
    UnknownVertex { line: usize, name: String },
    #[error("duplicate vertex name `{0}`")]
    DuplicateVertex(String),
    #[error("line {line}: {source}")]
    Graph {
        line: usize,
        #[source]
        source: GraphError,
    },
}

/// Errors raised while loading data or computing scores.
#[derive(Debug, Error)]
pub enum DataError {
    #[error("dataset has no rows")]
    Empty,
    #[error("variable `{0}` has arity 0")]
    ZeroArity(String),
    #[error("row {row}, variable `{variable}`: value {value} is not below arity {arity}")]
    ValueOutOfRange {
        row: usize,
        variable: String,
        value: u32,
        arity: usize,
    },
    #[error("row {row} has {found} cells, expected {expected}")]
    RowLength { row: usize, found: usize, expected: usize },
    #[error("declared {declared} arities for {variables} variables")]
    ArityCount { declared: usize, variables: usize },
    #[error("invalid local key: {0}")]
    InvalidKey(String),
    #[error("parent configuration space of vertex {0} is too large to index")]
    ConfigurationOverflow(usize),
    #[error("graph has {graph} vertices but the dataset has {data} variables")]
    VariableCount { graph: usize, data: usize },
    #[error("ESS must be a positive finite number, got {0}")]
    InvalidEss(f64),
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

/// Errors raised by the search driver.
#[derive(Debug, Error)]
pub enum SearchError {
    #[error("invalid search configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Data(#[from] DataError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
