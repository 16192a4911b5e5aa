use thiserror::Error;

use crate::graph::VertexId;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("vertex {vertex} out of range (graph has {n} vertices)")]
    VertexOutOfRange { vertex: VertexId, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(VertexId),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(VertexId, VertexId),
    #[error("duplicate arc {0}->{1}")]
    DuplicateArc(VertexId, VertexId),
    #[error("arc {0}->{1} is not an edge of the graph")]
    NotAnEdge(VertexId, VertexId),
    #[error("orientation is partial: {missing} of {total} edges have no direction")]
    PartialOrientation { missing: usize, total: usize },
    #[error("{got} labels given for {n} vertices")]
    LabelCount { got: usize, n: usize },
    #[error("source and sink must differ (both are {0})")]
    SourceEqualsSink(VertexId),
}

/// Line-numbered diagnostics for the text formats.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: malformed header: {msg}")]
    MalformedHeader { line: usize, msg: String },
    #[error("missing header line")]
    MissingHeader,
    #[error("line {line}: malformed line: {msg}")]
    MalformedLine { line: usize, msg: String },
    #[error("line {line}: vertex id {id} out of range 1..={n}")]
    VertexOutOfRange { line: usize, id: i64, n: usize },
    #[error("line {line}: self-loop at vertex {id}")]
    SelfLoop { line: usize, id: usize },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: usize, v: usize },
    #[error("header announces {expected} {what}, found {found}")]
    CountMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },
    #[error("line {line}: bag id {id} out of range 1..={count}")]
    BagOutOfRange { line: usize, id: i64, count: usize },
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("graph is disconnected; every component would need its own source and sink")]
    Disconnected,
    #[error("graph has {0} vertices; an st-orientation needs two distinct endpoints")]
    TooFewVertices(usize),
    #[error("tree decomposition does not match the graph: {0}")]
    DecompositionMismatch(String),
    #[error("bag of size {size} exceeds the supported maximum of {max}")]
    BagTooLarge { size: usize, max: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("exhaustive search refused: {got} edges exceeds the cap of {cap}")]
    TooManyEdges { got: usize, cap: usize },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("formula has {got} variables; brute force is capped at {cap}")]
    TooManyVariables { got: usize, cap: usize },
    #[error("clause {clause} has {got} literals, expected 3")]
    ClauseArity { clause: usize, got: usize },
    #[error("clause {clause} references variable {var} outside 1..={n}")]
    VariableOutOfRange { clause: usize, var: i64, n: usize },
    #[error("gadget library: {0}")]
    Library(String),
    #[error(transparent)]
    Format(#[from] FormatError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
