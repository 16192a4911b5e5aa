//! st-orientations with few transitive edges: an exact solver over nice
//! tree decompositions, an exhaustive reference oracle, tree-decomposition
//! tooling and a generator for NAE-3-SAT hardness instances.
//!
//! ```
//! use storient::{nice_decomposition, solve, solve_min, Instance, UndirectedGraph};
//!
//! let k4 = UndirectedGraph::new(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])?;
//! let ntd = nice_decomposition(&k4);
//! let report = solve_min(&Instance::free(k4.clone(), 0), &ntd)?;
//! assert_eq!(report.min_cost(), Some(3));
//!
//! let inst = Instance::new(k4, Some(0), Some(3), 2)?;
//! assert!(!solve(&inst, &ntd)?.is_yes());
//! # Ok::<(), Box<dyn std::error::Error>>(())
//! ```

pub mod dp;
pub mod error;
pub mod format;
pub mod graph;
pub mod oracle;
pub mod random;
pub mod reduction;
pub mod treedecomp;
pub mod verify;

pub use dp::{solve, solve_min, NodeStats, Outcome, SolveReport};
pub use error::{FormatError, GraphError, OracleError, ReductionError, SolveError};
pub use graph::{Digraph, Instance, Orientation, UndirectedGraph, VertexId};
pub use treedecomp::{
    heuristic_decompose, make_nice, nice_decomposition, NiceTreeDecomposition, NodeKind,
    TreeDecomposition,
};
pub use verify::{check_st_orientation, Verdict};
