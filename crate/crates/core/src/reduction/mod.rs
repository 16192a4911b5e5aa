//! NAE-3-SAT to st-orientation instance generation.

pub mod builders;
pub mod formula;
pub mod gadgets;
pub mod structure;

pub use builders::{build_g_phi, build_h_phi, build_j_phi, Reduced};
pub use formula::{nae_satisfiable, Nae3SatFormula};
pub use gadgets::GadgetLibrary;
pub use structure::{validate_structure, Claims, StructureViolation};
