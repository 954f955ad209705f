//! Coloured operads of marked lattice paths, planar trees, brace trees, their
//! action on Hochschild cochains, and integer homology of the resulting
//! complexes.

pub mod brace_calculus;
pub mod cli;
pub mod error;
pub mod grid_paths;
pub mod hochschild;
pub mod homology_engine;
pub mod lattice_operad;
pub mod simplicial_ops;
pub mod tree_calculus;

pub use error::{OpError, Result};
