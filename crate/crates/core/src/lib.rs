//! Prime-graph, locally compact abelian and finite near-abelian group computations.

pub mod arith;
pub mod error;
pub mod group;
pub mod lattice;
pub mod lca;
pub mod primegraph;
pub mod structure;
pub mod validate;

pub use error::{Error, Result};
