//! Cluster maps, their log-canonical presymplectic and Poisson structures,
//! the reductions those structures induce, and the dynamics of the reduced
//! maps. All symbolic work is exact over ℚ; a configurable-precision float
//! mode is used only where irrational constants enter.

pub mod algebra;
pub mod dynamics;
pub mod error;
pub mod fixtures;
pub mod geometry;
pub mod io;
pub mod lattice;
pub mod pipeline;
pub mod quiver;
pub mod sampling;

pub use error::{Error, Result};
