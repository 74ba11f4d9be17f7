//! Exact computations with hyperplane arrangements over ℚ. The k-adjoint of an
//! arrangement cuts the Grassmannian into strata; this crate locates subspaces
//! in those strata and compares them with the matroids obtained by restricting
//! the arrangement to each subspace.

pub mod adjoint;
pub mod arrangement;
pub mod catalog;
pub mod cli;
pub mod decompose;
pub mod error;
pub mod grassmann;
pub mod io;
pub mod lattice;
pub mod linalg;
pub mod matroid;

pub use error::{Error, Result};
