//! Angles between projections in normed spaces and the machinery around
//! them: averaged projections with convergence certificates, projection
//! families indexed by the faces of a simplex and their space
//! decompositions, spectral gaps of bipartite link graphs, and finite group
//! models that connect link spectra to angles between averaging operators.

pub mod config;
pub mod error;
pub mod groups;
pub mod linalg;
pub mod projections;
pub mod simplex;
pub mod spectra;

pub use config::Tolerances;
pub use error::{Error, Result};
