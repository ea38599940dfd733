//! Birkhoff-James orthogonality in finite-dimensional normed spaces:
//! exact and numeric verdicts, orthodigraphs, and Radon-plane checks.

pub mod acceptance;
pub mod bj;
pub mod cone;
pub mod error;
pub mod face;
pub mod field;
pub mod graph;
pub mod linalg;
pub mod norm;
pub mod oracle;
pub mod radon;
pub mod tolerance;
pub mod vector;

pub use bj::{is_bj_orthogonal, is_smooth, neighborhood_descriptor, NeighborhoodDescriptor, OrthoVerdict};
pub use error::{Error, Result};
pub use field::Q;
pub use norm::{parse_norm_spec, parse_norm_spec_file, NormSpec};
pub use tolerance::Tolerances;
pub use vector::{Scalar, Vector};
