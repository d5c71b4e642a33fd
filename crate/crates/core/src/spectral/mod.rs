//! Truncated Laplacian eigensystems on tori and boxes, Galerkin matrices of
//! Schrödinger operators, and exact semigroup / spectral-power evaluation.

pub mod basis;
pub mod domain;
pub mod operator;
pub mod potential;

pub use basis::{SpectralBasis, DEFAULT_MAX_MODES};
pub use domain::{Boundary, DomainSpec};
pub use operator::OperatorHandle;
pub use potential::{CosineTerm, FunctionPotential, PotentialSpec, WeightedBox};
