//! Observation sets (periodic box unions, equidistributed ball families and
//! the standard example sets), their thickness and complement density, and
//! exact Gram matrices against a spectral basis.

pub mod boxes;
pub mod equidistributed;
pub mod examples;
pub mod gram;
pub mod set;
pub mod thickness;

pub use boxes::AxisBox;
pub use equidistributed::{make_equidistributed, EquidistributedSpec, Placement};
pub use examples::ExampleSet;
pub use gram::gram_matrix;
pub use set::{BallFamily, BallShape, ObservabilitySet, PeriodicBoxes, ThickParams};
pub use thickness::{beta_complement, disc_rect_area, thickness_estimate, DEFAULT_OFFSETS};
