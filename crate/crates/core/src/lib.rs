//! Spectral-Galerkin toolkit for null-controllability of heat-type
//! semigroups on tori and boxes: empirical spectral-inequality constants,
//! minimal-norm and active/passive null-controls, and closed-form cost bounds.

// `!(x > 0.0)` style guards are used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod calibration;
pub mod control;
pub mod error;
pub mod exhaustion;
pub mod geometry;
pub mod linalg;
pub mod quadrature;
pub mod spectral;
pub mod trig;
pub mod uncertainty;

pub use error::{Error, Result};
