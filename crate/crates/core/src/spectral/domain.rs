use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};

/// Boundary condition shared by all axes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    Periodic,
    Dirichlet,
    Neumann,
}

/// An axis-aligned box `∏ [lower_i, lower_i + side_i]` with a boundary condition.
///
/// Periodic boxes are tori; the other boundaries are ordinary boxes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    pub lower: Vec<f64>,
    pub sides: Vec<f64>,
    pub boundary: Boundary,
}

impl DomainSpec {
    pub fn new(lower: Vec<f64>, sides: Vec<f64>, boundary: Boundary) -> Result<Self> {
        let spec = Self { lower, sides, boundary };
        spec.validate()?;
        Ok(spec)
    }

    /// The torus `[0, 2πL]^d`.
    pub fn torus(dim: usize, scale: f64) -> Result<Self> {
        Self::new(vec![0.0; dim], vec![2.0 * PI * scale; dim], Boundary::Periodic)
    }

    /// The interval `(a, b)`.
    pub fn interval(a: f64, b: f64, boundary: Boundary) -> Result<Self> {
        Self::new(vec![a], vec![b - a], boundary)
    }

    /// The centred cube `(−L/2, L/2)^d`.
    pub fn centered_cube(dim: usize, edge: f64, boundary: Boundary) -> Result<Self> {
        Self::new(vec![-0.5 * edge; dim], vec![edge; dim], boundary)
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.sides.len();
        ensure((1..=3).contains(&d), "dimension", "must be 1, 2 or 3")?;
        ensure(self.lower.len() == d, "lower", "must have one entry per axis")?;
        ensure(
            self.sides.iter().all(|s| s.is_finite() && *s > 0.0),
            "sides",
            "side lengths must be positive and finite",
        )?;
        ensure(
            self.lower.iter().all(|x| x.is_finite()),
            "lower",
            "corner must be finite",
        )?;
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.sides.len()
    }

    pub fn upper(&self, axis: usize) -> f64 {
        self.lower[axis] + self.sides[axis]
    }

    pub fn volume(&self) -> f64 {
        self.sides.iter().product()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter()
            .enumerate()
            .all(|(i, v)| *v >= self.lower[i] && *v <= self.upper(i))
    }

    /// Frequency scale of a 1D mode index on `axis`: `√λ = unit · |k|`.
    pub(crate) fn unit_frequency(&self, axis: usize) -> f64 {
        match self.boundary {
            Boundary::Periodic => 2.0 * PI / self.sides[axis],
            Boundary::Dirichlet | Boundary::Neumann => PI / self.sides[axis],
        }
    }

    pub(crate) fn check_same_dim(&self, dim: usize, what: &str) -> Result<()> {
        if dim != self.dim() {
            return Err(Error::Domain(format!(
                "{what} has dimension {dim}, domain has dimension {}",
                self.dim()
            )));
        }
        Ok(())
    }
}
