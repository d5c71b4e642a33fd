use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::geometry::{gram_matrix, ObservabilitySet};
use crate::linalg::lambda_min;
use crate::spectral::OperatorHandle;

/// The Gram matrix of an observation set conjugated into the eigenbasis of an
/// operator. Spectral subspaces are leading blocks, so the optimal
/// uncertainty constant at level `E` is the smallest eigenvalue of the
/// leading `n(E) × n(E)` block.
#[derive(Debug, Clone)]
pub struct SpectralInequality {
    pub eigvals: Vec<f64>,
    pub projected: DMatrix<f64>,
}

impl SpectralInequality {
    pub fn new(op: &OperatorHandle, set: &ObservabilitySet) -> Result<Self> {
        let m = gram_matrix(&op.basis, set)?;
        Ok(Self::from_gram(op, &m))
    }

    /// From a weight matrix in basis coordinates.
    pub fn from_gram(op: &OperatorHandle, m: &DMatrix<f64>) -> Self {
        let v = &op.eigvecs;
        let projected = v.transpose() * m * v;
        Self {
            eigvals: op.eigvals.iter().copied().collect(),
            projected: (&projected + projected.transpose()) * 0.5,
        }
    }

    pub fn count_below(&self, level: f64) -> usize {
        let slack = 1e-12 * level.abs().max(1.0);
        self.eigvals.iter().filter(|mu| **mu <= level + slack).count()
    }

    /// `C_emp(E)`, clamped into `[0, 1]`.
    pub fn constant(&self, level: f64) -> Result<f64> {
        let n = self.count_below(level);
        if n == 0 {
            return Err(Error::Domain(format!(
                "no eigenvalue at or below {level}; spectral subspace is empty"
            )));
        }
        let block = self.projected.view((0, 0), (n, n)).into_owned();
        Ok(lambda_min(&block)?.clamp(0.0, 1.0))
    }

    pub fn sweep(&self, levels: &[f64]) -> Result<Vec<f64>> {
        levels.iter().map(|e| self.constant(*e)).collect()
    }
}

/// Optimal constant `C` in `‖χ_S u‖² ≥ C‖u‖²` on `Ran χ_{(−∞,E]}(A)`.
pub fn spectral_ineq_constant(op: &OperatorHandle, set: &ObservabilitySet, level: f64) -> Result<f64> {
    SpectralInequality::new(op, set)?.constant(level)
}
