use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::geometry::{gram_matrix, ObservabilitySet};
use crate::spectral::OperatorHandle;

/// `∂u/∂t + Au = Bf` written in the eigenbasis of `A`: eigenvalues `mu`
/// ascending and `input = B B*` as a matrix in that basis.
///
/// For interior control on a set `S`, `input` is the Gram matrix of `S`
/// conjugated into the eigenbasis. All state vectors handled by this module
/// are eigen-coordinates.
#[derive(Debug, Clone)]
pub struct ControlSystem {
    pub mu: DVector<f64>,
    pub input: DMatrix<f64>,
}

impl ControlSystem {
    pub fn new(op: &OperatorHandle, set: &ObservabilitySet) -> Result<Self> {
        let m = gram_matrix(&op.basis, set)?;
        let v = &op.eigvecs;
        let input = v.transpose() * m * v;
        Ok(Self {
            mu: op.eigvals.clone(),
            input: (&input + input.transpose()) * 0.5,
        })
    }

    pub fn from_parts(mu: Vec<f64>, input: DMatrix<f64>) -> Result<Self> {
        let n = mu.len();
        if n == 0 {
            return Err(Error::param("mu", "system must have at least one mode"));
        }
        if input.nrows() != n || input.ncols() != n {
            return Err(Error::param("input", "must be square with one row per mode"));
        }
        if mu.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::param("mu", "eigenvalues must be sorted ascending"));
        }
        if mu.iter().chain(input.iter()).any(|v| !v.is_finite()) {
            return Err(Error::param("input", "entries must be finite"));
        }
        Ok(Self {
            mu: DVector::from_vec(mu),
            input: (&input + input.transpose()) * 0.5,
        })
    }

    /// Rank-one scalar system `A = μ`, `B = c`.
    pub fn scalar(mu: f64, c: f64) -> Result<Self> {
        Self::from_parts(vec![mu], DMatrix::from_element(1, 1, c * c))
    }

    pub fn dim(&self) -> usize {
        self.mu.len()
    }

    /// Number of modes with `μ ≤ level`.
    pub fn count_below(&self, level: f64) -> usize {
        let slack = 1e-12 * level.abs().max(1.0);
        self.mu.iter().filter(|m| **m <= level + slack).count()
    }

    /// The system restricted to its `n` lowest modes.
    pub fn leading(&self, n: usize) -> Self {
        Self {
            mu: self.mu.rows(0, n).into_owned(),
            input: self.input.view((0, 0), (n, n)).into_owned(),
        }
    }

    /// Controllability Gramian `Q_T = ∫_0^T e^{−sA} B B* e^{−sA} ds`.
    pub fn gramian(&self, t: f64) -> Result<DMatrix<f64>> {
        if !(t.is_finite() && t > 0.0) {
            return Err(Error::param("T", "time horizon must be positive"));
        }
        let n = self.dim();
        Ok(DMatrix::from_fn(n, n, |j, k| {
            self.input[(j, k)] * exp_integral(self.mu[j] + self.mu[k], t)
        }))
    }

    /// `e^{−tA} u`.
    pub fn free(&self, t: f64, u: &DVector<f64>) -> DVector<f64> {
        DVector::from_fn(u.len(), |i, _| (-t * self.mu[i]).exp() * u[i])
    }
}

/// `∫_0^t e^{−σs} ds = (1 − e^{−σt})/σ`, equal to `t` at `σ = 0`.
pub fn exp_integral(sigma: f64, t: f64) -> f64 {
    if sigma == 0.0 {
        t
    } else {
        -(-sigma * t).exp_m1() / sigma
    }
}
