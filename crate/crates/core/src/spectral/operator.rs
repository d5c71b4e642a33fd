use nalgebra::{DMatrix, DVector};

use super::basis::SpectralBasis;
use super::potential::PotentialSpec;
use crate::error::{Error, Result};
use crate::linalg::sym_eigen;

/// Galerkin matrix of `−Δ + V` (or a spectral power of it) with its
/// eigendecomposition, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct OperatorHandle {
    pub basis: SpectralBasis,
    pub matrix: DMatrix<f64>,
    pub eigvals: DVector<f64>,
    pub eigvecs: DMatrix<f64>,
    /// Spectral exponent applied to the underlying Schrödinger operator.
    pub power: f64,
}

impl OperatorHandle {
    /// The Laplacian itself: diagonal, eigenvectors are the identity.
    pub fn laplacian(basis: &SpectralBasis) -> Self {
        let n = basis.len();
        let eigvals = DVector::from_vec(basis.eigenvalues.clone());
        Self {
            basis: basis.clone(),
            matrix: DMatrix::from_diagonal(&eigvals),
            eigvals,
            eigvecs: DMatrix::identity(n, n),
            power: 1.0,
        }
    }

    /// Galerkin discretisation of `−Δ + V`.
    pub fn schrodinger(basis: &SpectralBasis, potential: &PotentialSpec) -> Result<Self> {
        if basis.is_empty() {
            return Err(Error::Domain("empty basis".into()));
        }
        if potential.is_zero() {
            return Ok(Self::laplacian(basis));
        }
        if let PotentialSpec::Constant { value } = potential {
            let mut op = Self::laplacian(basis);
            op.eigvals.add_scalar_mut(*value);
            op.matrix = DMatrix::from_diagonal(&op.eigvals);
            return Ok(op);
        }
        let mut matrix = potential.matrix(basis)?;
        for (j, l) in basis.eigenvalues.iter().enumerate() {
            matrix[(j, j)] += l;
        }
        let (eigvals, eigvecs) = sym_eigen(&matrix)?;
        Ok(Self {
            basis: basis.clone(),
            matrix,
            eigvals,
            eigvecs,
            power: 1.0,
        })
    }

    pub fn dim(&self) -> usize {
        self.eigvals.len()
    }

    /// Same eigenvectors, eigenvalues `μ ↦ μ^θ`.
    pub fn fractional(&self, theta: f64) -> Result<Self> {
        if !(theta.is_finite() && theta > 0.0) {
            return Err(Error::param("theta", "must be positive"));
        }
        if theta == 1.0 {
            return Ok(self.clone());
        }
        let scale = self.eigvals.amax().max(1.0);
        let mut mapped = self.eigvals.clone();
        for mu in mapped.iter_mut() {
            if *mu < -1e-12 * scale {
                return Err(Error::Domain(format!(
                    "fractional power of an operator with negative eigenvalue {mu}"
                )));
            }
            *mu = mu.max(0.0).powf(theta);
        }
        let matrix = &self.eigvecs * DMatrix::from_diagonal(&mapped) * self.eigvecs.transpose();
        Ok(Self {
            basis: self.basis.clone(),
            matrix,
            eigvals: mapped,
            eigvecs: self.eigvecs.clone(),
            power: self.power * theta,
        })
    }

    /// Number of eigenvalues `≤ level` (ranges of spectral projectors are
    /// always leading blocks of the eigenbasis).
    pub fn count_below(&self, level: f64) -> usize {
        let slack = 1e-12 * level.abs().max(1.0);
        self.eigvals.iter().filter(|mu| **mu <= level + slack).count()
    }

    /// Matrix of the spectral projector `χ_{(−∞, level]}` in basis coordinates.
    pub fn projector(&self, level: f64) -> DMatrix<f64> {
        let m = self.count_below(level);
        let v = self.eigvecs.columns(0, m);
        v * v.transpose()
    }

    /// `e^{−tA} u` for basis coefficients `u`.
    pub fn semigroup_apply(&self, t: f64, u: &DVector<f64>) -> Result<DVector<f64>> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("semigroup time must be ≥ 0, got {t}")));
        }
        if u.len() != self.dim() {
            return Err(Error::param("u", "length must match the basis size"));
        }
        let mut c = self.eigvecs.tr_mul(u);
        for (ci, mu) in c.iter_mut().zip(self.eigvals.iter()) {
            *ci *= (-t * mu).exp();
        }
        Ok(&self.eigvecs * c)
    }

    /// Basis coefficients to eigen coefficients.
    pub fn to_eigen(&self, u: &DVector<f64>) -> DVector<f64> {
        self.eigvecs.tr_mul(u)
    }

    /// Eigen coefficients back to basis coefficients.
    pub fn from_eigen(&self, c: &DVector<f64>) -> DVector<f64> {
        &self.eigvecs * c
    }
}
