use nalgebra::DMatrix;
use serde::Serialize;

use super::spectral_ineq::SpectralInequality;
use crate::error::{Error, Result};
use crate::geometry::{gram_matrix, ObservabilitySet};
use crate::spectral::{OperatorHandle, PotentialSpec};

/// Non-negative perturbation `W` in `H + tW`.
#[derive(Debug, Clone)]
pub enum LiftingWeight {
    Set(ObservabilitySet),
    Potential(PotentialSpec),
}

#[derive(Debug, Clone, Serialize)]
pub struct LiftingReport {
    pub eigenvalues: Vec<f64>,
    /// `d/dt μ_k(H + tW) = ⟨ψ_k, W ψ_k⟩` at `t = 0`.
    pub derivatives: Vec<f64>,
    /// Spectral-inequality constant of the reference set, if one was given.
    pub reference: Option<f64>,
    pub holds: bool,
}

/// Hellmann–Feynman derivatives for every eigenvalue `≤ e`, compared with the
/// spectral-inequality constant of `reference` (or of `W` itself when it is a
/// set). `reference` must satisfy `W ≥ χ_reference`.
pub fn eigenvalue_lifting_check(
    op: &OperatorHandle,
    weight: &LiftingWeight,
    reference: Option<&ObservabilitySet>,
    e: f64,
) -> Result<LiftingReport> {
    let w: DMatrix<f64> = match weight {
        LiftingWeight::Set(s) => gram_matrix(&op.basis, s)?,
        LiftingWeight::Potential(v) => {
            if v.inf_value() < 0.0 {
                return Err(Error::param("weight", "lifting weight must be non-negative"));
            }
            v.matrix(&op.basis)?
        }
    };
    let reference = match (reference, weight) {
        (Some(s), _) => Some(s.clone()),
        (None, LiftingWeight::Set(s)) => Some(s.clone()),
        (None, LiftingWeight::Potential(_)) => None,
    };
    let si = SpectralInequality::from_gram(op, &w);
    let n = si.count_below(e);
    if n == 0 {
        return Err(Error::Domain(format!("no eigenvalue at or below {e}")));
    }
    let derivatives: Vec<f64> = (0..n).map(|k| si.projected[(k, k)]).collect();
    let reference = match reference {
        Some(s) => Some(SpectralInequality::new(op, &s)?.constant(e)?),
        None => None,
    };
    let holds = reference.is_none_or(|c| derivatives.iter().all(|d| *d >= c - 1e-8));
    Ok(LiftingReport {
        eigenvalues: op.eigvals.iter().take(n).copied().collect(),
        derivatives,
        reference,
        holds,
    })
}
