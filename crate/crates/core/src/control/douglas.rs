//! Range inclusion `Ran X ⊆ Ran Y` and the minimal factor `X = Y Z`.

use nalgebra::DMatrix;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::sym_eigen;

#[derive(Debug, Clone, Serialize)]
pub struct DouglasFactor {
    pub range_inclusion: bool,
    /// `‖(I − P_{Ran Y}) X‖₂`.
    pub residual: f64,
    /// `‖Y⁺X‖₂` when the inclusion holds.
    pub c_min: Option<f64>,
    /// `sup_{Y*z ≠ 0} ‖X*z‖ / ‖Y*z‖`, computed independently of `c_min`.
    pub sup_ratio: Option<f64>,
    pub z_min: Option<DMatrix<f64>>,
}

/// Tests `Ran X ⊆ Ran Y` at relative tolerance `tol` and returns the
/// minimal-norm factor `Z = Y⁺X`.
pub fn douglas_factorize(x: &DMatrix<f64>, y: &DMatrix<f64>, tol: f64) -> Result<DouglasFactor> {
    if x.nrows() != y.nrows() {
        return Err(Error::param("X", "X and Y must have the same number of rows"));
    }
    if !(tol > 0.0) {
        return Err(Error::param("tol", "must be positive"));
    }
    let svd = y.clone().svd(true, true);
    let (u, vt) = match (svd.u, svd.v_t) {
        (Some(u), Some(vt)) => (u, vt),
        _ => return Err(Error::Numeric("SVD did not return singular vectors".into())),
    };
    let s_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| svd.singular_values[i] > tol * s_max.max(f64::MIN_POSITIVE))
        .collect();
    let ur = DMatrix::from_fn(y.nrows(), keep.len(), |i, j| u[(i, keep[j])]);
    let proj = &ur * (ur.transpose() * x);
    let residual = spectral_norm(&(x - &proj));
    let x_norm = spectral_norm(x);
    let range_inclusion = residual <= tol * x_norm.max(s_max).max(1.0);
    if !range_inclusion {
        return Ok(DouglasFactor {
            range_inclusion,
            residual,
            c_min: None,
            sup_ratio: None,
            z_min: None,
        });
    }
    // Z = V_r Σ_r⁻¹ U_rᵀ X
    let vr = DMatrix::from_fn(y.ncols(), keep.len(), |i, j| {
        vt[(keep[j], i)] / svd.singular_values[keep[j]]
    });
    let z = vr * (ur.transpose() * x);
    let c_min = spectral_norm(&z);
    let sup_ratio = sup_ratio(x, y, tol)?;
    Ok(DouglasFactor {
        range_inclusion,
        residual,
        c_min: Some(c_min),
        sup_ratio: Some(sup_ratio),
        z_min: Some(z),
    })
}

/// `sup ‖X*z‖/‖Y*z‖` through the eigendecomposition of `Y Yᵀ`.
fn sup_ratio(x: &DMatrix<f64>, y: &DMatrix<f64>, tol: f64) -> Result<f64> {
    let (eta, w) = sym_eigen(&(y * y.transpose()))?;
    let top = eta.iter().copied().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..eta.len()).filter(|&i| eta[i] > tol * tol * top).collect();
    if keep.is_empty() {
        return Ok(0.0);
    }
    let scaled = DMatrix::from_fn(w.nrows(), keep.len(), |i, j| w[(i, keep[j])] / eta[keep[j]].sqrt());
    let m = scaled.transpose() * x;
    let (vals, _) = sym_eigen(&(&m * m.transpose()))?;
    Ok(vals[vals.len() - 1].max(0.0).sqrt())
}

fn spectral_norm(m: &DMatrix<f64>) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    m.singular_values().iter().copied().fold(0.0, f64::max)
}
