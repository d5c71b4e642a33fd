//! Small dense linear-algebra helpers on top of nalgebra.

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::error::{Error, Result};

/// Symmetric eigendecomposition with eigenvalues sorted ascending.
///
/// The input is symmetrized first; columns of the returned matrix are the
/// matching orthonormal eigenvectors.
pub fn sym_eigen(m: &DMatrix<f64>) -> Result<(DVector<f64>, DMatrix<f64>)> {
    let n = m.nrows();
    if n != m.ncols() {
        return Err(Error::Domain(format!(
            "eigendecomposition of a non-square {}x{} matrix",
            n,
            m.ncols()
        )));
    }
    if m.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("non-finite matrix entry".into()));
    }
    if n == 0 {
        return Ok((DVector::zeros(0), DMatrix::zeros(0, 0)));
    }
    // Normalise and flush subnormal entries: the QR iteration can overflow on
    // matrices whose entries span the whole exponent range.
    let peak = m.amax();
    if peak == 0.0 {
        return Ok((DVector::zeros(n), DMatrix::identity(n, n)));
    }
    let sym = ((m + m.transpose()) * (0.5 / peak)).map(|v| if v.abs() < f64::MIN_POSITIVE { 0.0 } else { v });
    let eig = SymmetricEigen::new(sym.clone());
    let (mut vals, vecs) = if decomposition_holds(&sym, &eig.eigenvalues, &eig.eigenvectors) {
        (eig.eigenvalues, eig.eigenvectors)
    } else {
        // The QR iteration can return garbage on strongly graded matrices;
        // cyclic Jacobi is slower but reliable there.
        let (v, q) = jacobi_eigen(sym);
        if !decomposition_holds_loose(&v, &q) {
            return Err(Error::Numeric("symmetric eigensolver did not converge".into()));
        }
        (v, q)
    };
    vals *= peak;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
    let values = DVector::from_iterator(n, order.iter().map(|&i| vals[i]));
    let mut vectors = DMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &vecs.column(src));
    }
    Ok((values, vectors))
}

/// Residual and orthogonality check of `m = V diag(λ) Vᵀ` for `‖m‖_max = 1`.
fn decomposition_holds(m: &DMatrix<f64>, vals: &DVector<f64>, vecs: &DMatrix<f64>) -> bool {
    if !decomposition_holds_loose(vals, vecs) {
        return false;
    }
    let n = m.nrows();
    let residual = m * vecs - vecs * DMatrix::from_diagonal(vals);
    let ortho = vecs.transpose() * vecs - DMatrix::identity(n, n);
    let tol = 1e-10 * (n as f64).sqrt();
    residual.amax() <= tol && ortho.amax() <= tol
}

fn decomposition_holds_loose(vals: &DVector<f64>, vecs: &DMatrix<f64>) -> bool {
    vals.iter().chain(vecs.iter()).all(|v| v.is_finite())
}

/// Cyclic Jacobi rotations until the off-diagonal part is negligible.
fn jacobi_eigen(mut a: DMatrix<f64>) -> (DVector<f64>, DMatrix<f64>) {
    let n = a.nrows();
    let mut v = DMatrix::identity(n, n);
    for _ in 0..100 {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)] * a[(i, j)])
            .sum();
        if off.sqrt() <= f64::EPSILON * 1e-2 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[(q, q)] - a[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }
    (a.diagonal(), v)
}

/// Smallest eigenvalue of a symmetric matrix.
pub fn lambda_min(m: &DMatrix<f64>) -> Result<f64> {
    let (vals, _) = sym_eigen(m)?;
    vals.iter()
        .copied()
        .next()
        .ok_or_else(|| Error::Domain("empty matrix".into()))
}

/// Largest eigenvalue of a symmetric matrix.
pub fn lambda_max(m: &DMatrix<f64>) -> Result<f64> {
    let (vals, _) = sym_eigen(m)?;
    vals.iter()
        .copied()
        .last()
        .ok_or_else(|| Error::Domain("empty matrix".into()))
}

/// Largest absolute asymmetry relative to the largest entry.
pub fn relative_asymmetry(m: &DMatrix<f64>) -> f64 {
    let scale = m.amax().max(f64::MIN_POSITIVE);
    (m - m.transpose()).amax() / scale
}

/// Ordinary least-squares line `y ≈ intercept + slope·x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub max_residual: f64,
}

pub fn fit_line(x: &[f64], y: &[f64]) -> Result<LineFit> {
    if x.len() != y.len() || x.len() < 2 {
        return Err(Error::param("points", "need at least two (x, y) pairs of equal length"));
    }
    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let sxx: f64 = x.iter().map(|v| (v - mx) * (v - mx)).sum();
    let sxy: f64 = x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum();
    let syy: f64 = y.iter().map(|v| (v - my) * (v - my)).sum();
    if sxx <= 0.0 {
        return Err(Error::param("points", "abscissae are all equal"));
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss_res: f64 = x
        .iter()
        .zip(y)
        .map(|(a, b)| {
            let r = b - intercept - slope * a;
            r * r
        })
        .sum();
    let max_residual = x
        .iter()
        .zip(y)
        .map(|(a, b)| (b - intercept - slope * a).abs())
        .fold(0.0, f64::max);
    let r_squared = if syy > 0.0 { 1.0 - ss_res / syy } else { 1.0 };
    Ok(LineFit {
        slope,
        intercept,
        r_squared,
        max_residual,
    })
}
