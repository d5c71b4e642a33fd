use nalgebra::DMatrix;

use super::boxes::periodic_pieces;
use super::set::{BallShape, ObservabilitySet};
use crate::error::{Error, Result};
use crate::spectral::potential::separable_fill;
use crate::spectral::SpectralBasis;
use crate::trig::product_integral;

/// `M_jk = ∫_{S∩Ω} φ_j φ_k`, assembled from exact 1D integrals.
pub fn gram_matrix(basis: &SpectralBasis, set: &ObservabilitySet) -> Result<DMatrix<f64>> {
    let n = basis.len();
    let dom = &basis.domain;
    if let Some(d) = set.dim() {
        dom.check_same_dim(d, "observation set")?;
    }
    let mut m = DMatrix::zeros(n, n);
    match set {
        ObservabilitySet::Full => return Ok(DMatrix::identity(n, n)),
        ObservabilitySet::Empty => {}
        ObservabilitySet::PeriodicBoxes(p) => {
            for b in &p.boxes {
                let pieces: Vec<Vec<(f64, f64)>> = (0..p.dim())
                    .map(|a| periodic_pieces(b.lo[a], b.hi[a], p.period[a], dom.lower[a], dom.upper(a)))
                    .collect();
                if pieces.iter().any(|v| v.is_empty()) {
                    continue;
                }
                separable_fill(basis, &mut m, 1.0, |axis, f, g| {
                    pieces[axis].iter().map(|(x, y)| product_integral(f, g, *x, *y)).sum()
                });
            }
        }
        ObservabilitySet::EquidistributedBalls(fam) => {
            if fam.shape == BallShape::Ball {
                return Err(Error::Unsupported("Gram matrices of 3D ball families".into()));
            }
            for b in fam.boxes() {
                let clipped: Vec<(f64, f64)> = (0..fam.dim())
                    .map(|a| (b.lo[a].max(dom.lower[a]), b.hi[a].min(dom.upper(a))))
                    .collect();
                if clipped.iter().any(|(x, y)| y <= x) {
                    continue;
                }
                separable_fill(basis, &mut m, 1.0, |axis, f, g| {
                    let (x, y) = clipped[axis];
                    product_integral(f, g, x, y)
                });
            }
        }
    }
    Ok(m)
}
