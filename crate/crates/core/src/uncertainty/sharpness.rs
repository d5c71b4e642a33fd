//! The two explicit functions showing that the thickness-dependence of the
//! spectral inequalities cannot be improved much.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{ensure, Result};
use crate::quadrature::integrate;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SharpnessOutcome {
    pub ratio: f64,
    pub bound: f64,
    /// Whether the bound is claimed for these parameters.
    pub applies: bool,
    pub holds: bool,
}

/// `‖sin(2πx)^α‖_{L^p(band)} / ‖sin(2πx)^α‖_{L^p(0,1)}` with
/// `band = [1/2 − ε/2, 1/2 + ε/2]` and `α = ⌊b/4π⌋`, against
/// `(ε/(2/π²))^{b/4π − 1}`, which is claimed for `ε < 2/π²`.
pub fn sharpness_torus(eps: f64, b: f64, p: f64) -> Result<SharpnessOutcome> {
    ensure(eps > 0.0 && eps < 1.0, "eps", "must lie in (0, 1)")?;
    ensure(p.is_finite() && p >= 1.0, "p", "must be ≥ 1")?;
    ensure(b.is_finite() && b >= 8.0 * PI, "b", "must be ≥ 8π")?;
    let alpha = (b / (4.0 * PI)).floor();
    ensure(alpha >= 1.0, "b", "needs ⌊b/4π⌋ ≥ 1")?;
    let q = alpha * p;
    let f = |x: f64| (2.0 * PI * x).sin().abs().powf(q);
    let tol = 1e-13;
    let band = integrate(f, 0.5 - eps / 2.0, 0.5 + eps / 2.0, tol);
    // the full-period integral splits at the zero of the integrand
    let full = integrate(f, 0.0, 0.5, tol) + integrate(f, 0.5, 1.0, tol);
    let ratio = (band / full).powf(1.0 / p);
    let bound = (eps * PI * PI / 2.0).powf(b / (4.0 * PI) - 1.0);
    let applies = eps < 2.0 / (PI * PI);
    Ok(SharpnessOutcome {
        ratio,
        bound,
        applies,
        holds: !applies || ratio <= bound,
    })
}

/// Exact `‖sin(2bπx)‖_{L¹(0,γ)} / ‖sin(2bπx)‖_{L¹(0,1)}` against
/// `(π²/2) b γ²`.
pub fn sharpness_sparse(b: u32, gamma: f64) -> Result<SharpnessOutcome> {
    ensure(b >= 1, "b", "must be a positive integer")?;
    ensure(gamma > 0.0 && gamma <= 1.0, "gamma", "must lie in (0, 1]")?;
    let bf = b as f64;
    let half_period = 1.0 / (2.0 * bf);
    let n = (gamma / half_period + 1e-12).floor();
    let r = (gamma - n * half_period).max(0.0);
    let partial = n / (bf * PI) + (1.0 - (2.0 * bf * PI * r).cos()) / (2.0 * bf * PI);
    let ratio = partial / (2.0 / PI);
    let bound = PI * PI / 2.0 * bf * gamma * gamma;
    Ok(SharpnessOutcome {
        ratio,
        bound,
        applies: true,
        holds: ratio <= bound,
    })
}
