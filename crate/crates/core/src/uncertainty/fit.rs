use serde::{Deserialize, Serialize};

use crate::error::{ensure, Error, Result};
use crate::linalg::fit_line;

/// `C_ur(E) = d0 · exp(d1 · E₊^s)`, fitted so that `1 / C_ur` lies below the
/// empirical constants on the fit grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UncertaintyFit {
    pub d0: f64,
    pub d1: f64,
    pub s: f64,
    /// Largest absolute residual of the least-squares line in `−ln C`.
    pub residual: f64,
    pub r_squared: f64,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
}

impl UncertaintyFit {
    pub fn c_ur(&self, e: f64) -> f64 {
        self.d0 * (self.d1 * e.max(0.0).powf(self.s)).exp()
    }

    /// Lower envelope `1 / C_ur(E)` for the spectral-inequality constant.
    pub fn envelope(&self, e: f64) -> f64 {
        1.0 / self.c_ur(e)
    }
}

/// Least-squares fit of `−ln C ≈ ln d0 + d1 E₊^s`, with `d1` clamped at zero
/// and `d0` raised until the envelope holds at every grid point.
pub fn fit_uncertainty_form(pairs: &[(f64, f64)], s: f64) -> Result<UncertaintyFit> {
    ensure(pairs.len() >= 3, "pairs", "need at least three (E, C) pairs")?;
    ensure(s > 0.0 && s < 1.0, "s", "must lie in (0, 1)")?;
    for (e, c) in pairs {
        if !e.is_finite() || !c.is_finite() {
            return Err(Error::param("pairs", "values must be finite"));
        }
        if *c <= 0.0 {
            return Err(Error::DegenerateSet(format!(
                "spectral-inequality constant vanishes at E = {e}"
            )));
        }
    }
    let x: Vec<f64> = pairs.iter().map(|(e, _)| e.max(0.0).powf(s)).collect();
    let y: Vec<f64> = pairs.iter().map(|(_, c)| -c.ln()).collect();
    let (slope, intercept, residual, r_squared) = match fit_line(&x, &y) {
        Ok(f) => (f.slope, f.intercept, f.max_residual, f.r_squared),
        // all abscissae equal: flat model
        Err(_) => {
            let mean = y.iter().sum::<f64>() / y.len() as f64;
            let res = y.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
            (0.0, mean, res, 1.0)
        }
    };
    let d1 = slope.max(0.0);
    let base = if slope < 0.0 {
        y.iter().sum::<f64>() / y.len() as f64
    } else {
        intercept
    };
    let envelope = x
        .iter()
        .zip(&y)
        .map(|(xi, yi)| yi - d1 * xi)
        .fold(f64::NEG_INFINITY, f64::max);
    let ln_d0 = base.max(envelope);
    Ok(UncertaintyFit {
        d0: ln_d0.exp(),
        d1,
        s,
        residual,
        r_squared,
        grid: pairs.iter().map(|p| p.0).collect(),
        values: pairs.iter().map(|p| p.1).collect(),
    })
}
