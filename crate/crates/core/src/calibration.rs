//! Envelope fits that replace the default universal constants by the
//! smallest values consistent with empirical data.

use serde::Serialize;

use crate::bounds::{cost_bound, BoundParams, CostBound};
use crate::control::{empirical_cost, ControlSystem, GramianOptions};
use crate::error::{ensure, Error, Result};
use crate::geometry::{ObservabilitySet, ThickParams};
use crate::spectral::OperatorHandle;
use crate::uncertainty::{fit_uncertainty_form, SpectralInequality, UcpBound, UncertaintyFit, UniversalConstants};

/// Smallest `K5 ≥ 1` for which the spectral-cube lower bound does not exceed
/// any empirical constant in `pairs` of `(E, C_emp)`.
pub fn calibrate_k5(thick: &ThickParams, pairs: &[(f64, f64)], base: &UniversalConstants) -> Result<f64> {
    ensure(!pairs.is_empty(), "pairs", "must be non-empty")?;
    ensure(thick.gamma < 1.0, "gamma", "the envelope needs γ < 1")?;
    let holds = |k5: f64| -> Result<bool> {
        let c = UniversalConstants { k5, ..base.clone() };
        for &(e, emp) in pairs {
            let b = UcpBound::SpectralCube {
                thick: thick.clone(),
                e,
            }
            .evaluate(&c)?;
            if b > emp {
                return Ok(false);
            }
        }
        Ok(true)
    };
    if holds(1.0)? {
        return Ok(1.0);
    }
    let mut hi = 2.0;
    while !holds(hi)? {
        hi *= 2.0;
        if hi > 1e6 {
            return Err(Error::Numeric("no admissible K5 below 1e6".into()));
        }
    }
    let mut lo = hi / 2.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if holds(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(hi)
}

/// Smallest `D1` making the thick-set cost bound an upper envelope of the
/// empirical costs in `costs` of `(T, C_T)`, other constants held fixed.
pub fn calibrate_thick2_d1(thick: &ThickParams, costs: &[(f64, f64)], base: &UniversalConstants) -> Result<f64> {
    ensure(!costs.is_empty(), "costs", "must be non-empty")?;
    let params = BoundParams {
        gamma: Some(thick.gamma),
        a: Some(thick.a.clone()),
        constants: UniversalConstants {
            d1: 1.0,
            ..base.clone()
        },
        ..Default::default()
    };
    let mut d1: f64 = 0.0;
    for &(t, c) in costs {
        let unit = cost_bound(CostBound::Thick2, &params.with_t(t))?.value;
        d1 = d1.max(c / unit);
    }
    Ok(d1.max(f64::MIN_POSITIVE))
}

/// Energy levels for the spectral sweep, horizons for the cost sweep and the
/// energy exponent of the uncertainty fit.
#[derive(Debug, Clone)]
pub struct CalibrationGrid {
    pub e_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    pub s: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Calibration {
    pub constants: UniversalConstants,
    pub fit: UncertaintyFit,
    pub spectral: Vec<(f64, f64)>,
    pub costs: Vec<(f64, f64)>,
}

/// Runs the empirical sweeps for one operator and set and returns the
/// calibrated constants (`k5` and `d1` replaced) with the raw data.
pub fn calibrate(
    op: &OperatorHandle,
    set: &ObservabilitySet,
    thick: &ThickParams,
    grid: &CalibrationGrid,
    base: &UniversalConstants,
    opts: &GramianOptions,
) -> Result<Calibration> {
    base.validate()?;
    let ineq = SpectralInequality::new(op, set)?;
    let values = ineq.sweep(&grid.e_grid)?;
    let spectral: Vec<(f64, f64)> = grid.e_grid.iter().copied().zip(values).collect();
    let fit = fit_uncertainty_form(&spectral, grid.s)?;
    let k5 = calibrate_k5(thick, &spectral, base)?;
    let sys = ControlSystem::new(op, set)?;
    let costs = grid
        .t_grid
        .iter()
        .map(|&t| empirical_cost(&sys, t, opts).map(|c| (t, c.cost)))
        .collect::<Result<Vec<_>>>()?;
    let d1 = calibrate_thick2_d1(thick, &costs, base)?;
    Ok(Calibration {
        constants: UniversalConstants { k5, d1, ..base.clone() },
        fit,
        spectral,
        costs,
    })
}
