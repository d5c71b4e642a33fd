use serde::Serialize;

use super::cost::{cost_bound, BoundParams, CostBound};
use crate::error::{ensure, Result};
use crate::linalg::fit_line;

#[derive(Debug, Clone, Serialize)]
pub struct RegimeRow {
    pub t: f64,
    /// Bound on `C_T` per name, in the order requested.
    pub values: Vec<f64>,
    pub best: CostBound,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegimeClass {
    pub bound: CostBound,
    /// Least-squares slope of `ln bound` against `1/T` over the three smallest
    /// horizons, which approximates `lim T·ln bound`.
    pub small_t_slope: f64,
    /// Least-squares slope of `ln bound` against `ln T` over the three largest
    /// horizons.
    pub large_t_exponent: f64,
    /// `√T · bound` at the largest horizon.
    pub large_t_prefactor: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RegimeTable {
    pub bounds: Vec<CostBound>,
    pub rows: Vec<RegimeRow>,
    pub classes: Vec<RegimeClass>,
}

/// Evaluates each bound over a grid of horizons and classifies its small- and
/// large-time behaviour. Squared bounds are converted to bounds on `C_T`.
pub fn regime_table(bounds: &[CostBound], params: &BoundParams, t_grid: &[f64]) -> Result<RegimeTable> {
    ensure(!bounds.is_empty(), "names", "must be non-empty")?;
    ensure(!t_grid.is_empty(), "t_grid", "must be non-empty")?;
    let mut ts = t_grid.to_vec();
    ensure(
        ts.iter().all(|t| t.is_finite() && *t > 0.0),
        "t_grid",
        "entries must be positive",
    )?;
    ts.sort_by(f64::total_cmp);
    ts.dedup();

    let mut rows = Vec::with_capacity(ts.len());
    for &t in &ts {
        let p = params.with_t(t);
        let values = bounds
            .iter()
            .map(|&b| cost_bound(b, &p).map(|v| v.cost()))
            .collect::<Result<Vec<_>>>()?;
        let best = bounds[argmin(&values)];
        rows.push(RegimeRow { t, values, best });
    }

    let n = ts.len();
    let k = n.min(3);
    let mut classes = Vec::with_capacity(bounds.len());
    for (j, &bound) in bounds.iter().enumerate() {
        let ln_b: Vec<f64> = rows.iter().map(|r| r.values[j].ln()).collect();
        let (small_t_slope, large_t_exponent) = if n >= 2 {
            let inv: Vec<f64> = ts[..k].iter().map(|t| 1.0 / t).collect();
            let small = fit_line(&inv, &ln_b[..k])?.slope;
            let lt: Vec<f64> = ts[n - k..].iter().map(|t| t.ln()).collect();
            let large = fit_line(&lt, &ln_b[n - k..])?.slope;
            (small, large)
        } else {
            (ts[0] * ln_b[0], f64::NAN)
        };
        classes.push(RegimeClass {
            bound,
            small_t_slope,
            large_t_exponent,
            large_t_prefactor: ts[n - 1].sqrt() * rows[n - 1].values[j],
        });
    }
    Ok(RegimeTable {
        bounds: bounds.to_vec(),
        rows,
        classes,
    })
}

fn argmin(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, v) in values.iter().enumerate() {
        if *v < values[best] {
            best = i;
        }
    }
    best
}
