use serde::{Deserialize, Serialize};

use super::boxes::AxisBox;
use super::set::ObservabilitySet;
use crate::error::{ensure, Result};

/// The three periodic test sets used for sharpness and homogenization
/// experiments, all with period `scale` on every axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum ExampleSet {
    /// Cell `[−1/2, 1/2)`: two bands of width `γ/2` at the cell edges along
    /// the first axis, full along the others. `(γ, scale)`-thick.
    EdgeBands { gamma: f64 },
    /// Cell `[0, 1)^d`: the centred cube band `[1/2 − ε/2, 1/2 + ε/2]^d`.
    /// `(ε^d, scale)`-thick.
    CenteredBand { eps: f64 },
    /// Cell `[0, 1)`: the band `[0, γ]` along the first axis.
    InitialBand { gamma: f64 },
}

impl ExampleSet {
    pub fn build(&self, dim: usize, scale: f64) -> Result<ObservabilitySet> {
        ensure((1..=3).contains(&dim), "dimension", "must be 1, 2 or 3")?;
        ensure(scale.is_finite() && scale > 0.0, "scale", "must be positive")?;
        let full_lo = |lo0: f64| vec![lo0; dim];
        match *self {
            ExampleSet::EdgeBands { gamma } => {
                ensure(gamma > 0.0 && gamma <= 1.0, "gamma", "must lie in (0, 1]")?;
                let origin = full_lo(-0.5 * scale);
                let period = vec![scale; dim];
                let band = |a: f64, b: f64| {
                    let mut lo = origin.clone();
                    let mut hi: Vec<f64> = origin.iter().map(|o| o + scale).collect();
                    lo[0] = a * scale;
                    hi[0] = b * scale;
                    AxisBox::new(lo, hi)
                };
                let boxes = vec![band(-0.5, -0.5 + gamma / 2.0)?, band(0.5 - gamma / 2.0, 0.5)?];
                ObservabilitySet::periodic(origin, period, boxes)
            }
            ExampleSet::CenteredBand { eps } => {
                ensure(eps > 0.0 && eps < 1.0, "eps", "must lie in (0, 1)")?;
                let lo = vec![(0.5 - eps / 2.0) * scale; dim];
                let hi = vec![(0.5 + eps / 2.0) * scale; dim];
                ObservabilitySet::periodic(vec![0.0; dim], vec![scale; dim], vec![AxisBox::new(lo, hi)?])
            }
            ExampleSet::InitialBand { gamma } => {
                ensure(gamma > 0.0 && gamma < 1.0, "gamma", "must lie in (0, 1)")?;
                let lo = vec![0.0; dim];
                let mut hi = vec![scale; dim];
                hi[0] = gamma * scale;
                ObservabilitySet::periodic(vec![0.0; dim], vec![scale; dim], vec![AxisBox::new(lo, hi)?])
            }
        }
    }

    /// Thickness `γ` of the example with window `a = scale`.
    pub fn gamma(&self, dim: usize) -> f64 {
        match *self {
            ExampleSet::EdgeBands { gamma } | ExampleSet::InitialBand { gamma } => gamma,
            ExampleSet::CenteredBand { eps } => eps.powi(dim as i32),
        }
    }
}
