use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The unspecified positive constants appearing in the closed-form bounds.
/// All default to 1; a calibration run may replace some of them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct UniversalConstants {
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub k5: f64,
    /// Carleman-type constant of the equidistributed-set estimates.
    pub k: f64,
    pub d1: f64,
    pub d2: f64,
    pub d3: f64,
    pub d4: f64,
    pub c1: f64,
    pub c2: f64,
    pub c3: f64,
    pub c4: f64,
    pub n1: f64,
    pub n2: f64,
    pub n3: f64,
}

impl Default for UniversalConstants {
    fn default() -> Self {
        Self {
            k1: 1.0,
            k2: 1.0,
            k3: 1.0,
            k4: 1.0,
            k5: 1.0,
            k: 1.0,
            d1: 1.0,
            d2: 1.0,
            d3: 1.0,
            d4: 1.0,
            c1: 1.0,
            c2: 1.0,
            c3: 1.0,
            c4: 1.0,
            n1: 1.0,
            n2: 1.0,
            n3: 1.0,
        }
    }
}

impl UniversalConstants {
    pub fn validate(&self) -> Result<()> {
        let named = [
            ("k1", self.k1),
            ("k2", self.k2),
            ("k3", self.k3),
            ("k4", self.k4),
            ("k5", self.k5),
            ("k", self.k),
            ("d1", self.d1),
            ("d2", self.d2),
            ("d3", self.d3),
            ("d4", self.d4),
            ("c1", self.c1),
            ("c2", self.c2),
            ("c3", self.c3),
            ("c4", self.c4),
            ("n1", self.n1),
            ("n2", self.n2),
            ("n3", self.n3),
        ];
        for (name, v) in named {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::param(name, "universal constants must be positive"));
            }
        }
        Ok(())
    }
}
