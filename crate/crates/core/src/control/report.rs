use serde::Serialize;

use super::active_passive::PhaseDiagnostics;
use crate::uncertainty::UniversalConstants;

/// One theoretical bound evaluated at the report's parameters.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundEntry {
    pub name: String,
    pub value: f64,
    pub valid: bool,
}

/// Empirical cost at horizon `t` next to the theoretical bounds.
#[derive(Debug, Clone, Serialize)]
pub struct CostReport {
    pub t: f64,
    pub c_t_emp: f64,
    pub condition: f64,
    pub bounds: Vec<BoundEntry>,
    pub constants: UniversalConstants,
    pub phases: Vec<PhaseDiagnostics>,
}
