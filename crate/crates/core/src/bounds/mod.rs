//! Closed-form control-cost bounds, Miller's rate constant and regime
//! comparison over a range of horizons.

mod cost;
mod miller;
mod regime;

pub use cost::{cost_bound, BoundParams, BoundValue, CostBound, MillerParams, Validity};
pub use miller::{miller_cstar, miller_rhs, tenenbaum_threshold};
pub use regime::{regime_table, RegimeClass, RegimeRow, RegimeTable};
