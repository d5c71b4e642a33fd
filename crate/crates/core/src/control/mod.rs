//! Null-controls of the truncated controlled heat equation: the Gramian and
//! its minimal-norm control, the empirical cost, the active/passive phase
//! construction, the closed-form mild solution, and the Douglas
//! factorisation behind observability/controllability duality.

pub mod active_passive;
pub mod douglas;
pub mod gramian;
pub mod report;
pub mod signal;
pub mod system;

pub use active_passive::{
    active_passive_schedule, active_passive_synthesize, ActivePassiveRun, PhaseDiagnostics, PhaseSchedule,
};
pub use douglas::{douglas_factorize, DouglasFactor};
pub use gramian::{empirical_cost, min_norm_control, EmpiricalCost, GramianFactor, GramianOptions, MinNormControl};
pub use report::{BoundEntry, CostReport};
pub use signal::{duhamel_solve, state_at, ControlSignal, Phase, Trajectory};
pub use system::{exp_integral, ControlSystem};
