//! Spectral-inequality constants: empirical values on spectral subspaces,
//! the `d0·exp(d1·E^s)` envelope fit, closed-form evaluators, the sharpness
//! examples and the eigenvalue-lifting check.

pub mod constants;
pub mod fit;
pub mod lifting;
pub mod sharpness;
pub mod spectral_ineq;
pub mod ucp;

pub use constants::UniversalConstants;
pub use fit::{fit_uncertainty_form, UncertaintyFit};
pub use lifting::{eigenvalue_lifting_check, LiftingReport, LiftingWeight};
pub use sharpness::{sharpness_sparse, sharpness_torus, SharpnessOutcome};
pub use spectral_ineq::{spectral_ineq_constant, SpectralInequality};
pub use ucp::{nttvs_optimum, PotentialRange, UcpBound};
