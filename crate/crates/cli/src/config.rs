//! JSON run configurations. Every file carries a `schema` version and unknown
//! fields are rejected.

use std::path::Path;

use heatctl_core::bounds::{BoundParams, CostBound};
use heatctl_core::control::{ControlSystem, GramianOptions};
use heatctl_core::exhaustion::ExhaustionRun;
use heatctl_core::geometry::{
    make_equidistributed, AxisBox, EquidistributedSpec, ExampleSet, ObservabilitySet, Placement, ThickParams,
};
use heatctl_core::spectral::{Boundary, DomainSpec, OperatorHandle, PotentialSpec, SpectralBasis, DEFAULT_MAX_MODES};
use heatctl_core::uncertainty::UniversalConstants;
use nalgebra::DVector;
use serde::de::DeserializeOwned;
use serde::Deserialize;

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

/// Reads and validates a config file, returning it with its canonical JSON
/// form (keys sorted) for hashing.
pub fn load<T: DeserializeOwned>(path: &Path) -> Result<(T, String), CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::param(format!("cannot read config {}: {e}", path.display())))?;
    let value: serde_json::Value =
        serde_json::from_str(&text).map_err(|e| CliError::param(format!("malformed config JSON: {e}")))?;
    match value.get("schema").and_then(|v| v.as_u64()) {
        Some(v) if v == SCHEMA_VERSION as u64 => {}
        Some(v) => {
            return Err(CliError::param(format!(
                "unsupported schema version {v} (expected {SCHEMA_VERSION})"
            )))
        }
        None => return Err(CliError::param("config must contain an integer `schema` field")),
    }
    let canonical = serde_json::to_string(&value).map_err(|e| CliError::runtime(e.to_string()))?;
    let parsed = serde_json::from_value(value).map_err(|e| CliError::param(format!("invalid config: {e}")))?;
    Ok((parsed, canonical))
}

pub fn load_constants(path: &Path) -> Result<UniversalConstants, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::param(format!("cannot read constants {}: {e}", path.display())))?;
    let c: UniversalConstants =
        serde_json::from_str(&text).map_err(|e| CliError::param(format!("invalid constants file: {e}")))?;
    c.validate()?;
    Ok(c)
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DomainConfig {
    /// `[0, 2π·scale]^dim`, periodic.
    Torus { dim: usize, scale: f64 },
    Box {
        lower: Vec<f64>,
        sides: Vec<f64>,
        boundary: Boundary,
    },
    /// `(−edge/2, edge/2)^dim`.
    CenteredCube { dim: usize, edge: f64, boundary: Boundary },
}

impl DomainConfig {
    pub fn build(&self) -> Result<DomainSpec, CliError> {
        Ok(match self {
            Self::Torus { dim, scale } => DomainSpec::torus(*dim, *scale)?,
            Self::Box { lower, sides, boundary } => DomainSpec::new(lower.clone(), sides.clone(), *boundary)?,
            Self::CenteredCube { dim, edge, boundary } => DomainSpec::centered_cube(*dim, *edge, *boundary)?,
        })
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PlacementConfig {
    Centered,
    /// Seeded uniform placement; the stream seed comes from `--seed`.
    Seeded,
    Explicit(Vec<Vec<f64>>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SetConfig {
    Full,
    Empty,
    Periodic {
        origin: Vec<f64>,
        period: Vec<f64>,
        boxes: Vec<AxisBox>,
    },
    /// A named example set with period `scale`, in the domain's dimension.
    Example {
        set: ExampleSet,
        scale: f64,
    },
    /// Balls of radius `delta` in the cells of side `g` covering the domain.
    Equidistributed {
        g: f64,
        delta: f64,
        placement: PlacementConfig,
    },
}

impl SetConfig {
    pub fn build(&self, domain: &DomainSpec, seed: u64) -> Result<ObservabilitySet, CliError> {
        Ok(match self {
            Self::Full => ObservabilitySet::Full,
            Self::Empty => ObservabilitySet::Empty,
            Self::Periodic { origin, period, boxes } => {
                ObservabilitySet::periodic(origin.clone(), period.clone(), boxes.clone())?
            }
            Self::Example { set, scale } => set.build(domain.dim(), *scale)?,
            Self::Equidistributed { g, delta, placement } => {
                let placement = match placement {
                    PlacementConfig::Centered => Placement::Centered,
                    PlacementConfig::Seeded => Placement::Seeded(seed),
                    PlacementConfig::Explicit(c) => Placement::Explicit(c.clone()),
                };
                let spec = EquidistributedSpec {
                    g: *g,
                    delta: *delta,
                    placement,
                };
                make_equidistributed(&spec, domain)?
            }
        })
    }
}

fn zero_potential() -> PotentialSpec {
    PotentialSpec::Zero
}

/// Operator `−Δ + V` on a domain, truncated at `cutoff`, with a control set.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemConfig {
    pub domain: DomainConfig,
    pub cutoff: f64,
    #[serde(default = "zero_potential")]
    pub potential: PotentialSpec,
    /// Fractional power `θ` of the operator; 1 when absent.
    #[serde(default)]
    pub theta: Option<f64>,
    pub set: SetConfig,
    #[serde(default)]
    pub max_modes: Option<usize>,
}

pub struct Problem {
    pub operator: OperatorHandle,
    pub set: ObservabilitySet,
}

impl ProblemConfig {
    pub fn build(&self, seed: u64) -> Result<Problem, CliError> {
        let domain = self.domain.build()?;
        let basis = SpectralBasis::build_with_limit(&domain, self.cutoff, self.max_modes.unwrap_or(DEFAULT_MAX_MODES))?;
        let mut operator = if self.potential.is_zero() {
            OperatorHandle::laplacian(&basis)
        } else {
            OperatorHandle::schrodinger(&basis, &self.potential)?
        };
        if let Some(theta) = self.theta {
            operator = operator.fractional(theta)?;
        }
        let set = self.set.build(&domain, seed)?;
        Ok(Problem { operator, set })
    }
}

/// The control system: either a spectral problem or a single scalar mode.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum SystemConfig {
    /// `u' + μu = c f`.
    Scalar {
        mu: f64,
        c: f64,
    },
    Spectral(ProblemConfig),
}

impl SystemConfig {
    pub fn build(&self, seed: u64) -> Result<(ControlSystem, Option<Problem>), CliError> {
        match self {
            Self::Scalar { mu, c } => Ok((ControlSystem::scalar(*mu, *c)?, None)),
            Self::Spectral(p) => {
                let problem = p.build(seed)?;
                let sys = ControlSystem::new(&problem.operator, &problem.set)?;
                Ok((sys, Some(problem)))
            }
        }
    }
}

/// Initial state in eigen-coordinates.
#[derive(Debug, Clone, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum StateConfig {
    /// The worst-case state of the minimal-norm problem at each horizon.
    Worst,
    /// Coefficients `1/(1 + j)^decay`, normalised.
    PowerLaw { decay: f64 },
    /// Explicit coefficients, zero-padded to the system size.
    Coefficients { values: Vec<f64> },
}

impl StateConfig {
    pub fn build(&self, n: usize) -> Result<Option<DVector<f64>>, CliError> {
        match self {
            Self::Worst => Ok(None),
            Self::PowerLaw { decay } => {
                if !decay.is_finite() {
                    return Err(CliError::param("u0.decay must be finite"));
                }
                let v = DVector::from_fn(n, |j, _| (1.0 + j as f64).powf(-decay));
                Ok(Some(v.normalize()))
            }
            Self::Coefficients { values } => {
                if values.len() > n {
                    return Err(CliError::param(format!(
                        "u0 has {} coefficients but the system only {n} modes",
                        values.len()
                    )));
                }
                let mut v = DVector::zeros(n);
                v.rows_mut(0, values.len()).copy_from_slice(values);
                Ok(Some(v))
            }
        }
    }
}

fn default_s() -> f64 {
    0.5
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectralIneqConfig {
    pub schema: u32,
    pub problem: ProblemConfig,
    pub levels: Vec<f64>,
    /// Exponent of the fitted uncertainty form; no fit when absent.
    #[serde(default)]
    pub fit_s: Option<f64>,
    /// Thickness parameters for the spectral-cube lower bound column.
    #[serde(default)]
    pub thick: Option<ThickParams>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SynthesizeConfig {
    pub schema: u32,
    pub system: SystemConfig,
    pub horizons: Vec<f64>,
    pub u0: StateConfig,
    #[serde(default)]
    pub gramian: GramianOptions,
    /// Exponent of the uncertainty form used by the active/passive bounds.
    #[serde(default = "default_s")]
    pub fit_s: f64,
    /// Closed-form bounds reported next to the empirical cost.
    #[serde(default)]
    pub bounds: Vec<CostBound>,
    #[serde(default)]
    pub bound_params: BoundParams,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsConfig {
    pub schema: u32,
    /// Bounds to tabulate; all of them when absent.
    #[serde(default)]
    pub bounds: Option<Vec<CostBound>>,
    pub params: BoundParams,
    pub horizons: Vec<f64>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomogenizeConfig {
    pub schema: u32,
    pub domain: DomainConfig,
    pub cutoff: f64,
    pub set: ExampleSet,
    /// Periods of the set, shrinking towards the homogenised limit.
    pub scales: Vec<f64>,
    pub horizons: Vec<f64>,
    #[serde(default)]
    pub gramian: GramianOptions,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NestedControlConfig {
    pub set: SetConfig,
    pub horizon: f64,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustConfig {
    pub schema: u32,
    pub run: ExhaustionRun,
    /// Times at which the semigroups are compared.
    pub times: Vec<f64>,
    #[serde(default)]
    pub control: Option<NestedControlConfig>,
    #[serde(default)]
    pub gramian: GramianOptions,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CalibrateConfig {
    pub schema: u32,
    pub problem: ProblemConfig,
    pub thick: ThickParams,
    pub e_grid: Vec<f64>,
    pub t_grid: Vec<f64>,
    #[serde(default = "default_s")]
    pub s: f64,
    #[serde(default)]
    pub gramian: GramianOptions,
}
