use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::embed::{cross_gram, Bump};
use crate::control::{exp_integral, min_norm_control, ControlSystem, GramianOptions};
use crate::error::{Error, Result};
use crate::geometry::ObservabilitySet;
use crate::linalg::{fit_line, LineFit};
use crate::spectral::{Boundary, DomainSpec, OperatorHandle, PotentialSpec, SpectralBasis};

/// Dirichlet problems on centred boxes `Λ_L = (−L/2, L/2)^d` compared with a
/// larger reference box standing in for the whole space.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExhaustionRun {
    pub dim: usize,
    /// Edge lengths, strictly increasing.
    pub lengths: Vec<f64>,
    /// Reference edge; defaults to twice the largest length.
    #[serde(default)]
    pub reference: Option<f64>,
    /// Spectral cutoff shared by every box.
    pub cutoff: f64,
    #[serde(default = "zero_potential")]
    pub potential: PotentialSpec,
    pub u0: Bump,
}

fn zero_potential() -> PotentialSpec {
    PotentialSpec::Zero
}

/// Largest admissible truncation error for the reported differences.
pub const FIDELITY_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Serialize)]
pub struct DifferenceRow {
    pub length: f64,
    pub modes: usize,
    pub difference: f64,
    /// Bound on the truncation error of the two evolved states.
    pub tolerance: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NestedControlRow {
    pub length: f64,
    pub modes: usize,
    pub control_norm: f64,
    /// Final state on the reference box when the zero-extended control is
    /// applied there.
    pub residual: f64,
    pub condition: f64,
}

/// One box with its operator and the projected initial state in eigen
/// coordinates.
struct BoxProblem {
    length: f64,
    op: OperatorHandle,
    u0: DVector<f64>,
    truncation: f64,
}

impl ExhaustionRun {
    pub fn reference_length(&self) -> f64 {
        self.reference
            .unwrap_or_else(|| 2.0 * self.lengths.iter().copied().fold(0.0, f64::max))
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 || self.dim > 3 {
            return Err(Error::param("dim", "must be 1, 2 or 3"));
        }
        if self.lengths.is_empty() {
            return Err(Error::param("lengths", "must be non-empty"));
        }
        if self.lengths.iter().any(|l| !(l.is_finite() && *l > 0.0)) {
            return Err(Error::param("lengths", "entries must be positive"));
        }
        if self.lengths.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::param("lengths", "must be strictly increasing"));
        }
        let max = self.lengths[self.lengths.len() - 1];
        let r = self.reference_length();
        if !(r.is_finite() && r >= max) {
            return Err(Error::param("reference", "must be at least the largest length"));
        }
        if !(self.cutoff.is_finite() && self.cutoff > 0.0) {
            return Err(Error::param("cutoff", "must be positive"));
        }
        self.u0.validate()?;
        if self.u0.width > self.lengths[0] / 2.0 {
            return Err(Error::param(
                "u0",
                "support width must be at most half the smallest length",
            ));
        }
        Ok(())
    }

    fn problem(&self, length: f64) -> Result<BoxProblem> {
        let domain = DomainSpec::centered_cube(self.dim, length, Boundary::Dirichlet)?;
        let basis = SpectralBasis::build(&domain, self.cutoff)?;
        let op = OperatorHandle::schrodinger(&basis, &self.potential)?;
        let proj = self.u0.project(&basis)?;
        Ok(BoxProblem {
            length,
            u0: op.to_eigen(&proj.coefficients),
            truncation: proj.truncation,
            op,
        })
    }

    /// Damping of the unresolved tail over time `t`.
    fn tail_factor(&self, t: f64) -> f64 {
        let (lo, _) = self.potential.range();
        (-t * (self.cutoff + lo.min(0.0))).exp()
    }
}

impl BoxProblem {
    fn evolved(&self, t: f64) -> DVector<f64> {
        let c = DVector::from_fn(self.u0.len(), |i, _| (-t * self.op.eigvals[i]).exp() * self.u0[i]);
        self.op.from_eigen(&c)
    }
}

/// `‖(e^{−tH_ref} − e^{−tH_L}) u0‖` for each box, with the zero-extended
/// `L`-state compared against the reference state through the exact overlap
/// of the two bases.
pub fn semigroup_difference(run: &ExhaustionRun, t: f64) -> Result<Vec<DifferenceRow>> {
    run.validate()?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::param("t", "must be positive"));
    }
    let reference = run.problem(run.reference_length())?;
    let b = reference.evolved(t);
    let damp = run.tail_factor(t);
    let mut rows = Vec::with_capacity(run.lengths.len());
    for &length in &run.lengths {
        let p = run.problem(length)?;
        let tolerance = damp * (p.truncation + reference.truncation);
        if tolerance > FIDELITY_LIMIT {
            return Err(Error::Fidelity {
                tolerance,
                limit: FIDELITY_LIMIT,
            });
        }
        let a = p.evolved(t);
        let overlap = cross_gram(&reference.op.basis, &p.op.basis, &ObservabilitySet::Full)?;
        let cross = b.dot(&(&overlap * &a));
        let sq = a.norm_squared() + b.norm_squared() - 2.0 * cross;
        rows.push(DifferenceRow {
            length,
            modes: p.op.basis.len(),
            difference: sq.max(0.0).sqrt(),
            tolerance,
        });
    }
    Ok(rows)
}

/// Least-squares fit of `ln difference` against `L²`.
pub fn decay_fit(rows: &[DifferenceRow]) -> Result<LineFit> {
    if rows.iter().any(|r| r.difference <= 0.0) {
        return Err(Error::Numeric("difference vanished; log fit undefined".into()));
    }
    let x: Vec<f64> = rows.iter().map(|r| r.length * r.length).collect();
    let y: Vec<f64> = rows.iter().map(|r| r.difference.ln()).collect();
    fit_line(&x, &y)
}

/// Minimal-norm null-controls on each box for horizon `t`, each then applied,
/// zero-extended, to the reference problem.
pub fn nested_control_family(
    run: &ExhaustionRun,
    set: &ObservabilitySet,
    t: f64,
    opts: &GramianOptions,
) -> Result<Vec<NestedControlRow>> {
    run.validate()?;
    if !(t.is_finite() && t > 0.0) {
        return Err(Error::param("t", "must be positive"));
    }
    let reference = run.problem(run.reference_length())?;
    run.lengths
        .iter()
        .map(|&length| {
            let p = run.problem(length)?;
            control_on_reference(&p, &reference, set, t, opts)
        })
        .collect()
}

fn control_on_reference(
    p: &BoxProblem,
    reference: &BoxProblem,
    set: &ObservabilitySet,
    t: f64,
    opts: &GramianOptions,
) -> Result<NestedControlRow> {
    let sys = ControlSystem::new(&p.op, set)?;
    let n = sys.dim();
    let (v, control_norm, condition) = if p.u0.norm() == 0.0 {
        (DVector::zeros(n), 0.0, f64::NAN)
    } else {
        let ctl = min_norm_control(&sys, t, &p.u0, opts)?;
        let v = ctl.signal.phases[0].v.clone();
        (v, ctl.signal.norm(&sys), ctl.condition)
    };
    // ⟨ψ_i^ref, χ_S ψ_k^L⟩ in the two eigenbases
    let g = cross_gram(&reference.op.basis, &p.op.basis, set)?;
    let x: DMatrix<f64> = reference.op.eigvecs.transpose() * g * &p.op.eigvecs;
    let mu_r = &reference.op.eigvals;
    let mu_l = &p.op.eigvals;
    let m = reference.u0.len();
    let state = DVector::from_fn(m, |i, _| {
        let forced: f64 = (0..n)
            .map(|k| x[(i, k)] * v[k] * exp_integral(mu_r[i] + mu_l[k], t))
            .sum();
        (-t * mu_r[i]).exp() * reference.u0[i] - forced
    });
    Ok(NestedControlRow {
        length: p.length,
        modes: n,
        control_norm,
        residual: state.norm(),
        condition,
    })
}
