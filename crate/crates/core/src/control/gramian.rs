use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::signal::{ControlSignal, Phase};
use super::system::ControlSystem;
use crate::error::{Error, Result};
use crate::linalg::sym_eigen;

/// Inversion settings for the controllability Gramian.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GramianOptions {
    /// Largest accepted condition number of the balanced Gramian.
    pub max_condition: f64,
    /// Relative eigenvalue floor of the pseudo-inverse.
    pub floor: f64,
}

impl Default for GramianOptions {
    fn default() -> Self {
        Self {
            max_condition: 1e12,
            floor: 1e-14,
        }
    }
}

/// `Q_T = R⁻¹ Q' R⁻¹` with `R = diag(Q_T)^{−1/2}` and `Q' = U diag(ω) Uᵀ`.
///
/// Inverting through the diagonally balanced `Q'` removes the trivial scale
/// spread between modes; the reported condition number is that of `Q'`.
#[derive(Debug, Clone)]
pub struct GramianFactor {
    pub t: f64,
    pub q: DMatrix<f64>,
    pub scale: DVector<f64>,
    pub omega: DVector<f64>,
    pub u: DMatrix<f64>,
    pub condition: f64,
    floor: f64,
}

impl GramianFactor {
    pub fn new(sys: &ControlSystem, t: f64, opts: &GramianOptions) -> Result<Self> {
        let q = sys.gramian(t)?;
        let n = q.nrows();
        let scale = DVector::from_fn(n, |j, _| {
            let d = q[(j, j)];
            if d > 0.0 {
                1.0 / d.sqrt()
            } else {
                1.0
            }
        });
        let balanced = DMatrix::from_fn(n, n, |j, k| scale[j] * q[(j, k)] * scale[k]);
        let (omega, u) = sym_eigen(&balanced)?;
        let w_max = omega[n - 1];
        let w_min = omega[0];
        let condition = if w_max <= 0.0 || w_min <= 0.0 {
            f64::INFINITY
        } else {
            w_max / w_min
        };
        if !(condition <= opts.max_condition) {
            return Err(Error::Conditioning {
                condition,
                limit: opts.max_condition,
            });
        }
        Ok(Self {
            t,
            q,
            scale,
            omega,
            u,
            condition,
            floor: opts.floor * w_max.max(0.0),
        })
    }

    fn inv_sqrt_omega(&self) -> DVector<f64> {
        self.omega.map(|w| if w > self.floor { 1.0 / w.sqrt() } else { 0.0 })
    }

    /// `Q_T⁺ y` through the balanced factorisation.
    pub fn solve(&self, y: &DVector<f64>) -> DVector<f64> {
        let inv = self.inv_sqrt_omega();
        let ry = self.scale.component_mul(y);
        let mut c = self.u.tr_mul(&ry);
        for (ci, w) in c.iter_mut().zip(inv.iter()) {
            *ci *= w * w;
        }
        self.scale.component_mul(&(&self.u * c))
    }
}

/// Optimal cost `C_T = sup_{‖u0‖=1} min ‖f‖` with its maximising initial state.
#[derive(Debug, Clone)]
pub struct EmpiricalCost {
    pub cost: f64,
    pub maximizer: DVector<f64>,
    pub condition: f64,
}

/// `C_T = √λ_max(e^{−TA} Q_T⁻¹ e^{−TA})`.
pub fn empirical_cost(sys: &ControlSystem, t: f64, opts: &GramianOptions) -> Result<EmpiricalCost> {
    let g = GramianFactor::new(sys, t, opts)?;
    let n = sys.dim();
    let inv = g.inv_sqrt_omega();
    // B = ω^{-1/2} Uᵀ R D, so that e^{−TA} Q⁻¹ e^{−TA} = Bᵀ B.
    let rd = DVector::from_fn(n, |j, _| g.scale[j] * (-t * sys.mu[j]).exp());
    let b = DMatrix::from_fn(n, n, |i, j| inv[i] * g.u[(j, i)] * rd[j]);
    let btb = b.transpose() * &b;
    let (vals, vecs) = sym_eigen(&btb)?;
    let top = vals[n - 1].max(0.0);
    Ok(EmpiricalCost {
        cost: top.sqrt(),
        maximizer: vecs.column(n - 1).into_owned(),
        condition: g.condition,
    })
}

/// Minimal-norm null-control over `[0, T]` and its squared cost.
#[derive(Debug, Clone)]
pub struct MinNormControl {
    pub signal: ControlSignal,
    pub cost: f64,
    pub condition: f64,
}

/// `f(s) = −B* e^{−(T−s)A} v` with `v = Q_T⁻¹ e^{−TA} u0`.
pub fn min_norm_control(
    sys: &ControlSystem,
    t: f64,
    u0: &DVector<f64>,
    opts: &GramianOptions,
) -> Result<MinNormControl> {
    check_state(sys, u0)?;
    let g = GramianFactor::new(sys, t, opts)?;
    let target = sys.free(t, u0);
    let v = g.solve(&target);
    let cost = v.dot(&target).max(0.0).sqrt();
    Ok(MinNormControl {
        signal: ControlSignal {
            phases: vec![Phase {
                start: 0.0,
                end: t,
                v,
                modes: sys.dim(),
            }],
        },
        cost,
        condition: g.condition,
    })
}

pub(crate) fn check_state(sys: &ControlSystem, u: &DVector<f64>) -> Result<()> {
    if u.len() != sys.dim() {
        return Err(Error::param("u0", "length must match the number of modes"));
    }
    if u.iter().any(|v| !v.is_finite()) {
        return Err(Error::param("u0", "entries must be finite"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scalar_cost() {
        for t in [0.25, 1.0, 4.0] {
            let sys = ControlSystem::scalar(0.0, 2.0).unwrap();
            let c = empirical_cost(&sys, t, &GramianOptions::default()).unwrap();
            assert!((c.cost - 1.0 / (2.0 * t.sqrt())).abs() < 1e-14);
        }
    }

    #[test]
    fn single_decaying_mode() {
        let sys = ControlSystem::scalar(1.0, 1.0).unwrap();
        let expect = (-1.0f64).exp() / ((1.0 - (-2.0f64).exp()) / 2.0).sqrt();
        let c = empirical_cost(&sys, 1.0, &GramianOptions::default()).unwrap();
        assert!((c.cost - expect).abs() < 1e-14);
        let m = min_norm_control(&sys, 1.0, &DVector::from_element(1, 1.0), &GramianOptions::default()).unwrap();
        assert!((m.cost - expect).abs() < 1e-14);
    }

    #[test]
    fn empty_set_is_ill_conditioned() {
        let sys = ControlSystem::from_parts(vec![1.0, 2.0], DMatrix::zeros(2, 2)).unwrap();
        assert!(matches!(
            empirical_cost(&sys, 1.0, &GramianOptions::default()),
            Err(Error::Conditioning { .. })
        ));
    }
}
