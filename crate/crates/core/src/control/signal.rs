use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::system::{exp_integral, ControlSystem};
use crate::error::{Error, Result};

/// One active interval: `f(s) = −B* e^{−(end − s)A} v` for `s ∈ [start, end]`,
/// with `v` supported on the `modes` lowest eigenmodes.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Phase {
    pub start: f64,
    pub end: f64,
    pub v: DVector<f64>,
    pub modes: usize,
}

/// Piecewise control; zero outside its phases.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct ControlSignal {
    pub phases: Vec<Phase>,
}

impl Phase {
    pub fn duration(&self) -> f64 {
        self.end - self.start
    }

    /// `‖f‖²_{L²(start, end)} = vᵀ Q_{end−start} v`.
    pub fn norm_sq(&self, sys: &ControlSystem) -> f64 {
        let n = self.modes;
        let tau = self.duration();
        let mut acc = 0.0;
        for j in 0..n {
            for k in 0..n {
                acc += self.v[j] * self.v[k] * sys.input[(j, k)] * exp_integral(sys.mu[j] + sys.mu[k], tau);
            }
        }
        acc.max(0.0)
    }
}

impl ControlSignal {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn validate(&self, sys: &ControlSystem, horizon: f64) -> Result<()> {
        let mut last = 0.0;
        for p in &self.phases {
            if !(p.start >= last - 1e-15 && p.end >= p.start && p.end <= horizon * (1.0 + 1e-12)) {
                return Err(Error::param(
                    "signal",
                    "phases must be ordered, disjoint and inside [0, T]",
                ));
            }
            if p.v.len() != sys.dim() || p.modes > sys.dim() {
                return Err(Error::param("signal", "phase vector does not match the system"));
            }
            last = p.end;
        }
        Ok(())
    }

    /// `‖f‖²_{L²(0,T)}`, exact.
    pub fn norm_sq(&self, sys: &ControlSystem) -> f64 {
        self.phases.iter().map(|p| p.norm_sq(sys)).sum()
    }

    pub fn norm(&self, sys: &ControlSystem) -> f64 {
        self.norm_sq(sys).sqrt()
    }

    /// `B f(s)` in eigen-coordinates, i.e. `−(BB*) e^{−(end−s)A} v`.
    pub fn input_at(&self, sys: &ControlSystem, s: f64) -> DVector<f64> {
        let n = sys.dim();
        for p in &self.phases {
            if s >= p.start && s <= p.end {
                let w = DVector::from_fn(n, |k, _| {
                    if k < p.modes {
                        (-(p.end - s) * sys.mu[k]).exp() * p.v[k]
                    } else {
                        0.0
                    }
                });
                return -(&sys.input * w);
            }
        }
        DVector::zeros(n)
    }

    /// Observation-side view of `f(s)`: the coefficients `c` with
    /// `f(s) = −χ_S Σ_k c_k ψ_k`.
    pub fn coefficients_at(&self, sys: &ControlSystem, s: f64) -> DVector<f64> {
        let n = sys.dim();
        for p in &self.phases {
            if s >= p.start && s <= p.end {
                return DVector::from_fn(n, |k, _| {
                    if k < p.modes {
                        (-(p.end - s) * sys.mu[k]).exp() * p.v[k]
                    } else {
                        0.0
                    }
                });
            }
        }
        DVector::zeros(n)
    }
}

/// Sampled solution.
#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<DVector<f64>>,
}

impl Trajectory {
    pub fn norms(&self) -> Vec<f64> {
        self.states.iter().map(|u| u.norm()).collect()
    }
}

/// Mild solution `u(t) = e^{−tA}u0 + ∫_0^t e^{−(t−s)A} B f(s) ds`, integrated
/// per mode in closed form.
pub fn duhamel_solve(
    sys: &ControlSystem,
    u0: &DVector<f64>,
    signal: &ControlSignal,
    times: &[f64],
) -> Result<Trajectory> {
    super::gramian::check_state(sys, u0)?;
    if times.iter().any(|t| !(t.is_finite() && *t >= 0.0)) {
        return Err(Error::Domain("trajectory times must be ≥ 0".into()));
    }
    let states = times.iter().map(|&t| state_at(sys, u0, signal, t)).collect();
    Ok(Trajectory {
        times: times.to_vec(),
        states,
    })
}

/// Single-time evaluation of the mild solution.
pub fn state_at(sys: &ControlSystem, u0: &DVector<f64>, signal: &ControlSignal, t: f64) -> DVector<f64> {
    let n = sys.dim();
    let mu = &sys.mu;
    let mut u = sys.free(t, u0);
    for p in &signal.phases {
        if t <= p.start {
            continue;
        }
        let c = t.min(p.end);
        let len = c - p.start;
        // kernel[i][k] = e^{−(t−c)μ_i −(end−c)μ_k} ∫_0^{len} e^{−r(μ_i+μ_k)} dr
        let kernel = DMatrix::from_fn(n, p.modes, |i, k| {
            (-(t - c) * mu[i] - (p.end - c) * mu[k]).exp() * exp_integral(mu[i] + mu[k], len)
        });
        for i in 0..n {
            let mut acc = 0.0;
            for k in 0..p.modes {
                acc += sys.input[(i, k)] * p.v[k] * kernel[(i, k)];
            }
            u[i] -= acc;
        }
    }
    u
}
