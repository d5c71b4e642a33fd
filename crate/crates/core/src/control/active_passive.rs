use nalgebra::DVector;
use serde::Serialize;

use super::gramian::{check_state, GramianFactor, GramianOptions};
use super::signal::{state_at, ControlSignal, Phase};
use super::system::ControlSystem;
use crate::error::{ensure, Error, Result};
use crate::uncertainty::UncertaintyFit;

/// Active intervals `[a_j, a_j + T_j]` followed by passive intervals of the
/// same length, with `T_j = K 2^{−j/2}`, `E_j = 4^j` and
/// `K = T(1 − 2^{−1/2})/2` so that the infinite schedule fills `[0, T]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSchedule {
    pub horizon: f64,
    pub k: f64,
    pub starts: Vec<f64>,
    pub durations: Vec<f64>,
    pub energies: Vec<f64>,
}

impl PhaseSchedule {
    /// Index of the last active phase.
    pub fn last(&self) -> usize {
        self.starts.len() - 1
    }
}

/// Schedule truncated at the first `J` with `E_J ≥ e_cap`.
pub fn active_passive_schedule(t: f64, e_cap: f64) -> Result<PhaseSchedule> {
    ensure(t.is_finite() && t > 0.0, "T", "must be positive")?;
    ensure(e_cap.is_finite(), "e_cap", "must be finite")?;
    let k = t * (1.0 - 0.5f64.sqrt()) / 2.0;
    let mut starts = Vec::new();
    let mut durations = Vec::new();
    let mut energies = Vec::new();
    let mut a = 0.0;
    for j in 0..64 {
        let tj = k * 2f64.powf(-(j as f64) / 2.0);
        let ej = 4f64.powi(j);
        starts.push(a);
        durations.push(tj);
        energies.push(ej);
        if ej >= e_cap {
            break;
        }
        a += 2.0 * tj;
    }
    Ok(PhaseSchedule {
        horizon: t,
        k,
        starts,
        durations,
        energies,
    })
}

/// Per-phase record of an active/passive run.
#[derive(Debug, Clone, Serialize)]
pub struct PhaseDiagnostics {
    pub j: usize,
    pub start: f64,
    pub duration: f64,
    pub energy: f64,
    pub modes: usize,
    /// `‖u(a_j)‖`.
    pub state_norm: f64,
    /// `‖f_j‖²`.
    pub control_norm_sq: f64,
    /// `C_ur(E_j)/T_j · ‖u(a_j)‖²`.
    pub control_bound: f64,
    pub bound_holds: bool,
    /// `‖P_{E_j} u(a_j + T_j)‖`.
    pub projected_residual: f64,
    /// `e^{−E_j T_j}`, the passive-phase damping of modes above `E_j`.
    pub decay_bound: f64,
    /// `‖u(a_{j+1})‖ / ‖u(a_j + T_j)‖` (none after the last phase).
    pub decay_actual: Option<f64>,
    pub condition: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct ActivePassiveRun {
    pub schedule: PhaseSchedule,
    pub signal: ControlSignal,
    pub phases: Vec<PhaseDiagnostics>,
    pub total_norm: f64,
    pub final_residual: f64,
    pub initial_norm: f64,
}

/// Runs the active/passive construction: on each active phase the minimal-norm
/// control of the `E_j`-truncated system, then free decay.
pub fn active_passive_synthesize(
    sys: &ControlSystem,
    t: f64,
    u0: &DVector<f64>,
    c_ur: &UncertaintyFit,
    opts: &GramianOptions,
) -> Result<ActivePassiveRun> {
    check_state(sys, u0)?;
    let e_cap = sys.mu[sys.dim() - 1];
    let schedule = active_passive_schedule(t, e_cap)?;
    let covered = sys.count_below(schedule.energies[schedule.last()]);
    if covered < sys.dim() {
        return Err(Error::Capacity {
            required: sys.dim(),
            limit: covered,
        });
    }
    let mut state = u0.clone();
    let mut signal = ControlSignal::zero();
    let mut phases: Vec<PhaseDiagnostics> = Vec::new();
    let mut after_active: Option<f64> = None;
    for j in 0..=schedule.last() {
        let (a, tj, ej) = (schedule.starts[j], schedule.durations[j], schedule.energies[j]);
        if let (Some(prev), Some(p)) = (after_active, phases.last_mut()) {
            p.decay_actual = Some(if prev > 0.0 { state.norm() / prev } else { 0.0 });
        }
        let n = sys.count_below(ej);
        let state_norm = state.norm();
        let (local, norm_sq, condition) = if n == 0 {
            (ControlSignal::zero(), 0.0, 1.0)
        } else {
            let sub = sys.leading(n);
            let g = GramianFactor::new(&sub, tj, opts)?;
            let target = sub.free(tj, &state.rows(0, n).into_owned());
            let w = g.solve(&target);
            let mut v = DVector::zeros(sys.dim());
            v.rows_mut(0, n).copy_from(&w);
            let phase = Phase {
                start: 0.0,
                end: tj,
                v,
                modes: n,
            };
            let nsq = phase.norm_sq(sys);
            (ControlSignal { phases: vec![phase] }, nsq, g.condition)
        };
        let after = state_at(sys, &state, &local, tj);
        let projected_residual = after.rows(0, n).norm();
        let control_bound = c_ur.c_ur(ej) / tj * state_norm * state_norm;
        phases.push(PhaseDiagnostics {
            j,
            start: a,
            duration: tj,
            energy: ej,
            modes: n,
            state_norm,
            control_norm_sq: norm_sq,
            control_bound,
            bound_holds: norm_sq <= control_bound * (1.0 + 1e-12) + 1e-300,
            projected_residual,
            decay_bound: (-ej * tj).exp(),
            decay_actual: None,
            condition,
        });
        for mut p in local.phases {
            p.start += a;
            p.end += a;
            signal.phases.push(p);
        }
        after_active = Some(after.norm());
        // passive phase (for the last phase: free evolution up to T)
        let passive = if j == schedule.last() { t - a - tj } else { tj };
        state = sys.free(passive, &after);
    }
    let total_norm = signal.norm(sys);
    Ok(ActivePassiveRun {
        schedule,
        signal,
        phases,
        total_norm,
        final_residual: state.norm(),
        initial_norm: u0.norm(),
    })
}
