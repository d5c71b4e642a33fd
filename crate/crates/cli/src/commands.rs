//! One function per subcommand: load the config, compute everything, then
//! write the outputs in one step.

use std::path::PathBuf;

use heatctl_core::bounds::{
    cost_bound, miller_cstar, regime_table, tenenbaum_threshold, BoundParams, CostBound, Validity,
};
use heatctl_core::calibration::{calibrate, CalibrationGrid};
use heatctl_core::control::{
    active_passive_schedule, active_passive_synthesize, empirical_cost, min_norm_control, state_at, ControlSystem,
    GramianOptions,
};
use heatctl_core::exhaustion::{decay_fit, nested_control_family, semigroup_difference};
use heatctl_core::linalg::fit_line;
use heatctl_core::spectral::{Boundary, DomainSpec, OperatorHandle, SpectralBasis};
use heatctl_core::uncertainty::{fit_uncertainty_form, SpectralInequality, UcpBound, UniversalConstants};
use nalgebra::DVector;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::json;

use crate::config::{
    load, load_constants, BoundsConfig, CalibrateConfig, ExhaustConfig, HomogenizeConfig, SpectralIneqConfig,
    SynthesizeConfig,
};
use crate::output::{finish, Bundle, RunInfo};
use crate::CliError;

/// Flags shared by every subcommand.
pub struct Common {
    pub config: PathBuf,
    pub out: PathBuf,
    pub seed: u64,
    pub constants: Option<PathBuf>,
}

impl Common {
    /// `--constants` if given, else `fallback`.
    fn constants(&self, fallback: &UniversalConstants) -> Result<UniversalConstants, CliError> {
        match &self.constants {
            Some(p) => load_constants(p),
            None => Ok(fallback.clone()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Method {
    Gramian,
    ActivePassive,
}

fn nonempty(name: &str, v: &[f64]) -> Result<(), CliError> {
    if v.is_empty() {
        return Err(CliError::param(format!("`{name}` must not be empty")));
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(CliError::param(format!("`{name}` must contain finite values")));
    }
    Ok(())
}

fn collect<T: Send>(items: Vec<Result<T, CliError>>) -> Result<Vec<T>, CliError> {
    items.into_iter().collect()
}

#[derive(Serialize)]
struct SpectralRow {
    energy: f64,
    modes: usize,
    c_emp: f64,
    envelope: Option<f64>,
    spectral_cube_bound: Option<f64>,
}

pub fn spectral_ineq(c: &Common) -> Result<(), CliError> {
    let (cfg, canon): (SpectralIneqConfig, String) = load(&c.config)?;
    nonempty("levels", &cfg.levels)?;
    let constants = c.constants(&UniversalConstants::default())?;
    let p = cfg.problem.build(c.seed)?;
    let ineq = SpectralInequality::new(&p.operator, &p.set)?;
    let values = collect(
        cfg.levels
            .par_iter()
            .map(|&e| ineq.constant(e).map_err(CliError::from))
            .collect(),
    )?;
    let pairs: Vec<(f64, f64)> = cfg.levels.iter().copied().zip(values.iter().copied()).collect();
    let fit = cfg.fit_s.map(|s| fit_uncertainty_form(&pairs, s)).transpose()?;
    let mut rows = Vec::new();
    for &(e, v) in &pairs {
        let cube = match &cfg.thick {
            Some(t) => Some(UcpBound::SpectralCube { thick: t.clone(), e }.evaluate(&constants)?),
            None => None,
        };
        rows.push(SpectralRow {
            energy: e,
            modes: ineq.count_below(e),
            c_emp: v,
            envelope: fit.as_ref().map(|f| f.envelope(e)),
            spectral_cube_bound: cube,
        });
    }
    let mut out = Bundle::default();
    out.csv("spectral_ineq.csv", &rows)?;
    let summary = json!({
        "modes": p.operator.dim(),
        "set": p.set.label(),
        "fit": fit.map(|f| json!({"d0": f.d0, "d1": f.d1, "s": f.s, "r_squared": f.r_squared})),
    });
    finish(
        out,
        info("spectral-ineq", cfg.schema, &canon, c.seed, &constants),
        summary,
        &c.out,
    )
}

fn info<'a>(
    command: &'a str,
    schema: u32,
    canon: &'a str,
    seed: u64,
    constants: &'a UniversalConstants,
) -> RunInfo<'a> {
    RunInfo {
        command,
        schema,
        canonical_config: canon,
        seed,
        constants,
    }
}

#[derive(Serialize)]
struct CostRow {
    t: f64,
    c_t_emp: f64,
    condition: f64,
    control_norm: f64,
    relative_residual: f64,
}

#[derive(Serialize)]
struct BoundRow {
    t: f64,
    bound: CostBound,
    value: f64,
    validity: Validity,
}

#[derive(Serialize)]
struct PhaseRow {
    t: f64,
    j: usize,
    start: f64,
    duration: f64,
    energy: f64,
    modes: usize,
    state_norm: f64,
    control_norm_sq: f64,
    control_bound: f64,
    bound_holds: bool,
    projected_residual: f64,
    decay_bound: f64,
    decay_actual: Option<f64>,
    condition: f64,
}

#[derive(Serialize)]
struct RunRow {
    t: f64,
    phases: usize,
    total_norm: f64,
    gramian_norm: f64,
    initial_norm: f64,
    final_residual: f64,
}

fn initial_state(
    sys: &ControlSystem,
    u0: &Option<DVector<f64>>,
    t: f64,
    opts: &GramianOptions,
) -> Result<DVector<f64>, CliError> {
    Ok(match u0 {
        Some(v) => v.clone(),
        None => empirical_cost(sys, t, opts)?.maximizer,
    })
}

pub fn synthesize(c: &Common, method: Method) -> Result<(), CliError> {
    let (cfg, canon): (SynthesizeConfig, String) = load(&c.config)?;
    nonempty("horizons", &cfg.horizons)?;
    let constants = c.constants(&cfg.bound_params.constants)?;
    let params = BoundParams {
        constants: constants.clone(),
        ..cfg.bound_params.clone()
    };
    let (sys, problem) = cfg.system.build(c.seed)?;
    let u0 = cfg.u0.build(sys.dim())?;
    let opts = cfg.gramian;
    let mut out = Bundle::default();
    let summary = match method {
        Method::Gramian => {
            let rows = collect(
                cfg.horizons
                    .par_iter()
                    .map(|&t| {
                        let cost = empirical_cost(&sys, t, &opts)?;
                        let state = initial_state(&sys, &u0, t, &opts)?;
                        let ctl = min_norm_control(&sys, t, &state, &opts)?;
                        let end = state_at(&sys, &state, &ctl.signal, t);
                        Ok(CostRow {
                            t,
                            c_t_emp: cost.cost,
                            condition: cost.condition,
                            control_norm: ctl.cost,
                            relative_residual: end.norm() / state.norm(),
                        })
                    })
                    .collect(),
            )?;
            let mut bounds = Vec::new();
            for &t in &cfg.horizons {
                for &b in &cfg.bounds {
                    let v = cost_bound(b, &params.with_t(t))?;
                    bounds.push(BoundRow {
                        t,
                        bound: b,
                        value: v.cost(),
                        validity: v.validity,
                    });
                }
            }
            out.csv("costs.csv", &rows)?;
            if !bounds.is_empty() {
                out.csv("bounds.csv", &bounds)?;
            }
            json!({"method": "gramian", "modes": sys.dim()})
        }
        Method::ActivePassive => {
            let problem = problem.ok_or_else(|| CliError::param("active-passive synthesis needs a spectral system"))?;
            let ineq = SpectralInequality::new(&problem.operator, &problem.set)?;
            let e_cap = sys.mu[sys.dim() - 1];
            let runs = collect(
                cfg.horizons
                    .par_iter()
                    .map(|&t| {
                        let schedule = active_passive_schedule(t, e_cap)?;
                        let pairs = schedule
                            .energies
                            .iter()
                            .map(|&e| ineq.constant(e).map(|v| (e, v)))
                            .collect::<heatctl_core::Result<Vec<_>>>()?;
                        let fit = fit_uncertainty_form(&pairs, cfg.fit_s)?;
                        let state = initial_state(&sys, &u0, t, &opts)?;
                        let run = active_passive_synthesize(&sys, t, &state, &fit, &opts)?;
                        let gram = min_norm_control(&sys, t, &state, &opts)?.cost;
                        Ok((t, run, gram))
                    })
                    .collect(),
            )?;
            let mut phases = Vec::new();
            let mut totals = Vec::new();
            for (t, run, gram) in &runs {
                for p in &run.phases {
                    phases.push(PhaseRow {
                        t: *t,
                        j: p.j,
                        start: p.start,
                        duration: p.duration,
                        energy: p.energy,
                        modes: p.modes,
                        state_norm: p.state_norm,
                        control_norm_sq: p.control_norm_sq,
                        control_bound: p.control_bound,
                        bound_holds: p.bound_holds,
                        projected_residual: p.projected_residual,
                        decay_bound: p.decay_bound,
                        decay_actual: p.decay_actual,
                        condition: p.condition,
                    });
                }
                totals.push(RunRow {
                    t: *t,
                    phases: run.phases.len(),
                    total_norm: run.total_norm,
                    gramian_norm: *gram,
                    initial_norm: run.initial_norm,
                    final_residual: run.final_residual,
                });
            }
            out.csv("phases.csv", &phases)?;
            out.csv("active_passive.csv", &totals)?;
            json!({
                "method": "active_passive",
                "modes": sys.dim(),
                "all_bounds_hold": phases.iter().all(|p| p.bound_holds),
            })
        }
    };
    finish(
        out,
        info("synthesize", cfg.schema, &canon, c.seed, &constants),
        summary,
        &c.out,
    )
}

#[derive(Serialize)]
struct MillerRow {
    beta: f64,
    b: f64,
    a: f64,
    m: f64,
    s: f64,
    cstar: f64,
}

pub fn bounds(c: &Common) -> Result<(), CliError> {
    let (cfg, canon): (BoundsConfig, String) = load(&c.config)?;
    nonempty("horizons", &cfg.horizons)?;
    let constants = c.constants(&cfg.params.constants)?;
    let params = BoundParams {
        constants: constants.clone(),
        ..cfg.params.clone()
    };
    let list = cfg.bounds.clone().unwrap_or_else(|| CostBound::ALL.to_vec());
    if list.is_empty() {
        return Err(CliError::param("`bounds` must not be empty"));
    }
    let table = regime_table(&list, &params, &cfg.horizons)?;
    let mut header = vec!["t".to_string()];
    header.extend(list.iter().map(|b| b.name().to_string()));
    header.push("best".into());
    let rows: Vec<Vec<String>> = table
        .rows
        .iter()
        .map(|r| {
            let mut v = vec![r.t.to_string()];
            v.extend(r.values.iter().map(|x| x.to_string()));
            v.push(r.best.name().to_string());
            v
        })
        .collect();
    let mut out = Bundle::default();
    out.table("regime.csv", &header, &rows)?;
    out.csv("classes.csv", &table.classes)?;
    let mut summary = json!({"bounds": list.iter().map(|b| b.name()).collect::<Vec<_>>()});
    if let Some(m) = &params.miller {
        let (s, cstar) = miller_cstar(m.beta, m.b, m.a, m.m)?;
        out.csv(
            "miller.csv",
            &[MillerRow {
                beta: m.beta,
                b: m.b,
                a: m.a,
                m: m.m,
                s,
                cstar,
            }],
        )?;
        summary["miller_cstar"] = json!(cstar);
    }
    if let (Some(s), Some(d1)) = (params.s, params.d1) {
        summary["tenenbaum_threshold"] = json!(tenenbaum_threshold(s, d1)?);
    }
    finish(
        out,
        info("bounds", cfg.schema, &canon, c.seed, &constants),
        summary,
        &c.out,
    )
}

#[derive(Serialize)]
struct HomogenizeRow {
    scale: f64,
    t: f64,
    c_t_emp: f64,
    condition: f64,
}

#[derive(Serialize)]
struct SlopeRow {
    scale: f64,
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

pub fn homogenize(c: &Common) -> Result<(), CliError> {
    let (cfg, canon): (HomogenizeConfig, String) = load(&c.config)?;
    nonempty("scales", &cfg.scales)?;
    nonempty("horizons", &cfg.horizons)?;
    if cfg.horizons.len() < 2 {
        return Err(CliError::param(
            "`horizons` needs at least two values for the slope fit",
        ));
    }
    let constants = c.constants(&UniversalConstants::default())?;
    let domain = cfg.domain.build()?;
    let op = OperatorHandle::laplacian(&SpectralBasis::build(&domain, cfg.cutoff)?);
    let per_scale = collect(
        cfg.scales
            .par_iter()
            .map(|&scale| {
                let set = cfg.set.build(domain.dim(), scale)?;
                let sys = ControlSystem::new(&op, &set)?;
                let rows = cfg
                    .horizons
                    .iter()
                    .map(|&t| {
                        empirical_cost(&sys, t, &cfg.gramian).map(|e| HomogenizeRow {
                            scale,
                            t,
                            c_t_emp: e.cost,
                            condition: e.condition,
                        })
                    })
                    .collect::<heatctl_core::Result<Vec<_>>>()?;
                let x: Vec<f64> = rows.iter().map(|r| 1.0 / r.t).collect();
                let y: Vec<f64> = rows.iter().map(|r| r.c_t_emp.ln()).collect();
                let fit = fit_line(&x, &y)?;
                let slope = SlopeRow {
                    scale,
                    slope: fit.slope,
                    intercept: fit.intercept,
                    r_squared: fit.r_squared,
                };
                Ok((rows, slope))
            })
            .collect(),
    )?;
    let mut rows = Vec::new();
    let mut slopes = Vec::new();
    for (r, s) in per_scale {
        rows.extend(r);
        slopes.push(s);
    }
    let mut by_scale: Vec<&SlopeRow> = slopes.iter().collect();
    by_scale.sort_by(|a, b| b.scale.total_cmp(&a.scale));
    let decreasing = by_scale.windows(2).all(|w| w[1].slope < w[0].slope);
    let mut out = Bundle::default();
    out.csv("homogenize.csv", &rows)?;
    out.csv("slopes.csv", &slopes)?;
    let summary = json!({"slopes_decrease_with_scale": decreasing});
    finish(
        out,
        info("homogenize", cfg.schema, &canon, c.seed, &constants),
        summary,
        &c.out,
    )
}

#[derive(Serialize)]
struct DifferenceOut {
    t: f64,
    length: f64,
    modes: usize,
    difference: f64,
    tolerance: f64,
}

#[derive(Serialize)]
struct DecayOut {
    t: f64,
    slope: f64,
    intercept: f64,
    r_squared: f64,
}

#[derive(Serialize)]
struct NestedOut {
    length: f64,
    modes: usize,
    control_norm: f64,
    residual: f64,
    condition: f64,
}

pub fn exhaust(c: &Common) -> Result<(), CliError> {
    let (cfg, canon): (ExhaustConfig, String) = load(&c.config)?;
    nonempty("times", &cfg.times)?;
    cfg.run.validate()?;
    let constants = c.constants(&UniversalConstants::default())?;
    let per_time = collect(
        cfg.times
            .par_iter()
            .map(|&t| {
                let rows = semigroup_difference(&cfg.run, t)?;
                let fit = if rows.len() >= 2 { Some(decay_fit(&rows)?) } else { None };
                Ok((t, rows, fit))
            })
            .collect(),
    )?;
    let mut diffs = Vec::new();
    let mut fits = Vec::new();
    for (t, rows, fit) in per_time {
        for r in rows {
            diffs.push(DifferenceOut {
                t,
                length: r.length,
                modes: r.modes,
                difference: r.difference,
                tolerance: r.tolerance,
            });
        }
        if let Some(f) = fit {
            fits.push(DecayOut {
                t,
                slope: f.slope,
                intercept: f.intercept,
                r_squared: f.r_squared,
            });
        }
    }
    let mut out = Bundle::default();
    out.csv("differences.csv", &diffs)?;
    if !fits.is_empty() {
        out.csv("decay_fit.csv", &fits)?;
    }
    if let Some(ctl) = &cfg.control {
        let edge = cfg.run.reference_length();
        let reference = DomainSpec::centered_cube(cfg.run.dim, edge, Boundary::Dirichlet)?;
        let set = ctl.set.build(&reference, c.seed)?;
        let rows = nested_control_family(&cfg.run, &set, ctl.horizon, &cfg.gramian)?;
        let rows: Vec<NestedOut> = rows
            .into_iter()
            .map(|r| NestedOut {
                length: r.length,
                modes: r.modes,
                control_norm: r.control_norm,
                residual: r.residual,
                condition: r.condition,
            })
            .collect();
        out.csv("nested_controls.csv", &rows)?;
    }
    let summary = json!({"reference_length": cfg.run.reference_length()});
    finish(
        out,
        info("exhaust", cfg.schema, &canon, c.seed, &constants),
        summary,
        &c.out,
    )
}

#[derive(Serialize)]
struct CalSpectralRow {
    energy: f64,
    c_emp: f64,
    envelope: f64,
    spectral_cube_bound: f64,
}

#[derive(Serialize)]
struct CalCostRow {
    t: f64,
    c_t_emp: f64,
    thick2_bound: f64,
}

pub fn calibrate_cmd(c: &Common) -> Result<(), CliError> {
    let (cfg, canon): (CalibrateConfig, String) = load(&c.config)?;
    nonempty("e_grid", &cfg.e_grid)?;
    nonempty("t_grid", &cfg.t_grid)?;
    let base = c.constants(&UniversalConstants::default())?;
    let p = cfg.problem.build(c.seed)?;
    let grid = CalibrationGrid {
        e_grid: cfg.e_grid.clone(),
        t_grid: cfg.t_grid.clone(),
        s: cfg.s,
    };
    let cal = calibrate(&p.operator, &p.set, &cfg.thick, &grid, &base, &cfg.gramian)?;
    let mut spectral = Vec::new();
    for &(e, v) in &cal.spectral {
        let cube = UcpBound::SpectralCube {
            thick: cfg.thick.clone(),
            e,
        }
        .evaluate(&cal.constants)?;
        spectral.push(CalSpectralRow {
            energy: e,
            c_emp: v,
            envelope: cal.fit.envelope(e),
            spectral_cube_bound: cube,
        });
    }
    let params = BoundParams {
        gamma: Some(cfg.thick.gamma),
        a: Some(cfg.thick.a.clone()),
        constants: cal.constants.clone(),
        ..Default::default()
    };
    let mut costs = Vec::new();
    for &(t, v) in &cal.costs {
        costs.push(CalCostRow {
            t,
            c_t_emp: v,
            thick2_bound: cost_bound(CostBound::Thick2, &params.with_t(t))?.cost(),
        });
    }
    let mut out = Bundle::default();
    out.csv("spectral.csv", &spectral)?;
    out.csv("costs.csv", &costs)?;
    out.json("constants.json", &cal.constants)?;
    let summary = json!({
        "k5": cal.constants.k5,
        "d1": cal.constants.d1,
        "fit": {"d0": cal.fit.d0, "d1": cal.fit.d1, "s": cal.fit.s, "r_squared": cal.fit.r_squared},
    });
    finish(
        out,
        info("calibrate", cfg.schema, &canon, c.seed, &base),
        summary,
        &c.out,
    )
}
