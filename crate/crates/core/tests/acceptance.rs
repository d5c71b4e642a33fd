//! End-to-end acceptance checks. Each criterion prints one PASS/FAIL line.

use std::f64::consts::PI;
use std::time::{Duration, Instant};

use heatctl_core::bounds::{cost_bound, miller_cstar, miller_rhs, BoundParams, CostBound};
use heatctl_core::control::{
    active_passive_schedule, active_passive_synthesize, douglas_factorize, empirical_cost, min_norm_control, state_at,
    ControlSystem, GramianOptions,
};
use heatctl_core::exhaustion::{decay_fit, nested_control_family, semigroup_difference, Bump, ExhaustionRun};
use heatctl_core::geometry::{AxisBox, ExampleSet, ObservabilitySet};
use heatctl_core::linalg::fit_line;
use heatctl_core::quadrature::integrate;
use heatctl_core::spectral::{Boundary, DomainSpec, OperatorHandle, PotentialSpec, SpectralBasis, WeightedBox};
use heatctl_core::uncertainty::{
    eigenvalue_lifting_check, fit_uncertainty_form, sharpness_sparse, sharpness_torus, spectral_ineq_constant,
    LiftingWeight, SpectralInequality,
};
use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Criteria whose check is run faithfully but is known not to pass; see the
/// notes in the project README.
const KNOWN_FAILURES: &[u32] = &[10];

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Self {
            pass,
            detail: detail.into(),
        }
    }
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> Outcome {
    let start = Instant::now();
    let mut out = f();
    let elapsed = start.elapsed();
    if let Some(limit) = limit {
        if elapsed > limit {
            out.pass = false;
        }
        out.detail = format!("{} [{:.2?} / limit {:.0?}]", out.detail, elapsed, limit);
    } else {
        out.detail = format!("{} [{:.2?}]", out.detail, elapsed);
    }
    out
}

fn half_interval_system(e_max: f64) -> ControlSystem {
    let dom = DomainSpec::interval(0.0, PI, Boundary::Dirichlet).unwrap();
    let basis = SpectralBasis::build(&dom, e_max).unwrap();
    let op = OperatorHandle::laplacian(&basis);
    ControlSystem::new(&op, &half_set()).unwrap()
}

fn half_set() -> ObservabilitySet {
    ObservabilitySet::periodic(
        vec![0.0],
        vec![2.0 * PI],
        vec![AxisBox::interval(0.0, PI / 2.0).unwrap()],
    )
    .unwrap()
}

fn test_state(n: usize) -> DVector<f64> {
    let v = DVector::from_fn(n, |j, _| 1.0 / (1.0 + j as f64));
    v.normalize()
}

fn c1_scalar() -> Outcome {
    let c = 1.7;
    let mut worst: f64 = 0.0;
    for t in [0.25, 1.0, 4.0] {
        let sys = ControlSystem::scalar(0.0, c).unwrap();
        let got = empirical_cost(&sys, t, &GramianOptions::default()).unwrap().cost;
        worst = worst.max((got - 1.0 / (c * t.sqrt())).abs());
    }
    Outcome::new(worst <= 1e-10, format!("max |C_T − 1/(|c|√T)| = {worst:.2e}"))
}

/// `√λ_max(e^{−TA} Q_T⁻¹ e^{−TA})` from a direct inverse of the raw Gramian.
fn direct_cost(sys: &ControlSystem, t: f64) -> f64 {
    let q = sys.gramian(t).unwrap();
    let qinv = q.clone().try_inverse().unwrap();
    let d = DMatrix::from_diagonal(&sys.mu.map(|m| (-t * m).exp()));
    let m = &d * qinv * &d;
    let m = (&m + m.transpose()) * 0.5;
    SymmetricEigen::new(m).eigenvalues.max().sqrt()
}

fn c2_null_control() -> Outcome {
    let sys = half_interval_system(100.0);
    let t = 1.0;
    let u0 = test_state(sys.dim());
    let opts = GramianOptions::default();
    let ctl = min_norm_control(&sys, t, &u0, &opts).unwrap();
    let residual = state_at(&sys, &u0, &ctl.signal, t).norm() / u0.norm();
    let cost = empirical_cost(&sys, t, &opts).unwrap();
    let oracle = direct_cost(&sys, t);
    let rel = (cost.cost - oracle).abs() / oracle;
    // the worst-case state is controlled at exactly that cost
    let worst = min_norm_control(&sys, t, &cost.maximizer, &opts).unwrap().cost;
    let rel_worst = (worst - cost.cost).abs() / cost.cost;
    Outcome::new(
        residual <= 1e-8 && rel <= 1e-8 && rel_worst <= 1e-8,
        format!(
            "‖u(T)‖/‖u0‖ = {residual:.2e}, C_T = {:.6}, oracle rel. diff = {rel:.2e}, maximiser rel. diff = {rel_worst:.2e}",
            cost.cost
        ),
    )
}

fn c3_active_passive() -> Outcome {
    let sys = half_interval_system(100.0);
    let t = 1.0;
    let u0 = test_state(sys.dim());
    let opts = GramianOptions::default();
    let schedule = active_passive_schedule(t, sys.mu[sys.dim() - 1]).unwrap();
    let dom = DomainSpec::interval(0.0, PI, Boundary::Dirichlet).unwrap();
    let op = OperatorHandle::laplacian(&SpectralBasis::build(&dom, 100.0).unwrap());
    let ineq = SpectralInequality::new(&op, &half_set()).unwrap();
    let pairs: Vec<(f64, f64)> = schedule
        .energies
        .iter()
        .map(|&e| (e, ineq.constant(e).unwrap()))
        .collect();
    let fit = fit_uncertainty_form(&pairs, 0.5).unwrap();
    let run = active_passive_synthesize(&sys, t, &u0, &fit, &opts).unwrap();
    let residual = run.final_residual / u0.norm();
    let proj = run.phases.iter().map(|p| p.projected_residual).fold(0.0, f64::max);
    let bounds = run.phases.iter().all(|p| p.bound_holds);
    let gram = min_norm_control(&sys, t, &u0, &opts).unwrap().cost;
    let pass = residual <= 1e-8 && proj <= 1e-8 && bounds && run.total_norm >= gram;
    Outcome::new(
        pass,
        format!(
            "{} phases, residual {residual:.2e}, max projected {proj:.2e}, bounds hold: {bounds}, ‖f‖ = {:.4} ≥ {gram:.4}",
            run.phases.len(),
            run.total_norm
        ),
    )
}

fn brute_gram(n: usize, a: f64, b: f64) -> DMatrix<f64> {
    let phi = |k: usize, x: f64| (2.0 / PI).sqrt() * (k as f64 * x).sin();
    DMatrix::from_fn(n, n, |j, k| integrate(|x| phi(j + 1, x) * phi(k + 1, x), a, b, 1e-14))
}

fn c4_gram_examples() -> Outcome {
    let dom = DomainSpec::interval(0.0, PI, Boundary::Dirichlet).unwrap();
    let op = OperatorHandle::laplacian(&SpectralBasis::build(&dom, 30.0).unwrap());
    let mut worst: f64 = 0.0;
    let mut values = Vec::new();
    let full = spectral_ineq_constant(&op, &ObservabilitySet::Full, 16.0).unwrap();
    let full_oracle = SymmetricEigen::new(brute_gram(4, 0.0, PI)).eigenvalues.min();
    worst = worst.max((full - full_oracle).abs());
    values.push(full);
    for (e, n) in [(1.0, 1), (4.0, 2)] {
        let got = spectral_ineq_constant(&op, &half_set(), e).unwrap();
        let oracle = SymmetricEigen::new(brute_gram(n, 0.0, PI / 2.0)).eigenvalues.min();
        worst = worst.max((got - oracle).abs());
        values.push(got);
    }
    Outcome::new(
        worst <= 1e-6,
        format!(
            "C_emp = {:.6}, {:.6}, {:.6}; max oracle diff {worst:.2e}",
            values[0], values[1], values[2]
        ),
    )
}

fn c5_sqrt_scaling() -> Outcome {
    let dom = DomainSpec::torus(1, 1.0).unwrap();
    let op = OperatorHandle::laplacian(&SpectralBasis::build(&dom, 64.0).unwrap());
    // two cells of the edge-band set per torus period
    let set = ExampleSet::EdgeBands { gamma: 0.3 }.build(1, PI).unwrap();
    let ineq = SpectralInequality::new(&op, &set).unwrap();
    let es: Vec<f64> = (1..=8).map(|k| (k * k) as f64).collect();
    let values = ineq.sweep(&es).unwrap();
    let x: Vec<f64> = es.iter().map(|e| e.sqrt()).collect();
    let y: Vec<f64> = values.iter().map(|c| -c.ln()).collect();
    let fit = fit_line(&x, &y).unwrap();
    Outcome::new(
        fit.r_squared >= 0.9,
        format!("slope {:.3}, R² = {:.5}", fit.slope, fit.r_squared),
    )
}

fn c6_sharpness() -> Outcome {
    let mut worst_quad: f64 = 0.0;
    let mut checked = 0;
    let mut all_hold = true;
    for eps in [0.02, 0.05, 0.1, 0.15, 0.2] {
        for alpha in [2.0, 3.0, 4.0] {
            for p in [1.0, 2.0, 3.0] {
                let b = 4.0 * PI * alpha;
                let o = sharpness_torus(eps, b, p).unwrap();
                // quadrature oracle with the band split at its peak
                let f = |x: f64| (2.0 * PI * x).sin().abs().powf(alpha * p);
                let band = integrate(f, 0.5 - eps / 2.0, 0.5, 1e-14) + integrate(f, 0.5, 0.5 + eps / 2.0, 1e-14);
                let full = 2.0 * integrate(f, 0.0, 0.5, 1e-14);
                worst_quad = worst_quad.max((o.ratio - (band / full).powf(1.0 / p)).abs());
                if o.applies {
                    checked += 1;
                    all_hold &= o.ratio <= o.bound;
                }
            }
        }
    }
    for b in 1..=6u32 {
        for gamma in [0.01, 0.05, 0.1, 0.2, 0.3, 0.5] {
            let o = sharpness_sparse(b, gamma).unwrap();
            let w = 2.0 * PI * b as f64;
            let f = |x: f64| (w * x).sin().abs();
            let mut part = 0.0;
            let mut lo = 0.0;
            let half = 1.0 / (2.0 * b as f64);
            while lo < gamma {
                let hi = (lo + half).min(gamma);
                part += integrate(f, lo, hi, 1e-14);
                lo = hi;
            }
            worst_quad = worst_quad.max((o.ratio - part / (2.0 / PI)).abs());
            checked += 1;
            all_hold &= o.holds;
        }
    }
    Outcome::new(
        all_hold && worst_quad <= 1e-9,
        format!("{checked} bounded cases hold: {all_hold}; max quadrature diff {worst_quad:.2e}"),
    )
}

fn random_matrix(rng: &mut ChaCha8Rng, r: usize, c: usize) -> DMatrix<f64> {
    DMatrix::from_fn(r, c, |_, _| rng.gen_range(-1.0..1.0))
}

fn c7_douglas() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_ratio: f64 = 0.0;
    let mut worst_fact: f64 = 0.0;
    let mut included = 0;
    for _ in 0..100 {
        let n = rng.gen_range(3..8);
        let k = rng.gen_range(2..=n);
        let m = rng.gen_range(1..6);
        let y = random_matrix(&mut rng, n, k);
        let x = &y * random_matrix(&mut rng, k, m);
        let f = douglas_factorize(&x, &y, 1e-10).unwrap();
        if f.range_inclusion {
            included += 1;
            let (c, s) = (f.c_min.unwrap(), f.sup_ratio.unwrap());
            worst_ratio = worst_ratio.max((c - s).abs() / c.max(1.0));
            worst_fact = worst_fact.max((&y * f.z_min.unwrap() - &x).amax());
        }
    }
    let mut rejected = 0;
    for _ in 0..100 {
        let n = rng.gen_range(3..8);
        let k = rng.gen_range(1..n);
        let y = random_matrix(&mut rng, n, k);
        let m = rng.gen_range(1..4);
        let x = random_matrix(&mut rng, n, m);
        if !douglas_factorize(&x, &y, 1e-10).unwrap().range_inclusion {
            rejected += 1;
        }
    }
    Outcome::new(
        included == 100 && rejected == 100 && worst_ratio <= 1e-8 && worst_fact <= 1e-10,
        format!(
            "inclusions found {included}/100, violations found {rejected}/100, ‖Y⁺X‖ vs sup-ratio {worst_ratio:.2e}, ‖YZ − X‖ {worst_fact:.2e}"
        ),
    )
}

fn c8_miller() -> Outcome {
    let (s, c) = miller_cstar(1.0, 1.0, 1.0, 0.0).unwrap();
    let s_exact = 3f64.sqrt() - 1.0;
    let c_exact = 4.0 / s_exact.powi(4);
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let beta = rng.gen_range(0.1..4.0);
        let b = rng.gen_range(0.01..100.0);
        let a = rng.gen_range(0.0..5.0);
        let m = rng.gen_range(0.01..5.0);
        let (root, _) = miller_cstar(beta, b, a, m).unwrap();
        let rhs = miller_rhs(beta, b, a, m);
        worst = worst.max((root * (root + beta + 1.0).powf(beta) - rhs).abs() / rhs);
    }
    let pass = (s - s_exact).abs() <= 1e-9 && (c - c_exact).abs() <= 1e-9 && worst <= 1e-10;
    Outcome::new(
        pass,
        format!("s = {s:.12}, c* = {c:.9}, max relative residual {worst:.2e}"),
    )
}

fn c9_bound_evaluators() -> Outcome {
    let base = BoundParams {
        t: Some(1.0),
        gamma: Some(0.5),
        a: Some(vec![1.0]),
        ..Default::default()
    };
    let e2 = std::f64::consts::E;
    let ev = cost_bound(CostBound::EgidiVeselic, &base).unwrap().value;
    let th = cost_bound(CostBound::Thick2, &base).unwrap().value;
    let abstract_p = BoundParams {
        t: Some(1.0),
        s: Some(0.5),
        d0: Some(1.0),
        d1: Some(1.0),
        beta: Some(0.0),
        b_norm: Some(1.0),
        ..Default::default()
    };
    let na = cost_bound(CostBound::NttvAbstract, &abstract_p).unwrap().value;
    let spots = (ev - 2.0 * e2 * e2).abs() <= 1e-9
        && (th - 2.0 * 0.5f64.ln().powi(2).exp()).abs() <= 1e-9
        && (na - 3.0 * e2).abs() <= 1e-9;

    let full = BoundParams {
        t: Some(1.0),
        gamma: Some(0.5),
        a: Some(vec![1.0, 0.5]),
        g: Some(2.0),
        delta: Some(0.9),
        v_norm: Some(2.0),
        theta: Some(0.8),
        s: Some(0.4),
        d0: Some(2.0),
        d1: Some(1.5),
        beta: Some(-0.5),
        b_norm: Some(1.0),
        miller: Some(heatctl_core::bounds::MillerParams {
            beta: 1.0,
            b: 1.0,
            a: 1.0,
            m: 0.0,
            a0: 1.0,
            b0: 1.0,
        }),
        ..Default::default()
    };
    let ts: Vec<f64> = (0..20).map(|i| 0.1 * 1.3f64.powi(i)).collect();
    let mut mono_t = true;
    for b in CostBound::ALL {
        let vals: Vec<f64> = ts
            .iter()
            .map(|&t| cost_bound(b, &full.with_t(t)).unwrap().value)
            .collect();
        mono_t &= vals.windows(2).all(|w| w[1] < w[0]);
    }
    let gammas = [0.1, 0.2, 0.4, 0.6, 0.8, 0.95];
    let mut mono_g = true;
    for b in [CostBound::EgidiVeselic, CostBound::Thick2, CostBound::Fractional] {
        for &t in &[1.0, 10.0, 100.0] {
            let vals: Vec<f64> = gammas
                .iter()
                .map(|&g| {
                    let p = BoundParams {
                        gamma: Some(g),
                        a: Some(vec![1.0]),
                        ..full.with_t(t)
                    };
                    cost_bound(b, &p).unwrap().value
                })
                .collect();
            mono_g &= vals.windows(2).all(|w| w[1] < w[0]);
        }
    }
    let exponent = |a: f64| {
        let p = BoundParams {
            a: Some(vec![a]),
            ..base.clone()
        };
        let b1 = cost_bound(CostBound::Thick2, &p.with_t(1.0)).unwrap().value;
        let b2 = cost_bound(CostBound::Thick2, &p.with_t(2.0)).unwrap().value;
        2.0 * (b1.ln() - b2.ln() - 0.5 * 2f64.ln())
    };
    let ratio = exponent(2.0) / exponent(1.0);
    Outcome::new(
        spots && mono_t && mono_g && (ratio - 4.0).abs() <= 1e-9,
        format!("spot values ok: {spots}; decreasing in T: {mono_t}; decreasing in γ: {mono_g}; a-doubling ratio {ratio:.12}"),
    )
}

fn c10_small_time() -> Outcome {
    let e_max = 1600.0;
    let rho: f64 = 0.25;
    let dom = DomainSpec::torus(1, 1.0 / (2.0 * PI)).unwrap();
    let op = OperatorHandle::laplacian(&SpectralBasis::build(&dom, e_max).unwrap());
    // complement [0.5, 1) holds a ball of radius 0.25
    let set = ObservabilitySet::periodic(vec![0.0], vec![1.0], vec![AxisBox::interval(0.0, 0.5).unwrap()]).unwrap();
    let sys = ControlSystem::new(&op, &set).unwrap();
    let t_min = 1000f64.ln() / e_max;
    let ts: Vec<f64> = (0..10).map(|k| t_min * 1.25f64.powi(k)).collect();
    let ln_c: Vec<f64> = ts
        .iter()
        .map(|&t| empirical_cost(&sys, t, &GramianOptions::default()).unwrap().cost.ln())
        .collect();
    let lower = t_min * ln_c[0];
    let x: Vec<f64> = ts.iter().map(|t| 1.0 / t).collect();
    let increasing = ln_c.windows(2).all(|w| w[1] < w[0]);
    // slopes against 1/T must grow with 1/T
    let slopes: Vec<f64> = (0..ts.len() - 1)
        .map(|i| (ln_c[i] - ln_c[i + 1]) / (x[i] - x[i + 1]))
        .collect();
    let convex = slopes.windows(2).all(|w| w[0] >= w[1]);
    Outcome::new(
        lower >= rho * rho / 8.0 && increasing && convex,
        format!(
            "T_min·ln C = {lower:.4} (≥ {:.4}); increasing in 1/T: {increasing}; convex in 1/T: {convex} (slopes {:.3} → {:.3} as T grows)",
            rho * rho / 8.0,
            slopes[0],
            slopes[slopes.len() - 1]
        ),
    )
}

fn c11_large_time() -> Outcome {
    let opts = GramianOptions::default();
    let dom = DomainSpec::torus(1, 1.0).unwrap();
    let op = OperatorHandle::laplacian(&SpectralBasis::build(&dom, 100.0).unwrap());
    let set = ExampleSet::EdgeBands { gamma: 0.3 }.build(1, PI / 2.0).unwrap();
    let sys = ControlSystem::new(&op, &set).unwrap();
    let g = sys.input[(0, 0)];
    let scaled = |t: f64| empirical_cost(&sys, t, &opts).unwrap().cost * t.sqrt();
    let (c50, c100) = (scaled(50.0), scaled(100.0));
    let change = (c100 - c50).abs() / c100;
    let target = 1.0 / g.sqrt();
    let gap = (c100 - target).abs() / target;

    let dir = half_interval_system(100.0);
    let kappa = dir.mu[0];
    let mut dir_ok = true;
    let mut ratios = Vec::new();
    for t in [5.0, 7.5, 10.0, 15.0] {
        let c1 = empirical_cost(&dir, t, &opts).unwrap().cost;
        let c2 = empirical_cost(&dir, 2.0 * t, &opts).unwrap().cost;
        let r = (c2 / c1) / (-kappa * t).exp();
        dir_ok &= r <= 1.05;
        ratios.push(r);
    }
    Outcome::new(
        change <= 0.01 && gap <= 0.01 && dir_ok,
        format!(
            "periodic: √T·C_T = {c50:.5} → {c100:.5} (change {:.3}%, 1/√g = {target:.5}); Dirichlet C_2T/(C_T e^(−κT)) max {:.4}",
            100.0 * change,
            ratios.iter().copied().fold(0.0, f64::max)
        ),
    )
}

fn c12_homogenization() -> Outcome {
    let dom = DomainSpec::torus(1, 1.0).unwrap();
    let op = OperatorHandle::laplacian(&SpectralBasis::build(&dom, 100.0).unwrap());
    let ts: Vec<f64> = (0..6).map(|k| 0.15 * 1.5f64.powi(k)).collect();
    let x: Vec<f64> = ts.iter().map(|t| 1.0 / t).collect();
    let mut slopes = Vec::new();
    for scale in [2.0 * PI, PI, PI / 2.0, PI / 4.0] {
        let set = ExampleSet::EdgeBands { gamma: 0.3 }.build(1, scale).unwrap();
        let sys = ControlSystem::new(&op, &set).unwrap();
        let y: Vec<f64> = ts
            .iter()
            .map(|&t| empirical_cost(&sys, t, &GramianOptions::default()).unwrap().cost.ln())
            .collect();
        slopes.push(fit_line(&x, &y).unwrap().slope);
    }
    let monotone = slopes.windows(2).all(|w| w[1] < w[0]);
    Outcome::new(monotone, format!("1/T slopes {:.4?}", slopes))
}

fn c13_fractional() -> Outcome {
    let dom = DomainSpec::interval(0.0, PI, Boundary::Dirichlet).unwrap();
    let basis = SpectralBasis::build(&dom, 400.0).unwrap();
    let v = PotentialSpec::Boxes {
        base: 0.0,
        boxes: vec![WeightedBox {
            region: AxisBox::interval(0.3, 1.9).unwrap(),
            value: 3.0,
        }],
    };
    let mut exact = true;
    let mut count = 0;
    for op in [
        OperatorHandle::laplacian(&basis),
        OperatorHandle::schrodinger(&basis, &v).unwrap(),
    ] {
        let frac = op.fractional(2.0).unwrap();
        for k in 1..=40 {
            let lambda = 9.7 * k as f64;
            let a = spectral_ineq_constant(&frac, &half_set(), lambda * lambda);
            let b = spectral_ineq_constant(&op, &half_set(), lambda);
            if let (Ok(a), Ok(b)) = (a, b) {
                exact &= a == b;
                count += 1;
            }
        }
    }
    Outcome::new(
        exact && count > 0,
        format!("{count} levels compared, identical: {exact}"),
    )
}

fn sci(v: &[f64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.3e}")).collect();
    format!("[{}]", parts.join(", "))
}

fn c14_exhaustion() -> Outcome {
    let t = 0.1;
    let run = ExhaustionRun {
        dim: 1,
        lengths: vec![2.0, 3.0, 4.0],
        reference: None,
        cutoff: 200.0,
        potential: PotentialSpec::Zero,
        u0: Bump::new(1.0, 3).unwrap(),
    };
    let rows = semigroup_difference(&run, t).unwrap();
    let diffs: Vec<f64> = rows.iter().map(|r| r.difference).collect();
    let decreasing = diffs.windows(2).all(|w| w[1] < w[0]);
    let fit = decay_fit(&rows).unwrap();
    let rate_ok = fit.slope < 0.0 && -fit.slope >= 1.0 / (64.0 * t);

    let set = ObservabilitySet::periodic(vec![0.0], vec![1.0], vec![AxisBox::interval(0.0, 0.5).unwrap()]).unwrap();
    let ctl_run = ExhaustionRun { cutoff: 100.0, ..run };
    let controls = nested_control_family(&ctl_run, &set, 0.5, &GramianOptions::default()).unwrap();
    let norms: Vec<f64> = controls.iter().map(|r| r.control_norm).collect();
    let spread = norms.iter().copied().fold(0.0, f64::max) / norms.iter().copied().fold(f64::INFINITY, f64::min);
    let residuals: Vec<f64> = controls.iter().map(|r| r.residual).collect();
    let res_dec = residuals.windows(2).all(|w| w[1] < w[0]);
    Outcome::new(
        decreasing && rate_ok && spread <= 2.0 && res_dec,
        format!(
            "differences {}; L² slope {:.4} (need ≤ {:.4}); ‖f_L‖ {norms:.4?} (max/min {spread:.3}); residuals {}",
            sci(&diffs),
            fit.slope,
            -1.0 / (64.0 * t),
            sci(&residuals)
        ),
    )
}

fn c15_lifting() -> Outcome {
    let dom = DomainSpec::interval(0.0, PI, Boundary::Dirichlet).unwrap();
    let basis = SpectralBasis::build(&dom, 200.0).unwrap();
    let v = PotentialSpec::Boxes {
        base: 0.0,
        boxes: vec![WeightedBox {
            region: AxisBox::interval(1.0, 2.5).unwrap(),
            value: 5.0,
        }],
    };
    let op = OperatorHandle::schrodinger(&basis, &v).unwrap();
    let report = eigenvalue_lifting_check(&op, &LiftingWeight::Set(half_set()), None, 25.0).unwrap();
    let c = report.reference.unwrap();
    let min = report.derivatives.iter().copied().fold(f64::INFINITY, f64::min);
    Outcome::new(
        report.holds && min >= c - 1e-8,
        format!(
            "{} eigenvalues, min derivative {min:.5} ≥ C_emp {c:.5}",
            report.derivatives.len()
        ),
    )
}

/// Runs without the libtest harness so the criterion lines are always shown.
fn main() {
    let s = |n: u64| Some(Duration::from_secs(n));
    let results: Vec<(u32, &str, Outcome)> = vec![
        (1, "scalar exact cost", timed(s(1), c1_scalar)),
        (2, "null-control residual", timed(s(5), c2_null_control)),
        (3, "active/passive validity", timed(s(10), c3_active_passive)),
        (4, "spectral-inequality oracle", timed(None, c4_gram_examples)),
        (5, "sqrt(E) scaling", timed(s(30), c5_sqrt_scaling)),
        (6, "sharpness examples", timed(None, c6_sharpness)),
        (7, "Douglas lemma", timed(None, c7_douglas)),
        (8, "Miller root", timed(None, c8_miller)),
        (9, "bound evaluators", timed(None, c9_bound_evaluators)),
        (10, "small-time sandwich", timed(s(60), c10_small_time)),
        (11, "large-time limits", timed(None, c11_large_time)),
        (12, "homogenization", timed(None, c12_homogenization)),
        (13, "fractional identity", timed(None, c13_fractional)),
        (14, "exhaustion decay", timed(s(60), c14_exhaustion)),
        (15, "eigenvalue lifting", timed(None, c15_lifting)),
    ];
    let mut unexpected = Vec::new();
    for (id, name, out) in &results {
        let tag = if out.pass { "PASS" } else { "FAIL" };
        let note = if !out.pass && KNOWN_FAILURES.contains(id) {
            " (known)"
        } else {
            ""
        };
        println!("criterion {id:>2} {tag}{note}: {name}: {}", out.detail);
        if !out.pass && !KNOWN_FAILURES.contains(id) {
            unexpected.push(*id);
        }
    }
    if !unexpected.is_empty() {
        eprintln!("criteria failed: {unexpected:?}");
        std::process::exit(1);
    }
}
