//! Spectral-inequality constants, the fitted uncertainty form and UCP bounds.

use std::f64::consts::PI;

use heatctl_core::geometry::{AxisBox, ExampleSet, ObservabilitySet, ThickParams};
use heatctl_core::quadrature::integrate;
use heatctl_core::spectral::{Boundary, DomainSpec, OperatorHandle, PotentialSpec, SpectralBasis, WeightedBox};
use heatctl_core::uncertainty::{
    eigenvalue_lifting_check, fit_uncertainty_form, nttvs_optimum, spectral_ineq_constant, LiftingWeight,
    PotentialRange, SpectralInequality, UcpBound, UniversalConstants,
};
use nalgebra::DVector;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn half_set() -> ObservabilitySet {
    ObservabilitySet::periodic(
        vec![0.0],
        vec![2.0 * PI],
        vec![AxisBox::interval(0.0, PI / 2.0).unwrap()],
    )
    .unwrap()
}

fn dirichlet_op(e: f64) -> OperatorHandle {
    let dom = DomainSpec::interval(0.0, PI, Boundary::Dirichlet).unwrap();
    OperatorHandle::laplacian(&SpectralBasis::build(&dom, e).unwrap())
}

#[test]
fn torus_constant_is_at_most_the_density() {
    let dom = DomainSpec::torus(1, 1.0).unwrap();
    let op = OperatorHandle::laplacian(&SpectralBasis::build(&dom, 50.0).unwrap());
    for gamma in [0.1, 0.3, 0.6] {
        let set = ExampleSet::EdgeBands { gamma }.build(1, PI).unwrap();
        let c = spectral_ineq_constant(&op, &set, 50.0).unwrap();
        assert!(c > 0.0 && c <= gamma + 1e-12, "γ = {gamma}: {c}");
    }
}

#[test]
fn random_band_limited_functions_respect_the_constant() {
    let e = 36.0;
    let op = dirichlet_op(e);
    let c = spectral_ineq_constant(&op, &half_set(), e).unwrap();
    let n = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..50 {
        let coeffs: Vec<f64> = (0..n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u = op.from_eigen(&DVector::from_vec(coeffs));
        let f = |x: f64| op.basis.synthesize(u.as_slice(), &[x]).powi(2);
        let on_set = integrate(f, 0.0, PI / 2.0, 1e-14);
        let total = integrate(f, 0.0, PI, 1e-14);
        assert!(on_set / total >= c - 1e-12);
    }
}

#[test]
fn fit_recovers_exact_uncertainty_form() {
    let (d0, d1, s) = (2.5, 0.7, 0.5);
    let pairs: Vec<(f64, f64)> = [1.0, 4.0, 9.0, 16.0, 25.0]
        .iter()
        .map(|&e: &f64| (e, 1.0 / (d0 * (d1 * e.powf(s)).exp())))
        .collect();
    let fit = fit_uncertainty_form(&pairs, s).unwrap();
    assert!((fit.d0 - d0).abs() < 1e-9 && (fit.d1 - d1).abs() < 1e-9);
    for (e, c) in pairs {
        assert!(fit.envelope(e) <= c * (1.0 + 1e-12));
    }
}

#[test]
fn fit_envelope_lies_below_measured_constants() {
    let op = dirichlet_op(400.0);
    let ineq = SpectralInequality::new(&op, &half_set()).unwrap();
    let es: Vec<f64> = (1..=10).map(|k| (k * k) as f64).collect();
    let values = ineq.sweep(&es).unwrap();
    let pairs: Vec<(f64, f64)> = es.iter().copied().zip(values).collect();
    let fit = fit_uncertainty_form(&pairs, 0.5).unwrap();
    for (e, c) in pairs {
        assert!(fit.envelope(e) <= c * (1.0 + 1e-12));
    }
}

#[test]
fn shift_optimum_is_no_worse_than_zero_shift() {
    let c = UniversalConstants::default();
    for (lo, hi, e) in [(0.0, 4.0, 10.0), (-2.0, 3.0, 1.0), (1.0, 1.0, 0.0)] {
        let v = PotentialRange { min: lo, max: hi };
        let (best, _) = nttvs_optimum(1.0, 0.2, &v, e, &c).unwrap();
        let unshifted = UcpBound::Nttv {
            g: 1.0,
            delta: 0.2,
            v_norm: v.norm(),
            e,
        }
        .evaluate(&c)
        .unwrap();
        assert!(best >= unshifted * (1.0 - 1e-12));
    }
}

#[test]
fn lifting_with_potential_weight() {
    let dom = DomainSpec::interval(0.0, PI, Boundary::Dirichlet).unwrap();
    let basis = SpectralBasis::build(&dom, 100.0).unwrap();
    let op = OperatorHandle::laplacian(&basis);
    // W = 2 on [0, π/2) dominates the indicator of the reference set
    let w = PotentialSpec::Boxes {
        base: 0.0,
        boxes: vec![WeightedBox {
            region: AxisBox::interval(0.0, PI / 2.0).unwrap(),
            value: 2.0,
        }],
    };
    let report = eigenvalue_lifting_check(&op, &LiftingWeight::Potential(w), Some(&half_set()), 100.0).unwrap();
    assert!(report.holds);
    // for sine modes on half the interval the overlap is exactly 1/2
    for d in &report.derivatives {
        assert!((d - 1.0).abs() < 1e-10);
    }
}

proptest! {
    #[test]
    fn constant_is_non_increasing_in_energy(e1 in 1.0f64..200.0, extra in 0.0f64..200.0) {
        let op = dirichlet_op(400.0);
        let ineq = SpectralInequality::new(&op, &half_set()).unwrap();
        let a = ineq.constant(e1).unwrap();
        let b = ineq.constant(e1 + extra).unwrap();
        prop_assert!(b <= a + 1e-14);
    }

    #[test]
    fn spectral_cube_bound_decreases_in_energy(gamma in 0.05f64..1.0, a in 0.1f64..3.0, e in 0.0f64..100.0) {
        let c = UniversalConstants::default();
        let thick = ThickParams::new(gamma, vec![a]).unwrap();
        let v1 = UcpBound::SpectralCube { thick: thick.clone(), e }.evaluate(&c).unwrap();
        let v2 = UcpBound::SpectralCube { thick, e: e + 1.0 }.evaluate(&c).unwrap();
        prop_assert!(v2 <= v1);
        prop_assert!(v1 <= 1.0);
    }
}
