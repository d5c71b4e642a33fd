//! Basis, potential and operator checks against direct quadrature.

use std::f64::consts::PI;

use heatctl_core::geometry::AxisBox;
use heatctl_core::quadrature::integrate;
use heatctl_core::spectral::{Boundary, DomainSpec, OperatorHandle, PotentialSpec, SpectralBasis, WeightedBox};
use nalgebra::DVector;
use proptest::prelude::*;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

#[test]
fn torus_eigenvalues_match_lattice_count() {
    let scale = 0.7;
    let e = 40.0;
    let dom = DomainSpec::torus(2, scale).unwrap();
    let op = OperatorHandle::laplacian(&SpectralBasis::build(&dom, e).unwrap());
    let mut expected = Vec::new();
    for k1 in -10i64..=10 {
        for k2 in -10i64..=10 {
            let lam = ((k1 * k1 + k2 * k2) as f64) / (scale * scale);
            if lam <= e {
                expected.push(lam);
            }
        }
    }
    let got: Vec<f64> = op.eigvals.iter().copied().collect();
    let expected = sorted(expected);
    assert_eq!(got.len(), expected.len());
    for (a, b) in got.iter().zip(&expected) {
        assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn dirichlet_and_neumann_spectra() {
    let d = OperatorHandle::laplacian(
        &SpectralBasis::build(&DomainSpec::interval(0.0, 2.0, Boundary::Dirichlet).unwrap(), 50.0).unwrap(),
    );
    let n = OperatorHandle::laplacian(
        &SpectralBasis::build(&DomainSpec::interval(0.0, 2.0, Boundary::Neumann).unwrap(), 50.0).unwrap(),
    );
    for (j, lam) in d.eigvals.iter().enumerate() {
        let k = (j + 1) as f64;
        assert!((lam - (k * PI / 2.0).powi(2)).abs() < 1e-12);
    }
    for (j, lam) in n.eigvals.iter().enumerate() {
        let k = j as f64;
        assert!((lam - (k * PI / 2.0).powi(2)).abs() < 1e-12);
    }
}

#[test]
fn basis_is_orthonormal_by_quadrature() {
    for bc in [Boundary::Dirichlet, Boundary::Neumann, Boundary::Periodic] {
        let dom = DomainSpec::interval(-0.5, 1.5, bc).unwrap();
        let basis = SpectralBasis::build(&dom, 60.0).unwrap();
        for i in 0..basis.len() {
            for j in 0..basis.len() {
                let v = integrate(|x| basis.eval(i, &[x]) * basis.eval(j, &[x]), -0.5, 1.5, 1e-14);
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((v - expect).abs() < 1e-10, "{bc:?} ({i},{j}) = {v}");
            }
        }
    }
}

#[test]
fn box_potential_matrix_matches_quadrature() {
    let dom = DomainSpec::interval(0.0, PI, Boundary::Dirichlet).unwrap();
    let basis = SpectralBasis::build(&dom, 40.0).unwrap();
    let v = PotentialSpec::Boxes {
        base: 0.5,
        boxes: vec![
            WeightedBox {
                region: AxisBox::interval(0.2, 1.3).unwrap(),
                value: 2.0,
            },
            WeightedBox {
                region: AxisBox::interval(1.0, 2.7).unwrap(),
                value: -1.0,
            },
        ],
    };
    let m = v.matrix(&basis).unwrap();
    let breaks = [0.0, 0.2, 1.0, 1.3, 2.7, PI];
    for i in 0..basis.len() {
        for j in 0..basis.len() {
            let f = |x: f64| v.eval(&[x]) * basis.eval(i, &[x]) * basis.eval(j, &[x]);
            let q: f64 = breaks.windows(2).map(|w| integrate(f, w[0], w[1], 1e-14)).sum();
            assert!((m[(i, j)] - q).abs() < 1e-10);
        }
    }
}

#[test]
fn constant_potential_shifts_spectrum() {
    let dom = DomainSpec::torus(1, 1.0).unwrap();
    let basis = SpectralBasis::build(&dom, 30.0).unwrap();
    let lap = OperatorHandle::laplacian(&basis);
    let shifted = OperatorHandle::schrodinger(
        &basis,
        &PotentialSpec::Boxes {
            base: 2.5,
            boxes: vec![],
        },
    )
    .unwrap();
    for (a, b) in lap.eigvals.iter().zip(shifted.eigvals.iter()) {
        assert!((b - a - 2.5).abs() < 1e-12);
    }
}

#[test]
fn fractional_power_keeps_eigenvectors() {
    let dom = DomainSpec::interval(0.0, PI, Boundary::Dirichlet).unwrap();
    let basis = SpectralBasis::build(&dom, 100.0).unwrap();
    let v = PotentialSpec::indicator(AxisBox::interval(0.5, 2.0).unwrap());
    let op = OperatorHandle::schrodinger(&basis, &v).unwrap();
    let frac = op.fractional(0.5).unwrap();
    assert_eq!(frac.eigvecs, op.eigvecs);
    for (a, b) in op.eigvals.iter().zip(frac.eigvals.iter()) {
        assert!((a.sqrt() - b).abs() < 1e-14);
    }
}

proptest! {
    #[test]
    fn semigroup_contracts_and_composes(
        coeffs in prop::collection::vec(-1.0f64..1.0, 12),
        s in 0.0f64..0.5,
        t in 0.0f64..0.5,
        height in 0.0f64..5.0,
    ) {
        let dom = DomainSpec::interval(0.0, PI, Boundary::Dirichlet).unwrap();
        let basis = SpectralBasis::build(&dom, 144.0).unwrap();
        let v = PotentialSpec::Boxes {
            base: 0.0,
            boxes: vec![WeightedBox { region: AxisBox::interval(0.4, 1.7).unwrap(), value: height }],
        };
        let op = OperatorHandle::schrodinger(&basis, &v).unwrap();
        let u = DVector::from_vec(coeffs);
        let us = op.semigroup_apply(s, &u).unwrap();
        prop_assert!(us.norm() <= u.norm() * (1.0 + 1e-12));
        let ust = op.semigroup_apply(t, &us).unwrap();
        let direct = op.semigroup_apply(s + t, &u).unwrap();
        prop_assert!((ust - direct).norm() <= 1e-12 * (1.0 + u.norm()));
    }

    #[test]
    fn eigen_coordinates_round_trip(coeffs in prop::collection::vec(-1.0f64..1.0, 12)) {
        let dom = DomainSpec::interval(0.0, PI, Boundary::Dirichlet).unwrap();
        let basis = SpectralBasis::build(&dom, 144.0).unwrap();
        let v = PotentialSpec::indicator(AxisBox::interval(1.0, 2.0).unwrap());
        let op = OperatorHandle::schrodinger(&basis, &v).unwrap();
        let u = DVector::from_vec(coeffs);
        let back = op.from_eigen(&op.to_eigen(&u));
        prop_assert!((back - &u).norm() <= 1e-12);
    }
}
