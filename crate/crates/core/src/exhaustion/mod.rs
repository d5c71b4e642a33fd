//! Dirichlet problems on growing boxes against a large reference box: heat
//! semigroup differences and uniformly bounded null-controls.

mod embed;
mod run;

pub use embed::{cross_gram, embed_zero_extension, Bump, Embedding};
pub use run::{
    decay_fit, nested_control_family, semigroup_difference, DifferenceRow, ExhaustionRun, NestedControlRow,
    FIDELITY_LIMIT,
};

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::{Boundary, DomainSpec, SpectralBasis};
    use nalgebra::DVector;

    fn basis(edge: f64, n: usize) -> SpectralBasis {
        let d = DomainSpec::centered_cube(1, edge, Boundary::Dirichlet).unwrap();
        let e = (std::f64::consts::PI * n as f64 / edge).powi(2);
        let b = SpectralBasis::build(&d, e).unwrap();
        assert_eq!(b.len(), n);
        b
    }

    #[test]
    fn embedding_keeps_norm_and_round_trips() {
        let small = basis(1.0, 64);
        let large = basis(2.0, 64);
        let mut u = DVector::zeros(64);
        u[0] = 1.0;
        let up = embed_zero_extension(&u, &small, &large).unwrap();
        assert!(up.coefficients.norm() >= 0.999);
        let back = cross_gram(&small, &large, &crate::geometry::ObservabilitySet::Full).unwrap() * &up.coefficients;
        assert!((back - u).norm() < 1e-3);
        let zero = embed_zero_extension(&DVector::zeros(64), &small, &large).unwrap();
        assert_eq!(zero.coefficients.norm(), 0.0);
        assert!(embed_zero_extension(&DVector::zeros(64), &large, &small).is_err());
    }

    #[test]
    fn bump_projection_matches_quadrature() {
        let b = Bump::new(1.0, 2).unwrap();
        let big = basis(2.0, 40);
        let p = b.project(&big).unwrap();
        for j in [0, 1, 4, 9] {
            let q = crate::quadrature::integrate(|x| b.eval(&[x]) * big.eval(j, &[x]), -0.5, 0.5, 1e-13);
            assert!((q - p.coefficients[j]).abs() < 1e-11);
        }
        let norm = crate::quadrature::integrate(|x| b.eval(&[x]).powi(2), -0.5, 0.5, 1e-13);
        assert!((norm - 1.0).abs() < 1e-12);
    }
}
