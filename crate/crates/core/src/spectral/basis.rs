use std::f64::consts::FRAC_PI_2;

use serde::{Deserialize, Serialize};

use super::domain::{Boundary, DomainSpec};
use crate::error::{Error, Result};
use crate::trig::Trig;

/// Default limit on the number of retained modes.
pub const DEFAULT_MAX_MODES: usize = 2048;

/// Laplacian eigenfunctions with eigenvalue at most `cutoff`, sorted by
/// eigenvalue and then lexicographically by mode index.
///
/// Periodic axes use the real basis `1, cos(ωkx), sin(ωkx)` with negative `k`
/// labelling the sine; Dirichlet axes use sines (`k ≥ 1`), Neumann axes
/// cosines including the constant (`k ≥ 0`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectralBasis {
    pub domain: DomainSpec,
    pub modes: Vec<Vec<i64>>,
    pub eigenvalues: Vec<f64>,
    pub cutoff: f64,
}

impl SpectralBasis {
    pub fn build(domain: &DomainSpec, cutoff: f64) -> Result<Self> {
        Self::build_with_limit(domain, cutoff, DEFAULT_MAX_MODES)
    }

    pub fn build_with_limit(domain: &DomainSpec, cutoff: f64, max_modes: usize) -> Result<Self> {
        domain.validate()?;
        if !(cutoff.is_finite() && cutoff > 0.0) {
            return Err(Error::param("e_max", "cutoff must be positive and finite"));
        }
        let d = domain.dim();
        let slack = cutoff * (1.0 + 1e-12);
        // Per-axis admissible indices with their 1D eigenvalues.
        let axes: Vec<Vec<(i64, f64)>> = (0..d)
            .map(|axis| {
                let unit = domain.unit_frequency(axis);
                let kmax = (cutoff.sqrt() / unit).floor() as i64 + 1;
                let range: Vec<i64> = match domain.boundary {
                    Boundary::Periodic => (-kmax..=kmax).collect(),
                    Boundary::Dirichlet => (1..=kmax).collect(),
                    Boundary::Neumann => (0..=kmax).collect(),
                };
                range
                    .into_iter()
                    .map(|k| (k, (unit * k as f64).powi(2)))
                    .filter(|(_, l)| *l <= slack)
                    .collect()
            })
            .collect();

        if axes.iter().any(|a| a.is_empty()) {
            return Err(Error::Domain(format!(
                "no Laplacian eigenvalue below the cutoff {cutoff}"
            )));
        }
        let required = count_modes(&axes, slack);
        if required > max_modes {
            return Err(Error::Capacity {
                required,
                limit: max_modes,
            });
        }
        let mut entries: Vec<(f64, Vec<i64>)> = Vec::with_capacity(required);
        collect_modes(&axes, slack, 0.0, &mut Vec::with_capacity(d), &mut entries);
        if entries.is_empty() {
            return Err(Error::Domain(format!(
                "no Laplacian eigenvalue below the cutoff {cutoff}"
            )));
        }
        entries.sort_by(|x, y| x.0.total_cmp(&y.0).then_with(|| x.1.cmp(&y.1)));
        let (eigenvalues, modes) = entries.into_iter().unzip();
        Ok(Self {
            domain: domain.clone(),
            modes,
            eigenvalues,
            cutoff,
        })
    }

    pub fn len(&self) -> usize {
        self.modes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.modes.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// The 1D factor of mode index `k` on `axis`, normalised in `L²` of that axis.
    pub fn axis_factor(&self, axis: usize, k: i64) -> Trig {
        axis_factor(&self.domain, axis, k)
    }

    /// Value of basis function `j` at `x`.
    pub fn eval(&self, j: usize, x: &[f64]) -> f64 {
        self.modes[j]
            .iter()
            .enumerate()
            .map(|(axis, &k)| self.axis_factor(axis, k).eval(x[axis]))
            .product()
    }

    /// Coefficients-to-values synthesis at a point.
    pub fn synthesize(&self, coeffs: &[f64], x: &[f64]) -> f64 {
        coeffs.iter().enumerate().map(|(j, c)| c * self.eval(j, x)).sum()
    }

    /// Largest 1D frequency appearing on `axis`.
    pub fn max_frequency(&self, axis: usize) -> f64 {
        let unit = self.domain.unit_frequency(axis);
        self.modes
            .iter()
            .map(|m| unit * m[axis].unsigned_abs() as f64)
            .fold(0.0, f64::max)
    }
}

fn collect_modes(
    axes: &[Vec<(i64, f64)>],
    budget: f64,
    acc: f64,
    prefix: &mut Vec<i64>,
    out: &mut Vec<(f64, Vec<i64>)>,
) {
    match axes.split_first() {
        None => out.push((acc, prefix.clone())),
        Some((head, rest)) => {
            for &(k, l) in head {
                if acc + l <= budget {
                    prefix.push(k);
                    collect_modes(rest, budget, acc + l, prefix, out);
                    prefix.pop();
                }
            }
        }
    }
}

fn count_modes(axes: &[Vec<(i64, f64)>], slack: f64) -> usize {
    fn rec(axes: &[Vec<(i64, f64)>], budget: f64) -> usize {
        match axes.split_first() {
            None => 1,
            Some((head, rest)) => head
                .iter()
                .filter(|(_, l)| *l <= budget)
                .map(|(_, l)| rec(rest, budget - l))
                .sum(),
        }
    }
    rec(axes, slack)
}

pub(crate) fn axis_factor(domain: &DomainSpec, axis: usize, k: i64) -> Trig {
    let ell = domain.sides[axis];
    let x0 = domain.lower[axis];
    let unit = domain.unit_frequency(axis);
    let norm = (2.0 / ell).sqrt();
    match domain.boundary {
        Boundary::Periodic => {
            if k == 0 {
                Trig::constant(1.0 / ell.sqrt())
            } else if k > 0 {
                let w = unit * k as f64;
                Trig::new(norm, w, -w * x0)
            } else {
                let w = unit * (-k) as f64;
                Trig::new(norm, w, -w * x0 - FRAC_PI_2)
            }
        }
        Boundary::Dirichlet => {
            let w = unit * k as f64;
            Trig::new(norm, w, -w * x0 - FRAC_PI_2)
        }
        Boundary::Neumann => {
            if k == 0 {
                Trig::constant(1.0 / ell.sqrt())
            } else {
                let w = unit * k as f64;
                Trig::new(norm, w, -w * x0)
            }
        }
    }
}
