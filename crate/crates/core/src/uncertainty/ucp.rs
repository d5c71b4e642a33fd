//! Closed-form unique-continuation / spectral-inequality constants.
//!
//! Each evaluator returns the lower constant `C` of an estimate
//! `‖f‖_{S} ≥ C ‖f‖`, with the unspecified constants taken from
//! [`UniversalConstants`].

use serde::{Deserialize, Serialize};

use super::constants::UniversalConstants;
use crate::error::{ensure, Error, Result};
use crate::geometry::ThickParams;

/// Essential range `[min, max]` of a bounded potential.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PotentialRange {
    pub min: f64,
    pub max: f64,
}

impl PotentialRange {
    pub fn zero() -> Self {
        Self { min: 0.0, max: 0.0 }
    }

    /// `‖V − λ‖_∞`.
    pub fn shifted_norm(&self, lambda: f64) -> f64 {
        (self.max - lambda).abs().max((self.min - lambda).abs())
    }

    pub fn norm(&self) -> f64 {
        self.shifted_norm(0.0)
    }

    fn validate(&self) -> Result<()> {
        ensure(
            self.min.is_finite() && self.max.is_finite() && self.min <= self.max,
            "potential",
            "need finite min ≤ max",
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case", deny_unknown_fields)]
pub enum UcpBound {
    /// Band-limited functions with spectrum in one box of side lengths `b`.
    Kovrijkine { thick: ThickParams, b: Vec<f64> },
    /// Spectrum in `n` boxes of side lengths `b`, `L^p` norms.
    KovrijkineMulti {
        thick: ThickParams,
        b: Vec<f64>,
        n: u32,
        p: f64,
    },
    /// Torus version with one spectral box.
    LsTorus { thick: ThickParams, b: Vec<f64>, p: f64 },
    /// Torus version with `n` spectral boxes.
    LsTorusMulti {
        thick: ThickParams,
        b: Vec<f64>,
        n: u32,
        p: f64,
    },
    /// Spectral subspaces of the torus Laplacian up to energy `e`.
    SpectralCube { thick: ThickParams, e: f64 },
    /// Spectral subspaces of the whole-space Laplacian up to energy `e`.
    SpectralFullspace { thick: ThickParams, e: f64 },
    /// Single eigenfunctions of `−Δ + V` at energy `e`.
    Rmv {
        g: f64,
        delta: f64,
        v: PotentialRange,
        e: f64,
    },
    /// The `γ` (not `γ²`) of the spectral-projector estimate with `2‖V‖ + E`.
    KleinGamma { g: f64, delta: f64, v_norm: f64, e: f64 },
    /// Spectral subspaces of `−Δ + V` up to energy `e` (squared-norm constant).
    Nttv { g: f64, delta: f64, v_norm: f64, e: f64 },
    /// As `Nttv` with the free shift `λ` optimised.
    Nttvs {
        g: f64,
        delta: f64,
        v: PotentialRange,
        e: f64,
    },
}

impl UcpBound {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Kovrijkine { .. } => "kovrijkine",
            Self::KovrijkineMulti { .. } => "kovrijkine_multi",
            Self::LsTorus { .. } => "ls_torus",
            Self::LsTorusMulti { .. } => "ls_torus_multi",
            Self::SpectralCube { .. } => "spectral_cube",
            Self::SpectralFullspace { .. } => "spectral_fullspace",
            Self::Rmv { .. } => "rmv",
            Self::KleinGamma { .. } => "klein_gamma",
            Self::Nttv { .. } => "nttv",
            Self::Nttvs { .. } => "nttvs",
        }
    }

    pub fn evaluate(&self, c: &UniversalConstants) -> Result<f64> {
        c.validate()?;
        match self {
            Self::Kovrijkine { thick, b } => {
                let ab = dot_checked(thick, b)?;
                let d = thick.dim() as f64;
                Ok((thick.gamma / c.k1.powf(d)).powf(c.k1 * (ab + d)))
            }
            Self::KovrijkineMulti { thick, b, n, p } => multi(thick, b, *n, *p, c.k2),
            Self::LsTorus { thick, b, p } => {
                let ab = dot_checked(thick, b)?;
                check_p(*p)?;
                let d = thick.dim() as f64;
                Ok((thick.gamma / c.k3.powf(d)).powf(c.k3 * ab + (6.0 * d + 1.0) / p))
            }
            Self::LsTorusMulti { thick, b, n, p } => multi(thick, b, *n, *p, c.k4),
            Self::SpectralCube { thick, e } => {
                thick.validate()?;
                check_energy(*e)?;
                let d = thick.dim() as f64;
                Ok((thick.gamma / c.k5.powf(d)).powf(c.k5 * e.sqrt() * thick.a_l1() + (6.0 * d + 1.0) / 2.0))
            }
            Self::SpectralFullspace { thick, e } => {
                thick.validate()?;
                check_energy(*e)?;
                let d = thick.dim() as f64;
                Ok((thick.gamma / c.k1.powf(d)).powf(c.k1 * (2.0 * e.sqrt() * thick.a_l1() + d)))
            }
            Self::Rmv { g, delta, v, e } => {
                check_cells(*g, *delta)?;
                v.validate()?;
                ensure(e.is_finite(), "e", "must be finite")?;
                let norm = v.shifted_norm(*e);
                Ok((delta / g).powf(c.k * (1.0 + g.powf(4.0 / 3.0) * norm.powf(2.0 / 3.0))))
            }
            Self::KleinGamma { g, delta, v_norm, e } => {
                check_cells(*g, *delta)?;
                check_norm(*v_norm)?;
                let w = 2.0 * v_norm + e;
                ensure(w >= 0.0 && e.is_finite(), "e", "need 2‖V‖ + E ≥ 0")?;
                let expo = c.k * (1.0 + g.powf(4.0 / 3.0) * w.powf(2.0 / 3.0));
                let gamma_sq = (delta / g).powf(expo) / (2.0 * g.powi(4));
                Ok(gamma_sq.sqrt())
            }
            Self::Nttv { g, delta, v_norm, e } => {
                check_cells(*g, *delta)?;
                check_norm(*v_norm)?;
                check_energy(*e)?;
                Ok((delta / g).powf(c.k * (1.0 + g.powf(4.0 / 3.0) * v_norm.powf(2.0 / 3.0) + g * e.sqrt())))
            }
            Self::Nttvs { g, delta, v, e } => Ok(nttvs_optimum(*g, *delta, v, *e, c)?.0),
        }
    }
}

fn multi(thick: &ThickParams, b: &[f64], n: u32, p: f64, k: f64) -> Result<f64> {
    let ab = dot_checked(thick, b)?;
    check_p(p)?;
    ensure(n >= 1, "n", "must be at least 1")?;
    let d = thick.dim() as f64;
    let n = n as f64;
    let base = thick.gamma / k.powf(d);
    Ok(base.powf((k.powf(d) / thick.gamma).powf(n) * ab + n - (p - 1.0) / p))
}

fn dot_checked(thick: &ThickParams, b: &[f64]) -> Result<f64> {
    thick.validate()?;
    ensure(b.len() == thick.dim(), "b", "must have one entry per axis")?;
    ensure(b.iter().all(|v| v.is_finite() && *v >= 0.0), "b", "entries must be ≥ 0")?;
    Ok(thick.a.iter().zip(b).map(|(x, y)| x * y).sum())
}

fn check_p(p: f64) -> Result<()> {
    ensure(p.is_finite() && p >= 1.0, "p", "must be ≥ 1")
}

fn check_energy(e: f64) -> Result<()> {
    ensure(e.is_finite() && e >= 0.0, "e", "must be ≥ 0")
}

fn check_norm(v: f64) -> Result<()> {
    ensure(v.is_finite() && v >= 0.0, "v_norm", "must be ≥ 0")
}

fn check_cells(g: f64, delta: f64) -> Result<()> {
    ensure(g.is_finite() && g > 0.0, "g", "must be positive")?;
    ensure(delta > 0.0 && delta < g / 2.0, "delta", "must lie in (0, G/2)")
}

/// `sup_λ (δ/G)^{K(1 + G^{4/3}‖V−λ‖^{2/3} + G√(E−λ)₊)}` over
/// `λ ∈ [−‖V‖ − E, E]`, returned with the maximiser.
///
/// The exponent is minimised by a 256-point scan, a golden-section
/// refinement around the best scan point, and the kink candidates
/// `(min V + max V)/2` and `E`.
pub fn nttvs_optimum(g: f64, delta: f64, v: &PotentialRange, e: f64, c: &UniversalConstants) -> Result<(f64, f64)> {
    check_cells(g, delta)?;
    v.validate()?;
    check_energy(e)?;
    c.validate()?;
    let g43 = g.powf(4.0 / 3.0);
    let exponent = |l: f64| c.k * (1.0 + g43 * v.shifted_norm(l).powf(2.0 / 3.0) + g * (e - l).max(0.0).sqrt());
    let lo = -v.norm() - e;
    let hi = e;
    let mut best = (exponent(hi), hi);
    if hi > lo {
        const SCAN: usize = 256;
        let step = (hi - lo) / (SCAN - 1) as f64;
        let mut best_i = 0;
        let mut best_val = f64::INFINITY;
        for i in 0..SCAN {
            let l = lo + step * i as f64;
            let h = exponent(l);
            if h < best_val {
                best_val = h;
                best_i = i;
            }
        }
        let a = lo + step * best_i.saturating_sub(1) as f64;
        let b = (lo + step * (best_i + 1) as f64).min(hi);
        let l_gs = golden_section(&exponent, a, b, 1e-8);
        let mid = 0.5 * (v.min + v.max);
        for l in [lo + step * best_i as f64, l_gs, mid, hi] {
            if l >= lo && l <= hi {
                let h = exponent(l);
                if h < best.0 {
                    best = (h, l);
                }
            }
        }
    }
    let value = (delta / g).powf(best.0);
    if !value.is_finite() {
        return Err(Error::Numeric("non-finite optimum".into()));
    }
    Ok((value, best.1))
}

fn golden_section<F: Fn(f64) -> f64>(f: &F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - r * (b - a);
    let mut x2 = a + r * (b - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > tol {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    0.5 * (a + b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn thick(gamma: f64, a: f64) -> ThickParams {
        ThickParams::new(gamma, vec![a]).unwrap()
    }

    #[test]
    fn spectral_cube_value() {
        let v = UcpBound::SpectralCube {
            thick: thick(0.5, 1.0),
            e: 4.0,
        }
        .evaluate(&UniversalConstants::default())
        .unwrap();
        assert!((v - 0.5f64.powf(5.5)).abs() < 1e-15);
    }

    #[test]
    fn nttv_and_shifted_agree_for_free_laplacian() {
        let c = UniversalConstants::default();
        let a = UcpBound::Nttv {
            g: 1.0,
            delta: 0.25,
            v_norm: 0.0,
            e: 4.0,
        }
        .evaluate(&c)
        .unwrap();
        assert!((a - 0.015625).abs() < 1e-15);
        let (b, l) = nttvs_optimum(1.0, 0.25, &PotentialRange::zero(), 4.0, &c).unwrap();
        assert_eq!(l, 0.0);
        assert!((b - 0.015625).abs() < 1e-15);
    }

    #[test]
    fn shift_never_worse_than_zero() {
        let c = UniversalConstants::default();
        let v = PotentialRange { min: -1.0, max: 3.0 };
        let (best, _) = nttvs_optimum(1.0, 0.2, &v, 5.0, &c).unwrap();
        let at_zero = UcpBound::Nttv {
            g: 1.0,
            delta: 0.2,
            v_norm: 3.0,
            e: 5.0,
        }
        .evaluate(&c)
        .unwrap();
        assert!(best >= at_zero);
    }

    #[test]
    fn out_of_range_rejected() {
        let c = UniversalConstants::default();
        assert!(UcpBound::Nttv {
            g: 1.0,
            delta: 0.5,
            v_norm: 0.0,
            e: 1.0
        }
        .evaluate(&c)
        .is_err());
        assert!(UcpBound::Kovrijkine {
            thick: ThickParams {
                gamma: 1.5,
                a: vec![1.0]
            },
            b: vec![1.0]
        }
        .evaluate(&c)
        .is_err());
    }
}
