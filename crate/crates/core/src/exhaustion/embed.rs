use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::boxes::periodic_pieces;
use crate::geometry::{BallShape, ObservabilitySet};
use crate::spectral::{Boundary, SpectralBasis};
use crate::trig::{product_integral, Trig};

/// Per-axis interval lists whose products make up the region of integration.
type Region = Vec<Vec<(f64, f64)>>;

/// `X_ab = ∫_{S ∩ Ω_A ∩ Ω_B} φ^A_a φ^B_b` between two separable bases on
/// overlapping boxes, from exact 1D integrals.
pub fn cross_gram(a: &SpectralBasis, b: &SpectralBasis, set: &ObservabilitySet) -> Result<DMatrix<f64>> {
    let d = a.dim();
    if b.dim() != d {
        return Err(Error::param("basis", "bases must share a dimension"));
    }
    if let Some(sd) = set.dim() {
        a.domain.check_same_dim(sd, "observation set")?;
    }
    let lo: Vec<f64> = (0..d).map(|i| a.domain.lower[i].max(b.domain.lower[i])).collect();
    let hi: Vec<f64> = (0..d).map(|i| a.domain.upper(i).min(b.domain.upper(i))).collect();
    let mut out = DMatrix::zeros(a.len(), b.len());
    if (0..d).any(|i| hi[i] <= lo[i]) {
        return Ok(out);
    }
    let regions: Vec<Region> = match set {
        ObservabilitySet::Full => vec![(0..d).map(|i| vec![(lo[i], hi[i])]).collect()],
        ObservabilitySet::Empty => vec![],
        ObservabilitySet::PeriodicBoxes(p) => p
            .boxes
            .iter()
            .map(|bx| {
                (0..d)
                    .map(|i| periodic_pieces(bx.lo[i], bx.hi[i], p.period[i], lo[i], hi[i]))
                    .collect()
            })
            .collect(),
        ObservabilitySet::EquidistributedBalls(fam) => {
            if fam.shape == BallShape::Ball {
                return Err(Error::Unsupported("Gram matrices of 3D ball families".into()));
            }
            fam.boxes()
                .iter()
                .map(|bx| {
                    (0..d)
                        .map(|i| {
                            let (x, y) = (bx.lo[i].max(lo[i]), bx.hi[i].min(hi[i]));
                            if y > x {
                                vec![(x, y)]
                            } else {
                                vec![]
                            }
                        })
                        .collect()
                })
                .collect()
        }
    };
    for region in regions.iter().filter(|r| r.iter().all(|v| !v.is_empty())) {
        let tables: Vec<DMatrix<f64>> = (0..d)
            .map(|axis| {
                let fa = distinct_factors(a, axis);
                let fb = distinct_factors(b, axis);
                DMatrix::from_fn(fa.len(), fb.len(), |i, j| {
                    region[axis]
                        .iter()
                        .map(|(x, y)| product_integral(&fa[i].1, &fb[j].1, *x, *y))
                        .sum()
                })
            })
            .collect();
        let ia = slot_index(a);
        let ib = slot_index(b);
        for r in 0..a.len() {
            for c in 0..b.len() {
                out[(r, c)] += (0..d)
                    .map(|axis| tables[axis][(ia[r][axis], ib[c][axis])])
                    .product::<f64>();
            }
        }
    }
    Ok(out)
}

fn distinct_factors(basis: &SpectralBasis, axis: usize) -> Vec<(i64, Trig)> {
    let mut ks: Vec<i64> = basis.modes.iter().map(|m| m[axis]).collect();
    ks.sort_unstable();
    ks.dedup();
    ks.into_iter().map(|k| (k, basis.axis_factor(axis, k))).collect()
}

fn slot_index(basis: &SpectralBasis) -> Vec<Vec<usize>> {
    let per_axis: Vec<Vec<i64>> = (0..basis.dim())
        .map(|axis| distinct_factors(basis, axis).into_iter().map(|(k, _)| k).collect())
        .collect();
    basis
        .modes
        .iter()
        .map(|m| {
            (0..basis.dim())
                .map(|axis| per_axis[axis].binary_search(&m[axis]).unwrap())
                .collect()
        })
        .collect()
}

fn check_nested(small: &SpectralBasis, large: &SpectralBasis) -> Result<()> {
    if small.domain.boundary != Boundary::Dirichlet || large.domain.boundary != Boundary::Dirichlet {
        return Err(Error::param("basis", "zero extension needs Dirichlet bases"));
    }
    let d = small.dim();
    if large.dim() != d {
        return Err(Error::param("basis", "bases must share a dimension"));
    }
    let nested = (0..d)
        .all(|i| large.domain.lower[i] <= small.domain.lower[i] && small.domain.upper(i) <= large.domain.upper(i));
    if !nested || large.domain.volume() <= small.domain.volume() {
        return Err(Error::param(
            "target",
            "target box must strictly contain the source box",
        ));
    }
    Ok(())
}

/// Coefficients, in the basis `large`, of the zero extension of
/// `Σ_k u_k φ^small_k`, together with the L² mass lost to truncation.
#[derive(Debug, Clone)]
pub struct Embedding {
    pub coefficients: DVector<f64>,
    pub truncation: f64,
}

pub fn embed_zero_extension(u: &DVector<f64>, small: &SpectralBasis, large: &SpectralBasis) -> Result<Embedding> {
    check_nested(small, large)?;
    if u.len() != small.len() {
        return Err(Error::param("u", "length must match the source basis"));
    }
    let x = cross_gram(large, small, &ObservabilitySet::Full)?;
    let coefficients = x * u;
    let truncation = (u.norm_squared() - coefficients.norm_squared()).max(0.0).sqrt();
    Ok(Embedding {
        coefficients,
        truncation,
    })
}

/// Smooth bump `∏_i cos^{2p}(π x_i / R)` on the centred box `(−R/2, R/2)^d`,
/// scaled to L² norm `amplitude`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Bump {
    pub width: f64,
    #[serde(default = "default_power")]
    pub power: u32,
    #[serde(default = "default_amplitude")]
    pub amplitude: f64,
}

fn default_power() -> u32 {
    3
}

fn default_amplitude() -> f64 {
    1.0
}

impl Bump {
    pub fn new(width: f64, power: u32) -> Result<Self> {
        let b = Self {
            width,
            power,
            amplitude: 1.0,
        };
        b.validate()?;
        Ok(b)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.width.is_finite() && self.width > 0.0) {
            return Err(Error::param("width", "must be positive"));
        }
        if !self.amplitude.is_finite() {
            return Err(Error::param("amplitude", "must be finite"));
        }
        if self.power == 0 || self.power > 16 {
            return Err(Error::param("power", "must lie in 1..=16"));
        }
        Ok(())
    }

    /// Unnormalised 1D profile as a finite cosine sum.
    fn terms(&self) -> Vec<Trig> {
        let p = self.power as usize;
        let scale = 0.5f64.powi(2 * p as i32);
        let w = std::f64::consts::PI / self.width;
        let mut out = vec![Trig::constant(scale * binomial(2 * p, p))];
        for j in 1..=p {
            out.push(Trig::new(2.0 * scale * binomial(2 * p, p - j), 2.0 * j as f64 * w, 0.0));
        }
        out
    }

    fn axis_norm_sq(&self) -> f64 {
        let t = self.terms();
        let h = self.width / 2.0;
        t.iter()
            .flat_map(|f| t.iter().map(move |g| product_integral(f, g, -h, h)))
            .sum()
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let h = self.width / 2.0;
        let n = self.axis_norm_sq().sqrt();
        let profile: f64 = x
            .iter()
            .map(|&xi| {
                if xi.abs() >= h {
                    0.0
                } else {
                    (std::f64::consts::PI * xi / self.width)
                        .cos()
                        .powi(2 * self.power as i32)
                        / n
                }
            })
            .product();
        self.amplitude * profile
    }

    /// Projection onto `basis`, with the exact truncation loss
    /// `√(1 − ‖P u0‖²)`.
    pub fn project(&self, basis: &SpectralBasis) -> Result<Embedding> {
        self.validate()?;
        let d = basis.dim();
        let h = self.width / 2.0;
        for i in 0..d {
            if basis.domain.lower[i] > -h || basis.domain.upper(i) < h {
                return Err(Error::param("width", "bump must fit inside the box"));
            }
        }
        let terms = self.terms();
        let n = self.axis_norm_sq().sqrt();
        let coefficients = DVector::from_fn(basis.len(), |j, _| {
            (0..d)
                .map(|axis| {
                    let phi = basis.axis_factor(axis, basis.modes[j][axis]);
                    terms.iter().map(|t| product_integral(t, &phi, -h, h)).sum::<f64>() / n
                })
                .product::<f64>()
                * self.amplitude
        });
        let total = self.amplitude * self.amplitude;
        let truncation = (total - coefficients.norm_squared()).max(0.0).sqrt();
        Ok(Embedding {
            coefficients,
            truncation,
        })
    }
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}
