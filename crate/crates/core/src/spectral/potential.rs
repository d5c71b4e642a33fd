use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use super::basis::SpectralBasis;
use crate::error::{Error, Result};
use crate::geometry::boxes::AxisBox;
use crate::quadrature::composite_rule;
use crate::trig::{product_integral, triple_integral, Trig};

/// One product term `coeff · ∏_i cos(freqs_i · x_i + phases_i)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CosineTerm {
    pub coeff: f64,
    pub freqs: Vec<f64>,
    pub phases: Vec<f64>,
}

pub type PointFn = Arc<dyn Fn(&[f64]) -> f64 + Send + Sync>;

/// A pointwise potential given as a closure, with caller-declared bounds.
#[derive(Clone)]
pub struct FunctionPotential {
    pub f: PointFn,
    pub sup_norm: f64,
    pub inf_value: f64,
}

impl fmt::Debug for FunctionPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionPotential")
            .field("sup_norm", &self.sup_norm)
            .field("inf_value", &self.inf_value)
            .finish_non_exhaustive()
    }
}

/// A bounded real potential.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PotentialSpec {
    Zero,
    Constant {
        value: f64,
    },
    /// `base + Σ value_i · χ_{box_i}` (overlapping boxes add up).
    Boxes {
        base: f64,
        boxes: Vec<WeightedBox>,
    },
    /// `base + Σ` cosine product terms.
    Cosine {
        base: f64,
        terms: Vec<CosineTerm>,
    },
    #[serde(skip)]
    Function(FunctionPotential),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WeightedBox {
    #[serde(rename = "box")]
    pub region: AxisBox,
    pub value: f64,
}

impl PotentialSpec {
    pub fn indicator(region: AxisBox) -> Self {
        Self::Boxes {
            base: 0.0,
            boxes: vec![WeightedBox { region, value: 1.0 }],
        }
    }

    pub fn function<F>(f: F, sup_norm: f64, inf_value: f64) -> Self
    where
        F: Fn(&[f64]) -> f64 + Send + Sync + 'static,
    {
        Self::Function(FunctionPotential {
            f: Arc::new(f),
            sup_norm,
            inf_value,
        })
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        match self {
            Self::Zero => 0.0,
            Self::Constant { value } => *value,
            Self::Boxes { base, boxes } => {
                base + boxes
                    .iter()
                    .filter(|b| b.region.contains(x))
                    .map(|b| b.value)
                    .sum::<f64>()
            }
            Self::Cosine { base, terms } => {
                base + terms
                    .iter()
                    .map(|t| {
                        t.coeff
                            * t.freqs
                                .iter()
                                .zip(&t.phases)
                                .zip(x)
                                .map(|((w, p), xi)| (w * xi + p).cos())
                                .product::<f64>()
                    })
                    .sum::<f64>()
            }
            Self::Function(fp) => (fp.f)(x),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Self::Zero => true,
            Self::Constant { value } => *value == 0.0,
            Self::Boxes { base, boxes } => *base == 0.0 && boxes.iter().all(|b| b.value == 0.0),
            Self::Cosine { base, terms } => *base == 0.0 && terms.iter().all(|t| t.coeff == 0.0),
            Self::Function(_) => false,
        }
    }

    /// `(inf, sup)` of the potential: exact for boxes and constants, a
    /// triangle-inequality bound for cosine series, declared for closures.
    pub fn range(&self) -> (f64, f64) {
        match self {
            Self::Zero => (0.0, 0.0),
            Self::Constant { value } => (*value, *value),
            Self::Boxes { base, boxes } => box_range(*base, boxes),
            Self::Cosine { base, terms } => {
                let s: f64 = terms.iter().map(|t| t.coeff.abs()).sum();
                (base - s, base + s)
            }
            Self::Function(fp) => (fp.inf_value, fp.sup_norm),
        }
    }

    /// Upper bound on `‖V‖_∞`.
    pub fn sup_norm(&self) -> f64 {
        match self {
            Self::Function(fp) => fp.sup_norm,
            _ => {
                let (lo, hi) = self.range();
                lo.abs().max(hi.abs())
            }
        }
    }

    /// Lower bound on `inf V`.
    pub fn inf_value(&self) -> f64 {
        self.range().0
    }

    fn validate(&self, dim: usize) -> Result<()> {
        let finite = |v: f64| v.is_finite();
        match self {
            Self::Zero => Ok(()),
            Self::Constant { value } if finite(*value) => Ok(()),
            Self::Constant { .. } => Err(Error::param("potential", "constant must be finite")),
            Self::Boxes { base, boxes } => {
                if !finite(*base) || boxes.iter().any(|b| !finite(b.value)) {
                    return Err(Error::param("potential", "box values must be finite"));
                }
                for b in boxes {
                    b.region.validate()?;
                    if b.region.dim() != dim {
                        return Err(Error::param("potential", "box dimension differs from domain"));
                    }
                }
                Ok(())
            }
            Self::Cosine { base, terms } => {
                if !finite(*base) {
                    return Err(Error::param("potential", "base must be finite"));
                }
                for t in terms {
                    if t.freqs.len() != dim || t.phases.len() != dim {
                        return Err(Error::param(
                            "potential",
                            "cosine term needs one frequency and phase per axis",
                        ));
                    }
                    if !finite(t.coeff) || t.freqs.iter().chain(&t.phases).any(|v| !finite(*v)) {
                        return Err(Error::param("potential", "cosine term must be finite"));
                    }
                }
                Ok(())
            }
            Self::Function(fp) => {
                if !(fp.sup_norm.is_finite() && fp.sup_norm >= 0.0 && fp.inf_value.is_finite()) {
                    return Err(Error::param("potential", "declared bounds must be finite"));
                }
                Ok(())
            }
        }
    }

    /// Matrix `∫_Ω V φ_j φ_k` in the given basis.
    pub fn matrix(&self, basis: &SpectralBasis) -> Result<DMatrix<f64>> {
        let dim = basis.dim();
        self.validate(dim)?;
        let n = basis.len();
        let dom = &basis.domain;
        let m = match self {
            Self::Zero => DMatrix::zeros(n, n),
            Self::Constant { value } => DMatrix::identity(n, n) * *value,
            Self::Boxes { base, boxes } => {
                let mut m = DMatrix::identity(n, n) * *base;
                for wb in boxes {
                    let clipped: Vec<(f64, f64)> = (0..dim)
                        .map(|a| (wb.region.lo[a].max(dom.lower[a]), wb.region.hi[a].min(dom.upper(a))))
                        .collect();
                    if clipped.iter().any(|(x, y)| y <= x) {
                        continue;
                    }
                    separable_fill(basis, &mut m, wb.value, |axis, f, g| {
                        let (x, y) = clipped[axis];
                        product_integral(f, g, x, y)
                    });
                }
                m
            }
            Self::Cosine { base, terms } => {
                let mut m = DMatrix::identity(n, n) * *base;
                for t in terms {
                    separable_fill(basis, &mut m, t.coeff, |axis, f, g| {
                        let h = Trig::new(1.0, t.freqs[axis], t.phases[axis]);
                        triple_integral(f, g, &h, dom.lower[axis], dom.upper(axis))
                    });
                }
                m
            }
            Self::Function(fp) => quadrature_matrix(basis, fp)?,
        };
        if m.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("non-finite potential matrix entry".into()));
        }
        Ok(m)
    }
}

/// Adds `scale · ∏_axis integral(axis, f_j, f_k)` to every entry, caching the
/// 1D integrals per distinct pair of axis indices.
pub(crate) fn separable_fill<F>(basis: &SpectralBasis, m: &mut DMatrix<f64>, scale: f64, integral: F)
where
    F: Fn(usize, &Trig, &Trig) -> f64,
{
    if scale == 0.0 {
        return;
    }
    let tables = axis_tables(basis, &integral);
    let n = basis.len();
    for j in 0..n {
        for k in j..n {
            let mut v = scale;
            for (index, table) in &tables {
                v *= table[(index[j], index[k])];
                if v == 0.0 {
                    break;
                }
            }
            m[(j, k)] += v;
            if j != k {
                m[(k, j)] += v;
            }
        }
    }
}

/// For each axis: a map from basis position to distinct-index slot, and the
/// table of 1D integrals between slots.
pub(crate) fn axis_tables<F>(basis: &SpectralBasis, integral: &F) -> Vec<(Vec<usize>, DMatrix<f64>)>
where
    F: Fn(usize, &Trig, &Trig) -> f64,
{
    (0..basis.dim())
        .map(|axis| {
            let mut distinct: Vec<i64> = basis.modes.iter().map(|m| m[axis]).collect();
            distinct.sort_unstable();
            distinct.dedup();
            let index: Vec<usize> = basis
                .modes
                .iter()
                .map(|m| distinct.binary_search(&m[axis]).unwrap())
                .collect();
            let factors: Vec<Trig> = distinct.iter().map(|&k| basis.axis_factor(axis, k)).collect();
            let q = distinct.len();
            let mut table = DMatrix::zeros(q, q);
            for a in 0..q {
                for b in a..q {
                    let v = integral(axis, &factors[a], &factors[b]);
                    table[(a, b)] = v;
                    table[(b, a)] = v;
                }
            }
            (index, table)
        })
        .collect()
}

const QUAD_ORDER: usize = 32;

fn quadrature_matrix(basis: &SpectralBasis, fp: &FunctionPotential) -> Result<DMatrix<f64>> {
    let dom = &basis.domain;
    let dim = basis.dim();
    // 1D rules sized so each panel sees a bounded number of oscillations.
    let rules: Vec<(Vec<f64>, Vec<f64>)> = (0..dim)
        .map(|a| {
            let w = 2.0 * basis.max_frequency(a);
            let panels = ((w * dom.sides[a] / 16.0).ceil() as usize).max(4);
            composite_rule(dom.lower[a], dom.upper(a), QUAD_ORDER, panels)
        })
        .collect();
    let counts: Vec<usize> = rules.iter().map(|r| r.0.len()).collect();
    let total: usize = counts.iter().product();
    let n = basis.len();
    let mut phi = DMatrix::zeros(total, n);
    let mut weighted = DMatrix::zeros(total, n);
    let mut idx = vec![0usize; dim];
    let mut x = vec![0.0; dim];
    let slack = 1e-12 * fp.sup_norm.max(1.0);
    for row in 0..total {
        let mut rem = row;
        for a in (0..dim).rev() {
            idx[a] = rem % counts[a];
            rem /= counts[a];
        }
        let mut w = 1.0;
        for a in 0..dim {
            x[a] = rules[a].0[idx[a]];
            w *= rules[a].1[idx[a]];
        }
        let v = (fp.f)(&x);
        if !v.is_finite() {
            return Err(Error::Numeric(format!("potential is not finite at {x:?}")));
        }
        if v.abs() > fp.sup_norm + slack || v < fp.inf_value - slack {
            return Err(Error::param(
                "potential",
                format!("value {v} at {x:?} violates the declared bounds"),
            ));
        }
        for j in 0..n {
            let p = basis.eval(j, &x);
            phi[(row, j)] = p;
            weighted[(row, j)] = p * w * v;
        }
    }
    let m = phi.transpose() * weighted;
    Ok((&m + m.transpose()) * 0.5)
}

fn box_range(base: f64, boxes: &[WeightedBox]) -> (f64, f64) {
    if boxes.is_empty() {
        return (base, base);
    }
    let dim = boxes[0].region.dim();
    // Midpoints of the cells cut out by all box edges, plus the exterior.
    let probes: Vec<Vec<f64>> = (0..dim)
        .map(|a| {
            let mut e: Vec<f64> = boxes.iter().flat_map(|b| [b.region.lo[a], b.region.hi[a]]).collect();
            e.sort_by(f64::total_cmp);
            e.dedup();
            e.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
        })
        .collect();
    let (mut lo, mut hi) = (base, base);
    let mut idx = vec![0usize; dim];
    if probes.iter().any(|p| p.is_empty()) {
        return (lo, hi);
    }
    loop {
        let x: Vec<f64> = (0..dim).map(|a| probes[a][idx[a]]).collect();
        let v = base
            + boxes
                .iter()
                .filter(|b| b.region.contains(&x))
                .map(|b| b.value)
                .sum::<f64>();
        lo = lo.min(v);
        hi = hi.max(v);
        let mut a = 0;
        while a < dim {
            idx[a] += 1;
            if idx[a] < probes[a].len() {
                break;
            }
            idx[a] = 0;
            a += 1;
        }
        if a == dim {
            break;
        }
    }
    (lo, hi)
}
