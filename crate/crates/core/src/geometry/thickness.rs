use super::boxes::{overlap, periodic_overlap, periodic_pieces};
use super::set::{BallShape, ObservabilitySet, PeriodicBoxes};
use crate::error::{ensure, Error, Result};
use crate::spectral::DomainSpec;

/// Default number of translates per axis and period.
pub const DEFAULT_OFFSETS: usize = 64;

/// Grid infimum of `|S ∩ (x + [0,a])| / ∏ a_j` over translates `x`.
///
/// Periodic sets are scanned over one period; ball families over `extent`,
/// which is required for them.
pub fn thickness_estimate(
    set: &ObservabilitySet,
    a: &[f64],
    offsets: usize,
    extent: Option<&DomainSpec>,
) -> Result<f64> {
    ensure(
        !a.is_empty() && a.iter().all(|v| v.is_finite() && *v > 0.0),
        "a",
        "all entries must be positive",
    )?;
    ensure(offsets > 0, "offsets", "must be positive")?;
    let vol: f64 = a.iter().product();
    match set {
        ObservabilitySet::Full => Ok(1.0),
        ObservabilitySet::Empty => Ok(0.0),
        ObservabilitySet::PeriodicBoxes(p) => {
            check_dim(p.dim(), a.len())?;
            let grids: Vec<Vec<f64>> = (0..p.dim())
                .map(|ax| {
                    (0..offsets)
                        .map(|i| p.cell_origin[ax] + p.period[ax] * i as f64 / offsets as f64)
                        .collect()
                })
                .collect();
            Ok(grid_min(&grids, |x| periodic_measure(p, x, a)) / vol)
        }
        ObservabilitySet::EquidistributedBalls(fam) => {
            check_dim(fam.dim(), a.len())?;
            let dom =
                extent.ok_or_else(|| Error::param("extent", "ball families need a domain extent for thickness"))?;
            if fam.shape == BallShape::Ball {
                return Err(Error::Unsupported("thickness of 3D ball families".into()));
            }
            let boxes = fam.boxes();
            let mut grids = Vec::new();
            for (ax, a_ax) in a.iter().enumerate().take(fam.dim()) {
                let span = dom.sides[ax] - a_ax;
                if span < 0.0 {
                    return Err(Error::param("a", "window larger than the domain"));
                }
                let steps = ((span / fam.g).ceil() as usize).max(1) * offsets;
                grids.push(
                    (0..=steps)
                        .map(|i| dom.lower[ax] + span * i as f64 / steps as f64)
                        .collect(),
                );
            }
            Ok(grid_min(&grids, |x| {
                boxes
                    .iter()
                    .map(|b| {
                        (0..x.len())
                            .map(|ax| overlap(b.lo[ax], b.hi[ax], x[ax], x[ax] + a[ax]))
                            .product::<f64>()
                    })
                    .sum()
            }) / vol)
        }
    }
}

fn check_dim(set_dim: usize, a_dim: usize) -> Result<()> {
    if set_dim != a_dim {
        return Err(Error::param("a", "length must match the set dimension"));
    }
    Ok(())
}

fn periodic_measure(p: &PeriodicBoxes, x: &[f64], a: &[f64]) -> f64 {
    p.boxes
        .iter()
        .map(|b| {
            (0..x.len())
                .map(|ax| periodic_overlap(b.lo[ax], b.hi[ax], p.period[ax], x[ax], x[ax] + a[ax]))
                .product::<f64>()
        })
        .sum()
}

fn grid_min<F: Fn(&[f64]) -> f64>(grids: &[Vec<f64>], f: F) -> f64 {
    let mut best = f64::INFINITY;
    let d = grids.len();
    let mut idx = vec![0usize; d];
    let mut x = vec![0.0; d];
    loop {
        for ax in 0..d {
            x[ax] = grids[ax][idx[ax]];
        }
        best = best.min(f(&x));
        let mut ax = 0;
        while ax < d {
            idx[ax] += 1;
            if idx[ax] < grids[ax].len() {
                break;
            }
            idx[ax] = 0;
            ax += 1;
        }
        if ax == d {
            return best;
        }
    }
}

/// Per radius, the grid supremum over centres of `|S^c ∩ B(x,r)| / |B(x,r)|`.
///
/// Exact interval measures in 1D and exact disc–rectangle areas in 2D.
pub fn beta_complement(set: &ObservabilitySet, radii: &[f64], offsets: usize) -> Result<Vec<f64>> {
    ensure(
        !radii.is_empty() && radii.iter().all(|r| r.is_finite() && *r > 0.0),
        "radii",
        "must be positive",
    )?;
    ensure(
        radii.windows(2).all(|w| w[0] < w[1]),
        "radii",
        "must be strictly increasing",
    )?;
    ensure(offsets > 0, "offsets", "must be positive")?;
    let p = match set {
        ObservabilitySet::Full => return Ok(vec![0.0; radii.len()]),
        ObservabilitySet::Empty => return Ok(vec![1.0; radii.len()]),
        ObservabilitySet::PeriodicBoxes(p) => p,
        ObservabilitySet::EquidistributedBalls(_) => {
            return Err(Error::Unsupported(
                "complement density is computed for periodic sets".into(),
            ))
        }
    };
    let d = p.dim();
    if d > 2 {
        return Err(Error::Unsupported("complement density in 3D".into()));
    }
    let grids: Vec<Vec<f64>> = (0..d)
        .map(|ax| {
            (0..offsets)
                .map(|i| p.cell_origin[ax] + p.period[ax] * i as f64 / offsets as f64)
                .collect()
        })
        .collect();
    Ok(radii
        .iter()
        .map(|&r| {
            let ball = if d == 1 { 2.0 * r } else { std::f64::consts::PI * r * r };
            let min_covered = grid_min(&grids, |x| {
                if d == 1 {
                    p.boxes
                        .iter()
                        .map(|b| periodic_overlap(b.lo[0], b.hi[0], p.period[0], x[0] - r, x[0] + r))
                        .sum()
                } else {
                    p.boxes
                        .iter()
                        .map(|b| {
                            let xs = periodic_pieces(b.lo[0], b.hi[0], p.period[0], x[0] - r, x[0] + r);
                            let ys = periodic_pieces(b.lo[1], b.hi[1], p.period[1], x[1] - r, x[1] + r);
                            xs.iter()
                                .flat_map(|(x1, x2)| {
                                    ys.iter().map(move |(y1, y2)| {
                                        disc_rect_area(r, x1 - x[0], x2 - x[0], y1 - x[1], y2 - x[1])
                                    })
                                })
                                .sum::<f64>()
                        })
                        .sum()
                }
            });
            (1.0 - min_covered / ball).clamp(0.0, 1.0)
        })
        .collect())
}

/// Area of the centred disc of radius `r` intersected with `[x1,x2]×[y1,y2]`.
pub fn disc_rect_area(r: f64, x1: f64, x2: f64, y1: f64, y2: f64) -> f64 {
    let (a, b) = (x1.max(-r), x2.min(r));
    if b <= a || y2 <= y1 {
        return 0.0;
    }
    clamp_integral(r, a, b, y2) - clamp_integral(r, a, b, y1)
}

/// `∫_a^b clamp(y, −s(t), s(t)) dt` with `s(t) = √(r² − t²)`.
fn clamp_integral(r: f64, a: f64, b: f64, y: f64) -> f64 {
    let big_f = |t: f64| {
        let t = t.clamp(-r, r);
        0.5 * (t * (r * r - t * t).max(0.0).sqrt() + r * r * (t / r).asin())
    };
    let mut cuts = vec![a];
    if y.abs() < r {
        let c = (r * r - y * y).sqrt();
        for t in [-c, c] {
            if t > a && t < b {
                cuts.push(t);
            }
        }
    }
    cuts.push(b);
    cuts.windows(2)
        .map(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            let s = (r * r - mid * mid).max(0.0).sqrt();
            if y >= s {
                big_f(w[1]) - big_f(w[0])
            } else if y <= -s {
                -(big_f(w[1]) - big_f(w[0]))
            } else {
                y * (w[1] - w[0])
            }
        })
        .sum()
}
