use serde::{Deserialize, Serialize};

use super::boxes::AxisBox;
use crate::error::{ensure, Error, Result};

/// Shape actually used for each ball of an equidistributed family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BallShape {
    /// 1D: the ball is the interval `(z − δ, z + δ)`.
    Interval,
    /// 2D: the ball is replaced by its inscribed square of half-width `δ/√2`.
    InscribedSquare,
    /// 3D: kept as a ball; no closed-form Gram matrix.
    Ball,
}

impl BallShape {
    pub fn for_dim(dim: usize) -> Self {
        match dim {
            1 => Self::Interval,
            2 => Self::InscribedSquare,
            _ => Self::Ball,
        }
    }
}

/// Periodic union of disjoint boxes, stored reduced to one period cell
/// `∏ [cell_origin_i, cell_origin_i + period_i)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PeriodicBoxes {
    pub cell_origin: Vec<f64>,
    pub period: Vec<f64>,
    pub boxes: Vec<AxisBox>,
}

/// One ball of radius `delta` per `G`-cell of a lattice anchored at `origin`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BallFamily {
    pub g: f64,
    pub delta: f64,
    pub origin: Vec<f64>,
    pub centers: Vec<Vec<f64>>,
    pub shape: BallShape,
}

/// Observation / control region.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObservabilitySet {
    Full,
    Empty,
    PeriodicBoxes(PeriodicBoxes),
    EquidistributedBalls(BallFamily),
}

/// Thickness parameters `(γ, a)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThickParams {
    pub gamma: f64,
    pub a: Vec<f64>,
}

impl ThickParams {
    pub fn new(gamma: f64, a: Vec<f64>) -> Result<Self> {
        let t = Self { gamma, a };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        ensure(self.gamma > 0.0 && self.gamma <= 1.0, "gamma", "must lie in (0, 1]")?;
        ensure(
            !self.a.is_empty() && self.a.iter().all(|v| v.is_finite() && *v > 0.0),
            "a",
            "all entries must be positive",
        )
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    pub fn a_l1(&self) -> f64 {
        self.a.iter().sum()
    }
}

impl PeriodicBoxes {
    /// Reduces the boxes modulo the cell and merges overlaps into a
    /// canonical disjoint family.
    pub fn new(cell_origin: Vec<f64>, period: Vec<f64>, boxes: Vec<AxisBox>) -> Result<Self> {
        let d = period.len();
        ensure((1..=3).contains(&d), "period", "dimension must be 1, 2 or 3")?;
        ensure(cell_origin.len() == d, "cell_origin", "must match the period dimension")?;
        ensure(
            period.iter().all(|p| p.is_finite() && *p > 0.0),
            "period",
            "must be positive",
        )?;
        let mut pieces: Vec<AxisBox> = Vec::new();
        for b in &boxes {
            b.validate()?;
            if b.dim() != d {
                return Err(Error::param("boxes", "box dimension differs from the cell"));
            }
            let per_axis: Vec<Vec<(f64, f64)>> = (0..d)
                .map(|a| reduce_interval(b.lo[a], b.hi[a], cell_origin[a], period[a]))
                .collect();
            if per_axis.iter().any(|p| p.is_empty()) {
                continue;
            }
            cartesian(&per_axis, &mut |lo, hi| pieces.push(AxisBox { lo, hi }));
        }
        let boxes = merge_boxes(&pieces, d);
        Ok(Self {
            cell_origin,
            period,
            boxes,
        })
    }

    pub fn dim(&self) -> usize {
        self.period.len()
    }

    /// Fraction of each cell covered by the set.
    pub fn density(&self) -> f64 {
        let cell: f64 = self.period.iter().product();
        self.boxes.iter().map(AxisBox::measure).sum::<f64>() / cell
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        let reduced: Vec<f64> = x
            .iter()
            .enumerate()
            .map(|(a, v)| {
                let o = self.cell_origin[a];
                let p = self.period[a];
                o + (v - o).rem_euclid(p)
            })
            .collect();
        self.boxes
            .iter()
            .any(|b| reduced.iter().enumerate().all(|(a, v)| *v >= b.lo[a] && *v <= b.hi[a]))
    }
}

impl BallFamily {
    pub fn dim(&self) -> usize {
        self.origin.len()
    }

    /// Half-width of the box used in place of each ball.
    pub fn half_width(&self) -> f64 {
        match self.shape {
            BallShape::InscribedSquare => self.delta / std::f64::consts::SQRT_2,
            _ => self.delta,
        }
    }

    /// Smallest distance from a ball to the walls of its own cell.
    pub fn containment_margin(&self) -> f64 {
        self.centers
            .iter()
            .flat_map(|z| {
                z.iter().enumerate().map(move |(a, v)| {
                    let rel = v - self.origin[a];
                    let cell = (rel / self.g).floor();
                    let lo = cell * self.g;
                    (rel - lo - self.delta).min(lo + self.g - rel - self.delta)
                })
            })
            .fold(f64::INFINITY, f64::min)
    }

    /// Boxes standing in for the balls.
    pub fn boxes(&self) -> Vec<AxisBox> {
        let h = self.half_width();
        self.centers
            .iter()
            .map(|z| AxisBox {
                lo: z.iter().map(|v| v - h).collect(),
                hi: z.iter().map(|v| v + h).collect(),
            })
            .collect()
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self.shape {
            BallShape::Ball => self
                .centers
                .iter()
                .any(|z| z.iter().zip(x).map(|(a, b)| (a - b).powi(2)).sum::<f64>() < self.delta * self.delta),
            _ => self.boxes().iter().any(|b| b.contains(x)),
        }
    }
}

impl ObservabilitySet {
    pub fn periodic(cell_origin: Vec<f64>, period: Vec<f64>, boxes: Vec<AxisBox>) -> Result<Self> {
        Ok(Self::PeriodicBoxes(PeriodicBoxes::new(cell_origin, period, boxes)?))
    }

    pub fn dim(&self) -> Option<usize> {
        match self {
            Self::Full | Self::Empty => None,
            Self::PeriodicBoxes(p) => Some(p.dim()),
            Self::EquidistributedBalls(b) => Some(b.dim()),
        }
    }

    pub fn contains(&self, x: &[f64]) -> bool {
        match self {
            Self::Full => true,
            Self::Empty => false,
            Self::PeriodicBoxes(p) => p.contains(x),
            Self::EquidistributedBalls(b) => b.contains(x),
        }
    }

    /// Short stable label for tables.
    pub fn label(&self) -> String {
        match self {
            Self::Full => "full".into(),
            Self::Empty => "empty".into(),
            Self::PeriodicBoxes(p) => format!("periodic_boxes[{}]", p.boxes.len()),
            Self::EquidistributedBalls(b) => format!("balls[G={},delta={}]", b.g, b.delta),
        }
    }
}

/// Pieces of `[lo, hi]` reduced into the cell `[o, o + p]`.
fn reduce_interval(lo: f64, hi: f64, o: f64, p: f64) -> Vec<(f64, f64)> {
    if hi <= lo {
        return Vec::new();
    }
    if hi - lo >= p {
        return vec![(o, o + p)];
    }
    let n = ((lo - o) / p).floor();
    let (a, b) = (lo - n * p, hi - n * p);
    if b <= o + p {
        vec![(a, b)]
    } else {
        vec![(a, o + p), (o, b - p)]
    }
}

fn cartesian(per_axis: &[Vec<(f64, f64)>], emit: &mut dyn FnMut(Vec<f64>, Vec<f64>)) {
    fn rec(
        per_axis: &[Vec<(f64, f64)>],
        lo: &mut Vec<f64>,
        hi: &mut Vec<f64>,
        emit: &mut dyn FnMut(Vec<f64>, Vec<f64>),
    ) {
        match per_axis.split_first() {
            None => emit(lo.clone(), hi.clone()),
            Some((head, rest)) => {
                for &(a, b) in head {
                    lo.push(a);
                    hi.push(b);
                    rec(rest, lo, hi, emit);
                    lo.pop();
                    hi.pop();
                }
            }
        }
    }
    rec(per_axis, &mut Vec::new(), &mut Vec::new(), emit);
}

/// Disjoint union of possibly overlapping boxes via coordinate compression;
/// runs of covered cells along the first axis are fused.
fn merge_boxes(boxes: &[AxisBox], d: usize) -> Vec<AxisBox> {
    if boxes.is_empty() {
        return Vec::new();
    }
    let edges: Vec<Vec<f64>> = (0..d)
        .map(|a| {
            let mut e: Vec<f64> = boxes.iter().flat_map(|b| [b.lo[a], b.hi[a]]).collect();
            e.sort_by(f64::total_cmp);
            e.dedup();
            e
        })
        .collect();
    let cells: Vec<usize> = edges.iter().map(|e| e.len() - 1).collect();
    if cells.contains(&0) {
        return Vec::new();
    }
    let covered = |idx: &[usize]| {
        let mid: Vec<f64> = (0..d)
            .map(|a| 0.5 * (edges[a][idx[a]] + edges[a][idx[a] + 1]))
            .collect();
        boxes
            .iter()
            .any(|b| mid.iter().enumerate().all(|(a, v)| *v > b.lo[a] && *v < b.hi[a]))
    };
    let mut out = Vec::new();
    // iterate over the trailing axes, fuse along axis 0
    let rest: usize = cells[1..].iter().product();
    for r in 0..rest {
        let mut idx = vec![0usize; d];
        let mut rem = r;
        for a in (1..d).rev() {
            idx[a] = rem % cells[a];
            rem /= cells[a];
        }
        let mut run_start: Option<usize> = None;
        for i in 0..=cells[0] {
            let on = i < cells[0] && {
                idx[0] = i;
                covered(&idx)
            };
            match (on, run_start) {
                (true, None) => run_start = Some(i),
                (false, Some(s)) => {
                    let mut lo = vec![edges[0][s]];
                    let mut hi = vec![edges[0][i]];
                    for a in 1..d {
                        lo.push(edges[a][idx[a]]);
                        hi.push(edges[a][idx[a] + 1]);
                    }
                    out.push(AxisBox { lo, hi });
                    run_start = None;
                }
                _ => {}
            }
        }
    }
    out
}
