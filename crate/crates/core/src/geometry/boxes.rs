use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Axis-aligned box `∏ [lo_i, hi_i]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl AxisBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Result<Self> {
        let b = Self { lo, hi };
        b.validate()?;
        Ok(b)
    }

    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        Self::new(vec![lo], vec![hi])
    }

    pub fn validate(&self) -> Result<()> {
        if self.lo.len() != self.hi.len() || self.lo.is_empty() {
            return Err(Error::param(
                "box",
                "corner vectors must be non-empty and of equal length",
            ));
        }
        if self
            .lo
            .iter()
            .zip(&self.hi)
            .any(|(a, b)| !(a.is_finite() && b.is_finite() && a <= b))
        {
            return Err(Error::param("box", "need finite lo ≤ hi on every axis"));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    pub fn measure(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    /// Half-open membership `lo ≤ x < hi`.
    pub fn contains(&self, x: &[f64]) -> bool {
        x.iter().enumerate().all(|(i, v)| *v >= self.lo[i] && *v < self.hi[i])
    }
}

/// Length of `[a, b] ∩ [c, d]`.
pub fn overlap(a: f64, b: f64, c: f64, d: f64) -> f64 {
    (b.min(d) - a.max(c)).max(0.0)
}

/// Pieces of the periodic union `⋃_n [lo + n·period, hi + n·period]` that meet
/// `[a, b]`, clipped to `[a, b]`.
pub fn periodic_pieces(lo: f64, hi: f64, period: f64, a: f64, b: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    if hi <= lo || b <= a {
        return out;
    }
    let n_first = ((a - hi) / period).floor() as i64;
    let n_last = ((b - lo) / period).ceil() as i64;
    for n in n_first..=n_last {
        let shift = n as f64 * period;
        let (x, y) = ((lo + shift).max(a), (hi + shift).min(b));
        if y > x {
            out.push((x, y));
        }
    }
    out
}

/// Measure of the periodic union of `[lo, hi]` inside `[a, b]`.
pub fn periodic_overlap(lo: f64, hi: f64, period: f64, a: f64, b: f64) -> f64 {
    periodic_pieces(lo, hi, period, a, b).iter().map(|(x, y)| y - x).sum()
}
