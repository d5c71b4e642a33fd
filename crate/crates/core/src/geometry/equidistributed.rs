use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::set::{BallFamily, BallShape, ObservabilitySet};
use crate::error::{ensure, Error, Result};
use crate::spectral::DomainSpec;

/// How ball centres are placed inside their cells.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Placement {
    /// Cell midpoints.
    Centered,
    /// Uniform in the admissible sub-cube, from a seeded ChaCha8 stream.
    Seeded(u64),
    /// One explicit centre per cell, in lexicographic cell order.
    Explicit(Vec<Vec<f64>>),
}

/// `(G, δ)` parameters and centre placement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EquidistributedSpec {
    pub g: f64,
    pub delta: f64,
    pub placement: Placement,
}

/// Builds `S_{δ,Z}` over the cells `lower + G·(j + [0,1)^d)` meeting `extent`.
pub fn make_equidistributed(spec: &EquidistributedSpec, extent: &DomainSpec) -> Result<ObservabilitySet> {
    ensure(spec.g.is_finite() && spec.g > 0.0, "g", "must be positive")?;
    ensure(
        spec.delta > 0.0 && spec.delta < spec.g / 2.0,
        "delta",
        "must lie in (0, G/2)",
    )?;
    extent.validate()?;
    let d = extent.dim();
    let counts: Vec<usize> = extent
        .sides
        .iter()
        .map(|s| ((s / spec.g) - 1e-9).ceil().max(1.0) as usize)
        .collect();
    let total: usize = counts.iter().product();
    let cell_lo = |cell: usize| -> Vec<f64> {
        let mut rem = cell;
        let mut idx = vec![0usize; d];
        for a in (0..d).rev() {
            idx[a] = rem % counts[a];
            rem /= counts[a];
        }
        (0..d).map(|a| extent.lower[a] + spec.g * idx[a] as f64).collect()
    };
    let centers: Vec<Vec<f64>> = match &spec.placement {
        Placement::Centered => (0..total)
            .map(|c| cell_lo(c).iter().map(|v| v + 0.5 * spec.g).collect())
            .collect(),
        Placement::Seeded(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let width = spec.g - 2.0 * spec.delta;
            (0..total)
                .map(|c| {
                    cell_lo(c)
                        .iter()
                        .map(|v| v + spec.delta + width * rng.gen::<f64>())
                        .collect()
                })
                .collect()
        }
        Placement::Explicit(z) => {
            if z.len() != total {
                return Err(Error::param(
                    "centers",
                    format!("expected {total} centres (one per cell), got {}", z.len()),
                ));
            }
            for (c, zc) in z.iter().enumerate() {
                if zc.len() != d {
                    return Err(Error::param("centers", "centre dimension differs from domain"));
                }
                let lo = cell_lo(c);
                for a in 0..d {
                    let rel = zc[a] - lo[a];
                    if rel < spec.delta || rel > spec.g - spec.delta {
                        return Err(Error::param("centers", format!("ball {c} leaves its cell on axis {a}")));
                    }
                }
            }
            z.clone()
        }
    };
    Ok(ObservabilitySet::EquidistributedBalls(BallFamily {
        g: spec.g,
        delta: spec.delta,
        origin: extent.lower.clone(),
        centers,
        shape: BallShape::for_dim(d),
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::Boundary;

    #[test]
    fn centered_1d() {
        let dom = DomainSpec::interval(0.0, 4.0, Boundary::Dirichlet).unwrap();
        let spec = EquidistributedSpec {
            g: 1.0,
            delta: 0.25,
            placement: Placement::Centered,
        };
        let ObservabilitySet::EquidistributedBalls(f) = make_equidistributed(&spec, &dom).unwrap() else {
            panic!()
        };
        let boxes = f.boxes();
        assert_eq!(boxes.len(), 4);
        assert!((boxes[2].lo[0] - 2.25).abs() < 1e-15 && (boxes[2].hi[0] - 2.75).abs() < 1e-15);
        let total: f64 = boxes.iter().map(|b| b.measure()).sum();
        assert!((total - 2.0).abs() < 1e-14);
    }

    #[test]
    fn seeded_is_deterministic_and_contained() {
        let dom = DomainSpec::new(vec![0.0, 0.0], vec![3.0, 2.0], Boundary::Periodic).unwrap();
        let spec = EquidistributedSpec {
            g: 1.0,
            delta: 0.2,
            placement: Placement::Seeded(7),
        };
        let a = make_equidistributed(&spec, &dom).unwrap();
        let b = make_equidistributed(&spec, &dom).unwrap();
        assert_eq!(a, b);
        let ObservabilitySet::EquidistributedBalls(f) = a else {
            panic!()
        };
        assert_eq!(f.centers.len(), 6);
        assert!(f.containment_margin() >= 0.0);
    }

    #[test]
    fn delta_too_large() {
        let dom = DomainSpec::interval(0.0, 1.0, Boundary::Dirichlet).unwrap();
        let spec = EquidistributedSpec {
            g: 1.0,
            delta: 0.5,
            placement: Placement::Centered,
        };
        assert!(matches!(
            make_equidistributed(&spec, &dom),
            Err(Error::Parameter { .. })
        ));
    }
}
