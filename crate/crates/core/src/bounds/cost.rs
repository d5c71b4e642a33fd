//! Closed-form upper bounds on the control cost `C_T`.

use serde::{Deserialize, Serialize};

use super::miller::miller_cstar;
use crate::error::{Error, Result};
use crate::uncertainty::UniversalConstants;

/// Parameters of Miller's abstract observability theorem.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MillerParams {
    pub beta: f64,
    pub b: f64,
    pub a: f64,
    pub m: f64,
    #[serde(default = "one")]
    pub a0: f64,
    #[serde(default = "one")]
    pub b0: f64,
}

fn one() -> f64 {
    1.0
}

/// All inputs any evaluator may read; each evaluator checks only its own.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BoundParams {
    pub t: Option<f64>,
    pub gamma: Option<f64>,
    pub a: Option<Vec<f64>>,
    pub g: Option<f64>,
    pub delta: Option<f64>,
    pub v_norm: Option<f64>,
    pub theta: Option<f64>,
    pub s: Option<f64>,
    pub d0: Option<f64>,
    pub d1: Option<f64>,
    /// Dual-scale index of the input space, `≤ 0`.
    pub beta: Option<f64>,
    pub b_norm: Option<f64>,
    pub miller: Option<MillerParams>,
    pub constants: UniversalConstants,
}

impl BoundParams {
    pub fn with_t(&self, t: f64) -> Self {
        Self {
            t: Some(t),
            ..self.clone()
        }
    }

    fn get(&self, name: &str, v: Option<f64>) -> Result<f64> {
        match v {
            Some(x) if x.is_finite() => Ok(x),
            Some(_) => Err(Error::param(name, "must be finite")),
            None => Err(Error::param(name, "required by this bound but missing")),
        }
    }

    fn positive(&self, name: &str, v: Option<f64>) -> Result<f64> {
        let x = self.get(name, v)?;
        if x > 0.0 {
            Ok(x)
        } else {
            Err(Error::param(name, "must be positive"))
        }
    }

    fn time(&self) -> Result<f64> {
        self.positive("t", self.t)
    }

    fn gamma(&self) -> Result<f64> {
        let g = self.get("gamma", self.gamma)?;
        if g > 0.0 && g <= 1.0 {
            Ok(g)
        } else {
            Err(Error::param("gamma", "must lie in (0, 1]"))
        }
    }

    fn a(&self) -> Result<&[f64]> {
        match &self.a {
            Some(a) if !a.is_empty() && a.iter().all(|v| v.is_finite() && *v > 0.0) => Ok(a),
            Some(_) => Err(Error::param("a", "entries must be positive")),
            None => Err(Error::param("a", "required by this bound but missing")),
        }
    }

    fn cells(&self) -> Result<(f64, f64)> {
        let g = self.positive("g", self.g)?;
        let delta = self.positive("delta", self.delta)?;
        if delta >= g / 2.0 {
            return Err(Error::param("delta", "must lie in (0, G/2)"));
        }
        Ok((g, delta))
    }

    fn v_norm(&self) -> Result<f64> {
        let v = self.get("v_norm", self.v_norm.or(Some(0.0)))?;
        if v >= 0.0 {
            Ok(v)
        } else {
            Err(Error::param("v_norm", "must be ≥ 0"))
        }
    }

    fn s(&self) -> Result<f64> {
        let s = self.get("s", self.s)?;
        if s > 0.0 && s < 1.0 {
            Ok(s)
        } else {
            Err(Error::param("s", "must lie in (0, 1)"))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CostBound {
    EgidiVeselic,
    Thick2,
    NttvPotential,
    Equidistributed,
    NttvAbstract,
    TenenbaumForm,
    BeauchardForm,
    Fractional,
    MillerKappa,
}

impl CostBound {
    pub const ALL: [CostBound; 9] = [
        CostBound::EgidiVeselic,
        CostBound::Thick2,
        CostBound::NttvPotential,
        CostBound::Equidistributed,
        CostBound::NttvAbstract,
        CostBound::TenenbaumForm,
        CostBound::BeauchardForm,
        CostBound::Fractional,
        CostBound::MillerKappa,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            CostBound::EgidiVeselic => "egidi_veselic",
            CostBound::Thick2 => "thick2",
            CostBound::NttvPotential => "nttv_potential",
            CostBound::Equidistributed => "equidistributed",
            CostBound::NttvAbstract => "nttv_abstract",
            CostBound::TenenbaumForm => "tenenbaum_form",
            CostBound::BeauchardForm => "beauchard_form",
            CostBound::Fractional => "fractional",
            CostBound::MillerKappa => "miller_kappa",
        }
    }

    pub fn from_name(name: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|b| b.name() == name)
            .ok_or_else(|| Error::param("name", format!("unknown bound `{name}`")))
    }
}

/// Whether a formula is claimed for every horizon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    AllT,
    /// Claimed only below an implicit horizon `T'` that is not modelled.
    SmallTNotModeled,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundValue {
    pub value: f64,
    pub validity: Validity,
    /// The formula bounds `C_T²` rather than `C_T`.
    pub squared: bool,
}

impl BoundValue {
    /// The value as a bound on `C_T`.
    pub fn cost(&self) -> f64 {
        if self.squared {
            self.value.sqrt()
        } else {
            self.value
        }
    }
}

pub fn cost_bound(bound: CostBound, p: &BoundParams) -> Result<BoundValue> {
    let c = &p.constants;
    c.validate()?;
    let all = |value: f64| BoundValue {
        value,
        validity: Validity::AllT,
        squared: false,
    };
    let out = match bound {
        CostBound::EgidiVeselic => {
            let (t, gamma, a) = (p.time()?, p.gamma()?, p.a()?);
            let d = a.len() as f64;
            let a1: f64 = a.iter().sum();
            let c1 = (c.k.powf(d) / gamma).powf(c.k * (d + a1));
            all(c1.sqrt() * (c1 / (2.0 * t)).exp())
        }
        CostBound::Thick2 => {
            let (t, gamma, a) = (p.time()?, p.gamma()?, p.a()?);
            let a1: f64 = a.iter().sum();
            let l = (c.d4 * gamma).ln();
            all(c.d1 * gamma.powf(-c.d2) / t.sqrt() * (c.d3 * a1 * a1 * l * l / t).exp())
        }
        CostBound::NttvPotential => {
            let t = p.time()?;
            let (g, delta) = p.cells()?;
            let v = p.v_norm()?;
            let l = (delta / g).ln();
            let pre = 2.0 * (g / delta).powf(c.k * (1.0 + g.powf(4.0 / 3.0) * v.powf(2.0 / 3.0)));
            let w = c.k * g + 4.0 / std::f64::consts::LN_2;
            BoundValue {
                value: pre * (v + l * l * w * w / t).exp(),
                validity: Validity::SmallTNotModeled,
                squared: false,
            }
        }
        CostBound::Equidistributed => {
            let t = p.time()?;
            let (g, delta) = p.cells()?;
            let v = p.v_norm()?;
            let l = (delta / g).ln();
            let pre = c.d1 / t.sqrt() * (g / delta).powf(c.d2 * (1.0 + g.powf(4.0 / 3.0) * v.powf(2.0 / 3.0)));
            all(pre * (c.d3 * g * g * l * l / t).exp())
        }
        CostBound::NttvAbstract => {
            let t = p.time()?;
            let s = p.s()?;
            let d0 = p.positive("d0", p.d0)?;
            let d1 = p.get("d1", p.d1)?;
            if d1 < 0.0 {
                return Err(Error::param("d1", "must be ≥ 0"));
            }
            let beta = p.get("beta", p.beta.or(Some(0.0)))?;
            if beta > 0.0 {
                return Err(Error::param("beta", "must be ≤ 0"));
            }
            let b_norm = p.get("b_norm", p.b_norm)?;
            if b_norm < 0.0 {
                return Err(Error::param("b_norm", "must be ≥ 0"));
            }
            let k = 2.0 * d0 * (-beta).exp() * b_norm + 1.0;
            let inner = (d1 + (-beta).powf(c.c4)) / t.powf(s);
            BoundValue {
                value: c.c1 * d0 / t * k.powf(c.c2) * (c.c3 * inner.powf(1.0 / (1.0 - s))).exp(),
                validity: Validity::AllT,
                squared: true,
            }
        }
        CostBound::TenenbaumForm => {
            let t = p.time()?;
            let s = p.s()?;
            all(c.c1 / t.sqrt() * (c.c2 / t.powf(s / (1.0 - s))).exp())
        }
        CostBound::BeauchardForm => {
            let t = p.time()?;
            all(c.c1 * (c.c1 / t).exp())
        }
        CostBound::Fractional => {
            let (t, gamma, a) = (p.time()?, p.gamma()?, p.a()?);
            let theta = p.get("theta", p.theta)?;
            if theta <= 0.5 {
                return Err(Error::param("theta", "must exceed 1/2"));
            }
            let a1: f64 = a.iter().sum();
            let x = a1 * (c.d4 / gamma).ln();
            if x < 0.0 {
                return Err(Error::param("gamma", "needs D4/γ ≥ 1"));
            }
            let e = 2.0 * theta - 1.0;
            all(c.d1 / (gamma.powf(c.d2) * t.sqrt()) * (c.d3 * x.powf(2.0 * theta / e) / t.powf(1.0 / e)).exp())
        }
        CostBound::MillerKappa => {
            let t = p.time()?;
            let mp = p
                .miller
                .as_ref()
                .ok_or_else(|| Error::param("miller", "required by this bound but missing"))?;
            if !(mp.a0 > 0.0 && mp.b0 > 0.0) {
                return Err(Error::param("miller", "a0 and b0 must be positive"));
            }
            let (_, cstar) = miller_cstar(mp.beta, mp.b, mp.a, mp.m)?;
            BoundValue {
                value: 4.0 * mp.a0 * mp.b0 * (2.0 * cstar / t.powf(mp.beta)).exp(),
                validity: Validity::SmallTNotModeled,
                squared: true,
            }
        }
    };
    if !out.value.is_finite() {
        return Err(Error::Numeric(format!("{} overflowed", bound.name())));
    }
    Ok(out)
}
