use crate::error::{ensure, Error, Result};

/// Root `s` of `s(s + β + 1)^β = (β+1) β^{β²/(β+1)} b^{1/(β+1)} / (a+m)` and
/// the resulting rate constant
/// `c* = ((β+1)b/(a+m))^{(β+1)/β} β^β / s^{(β+1)²/β}`.
pub fn miller_cstar(beta: f64, b: f64, a: f64, m: f64) -> Result<(f64, f64)> {
    ensure(beta.is_finite() && beta > 0.0, "beta", "must be positive")?;
    ensure(b.is_finite() && b > 0.0, "b", "must be positive")?;
    ensure(a.is_finite() && a >= 0.0, "a", "must be ≥ 0")?;
    ensure(m.is_finite() && m >= 0.0, "m", "must be ≥ 0")?;
    ensure(a + m > 0.0, "a", "a + m must be positive")?;
    let rhs = miller_rhs(beta, b, a, m);
    let lhs = |s: f64| s * (s + beta + 1.0).powf(beta);
    let mut hi = 1.0;
    let mut guard = 0;
    while lhs(hi) < rhs {
        hi *= 2.0;
        guard += 1;
        if guard > 2000 {
            return Err(Error::Numeric("could not bracket the root".into()));
        }
    }
    let mut lo = 0.0;
    // bisection until the bracket stops shrinking in floating point
    loop {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if lhs(mid) < rhs {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let s = if (lhs(lo) - rhs).abs() <= (lhs(hi) - rhs).abs() {
        lo
    } else {
        hi
    };
    let cstar =
        ((beta + 1.0) * b / (a + m)).powf((beta + 1.0) / beta) * beta.powf(beta) / s.powf((beta + 1.0).powi(2) / beta);
    Ok((s, cstar))
}

/// Right-hand side of the root equation.
pub fn miller_rhs(beta: f64, b: f64, a: f64, m: f64) -> f64 {
    (beta + 1.0) * beta.powf(beta * beta / (beta + 1.0)) * b.powf(1.0 / (beta + 1.0)) / (a + m)
}

/// Admissible-constant threshold `h^{gh} g^{−g²} d1^h` with `g = s/(1−s)`,
/// `h = 1/(1−s)`.
pub fn tenenbaum_threshold(s: f64, d1: f64) -> Result<f64> {
    ensure(s > 0.0 && s < 1.0, "s", "must lie in (0, 1)")?;
    ensure(d1.is_finite() && d1 >= 0.0, "d1", "must be ≥ 0")?;
    let g = s / (1.0 - s);
    let h = 1.0 / (1.0 - s);
    Ok(h.powf(g * h) * g.powf(-g * g) * d1.powf(h))
}
