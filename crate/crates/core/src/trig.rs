//! One-dimensional cosine terms and their exact interval integrals.
//!
//! Every separable basis factor and every cosine potential term is a single
//! `amp · cos(freq · x + phase)`, so products reduce to sums of such terms via
//! the product-to-sum identity and integrate in closed form.

/// `amp · cos(freq · x + phase)` in absolute coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Trig {
    pub amp: f64,
    pub freq: f64,
    pub phase: f64,
}

impl Trig {
    pub fn new(amp: f64, freq: f64, phase: f64) -> Self {
        Self { amp, freq, phase }
    }

    pub fn constant(value: f64) -> Self {
        Self::new(value, 0.0, 0.0)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.amp * (self.freq * x + self.phase).cos()
    }

    /// Exact integral over `[a, b]`.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b <= a || self.amp == 0.0 {
            return 0.0;
        }
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let c = (self.freq * mid + self.phase).cos();
        if self.freq.abs() * half < 1e-9 {
            // sin(Ωh)/Ω with the Taylor remainder kept
            let wh = self.freq * half;
            return self.amp * 2.0 * c * half * (1.0 - wh * wh / 6.0);
        }
        self.amp * 2.0 * c * (self.freq * half).sin() / self.freq
    }

    /// The two terms whose sum is the pointwise product.
    pub fn product(&self, other: &Trig) -> [Trig; 2] {
        let amp = 0.5 * self.amp * other.amp;
        [
            Trig::new(amp, self.freq - other.freq, self.phase - other.phase),
            Trig::new(amp, self.freq + other.freq, self.phase + other.phase),
        ]
    }
}

/// `∫_a^b f g`.
pub fn product_integral(f: &Trig, g: &Trig, a: f64, b: f64) -> f64 {
    f.product(g).iter().map(|t| t.integral(a, b)).sum()
}

/// `∫_a^b f g h`.
pub fn triple_integral(f: &Trig, g: &Trig, h: &Trig, a: f64, b: f64) -> f64 {
    f.product(g)
        .iter()
        .flat_map(|t| t.product(h))
        .map(|t| t.integral(a, b))
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::integrate;
    use std::f64::consts::PI;

    #[test]
    fn sine_product_on_half_interval() {
        let s1 = Trig::new(1.0, 1.0, -PI / 2.0);
        let s2 = Trig::new(1.0, 2.0, -PI / 2.0);
        let v = product_integral(&s1, &s2, 0.0, PI / 2.0);
        assert!((v - 2.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn matches_quadrature() {
        let f = Trig::new(0.7, 3.1, 0.4);
        let g = Trig::new(-1.3, 5.0, -2.0);
        let h = Trig::new(2.0, 0.5, 1.0);
        let (a, b) = (-0.3, 2.9);
        let exact = triple_integral(&f, &g, &h, a, b);
        let quad = integrate(|x| f.eval(x) * g.eval(x) * h.eval(x), a, b, 1e-14);
        assert!((exact - quad).abs() < 1e-12);
    }

    #[test]
    fn zero_frequency_is_length() {
        let c = Trig::constant(2.0);
        assert!((c.integral(1.0, 4.0) - 6.0).abs() < 1e-15);
        let tiny = Trig::new(1.0, 1e-13, 0.0);
        assert!((tiny.integral(0.0, 1.0) - 1.0).abs() < 1e-12);
    }
}
