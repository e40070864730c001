//! Truncated derivative towers.
//!
//! A [`Jet`] carries a function value together with its first few
//! derivatives at a single point. Products, reciprocals, square roots and
//! exponentials follow the Leibniz/Faà di Bruno recurrences, so composite
//! expressions such as `-α'/α + iλ/α²` come out with exact analytic
//! derivatives instead of finite differences.

use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;

/// Number of stored coefficients: the value plus four derivatives.
pub const JET_LEN: usize = 5;

const BINOMIAL: [[f64; JET_LEN]; JET_LEN] = [
    [1.0, 0.0, 0.0, 0.0, 0.0],
    [1.0, 1.0, 0.0, 0.0, 0.0],
    [1.0, 2.0, 1.0, 0.0, 0.0],
    [1.0, 3.0, 3.0, 1.0, 0.0],
    [1.0, 4.0, 6.0, 4.0, 1.0],
];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Value and derivatives `f, f', …, f^(order)` of a complex function at a point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Jet {
    d: [Complex64; JET_LEN],
    order: usize,
}

impl Jet {
    /// Builds a jet from `[f, f', f'', …]`. At most [`JET_LEN`] entries are used.
    pub fn new(derivatives: &[Complex64]) -> Self {
        assert!(!derivatives.is_empty(), "a jet needs at least a value");
        let order = derivatives.len().min(JET_LEN) - 1;
        let mut d = [ZERO; JET_LEN];
        d[..=order].copy_from_slice(&derivatives[..=order]);
        Self { d, order }
    }

    pub fn real(derivatives: &[f64]) -> Self {
        let c: Vec<Complex64> = derivatives.iter().map(|&r| Complex64::new(r, 0.0)).collect();
        Self::new(&c)
    }

    /// A constant known to every order.
    pub fn constant(c: Complex64) -> Self {
        let mut d = [ZERO; JET_LEN];
        d[0] = c;
        Self { d, order: JET_LEN - 1 }
    }

    /// The identity function `x ↦ x` evaluated at `x`.
    pub fn variable(x: f64) -> Self {
        let mut d = [ZERO; JET_LEN];
        d[0] = Complex64::new(x, 0.0);
        d[1] = Complex64::new(1.0, 0.0);
        Self { d, order: JET_LEN - 1 }
    }

    pub fn value(&self) -> Complex64 {
        self.d[0]
    }

    /// Highest derivative order that is known.
    pub fn order(&self) -> usize {
        self.order
    }

    /// The `k`-th derivative. Panics if `k` exceeds [`Jet::order`].
    pub fn d(&self, k: usize) -> Complex64 {
        assert!(
            k <= self.order,
            "derivative of order {k} requested from a jet of order {}",
            self.order
        );
        self.d[k]
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.d[..=self.order]
    }

    /// Drops the known orders above `order`.
    pub fn truncate(mut self, order: usize) -> Self {
        if order < self.order {
            for slot in &mut self.d[order + 1..] {
                *slot = ZERO;
            }
            self.order = order;
        }
        self
    }

    /// The jet of `f'`; one order is lost.
    pub fn derivative(&self) -> Self {
        assert!(self.order >= 1, "cannot differentiate a value-only jet");
        let mut d = [ZERO; JET_LEN];
        d[..self.order].copy_from_slice(&self.d[1..=self.order]);
        Self { d, order: self.order - 1 }
    }

    pub fn conj(&self) -> Self {
        let mut out = *self;
        for c in &mut out.d {
            *c = c.conj();
        }
        out
    }

    /// Keeps only the real part of every coefficient.
    pub fn re(&self) -> Self {
        let mut out = *self;
        for c in &mut out.d {
            *c = Complex64::new(c.re, 0.0);
        }
        out
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        let mut out = *self;
        for c in &mut out.d[..=self.order] {
            *c *= factor;
        }
        out
    }

    pub fn recip(&self) -> Self {
        let g = &self.d;
        let inv = g[0].inv();
        let mut f = [ZERO; JET_LEN];
        f[0] = inv;
        for k in 1..=self.order {
            let mut acc = ZERO;
            for j in 1..=k {
                acc += g[j] * f[k - j] * BINOMIAL[k][j];
            }
            f[k] = -acc * inv;
        }
        Self { d: f, order: self.order }
    }

    /// Principal square root; the value must not vanish.
    pub fn sqrt(&self) -> Self {
        let g = &self.d;
        let mut f = [ZERO; JET_LEN];
        f[0] = g[0].sqrt();
        let half_inv = (f[0] * 2.0).inv();
        for k in 1..=self.order {
            let mut acc = g[k];
            for j in 1..k {
                acc -= f[j] * f[k - j] * BINOMIAL[k][j];
            }
            f[k] = acc * half_inv;
        }
        Self { d: f, order: self.order }
    }

    pub fn exp(&self) -> Self {
        let g = &self.d;
        let mut f = [ZERO; JET_LEN];
        f[0] = g[0].exp();
        for k in 1..=self.order {
            let mut acc = ZERO;
            for j in 0..k {
                acc += g[j + 1] * f[k - 1 - j] * BINOMIAL[k - 1][j];
            }
            f[k] = acc;
        }
        Self { d: f, order: self.order }
    }

    /// Fills orders `2..` from `f'' = (V − E) f`, given `f`, `f'` and the
    /// potential jet. Existing orders ≥ 2 are overwritten.
    pub fn extend_by_schrodinger(&self, potential: &Jet, energy: f64) -> Self {
        assert!(self.order >= 1, "need value and first derivative");
        let mut m = potential.d;
        m[0] -= energy;
        let top = (potential.order + 2).min(JET_LEN - 1);
        let mut f = self.d;
        for k in 2..=top {
            // f^(k) = Σ_j C(k-2, j) M^(j) f^(k-2-j)
            let n = k - 2;
            let mut acc = ZERO;
            for j in 0..=n {
                acc += m[j] * f[n - j] * BINOMIAL[n][j];
            }
            f[k] = acc;
        }
        Self { d: f, order: top }
    }
}

impl From<f64> for Jet {
    fn from(c: f64) -> Self {
        Jet::constant(Complex64::new(c, 0.0))
    }
}

impl From<Complex64> for Jet {
    fn from(c: Complex64) -> Self {
        Jet::constant(c)
    }
}

impl Add for Jet {
    type Output = Jet;
    fn add(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut d = [ZERO; JET_LEN];
        for k in 0..=order {
            d[k] = self.d[k] + rhs.d[k];
        }
        Jet { d, order }
    }
}

impl Sub for Jet {
    type Output = Jet;
    fn sub(self, rhs: Jet) -> Jet {
        self + (-rhs)
    }
}

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(Complex64::new(-1.0, 0.0))
    }
}

impl Mul for Jet {
    type Output = Jet;
    fn mul(self, rhs: Jet) -> Jet {
        let order = self.order.min(rhs.order);
        let mut d = [ZERO; JET_LEN];
        for k in 0..=order {
            let mut acc = ZERO;
            for j in 0..=k {
                acc += self.d[j] * rhs.d[k - j] * BINOMIAL[k][j];
            }
            d[k] = acc;
        }
        Jet { d, order }
    }
}

impl Mul<Complex64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: Complex64) -> Jet {
        self.scale(rhs)
    }
}

impl Mul<f64> for Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(Complex64::new(rhs, 0.0))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    // sin at x as a full-order jet
    fn sin_jet(x: f64) -> Jet {
        let (s, c) = x.sin_cos();
        Jet::real(&[s, c, -s, -c, s])
    }

    #[test]
    fn product_rule_matches_closed_form() {
        let x = 0.7;
        let p = sin_jet(x) * Jet::variable(x);
        // (x sin x)'' = 2 cos x - x sin x
        let expected = 2.0 * x.cos() - x * x.sin();
        assert!(close(p.d(2), Complex64::new(expected, 0.0), 1e-15));
        // (x sin x)'''' = -4 cos x... check: d^4 = x sin x - 4 cos x
        let expected4 = x * x.sin() - 4.0 * x.cos();
        assert!(close(p.d(4), Complex64::new(expected4, 0.0), 1e-14));
    }

    #[test]
    fn recip_sqrt_exp_against_closed_forms() {
        let x = 1.3;
        let g = Jet::variable(x) * Jet::variable(x) + Jet::from(1.0); // 1 + x²
        let r = g.recip();
        // d/dx (1+x²)^-1 = -2x/(1+x²)²
        let q = 1.0 + x * x;
        assert!(close(r.d(1), Complex64::new(-2.0 * x / (q * q), 0.0), 1e-15));
        let s = g.sqrt();
        // second derivative of sqrt(1+x²) = (1+x²)^(-3/2)
        assert!(close(s.d(2), Complex64::new(q.powf(-1.5), 0.0), 1e-14));
        let e = Jet::variable(x).scale(Complex64::new(0.0, 2.0)).exp();
        // (e^{2ix})''' = (2i)³ e^{2ix}
        let expected = Complex64::new(0.0, 2.0).powu(3) * Complex64::new(0.0, 2.0 * x).exp();
        assert!(close(e.d(3), expected, 1e-14));
    }

    #[test]
    fn schrodinger_extension_reproduces_plane_wave() {
        // f = cos(kx) solves f'' = -k² f, i.e. V - E = -k²
        let (k, x) = (1.7f64, 0.4f64);
        let f = Jet::real(&[(k * x).cos(), -k * (k * x).sin()]);
        let v = Jet::from(0.0);
        let ext = f.extend_by_schrodinger(&v, k * k);
        assert_eq!(ext.order(), 4);
        assert!(close(ext.d(3), Complex64::new(k.powi(3) * (k * x).sin(), 0.0), 1e-14));
        assert!(close(ext.d(4), Complex64::new(k.powi(4) * (k * x).cos(), 0.0), 1e-14));
    }

    #[test]
    fn derivative_and_truncate_track_order() {
        let j = sin_jet(0.1);
        assert_eq!(j.derivative().order(), 3);
        assert_eq!(j.truncate(1).order(), 1);
        assert_eq!((j.truncate(2) * j).order(), 2);
    }
}
