//! Parametric solutions of the Ermakov equation
//! `α'' = (V − ε) α + λ₀ / α³` built from a pair of Schrödinger solutions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::function::{scaled, Domain, SharedPotential, SharedWave, WaveFunction};
use crate::jet::{Jet, JET_LEN};
use crate::spectral::quadrature::CumulativeIntegral;

/// Number of interior probe points used by the construction checks.
pub const PROBE_POINTS: usize = 2048;

const PAIR_PROBES: usize = 64;
const WRONSKIAN_TOL: f64 = 1e-10;
const SCHRODINGER_TOL: f64 = 1e-8;
const REAL_FORM_TOL: f64 = 1e-10;
const POSITIVITY_TOL: f64 = 1e-12;

/// Completes a jet to full order with `f'' = (V − ε) f`, keeping every
/// derivative the caller already knew analytically.
pub(crate) fn complete(jet: Jet, potential: &Jet, epsilon: f64) -> Jet {
    if jet.order() >= JET_LEN - 1 {
        return jet;
    }
    let ext = jet.extend_by_schrodinger(potential, epsilon);
    let mut d: Vec<Complex64> = ext.coefficients().to_vec();
    d[..=jet.order()].copy_from_slice(jet.coefficients());
    Jet::new(&d)
}

/// `f g' − f' g`.
pub fn wronskian(f: &Jet, g: &Jet) -> Complex64 {
    f.d(0) * g.d(1) - f.d(1) * g.d(0)
}

/// Two independent solutions `z`, `v` of `−u'' + (V − ε) u = 0`.
#[derive(Clone)]
pub struct FundamentalPair {
    z: SharedWave,
    v: SharedWave,
    w0: Complex64,
    epsilon: f64,
    potential: SharedPotential,
    domain: Domain,
}

impl fmt::Debug for FundamentalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FundamentalPair")
            .field("w0", &self.w0)
            .field("epsilon", &self.epsilon)
            .field("potential", &self.potential)
            .field("domain", &self.domain)
            .finish_non_exhaustive()
    }
}

impl FundamentalPair {
    /// Validates the Wronskian and, where second derivatives are supplied,
    /// the Schrödinger residual on a probe of the domain.
    pub fn new(
        z: SharedWave,
        v: SharedWave,
        w0: Complex64,
        epsilon: f64,
        potential: SharedPotential,
        domain: Domain,
    ) -> Result<Self> {
        let pair = Self {
            z,
            v,
            w0,
            epsilon,
            potential,
            domain,
        };
        for x in domain.probe(PAIR_PROBES) {
            let (zj, vj) = (pair.z.jet(x), pair.v.jet(x));
            if !(pair.wronskian_deviation(x) < WRONSKIAN_TOL) {
                let deviation = (wronskian(&zj, &vj) - w0).norm();
                return Err(Error::WronskianMismatch { x, deviation });
            }
            let pot = pair.potential.jet(x).value().re - epsilon;
            for f in [zj, vj] {
                if f.order() >= 2 {
                    let residual = (-f.d(2) + f.d(0) * pot).norm();
                    let scale = f.d(2).norm() + pot.abs() * f.d(0).norm();
                    if !(residual <= SCHRODINGER_TOL * scale.max(f64::MIN_POSITIVE)) {
                        return Err(Error::NotASolution { x, residual });
                    }
                }
            }
        }
        Ok(pair)
    }

    pub fn w0(&self) -> Complex64 {
        self.w0
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn potential(&self) -> &SharedPotential {
        &self.potential
    }

    pub fn domain(&self) -> Domain {
        self.domain
    }

    /// `z` with derivatives through fourth order.
    pub fn z_jet(&self, x: f64) -> Jet {
        complete(self.z.jet(x), &self.potential.jet(x), self.epsilon)
    }

    pub fn v_jet(&self, x: f64) -> Jet {
        complete(self.v.jet(x), &self.potential.jet(x), self.epsilon)
    }

    pub fn z(&self) -> &SharedWave {
        &self.z
    }

    pub fn v(&self) -> &SharedWave {
        &self.v
    }

    pub fn wronskian(&self, x: f64) -> Complex64 {
        wronskian(&self.z_jet(x), &self.v_jet(x))
    }

    /// `|W(x) − w0|` relative to `max(|w0|, |z||v'| + |z'||v|, 1)`.
    pub fn wronskian_deviation(&self, x: f64) -> f64 {
        let (zj, vj) = (self.z_jet(x), self.v_jet(x));
        let scale = self
            .w0
            .norm()
            .max(zj.d(0).norm() * vj.d(1).norm() + zj.d(1).norm() * vj.d(0).norm())
            .max(1.0);
        scaled((wronskian(&zj, &vj) - self.w0).norm(), scale)
    }

    /// `(|−z'' + (V−ε) z|, |−v'' + (V−ε) v|)` from the supplied derivatives.
    pub fn schrodinger_residual(&self, x: f64) -> (f64, f64) {
        let pot = self.potential.value(x) - self.epsilon;
        let r = |j: Jet| (-j.d(2) + j.d(0) * pot).norm();
        (r(self.z_jet(x)), r(self.v_jet(x)))
    }
}

/// `v(x) = z(x) · w0 · ∫_{x0}^{x} z⁻²`, with the antiderivative tabulated
/// once at construction.
pub struct SecondSolution {
    z: SharedWave,
    w0: Complex64,
    x0: f64,
    integral: CumulativeIntegral,
}

impl SecondSolution {
    pub fn origin(&self) -> f64 {
        self.x0
    }

    pub fn integral_error(&self) -> f64 {
        self.integral.error_estimate()
    }
}

impl WaveFunction for SecondSolution {
    fn jet(&self, x: f64) -> Jet {
        let z = self.z.jet(x);
        let r = z.recip();
        let r2 = r * r;
        let mut q = vec![self.integral.at(x)];
        q.extend_from_slice(&r2.coefficients()[..r2.order().min(JET_LEN - 2) + 1]);
        let q = Jet::new(&q);
        (z * q).scale(self.w0)
    }
}

/// Second solution from the first by reduction of order. The lower limit of
/// the integral is the domain midpoint.
pub fn second_solution(z: SharedWave, w0: Complex64, domain: Domain) -> Result<SecondSolution> {
    let x0 = domain.midpoint();
    let samples: Vec<(f64, Complex64)> = domain.probe(PROBE_POINTS + 2).map(|x| (x, z.value(x))).collect();
    let tiny = f64::MIN_POSITIVE.sqrt();
    for w in samples.windows(2) {
        let ((xa, a), (xb, b)) = (w[0], w[1]);
        if a.norm() <= tiny || !a.norm().is_finite() {
            return Err(Error::ZeroCrossing { x: xa });
        }
        let flips = |p: f64, q: f64| p == 0.0 || p.signum() != q.signum();
        let im_small = a.im.abs() <= 1e-14 * a.norm() && b.im.abs() <= 1e-14 * b.norm();
        if flips(a.re, b.re) && (flips(a.im, b.im) || im_small) {
            return Err(Error::ZeroCrossing { x: 0.5 * (xa + xb) });
        }
    }
    if samples.last().is_some_and(|(_, b)| b.norm() <= tiny) {
        return Err(Error::ZeroCrossing { x: domain.max });
    }
    let zc = Arc::clone(&z);
    let integrand = Arc::new(move |x: f64| zc.value(x).powi(-2));
    let integral = CumulativeIntegral::new(integrand, domain.min, domain.max, x0, 4096, 1e-13)?;
    Ok(SecondSolution { z, w0, x0, integral })
}

/// `λ₀ = −w0² (b² − 4ac) / 4`, which must be real.
///
/// A discriminant within rounding of zero is snapped to exactly zero so that
/// perfect squares land on the conventional branch.
pub fn lambda0_from_params(a: f64, b: f64, c: f64, w0: Complex64) -> Result<f64> {
    let mut disc = b * b - 4.0 * a * c;
    if disc.abs() <= 4.0 * f64::EPSILON * (b * b + 4.0 * (a * c).abs()) {
        disc = 0.0;
    }
    let value = -(w0 * w0) * disc / 4.0;
    if value.im.abs() > 1e-12 * value.norm() {
        return Err(Error::NonRealLambda0 { imag: value.im });
    }
    Ok(value.re)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ErmakovParams {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    /// Derived from `(a, b, c)` and the Wronskian; never set directly.
    pub lambda0: f64,
}

/// `α = (a v² + b v z + c z²)^{1/2}`, real and positive on the domain.
#[derive(Clone, Debug)]
pub struct AlphaFunction {
    pair: FundamentalPair,
    params: ErmakovParams,
}

/// Builds α and checks that the quadratic form is real and positive on
/// [`PROBE_POINTS`] uniform points plus the endpoints.
pub fn build_alpha(pair: FundamentalPair, a: f64, b: f64, c: f64) -> Result<AlphaFunction> {
    let lambda0 = lambda0_from_params(a, b, c, pair.w0())?;
    for x in pair.domain().probe(PROBE_POINTS + 2) {
        let z = pair.z.value(x);
        let v = pair.v.value(x);
        let q = v * v * a + v * z * b + z * z * c;
        let size = a.abs() * v.norm_sqr() + b.abs() * v.norm() * z.norm() + c.abs() * z.norm_sqr();
        if !(q.re.is_finite() && q.im.is_finite() && size.is_finite()) {
            return Err(Error::NotPositive { x });
        }
        if q.im.abs() > REAL_FORM_TOL * size.max(1.0) {
            return Err(Error::NotRealQuadraticForm { x, imag: q.im });
        }
        if !(q.re > POSITIVITY_TOL * size) {
            return Err(Error::NotPositive { x });
        }
    }
    Ok(AlphaFunction {
        pair,
        params: ErmakovParams { a, b, c, lambda0 },
    })
}

impl AlphaFunction {
    pub fn params(&self) -> ErmakovParams {
        self.params
    }

    /// Replaces the computed `λ₀` by an analytically known value. Small `λ₀`
    /// suffers cancellation in `b² − 4ac`; the replacement is accepted only
    /// within that rounding bound.
    pub fn with_exact_lambda0(mut self, lambda0: f64) -> Result<Self> {
        let ErmakovParams { a, b, c, lambda0: computed } = self.params;
        let bound = 8.0 * f64::EPSILON * self.pair.w0.norm_sqr() * (b * b + 4.0 * (a * c).abs()) / 4.0;
        if (lambda0 - computed).abs() > bound + 1e-12 * lambda0.abs() {
            return Err(Error::LambdaMismatch {
                lambda: lambda0.abs().sqrt(),
                lambda0: computed,
            });
        }
        self.params.lambda0 = lambda0;
        Ok(self)
    }

    pub fn lambda0(&self) -> f64 {
        self.params.lambda0
    }

    pub fn pair(&self) -> &FundamentalPair {
        &self.pair
    }

    pub fn epsilon(&self) -> f64 {
        self.pair.epsilon
    }

    pub fn potential(&self) -> &SharedPotential {
        &self.pair.potential
    }

    pub fn domain(&self) -> Domain {
        self.pair.domain
    }

    /// `α²` as a jet (real coefficients).
    pub fn square_jet(&self, x: f64) -> Jet {
        let ErmakovParams { a, b, c, .. } = self.params;
        let z = self.pair.z_jet(x);
        let v = self.pair.v_jet(x);
        (v * v * a + v * z * b + z * z * c).re()
    }

    /// `α, α', …, α''''` at `x`.
    pub fn jet(&self, x: f64) -> Jet {
        self.square_jet(x).sqrt()
    }

    pub fn value(&self, x: f64) -> f64 {
        self.jet(x).value().re
    }

    pub fn first_derivative(&self, x: f64) -> f64 {
        self.jet(x).d(1).re
    }

    pub fn second_derivative(&self, x: f64) -> f64 {
        self.jet(x).d(2).re
    }
}

/// `|α'' − (V − ε) α − λ₀ / α³|` at `x`.
pub fn ermakov_residual(alpha: &AlphaFunction, x: f64) -> f64 {
    let (r, _) = ermakov_terms(alpha, x);
    r
}

/// Residual divided by `|α''| + |V − ε| α + |λ₀| / α³`.
pub fn ermakov_relative_residual(alpha: &AlphaFunction, x: f64) -> f64 {
    let (r, scale) = ermakov_terms(alpha, x);
    scaled(r, scale)
}

fn ermakov_terms(alpha: &AlphaFunction, x: f64) -> (f64, f64) {
    let j = alpha.jet(x);
    let a = j.d(0).re;
    let a2 = j.d(2).re;
    let m = alpha.pair.potential.value(x) - alpha.pair.epsilon;
    let l0 = alpha.params.lambda0;
    let r = (a2 - m * a - l0 / a.powi(3)).abs();
    (r, a2.abs() + m.abs() * a + l0.abs() / a.powi(3))
}

/// `J/j₀ = (u'α − uα')² + λ₀ (u/α)²` with `j₀ = 1`.
pub fn j_invariant(u: &dyn WaveFunction, alpha: &AlphaFunction, x: f64) -> Complex64 {
    let uj = u.jet(x);
    let aj = alpha.jet(x);
    let (u0, u1) = (uj.d(0), uj.d(1));
    let (a0, a1) = (aj.d(0).re, aj.d(1).re);
    let w = u1 * a0 - u0 * a1;
    w * w + (u0 / a0).powi(2) * alpha.params.lambda0
}
