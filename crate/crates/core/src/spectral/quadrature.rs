//! Composite Simpson quadrature with Richardson error estimates.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use super::grid::Grid;
use crate::error::{Error, Result};

/// Integral value with its estimated discretization error.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: Complex64,
    pub error_estimate: f64,
}

impl QuadResult {
    /// Fails with [`Error::QuadratureFailure`] if the estimate exceeds `tolerance`.
    pub fn require(self, tolerance: f64) -> Result<Self> {
        if self.error_estimate <= tolerance {
            Ok(self)
        } else {
            Err(Error::QuadratureFailure {
                estimate: self.error_estimate,
                tolerance,
            })
        }
    }
}

fn finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Integrates `f` over the grid.
///
/// Every grid interval carries a Simpson panel at step `h/2` and a pair of
/// panels at step `h/4`; their difference gives the Richardson estimate and
/// the extrapolated (Boole) value is returned.
pub fn integrate<F>(f: F, grid: &Grid) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    let h = grid.spacing();
    let mut coarse = Complex64::new(0.0, 0.0);
    let mut fine = Complex64::new(0.0, 0.0);
    let mut left = f(grid.point(0));
    if !finite(left) {
        return Err(non_finite());
    }
    for i in 0..grid.len() - 1 {
        let a = grid.point(i);
        let b = grid.point(i + 1);
        let q1 = f(a + 0.25 * (b - a));
        let mid = f(0.5 * (a + b));
        let q3 = f(a + 0.75 * (b - a));
        let right = f(b);
        if !(finite(q1) && finite(mid) && finite(q3) && finite(right)) {
            return Err(non_finite());
        }
        coarse += (left + mid * 4.0 + right) * (h / 6.0);
        fine += (left + q1 * 4.0 + mid * 2.0 + q3 * 4.0 + right) * (h / 12.0);
        left = right;
    }
    let correction = (fine - coarse) / 15.0;
    Ok(QuadResult {
        value: fine + correction,
        error_estimate: correction.norm(),
    })
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<F>(f: F, grid: &Grid) -> Result<QuadResult>
where
    F: Fn(f64) -> f64,
{
    integrate(|x| Complex64::new(f(x), 0.0), grid)
}

fn non_finite() -> Error {
    Error::QuadratureFailure {
        estimate: f64::INFINITY,
        tolerance: 0.0,
    }
}

/// Adaptive Simpson on `[a, b]` to absolute tolerance `tol`.
pub fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<QuadResult>
where
    F: Fn(f64) -> Complex64,
{
    if a == b {
        return Ok(QuadResult {
            value: Complex64::new(0.0, 0.0),
            error_estimate: 0.0,
        });
    }
    let fa = f(a);
    let fb = f(b);
    let m = 0.5 * (a + b);
    let fm = f(m);
    if !(finite(fa) && finite(fb) && finite(fm)) {
        return Err(non_finite());
    }
    let whole = (fa + fm * 4.0 + fb) * ((b - a) / 6.0);
    let mut err = 0.0;
    let value = simpson_step(f, a, b, fa, fm, fb, whole, tol, 48, &mut err)?;
    if err > tol {
        return Err(Error::QuadratureFailure {
            estimate: err,
            tolerance: tol,
        });
    }
    Ok(QuadResult {
        value,
        error_estimate: err,
    })
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    b: f64,
    fa: Complex64,
    fm: Complex64,
    fb: Complex64,
    whole: Complex64,
    tol: f64,
    depth: u32,
    err: &mut f64,
) -> Result<Complex64>
where
    F: Fn(f64) -> Complex64,
{
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    if !(finite(flm) && finite(frm)) {
        return Err(non_finite());
    }
    let left = (fa + flm * 4.0 + fm) * ((m - a) / 6.0);
    let right = (fm + frm * 4.0 + fb) * ((b - m) / 6.0);
    let delta = left + right - whole;
    if depth == 0 || delta.norm() <= 15.0 * tol {
        *err += delta.norm() / 15.0;
        return Ok(left + right + delta / 15.0);
    }
    Ok(simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1, err)?
        + simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1, err)?)
}

/// Antiderivative `x ↦ ∫_{origin}^{x} f` tabulated on a uniform mesh.
///
/// Each mesh interval is integrated by Simpson's rule at two resolutions;
/// the mesh is doubled until the summed Richardson estimate falls below the
/// requested relative tolerance. Off-node values add a Boole panel from the
/// nearest node below.
pub struct CumulativeIntegral {
    f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
    a: f64,
    h: f64,
    nodes: Vec<Complex64>,
    origin_value: Complex64,
    error_estimate: f64,
}

impl CumulativeIntegral {
    const MAX_INTERVALS: usize = 1 << 17;

    pub fn new(
        f: Arc<dyn Fn(f64) -> Complex64 + Send + Sync>,
        a: f64,
        b: f64,
        origin: f64,
        intervals: usize,
        rel_tol: f64,
    ) -> Result<Self> {
        let mut n = intervals.max(2);
        loop {
            let h = (b - a) / n as f64;
            let mut nodes = Vec::with_capacity(n + 1);
            let mut acc = Complex64::new(0.0, 0.0);
            let mut err = 0.0;
            let mut mass = 0.0;
            nodes.push(acc);
            let mut left = f(a);
            for i in 0..n {
                let x0 = a + i as f64 * h;
                let x1 = if i + 1 == n { b } else { x0 + h };
                let q1 = f(x0 + 0.25 * h);
                let mid = f(x0 + 0.5 * h);
                let q3 = f(x0 + 0.75 * h);
                let right = f(x1);
                let coarse = (left + mid * 4.0 + right) * (h / 6.0);
                let fine = (left + q1 * 4.0 + mid * 2.0 + q3 * 4.0 + right) * (h / 12.0);
                let delta = (fine - coarse) / 15.0;
                if !(finite(fine) && finite(delta)) {
                    return Err(non_finite());
                }
                acc += fine + delta;
                err += delta.norm();
                mass += fine.norm();
                nodes.push(acc);
                left = right;
            }
            let tolerance = rel_tol * mass.max(1.0);
            if err <= tolerance {
                let mut out = Self {
                    f,
                    a,
                    h,
                    nodes,
                    origin_value: Complex64::new(0.0, 0.0),
                    error_estimate: err,
                };
                out.origin_value = out.integral_from_start(origin);
                return Ok(out);
            }
            if 2 * n > Self::MAX_INTERVALS {
                return Err(Error::QuadratureFailure {
                    estimate: err,
                    tolerance,
                });
            }
            n *= 2;
        }
    }

    pub fn error_estimate(&self) -> f64 {
        self.error_estimate
    }

    pub fn intervals(&self) -> usize {
        self.nodes.len() - 1
    }

    fn b(&self) -> f64 {
        self.a + self.h * self.intervals() as f64
    }

    // ∫_a^x f
    fn integral_from_start(&self, x: f64) -> Complex64 {
        let n = self.intervals();
        if x < self.a {
            return -self.outside(x, self.a);
        }
        if x > self.b() {
            return self.nodes[n] + self.outside(self.b(), x);
        }
        let i = (((x - self.a) / self.h).floor() as usize).min(n - 1);
        let xi = self.a + i as f64 * self.h;
        self.nodes[i] + boole(&*self.f, xi, x)
    }

    fn outside(&self, lo: f64, hi: f64) -> Complex64 {
        let f = |y: f64| (self.f)(y);
        adaptive_simpson(&f, lo, hi, 1e-13)
            .map(|r| r.value)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    /// `∫_{origin}^{x} f`.
    pub fn at(&self, x: f64) -> Complex64 {
        self.integral_from_start(x) - self.origin_value
    }
}

fn boole(f: &(dyn Fn(f64) -> Complex64 + Send + Sync), a: f64, b: f64) -> Complex64 {
    if a == b {
        return Complex64::new(0.0, 0.0);
    }
    let q = (b - a) / 4.0;
    (f(a) * 7.0 + f(a + q) * 32.0 + f(a + 2.0 * q) * 12.0 + f(a + 3.0 * q) * 32.0 + f(b) * 7.0)
        * (2.0 * q / 45.0)
}
