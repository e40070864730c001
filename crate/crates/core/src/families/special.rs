//! Error function and Kummer's confluent hypergeometric function.

use std::f64::consts::PI;

use crate::error::{Error, Result};

const TWO_OVER_SQRT_PI: f64 = std::f64::consts::FRAC_2_SQRT_PI;

/// Series / continued-fraction switch point for [`erf`].
const ERF_SWITCH: f64 = 2.0;

/// Largest `|ζ|` accepted by [`hyp1f1`].
pub const HYP1F1_MAX_ARG: f64 = 64.0;

/// Error function, absolute error below `1e-15` on the real line.
///
/// Uses the positive-term series `erf x = (2/√π) e^{−x²} Σ 2ⁿ x^{2n+1}/(2n+1)!!`
/// for small arguments and the Laplace continued fraction for `erfc`
/// beyond [`ERF_SWITCH`].
pub fn erf(x: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    let ax = x.abs();
    if ax < ERF_SWITCH {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= 2.0 * x2 / (2.0 * n + 1.0);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        TWO_OVER_SQRT_PI * (-x2).exp() * sum
    } else {
        let c = erfc_cf(ax);
        if x > 0.0 {
            1.0 - c
        } else {
            c - 1.0
        }
    }
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    if x >= ERF_SWITCH {
        erfc_cf(x)
    } else {
        1.0 - erf(x)
    }
}

// erfc x = e^{−x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + …)))), modified Lentz.
fn erfc_cf(x: f64) -> f64 {
    const TINY: f64 = 1e-300;
    let mut f = x;
    let mut c = x;
    let mut d = 0.0;
    for n in 1..500 {
        let a = n as f64 / 2.0;
        d = x + a * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = x + a / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let delta = c * d;
        f *= delta;
        if (delta - 1.0).abs() < 1e-16 {
            break;
        }
    }
    (-x * x).exp() / (PI.sqrt() * f)
}

/// Kummer's function `₁F₁(a; c; ζ) = Σ (a)ₙ ζⁿ / ((c)ₙ n!)` for `|ζ| ≤ 64`.
///
/// Negative arguments go through `e^ζ ₁F₁(c − a; c; −ζ)` so that the series
/// is summed with terms of eventually constant sign; the sum itself is
/// compensated.
pub fn hyp1f1(a: f64, c: f64, zeta: f64) -> Result<f64> {
    let fail = || Error::SeriesNonConvergence { a, c, zeta };
    if !(a.is_finite() && c.is_finite() && zeta.is_finite()) || zeta.abs() > HYP1F1_MAX_ARG {
        return Err(fail());
    }
    if c <= 0.0 && c.fract() == 0.0 {
        return Err(fail());
    }
    if zeta < 0.0 {
        return Ok(zeta.exp() * kummer_series(c - a, c, -zeta).ok_or_else(fail)?);
    }
    kummer_series(a, c, zeta).ok_or_else(fail)
}

fn kummer_series(a: f64, c: f64, zeta: f64) -> Option<f64> {
    let mut sum = 1.0;
    let mut comp = 0.0;
    let mut term = 1.0;
    let mut quiet = 0;
    for n in 0..4000 {
        let nf = n as f64;
        term *= (a + nf) * zeta / ((c + nf) * (nf + 1.0));
        if term == 0.0 {
            return Some(sum);
        }
        // Kahan summation
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        // stop once the terms decrease and are negligible twice in a row
        let ratio = ((a + nf + 1.0) * zeta / ((c + nf + 1.0) * (nf + 2.0))).abs();
        if ratio < 1.0 && term.abs() <= 1e-17 * sum.abs() {
            quiet += 1;
            if quiet == 2 {
                return sum.is_finite().then_some(sum);
            }
        } else {
            quiet = 0;
        }
    }
    None
}
