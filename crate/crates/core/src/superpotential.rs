//! Complex superpotential `β = −α'/α + iλ/α²` and the transformation
//! function `u = α exp(−iλ ∫ α⁻²)`.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ermakov::AlphaFunction;
use crate::error::{Error, Result};
use crate::function::{Domain, SharedPotential, WaveFunction};
use crate::jet::Jet;
use crate::spectral::quadrature::CumulativeIntegral;

const I: Complex64 = Complex64::new(0.0, 1.0);

/// Which kind of superpotential a given `λ₀` leads to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// `λ₀ = 0`: real u-function, ordinary real superpotential.
    Conventional,
    /// `λ₀ < 0`: not constructed.
    Excluded,
    /// `λ₀ > 0`: complex superpotential.
    Complex,
}

pub fn classify(lambda0: f64) -> Branch {
    if lambda0 > 0.0 {
        Branch::Complex
    } else if lambda0 < 0.0 {
        Branch::Excluded
    } else {
        Branch::Conventional
    }
}

/// `β_λ = β_R + iβ_I` with `β_R = −α'/α`, `β_I = λ/α²`.
#[derive(Clone, Debug)]
pub struct Superpotential {
    alpha: AlphaFunction,
    lambda: f64,
}

/// Complex-branch superpotential. `λ` carries its sign and must square to
/// the `λ₀` of `alpha`.
pub fn beta(alpha: &AlphaFunction, lambda: f64) -> Result<Superpotential> {
    let lambda0 = alpha.lambda0();
    match classify(lambda0) {
        Branch::Excluded => return Err(Error::ExcludedBranch { lambda0 }),
        Branch::Conventional if lambda == 0.0 => return Err(Error::ZeroLambdaBranch),
        _ => {}
    }
    if lambda == 0.0 {
        return Err(Error::ZeroLambdaBranch);
    }
    let sq = lambda * lambda;
    if (sq - lambda0).abs() > 1e-12 * sq.max(lambda0.abs()) {
        return Err(Error::LambdaMismatch { lambda, lambda0 });
    }
    Ok(Superpotential {
        alpha: alpha.clone(),
        lambda,
    })
}

impl Superpotential {
    /// Real superpotential `−α'/α` of the `λ₀ = 0` branch, kept for
    /// degenerate consistency checks.
    pub fn conventional(alpha: &AlphaFunction) -> Result<Self> {
        match classify(alpha.lambda0()) {
            Branch::Conventional => Ok(Self {
                alpha: alpha.clone(),
                lambda: 0.0,
            }),
            Branch::Excluded => Err(Error::ExcludedBranch {
                lambda0: alpha.lambda0(),
            }),
            Branch::Complex => Err(Error::LambdaMismatch {
                lambda: 0.0,
                lambda0: alpha.lambda0(),
            }),
        }
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn alpha(&self) -> &AlphaFunction {
        &self.alpha
    }

    pub fn epsilon(&self) -> f64 {
        self.alpha.epsilon()
    }

    pub fn potential(&self) -> &SharedPotential {
        self.alpha.potential()
    }

    pub fn domain(&self) -> Domain {
        self.alpha.domain()
    }

    /// The same construction with `λ → −λ`.
    pub fn conjugate_branch(&self) -> Self {
        Self {
            alpha: self.alpha.clone(),
            lambda: -self.lambda,
        }
    }

    /// `β, β', β'', β'''` at `x`.
    pub fn jet(&self, x: f64) -> Jet {
        jet_from_alpha(&self.alpha.jet(x), self.lambda)
    }

    pub fn value(&self, x: f64) -> Complex64 {
        self.jet(x).value()
    }

    pub fn beta_r(&self, x: f64) -> f64 {
        self.value(x).re
    }

    pub fn beta_i(&self, x: f64) -> f64 {
        self.value(x).im
    }
}

pub(crate) fn jet_from_alpha(alpha: &Jet, lambda: f64) -> Jet {
    let inv = alpha.recip();
    let real = -(alpha.derivative() * inv);
    let imag = (inv * inv).scale(I * lambda);
    real + imag
}

/// `|−β' + β² + ε − V|` at `x`.
pub fn riccati_residual(beta: &Superpotential, x: f64) -> f64 {
    let b = beta.jet(x);
    (-b.d(1) + b.d(0) * b.d(0) + beta.epsilon() - beta.potential().value(x)).norm()
}

/// Real and imaginary parts of the Riccati equation taken separately:
/// `−β_R' + β_R² − β_I² + ε − V` and `−β_I' + 2β_Rβ_I`.
pub fn coupled_residuals(beta: &Superpotential, x: f64) -> (f64, f64) {
    let b = beta.jet(x);
    let (r, i) = (b.d(0).re, b.d(0).im);
    let (dr, di) = (b.d(1).re, b.d(1).im);
    let first = -dr + r * r - i * i + beta.epsilon() - beta.potential().value(x);
    let second = -di + 2.0 * r * i;
    (first.abs(), second.abs())
}

/// `u_λ = α exp(−iλ Ξ)` with `Ξ = ∫_{x0}^{x} α⁻²`.
#[derive(Clone)]
pub struct TransformationFunction {
    alpha: AlphaFunction,
    lambda: f64,
    x0: f64,
    phase: Arc<CumulativeIntegral>,
}

impl fmt::Debug for TransformationFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TransformationFunction")
            .field("lambda", &self.lambda)
            .field("x0", &self.x0)
            .field("phase_error", &self.phase.error_estimate())
            .finish_non_exhaustive()
    }
}

/// Phase integrals are tabulated on at least this many intervals.
pub const PHASE_INTERVALS: usize = 4096;
pub const PHASE_TOLERANCE: f64 = 1e-10;

pub fn transformation_function(alpha: &AlphaFunction, lambda: f64, x0: f64) -> Result<TransformationFunction> {
    let sq = lambda * lambda;
    let lambda0 = alpha.lambda0();
    if (sq - lambda0).abs() > 1e-12 * sq.max(lambda0.abs()) {
        return Err(Error::LambdaMismatch { lambda, lambda0 });
    }
    let a = alpha.clone();
    let integrand = Arc::new(move |x: f64| Complex64::new(a.square_jet(x).value().re.recip(), 0.0));
    let d = alpha.domain();
    let phase = CumulativeIntegral::new(integrand, d.min, d.max, x0, PHASE_INTERVALS, PHASE_TOLERANCE)?;
    Ok(TransformationFunction {
        alpha: alpha.clone(),
        lambda,
        x0,
        phase: Arc::new(phase),
    })
}

impl TransformationFunction {
    pub fn alpha(&self) -> &AlphaFunction {
        &self.alpha
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn origin(&self) -> f64 {
        self.x0
    }

    /// `Ξ(x) = ∫_{x0}^{x} α⁻²`.
    pub fn phase_integral(&self, x: f64) -> f64 {
        self.phase.at(x).re
    }

    pub fn phase_error(&self) -> f64 {
        self.phase.error_estimate()
    }

    /// Jet of `Ξ` (its derivatives are those of `α⁻²`).
    pub(crate) fn phase_jet(&self, x: f64) -> Jet {
        let inv2 = self.alpha.square_jet(x).recip();
        let mut d = vec![Complex64::new(self.phase_integral(x), 0.0)];
        d.extend_from_slice(&inv2.coefficients()[..4]);
        Jet::new(&d)
    }

    /// `|−u'' + (V − ε) u|` at `x`.
    pub fn schrodinger_residual(&self, x: f64) -> f64 {
        let u = self.jet(x);
        let m = self.alpha.potential().value(x) - self.alpha.epsilon();
        (-u.d(2) + u.d(0) * m).norm()
    }
}

impl WaveFunction for TransformationFunction {
    fn jet(&self, x: f64) -> Jet {
        let phase = self.phase_jet(x).scale(-I * self.lambda).exp();
        self.alpha.jet(x) * phase
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Hydrodynamics {
    pub rho: f64,
    pub velocity: f64,
    pub current: f64,
}

/// Density `α²`, flux velocity `−2β_I` and current `velocity · ρ = −2λ`.
pub fn hydrodynamics(beta: &Superpotential, x: f64) -> Hydrodynamics {
    let rho = beta.alpha.square_jet(x).value().re;
    let velocity = -2.0 * beta.lambda / rho;
    Hydrodynamics {
        rho,
        velocity,
        current: velocity * rho,
    }
}
