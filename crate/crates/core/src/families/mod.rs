//! Worked families: periodic and hyperbolic partners of the free particle,
//! and complex partners of the harmonic oscillator.

pub mod special;

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::darboux::{darboux_potential, missing_state, ComplexPotential, MissingState};
use crate::ermakov::{build_alpha, complete, lambda0_from_params, AlphaFunction, FundamentalPair};
use crate::error::{Error, Result};
use crate::function::{Domain, RealPotential, SharedPotential, SharedWave, WaveFunction};
use crate::jet::Jet;
use crate::spectral::grid::Grid;
use crate::superpotential::{beta, classify, transformation_function, Branch, Superpotential, TransformationFunction};

pub use special::{erf, erfc, hyp1f1};

const I: Complex64 = Complex64::new(0.0, 1.0);

/// `V = 0`.
#[derive(Clone, Copy, Debug, Default)]
pub struct FreeParticle;

impl RealPotential for FreeParticle {
    fn jet(&self, _x: f64) -> Jet {
        Jet::from(0.0)
    }
}

/// `V = x²`, eigenvalues `2n + 1`.
#[derive(Clone, Copy, Debug, Default)]
pub struct HarmonicOscillator;

impl RealPotential for HarmonicOscillator {
    fn jet(&self, x: f64) -> Jet {
        Jet::real(&[x * x, 2.0 * x, 2.0, 0.0, 0.0])
    }
}

/// `e^{s x}` with all stored derivatives.
fn exp_jet(s: Complex64, x: f64) -> Jet {
    let e = (s * x).exp();
    Jet::new(&[e, s * e, s * s * e, s.powu(3) * e, s.powu(4) * e])
}

fn cosh_sinh(kappa: f64, x: f64) -> (Jet, Jet) {
    let p = exp_jet(Complex64::new(kappa, 0.0), x);
    let m = exp_jet(Complex64::new(-kappa, 0.0), x);
    ((p + m) * 0.5, (p - m) * 0.5)
}

fn atan_jet(g: &Jet) -> Jet {
    let inner = (Jet::from(1.0) + *g * *g).recip() * g.derivative();
    let mut d = vec![Complex64::new(g.value().re.atan(), 0.0)];
    d.extend_from_slice(inner.coefficients());
    Jet::new(&d)
}

/// Everything derived from one α: superpotential, partner potential and
/// transformation function.
#[derive(Clone, Debug)]
pub struct Construction {
    pub alpha: AlphaFunction,
    pub beta: Superpotential,
    pub potential: ComplexPotential,
    pub transformation: TransformationFunction,
    pub branch: Branch,
}

impl Construction {
    /// Builds the chain from α. `λ = 0` (with `λ₀ = 0`) takes the
    /// conventional real branch.
    pub fn from_alpha(alpha: AlphaFunction, lambda: f64, tag: &str) -> Result<Self> {
        let branch = classify(alpha.lambda0());
        let sp = match branch {
            Branch::Excluded => {
                return Err(Error::ExcludedBranch {
                    lambda0: alpha.lambda0(),
                })
            }
            Branch::Conventional => Superpotential::conventional(&alpha)?,
            Branch::Complex => beta(&alpha, lambda)?,
        };
        let x0 = if alpha.domain().contains(0.0) {
            0.0
        } else {
            alpha.domain().midpoint()
        };
        let transformation = transformation_function(&alpha, sp.lambda(), x0)?;
        let potential = darboux_potential(&sp).with_tag(tag);
        Ok(Self {
            alpha,
            beta: sp,
            potential,
            transformation,
            branch,
        })
    }

    pub fn missing_state(&self, grid: &Grid) -> Result<MissingState> {
        missing_state(&self.transformation, grid)
    }
}

fn require_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be finite, got {value}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PeriodicVariant {
    /// `α² = cos 2kx + γ`
    #[default]
    Cos,
    /// `α² = sin 2kx + γ`
    Sin,
}

/// Complex periodic partners of the free particle at `ε = k²`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PeriodicFamily {
    pub k: f64,
    pub lambda: f64,
    #[serde(default)]
    pub variant: PeriodicVariant,
}

impl PeriodicFamily {
    pub fn new(k: f64, lambda: f64, variant: PeriodicVariant) -> Result<Self> {
        let f = Self { k, lambda, variant };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        require_finite("k", self.k)?;
        require_finite("lambda", self.lambda)?;
        if self.k <= 0.0 {
            return Err(Error::InvalidParameter(format!("k must be positive, got {}", self.k)));
        }
        if self.lambda == 0.0 {
            return Err(Error::ZeroLambdaBranch);
        }
        Ok(())
    }

    /// `γ = √(1 + λ²/k²)`.
    pub fn gamma(&self) -> f64 {
        (1.0 + (self.lambda / self.k).powi(2)).sqrt()
    }

    // γ − 1 without cancellation
    fn gamma_minus_one(&self) -> f64 {
        (self.lambda / self.k).powi(2) / (self.gamma() + 1.0)
    }

    pub fn epsilon(&self) -> f64 {
        self.k * self.k
    }

    pub fn period(&self) -> f64 {
        PI / self.k
    }

    pub fn default_domain(&self) -> Domain {
        Domain {
            min: -4.0 * PI / self.k,
            max: 4.0 * PI / self.k,
        }
    }

    fn shift(&self) -> f64 {
        match self.variant {
            PeriodicVariant::Cos => 0.0,
            PeriodicVariant::Sin => PI / (4.0 * self.k),
        }
    }

    /// `z = cos k(x−s)`, `v = sin k(x−s)`, `W = k`.
    pub fn pair(&self, domain: Domain) -> Result<FundamentalPair> {
        let (k, s) = (self.k, self.shift());
        let z: SharedWave = Arc::new(move |x: f64| exp_jet(I * k, x - s).re());
        let v: SharedWave = Arc::new(move |x: f64| (exp_jet(I * k, x - s) * -I).re());
        FundamentalPair::new(z, v, Complex64::new(k, 0.0), k * k, Arc::new(FreeParticle), domain)
    }

    /// `α² = (γ−1) sin² + (γ+1) cos² = cos 2k(x−s) + γ`. Written as a sum of
    /// non-negative terms so that the minimum `γ − 1` keeps full relative
    /// precision when `λ ≪ k`.
    pub fn alpha(&self, domain: Domain) -> Result<AlphaFunction> {
        build_alpha(self.pair(domain)?, self.gamma_minus_one(), 0.0, self.gamma() + 1.0)?
            .with_exact_lambda0(self.lambda * self.lambda)
    }

    pub fn construct(&self, domain: Domain) -> Result<Construction> {
        self.validate()?;
        Construction::from_alpha(self.alpha(domain)?, self.lambda, "periodic")
    }

    fn phase(&self, x: f64) -> f64 {
        2.0 * self.k * (x - self.shift())
    }

    pub fn alpha_closed(&self, x: f64) -> f64 {
        (self.phase(x).cos() + self.gamma()).sqrt()
    }

    pub fn beta_closed(&self, x: f64) -> Complex64 {
        let t = self.phase(x);
        Complex64::new(self.k * t.sin(), self.lambda) / (t.cos() + self.gamma())
    }

    pub fn potential_closed(&self, x: f64) -> Complex64 {
        let (k, l, g) = (self.k, self.lambda, self.gamma());
        let t = self.phase(x);
        Complex64::new(4.0 * k * k * (1.0 + g * t.cos()), 4.0 * l * k * t.sin()) / (t.cos() + g).powi(2)
    }
}

/// Pöschl–Teller-like partners of the free particle at `ε = −κ²/4`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HyperbolicFamily {
    pub kappa: f64,
    pub lambda: f64,
}

impl HyperbolicFamily {
    /// `λ = 0` is accepted and gives the conventional real partner.
    pub fn new(kappa: f64, lambda: f64) -> Result<Self> {
        let f = Self { kappa, lambda };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        require_finite("kappa", self.kappa)?;
        require_finite("lambda", self.lambda)?;
        if self.kappa <= 0.0 {
            return Err(Error::InvalidParameter(format!("kappa must be positive, got {}", self.kappa)));
        }
        if self.lambda.abs() > 0.5 * self.kappa {
            return Err(Error::LambdaOutOfRange {
                lambda: self.lambda,
                kappa: self.kappa,
            });
        }
        Ok(())
    }

    /// `θ = √(1 − 4λ²/κ²)`.
    pub fn theta(&self) -> f64 {
        (1.0 - 4.0 * (self.lambda / self.kappa).powi(2)).max(0.0).sqrt()
    }

    pub fn epsilon(&self) -> f64 {
        -0.25 * self.kappa * self.kappa
    }

    pub fn default_domain(&self) -> Domain {
        Domain {
            min: -40.0 / self.kappa,
            max: 40.0 / self.kappa,
        }
    }

    /// `z = e^{−κx/2}`, `v = e^{κx/2}`, `W = κ`.
    pub fn pair(&self, domain: Domain) -> Result<FundamentalPair> {
        let h = Complex64::new(0.5 * self.kappa, 0.0);
        let z: SharedWave = Arc::new(move |x: f64| exp_jet(-h, x));
        let v: SharedWave = Arc::new(move |x: f64| exp_jet(h, x));
        FundamentalPair::new(
            z,
            v,
            Complex64::new(self.kappa, 0.0),
            self.epsilon(),
            Arc::new(FreeParticle),
            domain,
        )
    }

    pub fn alpha(&self, domain: Domain) -> Result<AlphaFunction> {
        build_alpha(self.pair(domain)?, 0.5, self.theta(), 0.5)?.with_exact_lambda0(self.lambda * self.lambda)
    }

    pub fn construct(&self, domain: Domain) -> Result<Construction> {
        self.validate()?;
        Construction::from_alpha(self.alpha(domain)?, self.lambda, "hyperbolic")
    }

    // (κ/2λ)(1 − θ), written without the cancellation in 1 − θ
    fn phase_slope(&self) -> f64 {
        (2.0 * self.lambda / self.kappa) / (1.0 + self.theta())
    }

    /// Normalization of the missing state, `c_ε = [λ / (2 arctan((κ/2λ)(1−θ)))]^{1/2}`,
    /// continuous at `λ = 0` where it equals `√(κ/2)`.
    pub fn c_epsilon(&self) -> f64 {
        if self.lambda == 0.0 {
            return (0.5 * self.kappa).sqrt();
        }
        (self.lambda / (2.0 * self.phase_slope().atan())).sqrt()
    }

    pub fn alpha_closed(&self, x: f64) -> f64 {
        ((self.kappa * x).cosh() + self.theta()).sqrt()
    }

    pub fn beta_closed(&self, x: f64) -> Complex64 {
        let kx = self.kappa * x;
        Complex64::new(-0.5 * self.kappa * kx.sinh(), self.lambda) / (kx.cosh() + self.theta())
    }

    /// `V_λ` and its derivatives.
    pub fn potential_closed_jet(&self, x: f64) -> Jet {
        let (c, s) = cosh_sinh(self.kappa, x);
        let (k, l, t) = (self.kappa, self.lambda, self.theta());
        let num = (Jet::from(1.0) + c * t) * (k * k) + s.scale(I * 2.0 * l * k);
        let den = (c + Jet::from(t)).recip();
        -(num * den * den)
    }

    pub fn potential_closed(&self, x: f64) -> Complex64 {
        let kx = self.kappa * x;
        let (k, l, t) = (self.kappa, self.lambda, self.theta());
        -Complex64::new(k * k * (1.0 + t * kx.cosh()), 2.0 * l * k * kx.sinh()) / (kx.cosh() + t).powi(2)
    }

    /// The normalized missing state
    /// `c_ε α⁻¹ exp{i arctan[(κ/2λ)(1−θ) tanh(κx/2)]}` as a jet.
    pub fn missing_state_closed(&self) -> SharedWave {
        let f = *self;
        Arc::new(move |x: f64| {
            let (c, _) = cosh_sinh(f.kappa, x);
            let (ch, sh) = cosh_sinh(0.5 * f.kappa, x);
            let tanh = sh * ch.recip();
            let phase = atan_jet(&(tanh * f.phase_slope())).scale(I).exp();
            (c + Jet::from(f.theta())).sqrt().recip() * phase * f.c_epsilon()
        })
    }

    /// `|ψ_ε|² = c_ε² / (cosh κx + θ)`.
    pub fn missing_density_closed(&self, x: f64) -> f64 {
        self.c_epsilon().powi(2) / ((self.kappa * x).cosh() + self.theta())
    }
}

/// `V = [1 + i sinh κx] · (−κ²/cosh² κx)` and its normalized bound state
/// `(κ/(π cosh κx))^{1/2} exp[i arctan(tanh(κx/2))]` at `ε = −κ²/4`.
pub fn poschl_teller_special(kappa: f64) -> Result<(ComplexPotential, SharedWave)> {
    HyperbolicFamily::new(kappa, 0.5 * kappa)?;
    let potential = ComplexPotential::new(
        move |x| {
            let (c, s) = cosh_sinh(kappa, x);
            let inv = c.recip();
            (Jet::from(1.0) + s.scale(I)) * inv * inv * (-kappa * kappa)
        },
        Arc::new(FreeParticle),
        -0.25 * kappa * kappa,
        0.5 * kappa,
        "poschl-teller",
    );
    let state: SharedWave = Arc::new(move |x: f64| {
        let (c, _) = cosh_sinh(kappa, x);
        let (ch, sh) = cosh_sinh(0.5 * kappa, x);
        let phase = atan_jet(&(sh * ch.recip())).scale(I).exp();
        c.recip().sqrt() * phase * (kappa / PI).sqrt()
    });
    Ok((potential, state))
}

/// Ground energy `−(κ²/4)(√5 − 1)²` of the real well `−κ²/cosh² κx`.
pub fn poschl_teller_ground_energy(kappa: f64) -> f64 {
    -0.25 * kappa * kappa * (5f64.sqrt() - 1.0).powi(2)
}

/// Complex partners of `V = x²` at `ε = −1` with
/// `α = e^{x²/2} [a erf²(x) + b erf(x) + c]^{1/2}`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OscillatorFamily {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

impl OscillatorFamily {
    pub const EPSILON: f64 = -1.0;

    /// Complex branch only: requires `a ≥ 0` and `c > b²/(4a)`.
    pub fn new(a: f64, b: f64, c: f64) -> Result<Self> {
        let f = Self { a, b, c };
        f.validate()?;
        Ok(f)
    }

    pub fn validate(&self) -> Result<()> {
        self.validate_common()?;
        if self.lambda0() <= 0.0 {
            return Err(Error::ZeroCrossingRisk {
                c: self.c,
                bound: self.zero_bound(),
            });
        }
        Ok(())
    }

    /// Parameters on the perfect-square line `b² = 4ac` (`λ₀ = 0`), kept
    /// for the degenerate real-superpotential check. Positivity of α is
    /// left to the probe in [`build_alpha`].
    pub fn conventional(a: f64, b: f64, c: f64) -> Result<Self> {
        let f = Self { a, b, c };
        f.validate_common()?;
        if f.lambda0() != 0.0 {
            return Err(Error::InvalidParameter(format!(
                "b² = {} differs from 4ac = {}",
                b * b,
                4.0 * a * c
            )));
        }
        Ok(f)
    }

    fn validate_common(&self) -> Result<()> {
        require_finite("a", self.a)?;
        require_finite("b", self.b)?;
        require_finite("c", self.c)?;
        if self.a < 0.0 {
            return Err(Error::InvalidParameter(format!("a must be non-negative, got {}", self.a)));
        }
        Ok(())
    }

    fn zero_bound(&self) -> f64 {
        if self.a > 0.0 {
            self.b * self.b / (4.0 * self.a)
        } else if self.b == 0.0 {
            0.0
        } else {
            f64::INFINITY
        }
    }

    /// The same family in terms of the unit-Wronskian pair
    /// `z = e^{x²/2}`, `v = (√π/2) e^{x²/2} erf x`: `(4a/π, 2b/√π, c)`.
    pub fn unit_wronskian_params(&self) -> (f64, f64, f64) {
        (4.0 * self.a / PI, 2.0 * self.b / PI.sqrt(), self.c)
    }

    /// `λ₀ = (4ac − b²)/π`.
    pub fn lambda0(&self) -> f64 {
        let (a, b, c) = self.unit_wronskian_params();
        lambda0_from_params(a, b, c, Complex64::new(1.0, 0.0)).unwrap_or(f64::NAN)
    }

    /// `+√λ₀`.
    pub fn lambda(&self) -> f64 {
        self.lambda0().max(0.0).sqrt()
    }

    /// The parity-mirrored member `b → −b`.
    pub fn mirrored(&self) -> Self {
        Self { b: -self.b, ..*self }
    }

    pub fn default_domain(&self) -> Domain {
        Domain { min: -10.0, max: 10.0 }
    }

    pub fn pair(&self, domain: Domain) -> Result<FundamentalPair> {
        osc_fundamental(Self::EPSILON, domain)
    }

    pub fn alpha(&self, domain: Domain) -> Result<AlphaFunction> {
        let (a, b, c) = self.unit_wronskian_params();
        build_alpha(self.pair(domain)?, a, b, c)
    }

    pub fn construct(&self, domain: Domain) -> Result<Construction> {
        self.validate_common()?;
        Construction::from_alpha(self.alpha(domain)?, self.lambda(), "oscillator")
    }

    pub fn alpha_closed(&self, x: f64) -> f64 {
        let e = erf(x);
        (0.5 * x * x).exp() * (self.a * e * e + self.b * e + self.c).sqrt()
    }

    /// `x² − 2 − 2 d/dx[(b + 2a erf − i√π λ)/(√π α²)]`, differentiated by hand.
    pub fn potential_closed(&self, x: f64) -> Complex64 {
        let (a, b, c) = (self.a, self.b, self.c);
        let sp = PI.sqrt();
        let e = erf(x);
        let de = 2.0 / sp * (-x * x).exp();
        let q = a * e * e + b * e + c;
        let dq = (2.0 * a * e + b) * de;
        let n = Complex64::new(b + 2.0 * a * e, -sp * self.lambda());
        let dn = 2.0 * a * de;
        // d/dx [n e^{−x²} / (√π q)]
        let deriv = (-x * x).exp() * (dn * q - n * (2.0 * x * q + dq)) / (sp * q * q);
        Complex64::new(x * x - 2.0, 0.0) - deriv * 2.0
    }
}

/// Fundamental solutions of `−u'' + (x² − ε)u = 0` normalized to `W(z, v) = 1`:
/// `z = e^{−x²/2} ₁F₁((1−ε)/4; ½; x²)`, `v = x e^{−x²/2} ₁F₁((3−ε)/4; 3/2; x²)`.
/// At `ε = −1` the closed forms `e^{x²/2}` and `(√π/2) e^{x²/2} erf x` are used.
pub fn osc_fundamental(epsilon: f64, domain: Domain) -> Result<FundamentalPair> {
    let potential: SharedPotential = Arc::new(HarmonicOscillator);
    let w0 = Complex64::new(1.0, 0.0);
    if epsilon == -1.0 {
        let z: SharedWave = Arc::new(|x: f64| {
            let e = (0.5 * x * x).exp();
            Jet::real(&[e, x * e])
        });
        let v: SharedWave = Arc::new(|x: f64| {
            let g = (0.5 * x * x).exp();
            let v = 0.5 * PI.sqrt() * g * erf(x);
            Jet::real(&[v, x * v + (-0.5 * x * x).exp()])
        });
        return FundamentalPair::new(z, v, w0, epsilon, potential, domain);
    }
    let reach = domain.min.abs().max(domain.max.abs());
    let (a1, a2) = ((1.0 - epsilon) / 4.0, (3.0 - epsilon) / 4.0);
    // evaluate once at the far edge so that failures surface here
    hyp1f1(a1 + 1.0, 1.5, reach * reach)?;
    hyp1f1(a2 + 1.0, 2.5, reach * reach)?;
    let m = |a: f64, c: f64, zeta: f64| hyp1f1(a, c, zeta).unwrap_or(f64::NAN);
    let z: SharedWave = Arc::new(move |x: f64| {
        let g = (-0.5 * x * x).exp();
        let x2 = x * x;
        let f0 = m(a1, 0.5, x2);
        let f1 = m(a1 + 1.0, 1.5, x2);
        Jet::real(&[g * f0, g * (-x * f0 + 4.0 * a1 * x * f1)])
    });
    let v: SharedWave = Arc::new(move |x: f64| {
        let g = (-0.5 * x * x).exp();
        let x2 = x * x;
        let f0 = m(a2, 1.5, x2);
        let f1 = m(a2 + 1.0, 2.5, x2);
        Jet::real(&[g * x * f0, g * ((1.0 - x2) * f0 + x2 * (4.0 * a2 / 3.0) * f1)])
    });
    FundamentalPair::new(z, v, w0, epsilon, potential, domain)
}

/// Highest supported oscillator level.
pub const MAX_OSCILLATOR_LEVEL: usize = 30;

/// Normalized Hermite–Gauss function `ψₙ` of `V = x²` with `Eₙ = 2n + 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct OscillatorEigenstate {
    n: usize,
}

pub fn oscillator_eigenstate(n: usize) -> Result<OscillatorEigenstate> {
    if n > MAX_OSCILLATOR_LEVEL {
        return Err(Error::OrderTooLarge {
            n,
            max: MAX_OSCILLATOR_LEVEL,
        });
    }
    Ok(OscillatorEigenstate { n })
}

impl OscillatorEigenstate {
    pub fn level(&self) -> usize {
        self.n
    }

    pub fn energy(&self) -> f64 {
        2.0 * self.n as f64 + 1.0
    }

    // (ψₙ, ψₙ₋₁) by the normalized three-term recurrence
    fn pair_at(&self, x: f64) -> (f64, f64) {
        let mut prev = 0.0;
        let mut cur = PI.powf(-0.25) * (-0.5 * x * x).exp();
        for k in 0..self.n {
            let kf = k as f64;
            let next = (2.0 / (kf + 1.0)).sqrt() * x * cur - (kf / (kf + 1.0)).sqrt() * prev;
            prev = cur;
            cur = next;
        }
        (cur, prev)
    }
}

impl WaveFunction for OscillatorEigenstate {
    fn jet(&self, x: f64) -> Jet {
        let (p, q) = self.pair_at(x);
        let d = (2.0 * self.n as f64).sqrt() * q - x * p;
        complete(Jet::real(&[p, d]), &HarmonicOscillator.jet(x), self.energy())
    }
}

/// `max |conj(V(−x)) − V(x)|` over a grid symmetric about the origin.
pub fn pt_defect(potential: &ComplexPotential, grid: &Grid) -> Result<f64> {
    if !grid.is_symmetric() {
        return Err(Error::AsymmetricDomain {
            x_min: grid.x_min(),
            x_max: grid.x_max(),
        });
    }
    Ok(grid
        .points()
        .map(|x| (potential.value(-x).conj() - potential.value(x)).norm())
        .fold(0.0, f64::max))
}

/// Family selector with parameters, as read from configuration.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", content = "params", rename_all = "lowercase")]
pub enum FamilySpec {
    Periodic(PeriodicFamily),
    Hyperbolic(HyperbolicFamily),
    Oscillator(OscillatorFamily),
}

impl FamilySpec {
    pub fn tag(&self) -> &'static str {
        match self {
            Self::Periodic(_) => "periodic",
            Self::Hyperbolic(_) => "hyperbolic",
            Self::Oscillator(_) => "oscillator",
        }
    }

    pub fn epsilon(&self) -> f64 {
        match self {
            Self::Periodic(f) => f.epsilon(),
            Self::Hyperbolic(f) => f.epsilon(),
            Self::Oscillator(_) => OscillatorFamily::EPSILON,
        }
    }

    pub fn lambda0(&self) -> f64 {
        match self {
            Self::Periodic(f) => f.lambda * f.lambda,
            Self::Hyperbolic(f) => f.lambda * f.lambda,
            Self::Oscillator(f) => f.lambda0(),
        }
    }

    pub fn branch(&self) -> Branch {
        classify(self.lambda0())
    }

    /// Checks the family preconditions. Parameter sets on the conventional
    /// branch (`λ₀ = 0`) pass when the family supports them.
    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Periodic(f) => f.validate(),
            Self::Hyperbolic(f) => f.validate(),
            Self::Oscillator(f) => match f.validate() {
                Err(Error::ZeroCrossingRisk { .. }) if f.lambda0() == 0.0 => {
                    OscillatorFamily::conventional(f.a, f.b, f.c).map(|_| ())
                }
                Err(Error::ZeroCrossingRisk { .. }) if f.lambda0() < 0.0 && f.a == 0.0 => {
                    Err(Error::ExcludedBranch { lambda0: f.lambda0() })
                }
                other => other,
            },
        }
    }

    pub fn default_domain(&self) -> Domain {
        match self {
            Self::Periodic(f) => f.default_domain(),
            Self::Hyperbolic(f) => f.default_domain(),
            Self::Oscillator(f) => f.default_domain(),
        }
    }

    pub fn construct(&self, domain: Domain) -> Result<Construction> {
        self.validate()?;
        match self {
            Self::Periodic(f) => f.construct(domain),
            Self::Hyperbolic(f) => f.construct(domain),
            Self::Oscillator(f) => f.construct(domain),
        }
    }

    pub fn source_potential(&self) -> SharedPotential {
        match self {
            Self::Oscillator(_) => Arc::new(HarmonicOscillator),
            _ => Arc::new(FreeParticle),
        }
    }

    /// Closed-form partner potential, independent of the generic construction.
    pub fn potential_closed(&self, x: f64) -> Complex64 {
        match self {
            Self::Periodic(f) => f.potential_closed(x),
            Self::Hyperbolic(f) => f.potential_closed(x),
            Self::Oscillator(f) => f.potential_closed(x),
        }
    }

    /// Bound-state energies of the source problem (`V = x²` only).
    pub fn source_energies(&self, count: usize) -> Vec<f64> {
        match self {
            Self::Oscillator(_) => (0..count).map(|n| 2.0 * n as f64 + 1.0).collect(),
            _ => Vec::new(),
        }
    }
}
