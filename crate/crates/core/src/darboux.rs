//! Darboux partner potentials, ladder operators and bi-orthogonal states.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::ermakov::complete;
use crate::error::{Error, Result};
use crate::function::{SharedPotential, SharedWave, WaveFunction};
use crate::jet::Jet;
use crate::spectral::grid::Grid;
use crate::spectral::quadrature::{integrate, QuadResult};
use crate::superpotential::{Superpotential, TransformationFunction};

type JetFn = Arc<dyn Fn(f64) -> Jet + Send + Sync>;

/// A complex potential `Ṽ(x)` with the data it was derived from.
#[derive(Clone)]
pub struct ComplexPotential {
    eval: JetFn,
    source: SharedPotential,
    epsilon: f64,
    lambda: f64,
    family_tag: String,
}

impl fmt::Debug for ComplexPotential {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComplexPotential")
            .field("family_tag", &self.family_tag)
            .field("epsilon", &self.epsilon)
            .field("lambda", &self.lambda)
            .field("source", &self.source)
            .finish_non_exhaustive()
    }
}

impl ComplexPotential {
    /// Wraps an arbitrary evaluator returning `Ṽ` and its derivatives.
    pub fn new(
        eval: impl Fn(f64) -> Jet + Send + Sync + 'static,
        source: SharedPotential,
        epsilon: f64,
        lambda: f64,
        family_tag: impl Into<String>,
    ) -> Self {
        Self {
            eval: Arc::new(eval),
            source,
            epsilon,
            lambda,
            family_tag: family_tag.into(),
        }
    }

    pub fn jet(&self, x: f64) -> Jet {
        (self.eval)(x)
    }

    pub fn value(&self, x: f64) -> Complex64 {
        self.jet(x).value()
    }

    pub fn source_value(&self, x: f64) -> f64 {
        self.source.value(x)
    }

    pub fn source(&self) -> &SharedPotential {
        &self.source
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn family_tag(&self) -> &str {
        &self.family_tag
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.family_tag = tag.into();
        self
    }
}

/// `Ṽ = V + 2β'`.
pub fn darboux_potential(beta: &Superpotential) -> ComplexPotential {
    let b = beta.clone();
    let source = Arc::clone(beta.potential());
    let src = Arc::clone(&source);
    ComplexPotential::new(
        move |x| src.jet(x) + b.jet(x).derivative() * 2.0,
        source,
        beta.epsilon(),
        beta.lambda(),
        "darboux",
    )
}

/// First-order operators built from β.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Ladder {
    /// `−d/dx + β`
    A,
    /// `d/dx + β`
    B,
    /// `d/dx + β*`
    ADagger,
    /// `−d/dx + β*`
    BDagger,
}

/// Applies a ladder operator to jets; one derivative order is consumed.
pub fn ladder_jet(which: Ladder, beta: &Jet, psi: &Jet) -> Jet {
    let (sign, b) = match which {
        Ladder::A => (-1.0, *beta),
        Ladder::B => (1.0, *beta),
        Ladder::ADagger => (1.0, beta.conj()),
        Ladder::BDagger => (-1.0, beta.conj()),
    };
    psi.derivative() * sign + b * *psi
}

pub fn ladder_apply(which: Ladder, beta: &Superpotential, psi: &dyn WaveFunction, x: f64) -> Complex64 {
    ladder_jet(which, &beta.jet(x), &psi.jet(x)).value()
}

// −f'' + W f
fn hamiltonian_jet(f: &Jet, w: &Jet) -> Jet {
    -f.derivative().derivative() + *w * *f
}

/// `|(AB + ε)ψ − (−ψ'' + Vψ)|` at `x`.
pub fn factorization_residual(beta: &Superpotential, psi: &dyn WaveFunction, x: f64) -> f64 {
    let b = beta.jet(x);
    let p = psi.jet(x);
    let ab = ladder_jet(Ladder::A, &b, &ladder_jet(Ladder::B, &b, &p));
    let h = hamiltonian_jet(&p, &beta.potential().jet(x));
    (ab.value() + p.value() * beta.epsilon() - h.value()).norm()
}

/// `|H̃(Bψ) − B(Hψ)|` at `x` with `H = −d² + V`, `H̃ = −d² + Ṽ`.
/// `psi` must supply three derivatives.
pub fn intertwining_residual(beta: &Superpotential, vt: &ComplexPotential, psi: &dyn WaveFunction, x: f64) -> f64 {
    let b = beta.jet(x);
    let p = psi.jet(x);
    let lhs = hamiltonian_jet(&ladder_jet(Ladder::B, &b, &p), &vt.jet(x));
    let rhs = ladder_jet(Ladder::B, &b, &hamiltonian_jet(&p, &beta.potential().jet(x)));
    (lhs.value() - rhs.value()).norm()
}

/// `|H(B†φ) − B†(H̃†φ)|` at `x` with `H̃† = −d² + Ṽ*`.
pub fn adjoint_intertwining_residual(
    beta: &Superpotential,
    vt: &ComplexPotential,
    phi: &dyn WaveFunction,
    x: f64,
) -> f64 {
    let b = beta.jet(x);
    let p = phi.jet(x);
    let lhs = hamiltonian_jet(&ladder_jet(Ladder::BDagger, &b, &p), &beta.potential().jet(x));
    let rhs = ladder_jet(Ladder::BDagger, &b, &hamiltonian_jet(&p, &vt.jet(x).conj()));
    (lhs.value() - rhs.value()).norm()
}

/// `|β' + β² + ε − Ṽ|` at `x`.
pub fn partner_riccati_residual(beta: &Superpotential, vt: &ComplexPotential, x: f64) -> f64 {
    let b = beta.jet(x);
    (b.d(1) + b.d(0) * b.d(0) + beta.epsilon() - vt.value(x)).norm()
}

/// Largest deviation of `Re Ṽ` from `V − 2(ln α)''` and of `Im Ṽ` from
/// `−4λα'/α³`.
pub fn decomposition_residual(beta: &Superpotential, vt: &ComplexPotential, x: f64) -> f64 {
    let a = beta.alpha().jet(x);
    let (a0, a1, a2) = (a.d(0).re, a.d(1).re, a.d(2).re);
    let log2 = a2 / a0 - (a1 / a0).powi(2);
    let v = vt.value(x);
    let re = (v.re - (beta.potential().value(x) - 2.0 * log2)).abs();
    let im = (v.im + 4.0 * beta.lambda() * a1 / a0.powi(3)).abs();
    re.max(im)
}

/// `|−ψ'' + Ṽψ − Eψ|` at `x`.
pub fn eigen_residual(vt: &ComplexPotential, psi: &dyn WaveFunction, energy: f64, x: f64) -> f64 {
    let p = psi.jet(x);
    (hamiltonian_jet(&p, &vt.jet(x)).value() - p.value() * energy).norm()
}

/// `|Im Ṽ / Re Ṽ|` at `x`.
pub fn soft_non_hermiticity_ratio(vt: &ComplexPotential, x: f64) -> f64 {
    let v = vt.value(x);
    (v.im / v.re).abs()
}

/// `(ψ' + βψ)/√(E − ε)` or, for the dual, `(ψ' + β*ψ)/√(E − ε)`.
#[derive(Clone)]
pub struct PartnerState {
    source: SharedWave,
    beta: Superpotential,
    energy: f64,
    divisor: f64,
    dual: bool,
}

impl fmt::Debug for PartnerState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PartnerState")
            .field("energy", &self.energy)
            .field("divisor", &self.divisor)
            .field("dual", &self.dual)
            .finish_non_exhaustive()
    }
}

impl PartnerState {
    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// `√(E − ε)`.
    pub fn divisor(&self) -> f64 {
        self.divisor
    }

    pub fn is_dual(&self) -> bool {
        self.dual
    }
}

impl WaveFunction for PartnerState {
    fn jet(&self, x: f64) -> Jet {
        let src = complete(self.source.jet(x), &self.beta.potential().jet(x), self.energy);
        let op = if self.dual { Ladder::ADagger } else { Ladder::B };
        ladder_jet(op, &self.beta.jet(x), &src) * self.divisor.recip()
    }
}

/// Partner (or dual) image of a source eigenfunction at energy `E > ε`.
/// Derivatives of `psi_e` beyond the first are filled in from the source
/// Schrödinger equation.
pub fn partner_state(psi_e: SharedWave, energy: f64, beta: &Superpotential, dual: bool) -> Result<PartnerState> {
    let epsilon = beta.epsilon();
    if !(energy > epsilon) {
        return Err(Error::EnergyBelowFactorization { energy, epsilon });
    }
    Ok(PartnerState {
        source: psi_e,
        beta: beta.clone(),
        energy,
        divisor: (energy - epsilon).sqrt(),
        dual,
    })
}

/// A partner eigenfunction together with its dual.
#[derive(Clone, Debug)]
pub struct BiorthogonalState {
    pub energy: f64,
    pub psi_tilde: PartnerState,
    pub psi_bar: PartnerState,
}

impl BiorthogonalState {
    pub fn new(psi_e: SharedWave, energy: f64, beta: &Superpotential) -> Result<Self> {
        Ok(Self {
            energy,
            psi_tilde: partner_state(Arc::clone(&psi_e), energy, beta, false)?,
            psi_bar: partner_state(psi_e, energy, beta, true)?,
        })
    }
}

/// Edge-to-peak ratio below which the density counts as decayed.
pub const EDGE_DECAY: f64 = 1e-6;
/// Largest admissible share of the norm carried by the outer half of the box.
pub const TAIL_SHARE: f64 = 1e-3;

/// `ψ̃_ε = c_ε / u_λ`, annihilated by `A`.
#[derive(Clone, Debug)]
pub struct MissingState {
    u: TransformationFunction,
    epsilon: f64,
    c_eps: Complex64,
    normalizable: bool,
    norm_integral: QuadResult,
    tail_fraction: f64,
}

/// Decides normalizability of `1/|u|² = α⁻²` on `grid`; if it is, fixes
/// `c_ε > 0` so that `∫|ψ̃_ε|² = 1`, otherwise `c_ε = 1`.
pub fn missing_state(u: &TransformationFunction, grid: &Grid) -> Result<MissingState> {
    let alpha = u.alpha();
    let density = |x: f64| alpha.square_jet(x).value().re.recip();
    let total = integrate(|x| Complex64::new(density(x), 0.0), grid)?;
    let peak = grid.points().map(density).fold(0.0, f64::max);
    let edge = density(grid.x_min()).max(density(grid.x_max()));
    let quarter = 0.25 * (grid.x_max() - grid.x_min());
    let centre = 0.5 * (grid.x_max() + grid.x_min());
    let outer = integrate(
        |x| {
            if (x - centre).abs() > quarter {
                Complex64::new(density(x), 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        },
        grid,
    )?;
    let tail_fraction = outer.value.re / total.value.re;
    let normalizable = edge <= EDGE_DECAY * peak && tail_fraction < TAIL_SHARE;
    let c_eps = if normalizable {
        Complex64::new(total.value.re.sqrt().recip(), 0.0)
    } else {
        Complex64::new(1.0, 0.0)
    };
    Ok(MissingState {
        u: u.clone(),
        epsilon: alpha.epsilon(),
        c_eps,
        normalizable,
        norm_integral: total,
        tail_fraction,
    })
}

impl MissingState {
    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn c_eps(&self) -> Complex64 {
        self.c_eps
    }

    pub fn is_normalizable(&self) -> bool {
        self.normalizable
    }

    /// `∫ α⁻²` over the grid used at construction.
    pub fn norm_integral(&self) -> QuadResult {
        self.norm_integral
    }

    pub fn tail_fraction(&self) -> f64 {
        self.tail_fraction
    }

    pub fn transformation(&self) -> &TransformationFunction {
        &self.u
    }

    /// `|ψ̃_ε|² = |c_ε|²/α²`.
    pub fn density(&self, x: f64) -> f64 {
        self.c_eps.norm_sqr() / self.u.alpha().square_jet(x).value().re
    }

    /// `∫ ψ̃_ε² dx` (no conjugation).
    pub fn binorm(&self, grid: &Grid) -> Result<QuadResult> {
        integrate(|x| self.value(x).powi(2), grid)
    }

    /// The same state rescaled so that `∫ ψ̃_ε² dx = 1`. The principal root
    /// of the binorm is used; a vanishing binorm is an error.
    pub fn binormalized(&self, grid: &Grid) -> Result<MissingState> {
        let b = self.binorm(grid)?;
        if b.value.norm() <= 1e3 * b.error_estimate || b.value.norm() == 0.0 {
            return Err(Error::InvalidParameter(
                "missing state has vanishing binorm".to_string(),
            ));
        }
        let mut out = self.clone();
        out.c_eps = self.c_eps / b.value.sqrt();
        Ok(out)
    }

    /// `conj(ψ̃_ε)`, the dual of the missing state.
    pub fn dual(&self) -> impl WaveFunction + '_ {
        move |x: f64| self.jet(x).conj()
    }
}

impl WaveFunction for MissingState {
    fn jet(&self, x: f64) -> Jet {
        self.u.jet(x).recip().scale(self.c_eps)
    }
}

/// `∫ conj(f) g dx` on the grid.
pub fn biproduct(f: &dyn WaveFunction, g: &dyn WaveFunction, grid: &Grid) -> Result<QuadResult> {
    integrate(|x| f.value(x).conj() * g.value(x), grid)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ermakov::{build_alpha, FundamentalPair};
    use crate::function::{Domain, RealPotential};
    use crate::superpotential::{beta, transformation_function};

    #[derive(Debug)]
    struct Free;
    impl RealPotential for Free {
        fn jet(&self, _x: f64) -> Jet {
            Jet::from(0.0)
        }
    }

    fn exp_wave(s: f64) -> SharedWave {
        Arc::new(move |x: f64| {
            let e = (s * x).exp();
            Jet::real(&[e, s * e, s * s * e, s.powi(3) * e, s.powi(4) * e])
        })
    }

    fn hyperbolic(lambda: f64) -> Superpotential {
        let theta = (1.0 - 4.0 * lambda * lambda).max(0.0).sqrt();
        let pair = FundamentalPair::new(
            exp_wave(-0.5),
            exp_wave(0.5),
            Complex64::new(1.0, 0.0),
            -0.25,
            Arc::new(Free),
            Domain::symmetric(25.0).unwrap(),
        )
        .unwrap();
        beta(&build_alpha(pair, 0.5, theta, 0.5).unwrap(), lambda).unwrap()
    }

    fn plane_wave(k: f64) -> SharedWave {
        Arc::new(move |x: f64| Jet::real(&[(k * x).cos(), -k * (k * x).sin()]))
    }

    #[test]
    fn hyperbolic_potential_closed_form() {
        let b = hyperbolic(0.5);
        let vt = darboux_potential(&b);
        assert!((vt.value(0.0) - Complex64::new(-1.0, 0.0)).norm() < 1e-14);
        for x in [-2.0f64, 0.7, 3.0] {
            let expected = Complex64::new(1.0, x.sinh()) * (-1.0 / x.cosh().powi(2));
            assert!((vt.value(x) - expected).norm() < 1e-13);
            assert!(partner_riccati_residual(&b, &vt, x) < 1e-12);
            assert!(decomposition_residual(&b, &vt, x) < 1e-12);
        }
    }

    #[test]
    fn intertwining_for_free_plane_wave() {
        let b = hyperbolic(0.3);
        let vt = darboux_potential(&b);
        let k = 0.8;
        let src = plane_wave(k);
        let psi = move |x: f64| complete(src.jet(x), &Jet::from(0.0), k * k);
        assert!(intertwining_residual(&b, &vt, &psi, 2.0) < 1e-7);
        assert!(factorization_residual(&b, &psi, 2.0) < 1e-12);
        let st = BiorthogonalState::new(plane_wave(k), k * k, &b).unwrap();
        for x in [-1.0, 0.0, 2.0] {
            assert!(eigen_residual(&vt, &st.psi_tilde, k * k, x) < 1e-10);
            assert!(adjoint_intertwining_residual(&b, &vt, &st.psi_bar, x) < 1e-7);
            assert!((st.psi_bar.value(x) - st.psi_tilde.value(x).conj()).norm() < 1e-15);
        }
    }

    #[test]
    fn energy_guard() {
        let b = hyperbolic(0.3);
        assert!(matches!(
            partner_state(plane_wave(1.0), -0.25, &b, false),
            Err(Error::EnergyBelowFactorization { .. })
        ));
    }

    #[test]
    fn missing_state_normalization() {
        let b = hyperbolic(0.5);
        let u = transformation_function(b.alpha(), 0.5, 0.0).unwrap();
        let grid = Grid::symmetric(25.0, 2001).unwrap();
        let m = missing_state(&u, &grid).unwrap();
        assert!(m.is_normalizable());
        assert!((m.c_eps().re - std::f64::consts::FRAC_1_PI.sqrt()).abs() < 1e-10);
        for x in [-3.0, 0.0, 1.5] {
            assert!(ladder_apply(Ladder::A, &b, &m, x).norm() < 1e-12);
        }
        let zero = |_x: f64| Jet::from(0.0);
        assert_eq!(ladder_apply(Ladder::B, &b, &zero, 0.3), Complex64::new(0.0, 0.0));
        let bn = m.binormalized(&grid).unwrap();
        let dual = bn.dual();
        let g = biproduct(&dual, &bn, &grid).unwrap();
        assert!((g.value - 1.0).norm() < 1e-8);
    }
}
