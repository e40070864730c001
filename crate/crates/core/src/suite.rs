//! Pointwise and integral checks of a constructed partner problem, shared by
//! the command-line tool and the test suites.

use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::darboux::{
    adjoint_intertwining_residual, biproduct, darboux_potential, decomposition_residual, eigen_residual,
    factorization_residual, intertwining_residual, ladder_apply, partner_riccati_residual,
    soft_non_hermiticity_ratio, BiorthogonalState, Ladder,
};
use crate::ermakov::{ermakov_relative_residual, ermakov_residual, j_invariant};
use crate::error::Result;
use crate::families::{oscillator_eigenstate, pt_defect, Construction, FamilySpec, PeriodicVariant};
use crate::function::{Domain, SharedWave, WaveFunction};
use crate::jet::Jet;
use crate::spectral::Grid;
use crate::superpotential::{coupled_residuals, riccati_residual, Branch};

/// Number of probe points for the pointwise residuals.
pub const RESIDUAL_PROBES: usize = 1000;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tolerances {
    pub residual: f64,
    pub pt_defect: f64,
    pub conjugate: f64,
    pub gram: f64,
    pub soft_ratio: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            residual: 1e-7,
            pt_defect: 1e-10,
            conjugate: 1e-12,
            gram: 1e-5,
            soft_ratio: 0.05,
        }
    }
}

/// One named quantity; checks without a threshold are informational.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub threshold: Option<f64>,
    pub passed: bool,
}

impl Check {
    pub fn below(name: &str, value: f64, threshold: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            threshold: Some(threshold),
            passed: value < threshold,
        }
    }

    pub fn info(name: &str, value: f64) -> Self {
        Self {
            name: name.to_string(),
            value,
            threshold: None,
            passed: true,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Verification {
    pub family: String,
    pub branch: Branch,
    pub epsilon: f64,
    pub lambda: f64,
    pub checks: Vec<Check>,
}

impl Verification {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// `count` equally spaced points spanning the grid, endpoints included.
pub fn probes(grid: &Grid, count: usize) -> Vec<f64> {
    Domain {
        min: grid.x_min(),
        max: grid.x_max(),
    }
    .probe(count)
    .collect()
}

/// Free-particle solution at energy `E`: `e^{i√E x}` or `e^{√(−E) x}`.
fn free_wave(energy: f64) -> SharedWave {
    let s = if energy >= 0.0 {
        Complex64::new(0.0, energy.sqrt())
    } else {
        Complex64::new((-energy).sqrt(), 0.0)
    };
    Arc::new(move |x: f64| {
        let e = (s * x).exp();
        Jet::new(&[e, s * e, s * s * e, s.powi(3) * e, s.powi(4) * e])
    })
}

/// Source eigenfunctions (or scattering states) above `ε` used to probe the
/// operator identities.
pub fn probe_states(spec: &FamilySpec) -> Result<Vec<(SharedWave, f64)>> {
    match spec {
        FamilySpec::Oscillator(_) => (0..4)
            .map(|n| {
                let s = oscillator_eigenstate(n)?;
                Ok((Arc::new(s) as SharedWave, s.energy()))
            })
            .collect(),
        _ => {
            let base = spec.epsilon().max(0.0);
            Ok([0.36, 1.69]
                .into_iter()
                .map(|q| (free_wave(base + q), base + q))
                .collect())
        }
    }
}

fn max_over(points: &[f64], f: impl Fn(f64) -> f64) -> f64 {
    points.iter().map(|&x| f(x)).fold(0.0, f64::max)
}

/// Ermakov, Riccati, factorization, intertwining and annihilation residuals
/// (maxima over `points`).
pub fn residual_checks(
    spec: &FamilySpec,
    c: &Construction,
    grid: &Grid,
    points: &[f64],
    tol: &Tolerances,
) -> Result<Vec<Check>> {
    let beta = &c.beta;
    let vt = &c.potential;
    let states = probe_states(spec)?;
    let partners = states
        .iter()
        .map(|(psi, e)| BiorthogonalState::new(Arc::clone(psi), *e, beta))
        .collect::<Result<Vec<_>>>()?;
    let missing = c.missing_state(grid)?;
    let mut out = Vec::new();
    // α grows like a Gaussian for the oscillator; compare relative to its terms.
    let ermakov = match spec {
        FamilySpec::Oscillator(_) => max_over(points, |x| ermakov_relative_residual(&c.alpha, x)),
        _ => max_over(points, |x| ermakov_residual(&c.alpha, x)),
    };
    out.push(Check::below("ermakov", ermakov, tol.residual));
    out.push(Check::below("riccati", max_over(points, |x| riccati_residual(beta, x)), tol.residual));
    out.push(Check::below(
        "riccati_coupled",
        max_over(points, |x| {
            let (a, b) = coupled_residuals(beta, x);
            a.max(b)
        }),
        tol.residual,
    ));
    out.push(Check::below(
        "partner_riccati",
        max_over(points, |x| partner_riccati_residual(beta, vt, x)),
        tol.residual,
    ));
    out.push(Check::below(
        "decomposition",
        max_over(points, |x| decomposition_residual(beta, vt, x)),
        tol.residual,
    ));
    let over_states = |f: &dyn Fn(&dyn WaveFunction, f64) -> f64| {
        states
            .iter()
            .map(|(psi, _)| max_over(points, |x| f(psi.as_ref(), x)))
            .fold(0.0, f64::max)
    };
    out.push(Check::below(
        "factorization",
        over_states(&|psi, x| factorization_residual(beta, psi, x)),
        tol.residual,
    ));
    out.push(Check::below(
        "intertwining",
        over_states(&|psi, x| intertwining_residual(beta, vt, psi, x)),
        tol.residual,
    ));
    out.push(Check::below(
        "adjoint_intertwining",
        partners
            .iter()
            .map(|p| max_over(points, |x| adjoint_intertwining_residual(beta, vt, &p.psi_bar, x)))
            .fold(0.0, f64::max),
        tol.residual,
    ));
    out.push(Check::below(
        "partner_eigen",
        partners
            .iter()
            .map(|p| max_over(points, |x| eigen_residual(vt, &p.psi_tilde, p.energy, x)))
            .fold(0.0, f64::max),
        tol.residual,
    ));
    out.push(Check::below(
        "missing_annihilated",
        max_over(points, |x| ladder_apply(Ladder::A, beta, &missing, x).norm()),
        tol.residual,
    ));
    out.push(Check::below(
        "missing_eigen",
        max_over(points, |x| eigen_residual(vt, &missing, c.alpha.epsilon(), x)),
        tol.residual,
    ));
    Ok(out)
}

/// Largest change of `J[z]` relative to `1 + |J(x₀)|`. The oscillator is
/// sampled on `[−2, 2]` only, where `z = e^{x²/2}` keeps the terms of `J`
/// well scaled.
pub fn j_invariant_drift(spec: &FamilySpec, c: &Construction, grid: &Grid) -> f64 {
    let (lo, hi) = match spec {
        FamilySpec::Oscillator(_) => (grid.x_min().max(-2.0), grid.x_max().min(2.0)),
        _ => (grid.x_min(), grid.x_max()),
    };
    let z = c.alpha.pair().z();
    let origin = 0.5 * (lo + hi);
    let j0 = j_invariant(z.as_ref(), &c.alpha, origin);
    let points: Vec<f64> = Domain { min: lo, max: hi }.probe(RESIDUAL_PROBES).collect();
    max_over(&points, |x| (j_invariant(z.as_ref(), &c.alpha, x) - j0).norm()) / (1.0 + j0.norm())
}

/// `max |Ṽ_{−λ} − conj(Ṽ_λ)|` over `points`.
pub fn conjugate_pair_defect(c: &Construction, points: &[f64]) -> f64 {
    let other = darboux_potential(&c.beta.conjugate_branch());
    max_over(points, |x| (other.value(x) - c.potential.value(x).conj()).norm())
}

/// Bi-orthonormality of the missing state and the partners of the lowest
/// `levels` oscillator eigenstates: `max |G − I|` with `G_ij = ∫ conj(φ̄_i) ψ̃_j`.
pub fn oscillator_gram_defect(c: &Construction, grid: &Grid, levels: usize) -> Result<f64> {
    let missing = c.missing_state(grid)?.binormalized(grid)?;
    let mut right: Vec<Box<dyn WaveFunction + '_>> = Vec::new();
    let mut left: Vec<Box<dyn WaveFunction + '_>> = Vec::new();
    let dual = missing.clone();
    right.push(Box::new(missing));
    left.push(Box::new(move |x: f64| dual.jet(x).conj()));
    for n in 0..levels {
        let s = oscillator_eigenstate(n)?;
        let b = BiorthogonalState::new(Arc::new(s), s.energy(), &c.beta)?;
        right.push(Box::new(b.psi_tilde));
        left.push(Box::new(b.psi_bar));
    }
    let mut worst = 0.0f64;
    for (i, l) in left.iter().enumerate() {
        for (j, r) in right.iter().enumerate() {
            let g = biproduct(l.as_ref(), r.as_ref(), grid)?.value;
            let target = if i == j { 1.0 } else { 0.0 };
            worst = worst.max((g - target).norm());
        }
    }
    Ok(worst)
}

/// Full verification of one family on `grid`.
pub fn verify(spec: &FamilySpec, grid: &Grid, tol: &Tolerances) -> Result<Verification> {
    let domain = Domain::new(grid.x_min(), grid.x_max())?;
    let c = spec.construct(domain)?;
    let points = probes(grid, RESIDUAL_PROBES);
    let mut checks = residual_checks(spec, &c, grid, &points, tol)?;

    let pair = c.alpha.pair();
    checks.push(Check::below(
        "wronskian",
        max_over(&points, |x| pair.wronskian_deviation(x)),
        tol.residual,
    ));
    checks.push(Check::below("j_invariant", j_invariant_drift(spec, &c, grid), tol.residual));

    let closed = max_over(&points, |x| (spec.potential_closed(x) - c.potential.value(x)).norm());
    checks.push(Check::below("closed_form", closed, tol.residual));

    if c.branch == Branch::Complex {
        checks.push(Check::below("conjugate_pair", conjugate_pair_defect(&c, &points), tol.conjugate));
    }

    if grid.is_symmetric() {
        let defect = pt_defect(&c.potential, grid)?;
        let pt_expected = match spec {
            FamilySpec::Periodic(f) => f.variant == PeriodicVariant::Cos,
            FamilySpec::Hyperbolic(_) => true,
            FamilySpec::Oscillator(_) => false,
        };
        checks.push(if pt_expected {
            Check::below("pt_defect", defect, tol.pt_defect)
        } else {
            Check::info("pt_defect", defect)
        });
    }

    let edge = soft_non_hermiticity_ratio(&c.potential, grid.x_min())
        .max(soft_non_hermiticity_ratio(&c.potential, grid.x_max()));
    checks.push(match spec {
        FamilySpec::Oscillator(_) => Check::below("soft_ratio_edge", edge, tol.soft_ratio),
        _ => Check::info("soft_ratio_edge", edge),
    });

    let missing = c.missing_state(grid)?;
    checks.push(Check::info("missing_normalizable", f64::from(u8::from(missing.is_normalizable()))));
    if missing.is_normalizable() {
        checks.push(Check::info("c_epsilon", missing.c_eps().re));
        if let FamilySpec::Oscillator(_) = spec {
            checks.push(Check::below("gram", oscillator_gram_defect(&c, grid, 4)?, tol.gram));
        }
    }

    Ok(Verification {
        family: spec.tag().to_string(),
        branch: c.branch,
        epsilon: c.alpha.epsilon(),
        lambda: c.beta.lambda(),
        checks,
    })
}
