//! Finite-difference Hamiltonians `−d²/dx² + Ṽ` on Dirichlet boxes.

use num_complex::Complex64;
use serde::Serialize;

use super::eigen::{inverse_iteration, symmetric_tridiagonal_eigenvalues, Solver};
use super::grid::Grid;
use super::quadrature::integrate;
use crate::darboux::ComplexPotential;
use crate::ermakov::AlphaFunction;
use crate::error::{Error, Result};

/// `(−ψ_{i−1} + 2ψ_i − ψ_{i+1})/h² + Ṽ(x_i) ψ_i` on the interior grid points,
/// with `ψ = 0` at both ends.
#[derive(Clone, Debug)]
pub struct DiscreteHamiltonian {
    grid: Grid,
    diag: Vec<Complex64>,
    off: f64,
    tag: String,
}

pub fn discretize(potential: &ComplexPotential, grid: &Grid) -> Result<DiscreteHamiltonian> {
    discretize_fn(|x| potential.value(x), grid, potential.family_tag())
}

/// As [`discretize`] for any complex-valued potential.
pub fn discretize_fn<F>(potential: F, grid: &Grid, tag: &str) -> Result<DiscreteHamiltonian>
where
    F: Fn(f64) -> Complex64,
{
    let n = grid.len();
    if n < 3 {
        return Err(Error::InvalidGrid(format!("need interior points, got n = {n}")));
    }
    let h = grid.spacing();
    let kinetic = 2.0 / (h * h);
    let mut diag = Vec::with_capacity(n - 2);
    for i in 1..n - 1 {
        let x = grid.point(i);
        let v = potential(x);
        if !(v.re.is_finite() && v.im.is_finite()) {
            return Err(Error::NonFinitePotential { index: i, x });
        }
        diag.push(v + kinetic);
    }
    Ok(DiscreteHamiltonian {
        grid: *grid,
        diag,
        off: -1.0 / (h * h),
        tag: tag.to_string(),
    })
}

impl DiscreteHamiltonian {
    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    /// Matrix dimension (number of interior points).
    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    pub fn diagonal(&self) -> &[Complex64] {
        &self.diag
    }

    pub fn off_diagonal(&self) -> f64 {
        self.off
    }

    pub fn tag(&self) -> &str {
        &self.tag
    }

    /// Interior abscissae matching the matrix rows.
    pub fn interior_points(&self) -> impl Iterator<Item = f64> + '_ {
        (1..self.grid.len() - 1).map(move |i| self.grid.point(i))
    }

    fn off_vec(&self) -> Vec<Complex64> {
        vec![Complex64::new(self.off, 0.0); self.dim().saturating_sub(1)]
    }

    /// All eigenvalues sorted by real part (ties by imaginary part).
    pub fn eigenvalues(&self) -> Result<(Vec<Complex64>, Solver)> {
        let (mut values, solver) = symmetric_tridiagonal_eigenvalues(&self.diag, &self.off_vec())?;
        values.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
        Ok((values, solver))
    }

    /// Unit-norm eigenvector for an (approximate) eigenvalue.
    pub fn eigenvector(&self, eigenvalue: Complex64) -> Vec<Complex64> {
        inverse_iteration(&self.diag, &self.off_vec(), eigenvalue)
    }
}

/// One reference energy paired with the nearest computed eigenvalue.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ReferenceMatch {
    pub expected: f64,
    pub found: Complex64,
    pub delta: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralReport {
    /// All eigenvalues, sorted by real part.
    pub eigenvalues: Vec<Complex64>,
    /// Number of low-lying eigenvalues the report focuses on.
    pub lowest: usize,
    /// Largest `|Im|` among the lowest `lowest` eigenvalues.
    pub max_imag_low_m: f64,
    pub matched_reference: Vec<ReferenceMatch>,
    pub tolerance: Option<f64>,
    pub solver: Solver,
}

pub fn spectrum(hamiltonian: &DiscreteHamiltonian, m: usize) -> Result<SpectralReport> {
    if m > hamiltonian.dim() {
        return Err(Error::InvalidParameter(format!(
            "requested {m} eigenvalues from a {}-dimensional matrix",
            hamiltonian.dim()
        )));
    }
    let (eigenvalues, solver) = hamiltonian.eigenvalues()?;
    let max_imag_low_m = eigenvalues[..m].iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    Ok(SpectralReport {
        eigenvalues,
        lowest: m,
        max_imag_low_m,
        matched_reference: Vec::new(),
        tolerance: None,
        solver,
    })
}

impl SpectralReport {
    pub fn low(&self) -> &[Complex64] {
        &self.eigenvalues[..self.lowest]
    }

    /// Pairs every reference energy with the nearest not yet used eigenvalue
    /// among the lowest ones and records `tolerance`.
    pub fn match_reference(&mut self, expected: &[f64], tolerance: f64) {
        let mut used = vec![false; self.lowest];
        self.matched_reference = expected
            .iter()
            .map(|&e| {
                let best = (0..self.lowest)
                    .filter(|&i| !used[i])
                    .min_by(|&i, &j| {
                        (self.eigenvalues[i] - e)
                            .norm()
                            .total_cmp(&(self.eigenvalues[j] - e).norm())
                    });
                match best {
                    Some(i) => {
                        used[i] = true;
                        let found = self.eigenvalues[i];
                        ReferenceMatch {
                            expected: e,
                            found,
                            delta: (found - e).norm(),
                        }
                    }
                    None => ReferenceMatch {
                        expected: e,
                        found: Complex64::new(f64::NAN, f64::NAN),
                        delta: f64::INFINITY,
                    },
                }
            })
            .collect();
        self.tolerance = Some(tolerance);
    }

    /// True when every reference was matched within the recorded tolerance.
    pub fn all_matched(&self) -> bool {
        match self.tolerance {
            Some(t) => self.matched_reference.iter().all(|m| m.delta <= t),
            None => false,
        }
    }
}

/// `N = (λ/π) ∫ α⁻² dx` over the grid.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct MilneCount {
    pub value: f64,
    pub quadrature_error: f64,
    /// Estimate of the part of the integral beyond the grid, from the local
    /// exponential decay rate of `α⁻²` at both ends (infinite if it does not
    /// decay).
    pub tail_estimate: f64,
}

pub fn milne_count(alpha: &AlphaFunction, lambda: f64, grid: &Grid) -> Result<MilneCount> {
    let pref = lambda / std::f64::consts::PI;
    if lambda == 0.0 {
        return Ok(MilneCount {
            value: 0.0,
            quadrature_error: 0.0,
            tail_estimate: 0.0,
        });
    }
    let q = integrate(|x| Complex64::new(alpha.square_jet(x).value().re.recip(), 0.0), grid)?;
    // f = α⁻², f'/f = −2α'/α; outward decay rate r gives a tail ≈ f/r
    let tail = |x: f64, outward: f64| {
        let j = alpha.jet(x);
        let (a, da) = (j.d(0).re, j.d(1).re);
        let rate = 2.0 * da / a * outward;
        if rate > 0.0 {
            a.powi(-2) / rate
        } else {
            f64::INFINITY
        }
    };
    let tail_estimate = pref.abs() * (tail(grid.x_min(), -1.0) + tail(grid.x_max(), 1.0));
    Ok(MilneCount {
        value: pref * q.value.re,
        quadrature_error: pref.abs() * q.error_estimate,
        tail_estimate,
    })
}
