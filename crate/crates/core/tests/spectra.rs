use std::f64::consts::PI;
use std::sync::Arc;

use ermakov_susy::darboux::{biproduct, partner_state};
use ermakov_susy::families::{
    oscillator_eigenstate, poschl_teller_ground_energy, poschl_teller_special, HarmonicOscillator,
    HyperbolicFamily, OscillatorFamily,
};
use ermakov_susy::function::{Domain, RealPotential, WaveFunction};
use ermakov_susy::spectral::{discretize, discretize_fn, milne_count, spectrum, Grid};
use ermakov_susy::Error;
use num_complex::Complex64;

fn oscillator_setup(n: usize) -> (ermakov_susy::families::Construction, Grid) {
    let f = OscillatorFamily::new(PI / 4.0, PI.sqrt() / 2.0, 1.0).unwrap();
    (f.construct(Domain::symmetric(8.0).unwrap()).unwrap(), Grid::symmetric(8.0, n).unwrap())
}

#[test]
fn partner_spectrum_is_source_spectrum_plus_epsilon() {
    let (c, grid) = oscillator_setup(1200);
    let partner = spectrum(&discretize(&c.potential, &grid).unwrap(), 8).unwrap();
    let source = spectrum(
        &discretize_fn(|x| Complex64::new(HarmonicOscillator.value(x), 0.0), &grid, "oscillator").unwrap(),
        7,
    )
    .unwrap();
    assert!((partner.eigenvalues[0].re + 1.0).abs() < 2e-2);
    for (n, (p, s)) in partner.low()[1..].iter().zip(source.low()).enumerate() {
        assert!((p - s).norm() < 2e-3 * (1.0 + s.re), "level {n}: {p} vs {s}");
        assert!((s.re - (2 * n + 1) as f64).abs() < 2e-2);
    }
    assert!(partner.max_imag_low_m < 1e-5);
}

#[test]
fn discrete_eigenvectors_match_partner_states() {
    let (c, grid) = oscillator_setup(1200);
    let h = discretize(&c.potential, &grid).unwrap();
    let report = spectrum(&h, 4).unwrap();
    let xs: Vec<f64> = h.interior_points().collect();
    for n in 0..3 {
        let s = oscillator_eigenstate(n).unwrap();
        let psi = partner_state(Arc::new(s), s.energy(), &c.beta, false).unwrap();
        let exact: Vec<Complex64> = xs.iter().map(|&x| psi.value(x)).collect();
        let v = h.eigenvector(report.eigenvalues[n + 1]);
        let dot: Complex64 = exact.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
        let norm = exact.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let cosine = dot.norm() / norm;
        assert!(cosine > 0.9999, "level {n}: {cosine}");
    }
}

#[test]
fn partner_states_are_bi_orthonormal() {
    let (c, grid) = oscillator_setup(1601);
    for n in 0..3 {
        let s = oscillator_eigenstate(n).unwrap();
        let right = partner_state(Arc::new(s), s.energy(), &c.beta, false).unwrap();
        for m in 0..3 {
            let t = oscillator_eigenstate(m).unwrap();
            let left = partner_state(Arc::new(t), t.energy(), &c.beta, true).unwrap();
            let g = biproduct(&left, &right, &grid).unwrap().value;
            let want = if n == m { 1.0 } else { 0.0 };
            assert!((g - want).norm() < 1e-8, "({m}, {n}): {g}");
        }
    }
    assert!(matches!(
        partner_state(Arc::new(oscillator_eigenstate(0).unwrap()), -1.0, &c.beta, false),
        Err(Error::EnergyBelowFactorization { .. })
    ));
}

#[test]
fn complex_poschl_teller_has_single_bound_state() {
    let (v, state) = poschl_teller_special(1.0).unwrap();
    let grid = Grid::symmetric(25.0, 1500).unwrap();
    let report = spectrum(&discretize(&v, &grid).unwrap(), 2).unwrap();
    let e = report.eigenvalues[0];
    assert!((e.re + 0.25).abs() < 1e-3 && e.im.abs() < 1e-6);
    // the real part alone binds deeper
    assert!(poschl_teller_ground_energy(1.0) < -0.38);
    assert!(report.eigenvalues[1].re > -1e-2);
    let norm = ermakov_susy::spectral::integrate_real(|x| state.value(x).norm_sqr(), &grid).unwrap();
    assert!((norm.value.re - 1.0).abs() < 1e-8);
}

#[test]
fn missing_state_matches_closed_form() {
    let f = HyperbolicFamily::new(1.0, 0.3).unwrap();
    let grid = Grid::symmetric(40.0, 4001).unwrap();
    let c = f.construct(Domain::symmetric(40.0).unwrap()).unwrap();
    let m = c.missing_state(&grid).unwrap();
    assert!(m.is_normalizable());
    assert!((m.c_eps().re - f.c_epsilon()).abs() < 1e-10);
    let closed = f.missing_state_closed();
    for x in [-5.0, -0.2, 0.0, 1.1, 6.0] {
        assert!((m.density(x) - closed.value(x).norm_sqr()).abs() < 1e-10);
        assert!((m.density(x) - f.missing_density_closed(x)).abs() < 1e-10);
    }
}

#[test]
fn milne_count_of_hyperbolic_family() {
    let grid = Grid::symmetric(40.0, 4001).unwrap();
    // ∫ dx / (cosh x + cos φ) = 2φ / sin φ with cos φ = θ, sin φ = 2λ, so N = φ/π
    for lambda in [0.5f64, 0.2, 0.05] {
        let want = (1.0 - 4.0 * lambda * lambda).sqrt().acos() / PI;
        let f = HyperbolicFamily::new(1.0, lambda).unwrap();
        let a = f.alpha(Domain::symmetric(40.0).unwrap()).unwrap();
        let n = milne_count(&a, lambda, &grid).unwrap();
        assert!((n.value - want).abs() < 1e-10, "λ = {lambda}: {}", n.value);
    }
}
