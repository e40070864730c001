use std::f64::consts::PI;
use std::sync::Arc;

use ermakov_susy::darboux::{darboux_potential, soft_non_hermiticity_ratio};
use ermakov_susy::ermakov::{build_alpha, j_invariant, lambda0_from_params};
use ermakov_susy::families::{
    osc_fundamental, pt_defect, Construction, FamilySpec, HyperbolicFamily, OscillatorFamily, PeriodicFamily,
    PeriodicVariant,
};
use ermakov_susy::function::{Domain, WaveFunction};
use ermakov_susy::jet::Jet;
use ermakov_susy::spectral::Grid;
use ermakov_susy::superpotential::{hydrodynamics, transformation_function, Branch};
use ermakov_susy::Error;
use num_complex::Complex64;
use proptest::prelude::*;

fn family() -> impl Strategy<Value = FamilySpec> {
    let periodic = (0.5f64..2.0, 0.2f64..2.0).prop_map(|(k, l)| {
        FamilySpec::Periodic(PeriodicFamily::new(k, l, PeriodicVariant::Cos).unwrap())
    });
    let hyperbolic =
        (0.5f64..2.0, 0.05f64..=1.0).prop_map(|(k, t)| FamilySpec::Hyperbolic(HyperbolicFamily::new(k, 0.5 * k * t).unwrap()));
    let oscillator = (0.2f64..1.5, -1.0f64..1.0, 0.3f64..2.0).prop_map(|(a, b, d)| {
        FamilySpec::Oscillator(OscillatorFamily::new(a, b, b * b / (4.0 * a) + d).unwrap())
    });
    prop_oneof![periodic, hyperbolic, oscillator]
}

fn build(spec: &FamilySpec, half: f64) -> Construction {
    spec.construct(Domain::symmetric(half).unwrap()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn conjugate_branch_gives_conjugate_potential(spec in family(), x in -4.0f64..4.0) {
        let c = build(&spec, 5.0);
        let other = darboux_potential(&c.beta.conjugate_branch());
        prop_assert!((other.value(x) - c.potential.value(x).conj()).norm() < 1e-12 * (1.0 + c.potential.value(x).norm()));
    }

    #[test]
    fn current_is_uniform(spec in family(), x in -4.0f64..4.0) {
        let c = build(&spec, 5.0);
        let h = hydrodynamics(&c.beta, x);
        prop_assert!((h.current + 2.0 * c.beta.lambda()).abs() < 1e-14 * (1.0 + c.beta.lambda().abs()));
        prop_assert!(h.rho > 0.0);
        prop_assert!((h.velocity * h.rho - h.current).abs() < 1e-14);
    }

    #[test]
    fn phase_origin_only_changes_a_constant(spec in family(), x0 in -3.0f64..3.0, x in -4.0f64..4.0) {
        let c = build(&spec, 5.0);
        let shifted = transformation_function(&c.alpha, c.beta.lambda(), x0).unwrap();
        let ratio_at = |y: f64| c.transformation.value(y) / shifted.value(y);
        let r = ratio_at(x);
        prop_assert!((r.norm() - 1.0).abs() < 1e-10);
        prop_assert!((r - ratio_at(0.5)).norm() < 1e-9);
    }

    #[test]
    fn j_invariant_is_conserved(spec in family(), p in -1.0f64..1.0, q in -1.0f64..1.0) {
        let c = build(&spec, 3.0);
        let pair = c.alpha.pair().clone();
        let (z, v) = (Arc::clone(pair.z()), Arc::clone(pair.v()));
        let u = move |x: f64| z.jet(x) * p + v.jet(x) * q;
        let scale = 1.0 + j_invariant(&u, &c.alpha, 0.0).norm();
        let j0 = j_invariant(&u, &c.alpha, 0.0);
        for x in [-2.5, -1.0, 0.7, 2.9] {
            prop_assert!((j_invariant(&u, &c.alpha, x) - j0).norm() < 1e-9 * scale);
        }
        // J vanishes on the transformation function itself
        let t = &c.transformation;
        prop_assert!(j_invariant(t, &c.alpha, 1.3).norm() < 1e-9 * (1.0 + c.alpha.lambda0()));
    }

    #[test]
    fn pt_symmetric_families(k in 0.5f64..2.0, l in 0.1f64..2.0, kappa in 0.5f64..2.0, t in 0.0f64..=1.0) {
        let grid = Grid::symmetric(6.0, 401).unwrap();
        let d = Domain::symmetric(6.0).unwrap();
        let periodic = PeriodicFamily::new(k, l, PeriodicVariant::Cos).unwrap().construct(d).unwrap();
        let hyperbolic = HyperbolicFamily::new(kappa, 0.5 * kappa * t).unwrap().construct(d).unwrap();
        prop_assert!(pt_defect(&periodic.potential, &grid).unwrap() < 1e-10);
        prop_assert!(pt_defect(&hyperbolic.potential, &grid).unwrap() < 1e-10);
    }

    #[test]
    fn mirrored_oscillator_is_pt_image(a in 0.2f64..1.5, b in 0.1f64..1.0, d in 0.3f64..2.0, x in -4.0f64..4.0) {
        let f = OscillatorFamily::new(a, b, b * b / (4.0 * a) + d).unwrap();
        let dom = Domain::symmetric(5.0).unwrap();
        let v = f.construct(dom).unwrap().potential;
        let m = f.mirrored().construct(dom).unwrap().potential;
        prop_assert!((m.value(x) - v.value(-x).conj()).norm() < 1e-10 * (1.0 + x * x));
    }
}

#[test]
fn oscillator_is_not_pt_symmetric() {
    let f = OscillatorFamily::new(PI / 4.0, PI.sqrt() / 2.0, 1.0).unwrap();
    let c = f.construct(Domain::symmetric(8.0).unwrap()).unwrap();
    assert!(pt_defect(&c.potential, &Grid::symmetric(8.0, 801).unwrap()).unwrap() > 0.1);
    assert!(matches!(
        pt_defect(&c.potential, &Grid::new(-8.0, 7.0, 801).unwrap()),
        Err(Error::AsymmetricDomain { .. })
    ));
}

#[test]
fn rescaled_unit_wronskian_parameters_are_a_gauge() {
    // α → sα, λ → s²λ leaves β and Ṽ unchanged; s² = √π/4 maps the unit-Wronskian
    // parameters (1, 1, 1) onto λ₀ = 3π/64.
    let s2 = PI.sqrt() / 4.0;
    let domain = Domain::symmetric(8.0).unwrap();
    let pair = osc_fundamental(-1.0, domain).unwrap();
    let alpha = build_alpha(pair, s2, s2, s2).unwrap();
    assert!((alpha.lambda0() - 3.0 * PI / 64.0).abs() < 1e-15);
    let lambda = alpha.lambda0().sqrt();
    assert!((lambda - (3.0 * PI).sqrt() / 8.0).abs() < 1e-15);
    let scaled = Construction::from_alpha(alpha, lambda, "oscillator").unwrap();
    let reference = OscillatorFamily::new(PI / 4.0, PI.sqrt() / 2.0, 1.0)
        .unwrap()
        .construct(domain)
        .unwrap();
    assert!((reference.beta.lambda() - 3f64.sqrt() / 2.0).abs() < 1e-15);
    for x in [-6.0, -1.5, 0.0, 0.4, 3.3, 7.5] {
        let (a, b) = (scaled.potential.value(x), reference.potential.value(x));
        assert!((a - b).norm() < 1e-12 * (1.0 + b.norm()), "x = {x}");
        assert!((scaled.beta.value(x) - reference.beta.value(x)).norm() < 1e-12 * (1.0 + x.abs()));
    }
    assert_eq!(
        lambda0_from_params(PI / 4.0, PI.sqrt() / 2.0, 1.0, Complex64::new(-0.5, 0.0)).unwrap(),
        lambda0_from_params(PI / 4.0, PI.sqrt() / 2.0, 1.0, Complex64::new(0.5, 0.0)).unwrap()
    );
}

#[test]
fn soft_non_hermiticity() {
    let f = OscillatorFamily::new(PI / 4.0, PI.sqrt() / 2.0, 1.0).unwrap();
    let c = f.construct(Domain::symmetric(8.0).unwrap()).unwrap();
    assert!(soft_non_hermiticity_ratio(&c.potential, 8.0) < 0.05);
    assert!(soft_non_hermiticity_ratio(&c.potential, -8.0) < 0.05);

    // Im Ṽ / Re Ṽ tends to 2λ/(κθ) for the hyperbolic family instead of vanishing
    let h = HyperbolicFamily::new(1.0, 0.3).unwrap();
    let hc = h.construct(Domain::symmetric(25.0).unwrap()).unwrap();
    let limit = 2.0 * 0.3 / h.theta();
    assert!((soft_non_hermiticity_ratio(&hc.potential, 20.0) - limit).abs() < 1e-6);
}

#[test]
fn branch_classification() {
    let excluded = OscillatorFamily { a: 0.0, b: 1.0, c: 1.0 };
    assert_eq!(FamilySpec::Oscillator(excluded).branch(), Branch::Excluded);
    assert!(matches!(
        FamilySpec::Oscillator(excluded).validate(),
        Err(Error::ExcludedBranch { .. })
    ));
    let conventional = FamilySpec::Hyperbolic(HyperbolicFamily::new(1.0, 0.0).unwrap());
    let c = conventional.construct(Domain::symmetric(10.0).unwrap()).unwrap();
    assert_eq!(c.branch, Branch::Conventional);
    assert!(c.potential.value(0.7).im == 0.0);
    assert!(matches!(HyperbolicFamily::new(1.0, 0.6), Err(Error::LambdaOutOfRange { .. })));
    assert!(matches!(
        OscillatorFamily::new(1.0, 2.0, 0.5),
        Err(Error::ZeroCrossingRisk { .. })
    ));
}

#[test]
fn jets_from_closures_are_wave_functions() {
    let w = |x: f64| Jet::real(&[x.sin(), x.cos()]);
    assert_eq!(w.value(0.0), Complex64::new(0.0, 0.0));
}
