//! End-to-end acceptance run: one PASS/FAIL line per criterion, non-zero exit
//! status if any criterion fails.

use std::cell::RefCell;
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use ermakov_susy::darboux::darboux_potential;
use ermakov_susy::ermakov::lambda0_from_params;
use ermakov_susy::families::{
    pt_defect, FamilySpec, HyperbolicFamily, OscillatorFamily, PeriodicFamily, PeriodicVariant,
};
use ermakov_susy::function::Domain;
use ermakov_susy::spectral::{discretize, integrate_real, spectrum, Grid};
use ermakov_susy::suite::{conjugate_pair_defect, oscillator_gram_defect, probes, residual_checks, Tolerances};
use num_complex::Complex64;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: String) -> Outcome {
    Outcome { passed, detail }
}

fn fig_oscillator() -> OscillatorFamily {
    OscillatorFamily::new(PI / 4.0, PI.sqrt() / 2.0, 1.0).unwrap()
}

/// Lowest eigenvalue of the hyperbolic partner on `[−25, 25]` with `n` points.
fn hyperbolic_ground(lambda: f64, n: usize) -> Complex64 {
    let family = HyperbolicFamily::new(1.0, lambda).unwrap();
    let c = family.construct(Domain::symmetric(25.0).unwrap()).unwrap();
    let h = discretize(&c.potential, &Grid::symmetric(25.0, n).unwrap()).unwrap();
    spectrum(&h, 1).unwrap().eigenvalues[0]
}

const LAMBDAS: [f64; 3] = [0.2, 0.45, 0.5];

fn hyperbolic_bound_state() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for lambda in LAMBDAS {
        let start = Instant::now();
        let e = hyperbolic_ground(lambda, 1500);
        let elapsed = start.elapsed();
        ok &= (e.re + 0.25).abs() < 1e-3 && e.im.abs() < 1e-6 && elapsed < Duration::from_secs(60);
        parts.push(format!(
            "λ={lambda}: E={:.6}{:+.1e}i ({:.2?})",
            e.re, e.im, elapsed
        ));
    }
    outcome(ok, parts.join("; "))
}

fn oscillator_spectrum() -> Outcome {
    let start = Instant::now();
    let c = fig_oscillator().construct(Domain::symmetric(8.0).unwrap()).unwrap();
    let h = discretize(&c.potential, &Grid::symmetric(8.0, 1200).unwrap()).unwrap();
    let mut report = spectrum(&h, 5).unwrap();
    report.match_reference(&[-1.0, 1.0, 3.0, 5.0, 7.0], 2e-2);
    let elapsed = start.elapsed();
    let worst = report.matched_reference.iter().map(|m| m.delta).fold(0.0, f64::max);
    let ok = report.all_matched() && report.max_imag_low_m < 1e-5 && elapsed < Duration::from_secs(120);
    let low: Vec<String> = report.low().iter().map(|z| format!("{:.4}", z.re)).collect();
    outcome(
        ok,
        format!(
            "lowest [{}], max |Δ|={worst:.2e}, max |Im|={:.1e} ({elapsed:.2?})",
            low.join(", "),
            report.max_imag_low_m
        ),
    )
}

fn normalization_constant() -> Outcome {
    let family = HyperbolicFamily::new(1.0, 0.5).unwrap();
    let c = family.construct(Domain::symmetric(40.0).unwrap()).unwrap();
    let grid = Grid::symmetric(40.0, 4001).unwrap();
    let ce = family.c_epsilon();
    let norm = integrate_real(|x| ce * ce / c.alpha.square_jet(x).value().re, &grid)
        .unwrap()
        .value
        .re;
    let limit = HyperbolicFamily::new(1.0, 1e-7).unwrap().c_epsilon();
    let limit_err = (limit - 0.5f64.sqrt()).abs();
    outcome(
        (norm - 1.0).abs() < 1e-8 && limit_err < 1e-10,
        format!("∫|ψ_ε|² − 1 = {:.1e}, |c_ε(λ→0) − √(κ/2)| = {limit_err:.1e}", norm - 1.0),
    )
}

fn family_strategy() -> impl Strategy<Value = FamilySpec> {
    // λ/k below ~0.05 pushes min α² towards 1e-3 and the absolute residuals
    // to the rounding floor of 1e-7, so the ratio is sampled instead of λ
    let periodic = (0.5f64..2.0, 0.1f64..2.0, any::<bool>(), any::<bool>()).prop_map(|(k, t, neg, sin)| {
        let variant = if sin { PeriodicVariant::Sin } else { PeriodicVariant::Cos };
        let lambda = if neg { -t * k } else { t * k };
        FamilySpec::Periodic(PeriodicFamily::new(k, lambda, variant).unwrap())
    });
    let hyperbolic = (0.5f64..2.0, -1.0f64..=1.0)
        .prop_map(|(kappa, t)| FamilySpec::Hyperbolic(HyperbolicFamily::new(kappa, 0.5 * kappa * t).unwrap()));
    let oscillator = (0.2f64..1.5, -1.0f64..1.0, 0.3f64..2.0).prop_map(|(a, b, d)| {
        FamilySpec::Oscillator(OscillatorFamily::new(a, b, b * b / (4.0 * a) + d).unwrap())
    });
    prop_oneof![periodic, hyperbolic, oscillator]
}

fn probe_grid(spec: &FamilySpec) -> Grid {
    let half = match spec {
        FamilySpec::Periodic(f) => 4.0 * PI / f.k,
        FamilySpec::Hyperbolic(f) => 20.0 / f.kappa,
        FamilySpec::Oscillator(_) => 8.0,
    };
    Grid::symmetric(half, 2001).unwrap()
}

fn residual_suite() -> Outcome {
    let start = Instant::now();
    let tol = Tolerances::default();
    let worst = RefCell::new((0.0f64, String::new()));
    let mut runner = TestRunner::new(Config {
        cases: 30,
        failure_persistence: None,
        ..Config::default()
    });
    let result = runner.run(&family_strategy(), |spec| {
        let grid = probe_grid(&spec);
        let c = spec
            .construct(Domain::new(grid.x_min(), grid.x_max()).unwrap())
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        let points = probes(&grid, 1000);
        let checks = residual_checks(&spec, &c, &grid, &points, &tol)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
        for check in checks {
            let mut w = worst.borrow_mut();
            if check.value > w.0 {
                *w = (check.value, format!("{} ({})", check.name, spec.tag()));
            }
            prop_assert!(check.passed, "{} = {:e} for {:?}", check.name, check.value, spec);
        }
        Ok(())
    });
    let elapsed = start.elapsed();
    let (value, name) = worst.into_inner();
    match result {
        Ok(()) => outcome(
            elapsed < Duration::from_secs(10),
            format!("30 random families, worst residual {value:.1e} from {name} ({elapsed:.2?})"),
        ),
        Err(e) => outcome(false, format!("{e}")),
    }
}

fn gram_matrix() -> Outcome {
    let c = fig_oscillator().construct(Domain::symmetric(8.0).unwrap()).unwrap();
    let defect = oscillator_gram_defect(&c, &Grid::symmetric(8.0, 1601).unwrap(), 4).unwrap();
    outcome(defect < 1e-5, format!("‖G − I‖_max = {defect:.2e} over {{ε, 0, 1, 2, 3}}"))
}

fn pt_diagnostics() -> Outcome {
    let grid = Grid::symmetric(4.0 * PI, 2001).unwrap();
    let domain = Domain::symmetric(4.0 * PI).unwrap();
    let periodic = FamilySpec::Periodic(PeriodicFamily::new(1.0, 0.7, PeriodicVariant::Cos).unwrap());
    let hyperbolic = FamilySpec::Hyperbolic(HyperbolicFamily::new(1.0, 0.5).unwrap());
    let oscillator = FamilySpec::Oscillator(fig_oscillator());
    let points = probes(&grid, 1000);
    let mut defects = Vec::new();
    let mut conjugate = 0.0f64;
    for spec in [periodic, hyperbolic, oscillator] {
        let c = spec.construct(domain).unwrap();
        defects.push(pt_defect(&c.potential, &grid).unwrap());
        conjugate = conjugate.max(conjugate_pair_defect(&c, &points));
        // the conjugate branch rebuilt from scratch through the public chain
        let other = darboux_potential(&c.beta.conjugate_branch());
        conjugate = conjugate.max((other.value(0.3) - c.potential.value(0.3).conj()).norm());
    }
    let ok = defects[0] < 1e-10 && defects[1] < 1e-10 && defects[2] > 0.1 && conjugate < 1e-12;
    outcome(
        ok,
        format!(
            "periodic {:.1e}, hyperbolic {:.1e}, oscillator {:.3}; conjugate pair {conjugate:.1e}",
            defects[0], defects[1], defects[2]
        ),
    )
}

fn parameter_round_trip() -> Outcome {
    let l0 = lambda0_from_params(PI / 4.0, PI.sqrt() / 2.0, 1.0, Complex64::new(-0.5, 0.0)).unwrap();
    let err = (l0.sqrt() - (3.0 * PI).sqrt() / 8.0).abs();
    outcome(err < 1e-12, format!("λ = {:.16}, error {err:.1e}", l0.sqrt()))
}

fn grid_convergence() -> Outcome {
    let mut ok = true;
    let mut parts = Vec::new();
    for lambda in LAMBDAS {
        let coarse = (hyperbolic_ground(lambda, 1500) - Complex64::new(-0.25, 0.0)).norm();
        let fine = (hyperbolic_ground(lambda, 3000) - Complex64::new(-0.25, 0.0)).norm();
        let ratio = coarse / fine;
        ok &= (3.0..=5.0).contains(&ratio);
        parts.push(format!("λ={lambda}: {coarse:.2e}/{fine:.2e} = {ratio:.3}"));
    }
    outcome(ok, parts.join("; "))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 8] = [
        ("hyperbolic bound state", hyperbolic_bound_state),
        ("oscillator partner spectrum", oscillator_spectrum),
        ("missing-state normalization", normalization_constant),
        ("residual suite", residual_suite),
        ("bi-orthonormality", gram_matrix),
        ("PT diagnostics", pt_diagnostics),
        ("parameter round-trip", parameter_round_trip),
        ("grid convergence", grid_convergence),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        if !o.passed {
            failed += 1;
        }
        println!(
            "{} criterion {} ({name}): {}",
            if o.passed { "PASS" } else { "FAIL" },
            i + 1,
            o.detail
        );
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    }
}
