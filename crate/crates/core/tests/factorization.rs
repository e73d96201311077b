//! Factorization `J^β(ρ) ∗ ρ = J^β(ν)` and the identity checks built on it.

use idcalc::factorization::{
    factor_rho, perturbed, verify_cor1a, verify_cor1b, verify_corollary5, verify_factor, verify_lemma1c,
    verify_lemma1d, verify_lemma1e, verify_prop1, verify_prop2_quadrature, verify_round_trip,
};
use idcalc::report::Outcome;
use idcalc::{Beta, IdMeasure, LogMomentGate, RadialComponent, SpectralMeasure, Vector};

fn beta(b: f64) -> Beta<f64> {
    Beta::new(b).unwrap()
}

fn seeds() -> Vec<IdMeasure<f64>> {
    vec![
        IdMeasure::gaussian(1.0).unwrap(),
        IdMeasure::shift(Vector::scalar(1.0)).unwrap(),
        IdMeasure::poisson(1.0, 2.0).unwrap(),
        IdMeasure::gamma(1.0, 1.0).unwrap(),
    ]
}

/// Composite Simpson on `[a, b]` with `n` (even) panels.
fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + k as f64 * h);
    }
    acc * h / 3.0
}

#[test]
fn gaussian_factor_has_quarter_variance() {
    let rho = factor_rho(&IdMeasure::gaussian(1.0).unwrap(), beta(1.0)).unwrap();
    assert!((rho.triplet().unwrap().cov.get(0, 0) - 0.25).abs() < 1e-15);
    for b in [0.5, 2.0] {
        let rho = factor_rho(&IdMeasure::gaussian(1.0).unwrap(), beta(b)).unwrap();
        let want = 0.5 * (2.0 * b) / (2.0 * b + 2.0);
        assert!((rho.triplet().unwrap().cov.get(0, 0) - want).abs() < 1e-15);
    }
}

#[test]
fn every_identity_passes_on_the_seed_families() {
    let partner = IdMeasure::gamma(2.0, 3.0).unwrap();
    for s in seeds() {
        for b in [0.5, 1.0, 2.0] {
            let bb = beta(b);
            let reports = [
                verify_prop1(&s, bb).unwrap(),
                verify_lemma1c(&s, bb, beta(3.0 - b)).unwrap(),
                verify_lemma1d(&s, &partner, 0.5, bb).unwrap(),
                verify_lemma1e(&s, bb).unwrap(),
                verify_cor1a(&s, bb).unwrap(),
                verify_cor1b(&s, bb).unwrap(),
                verify_round_trip(&s, bb).unwrap(),
                verify_prop2_quadrature(&s, bb, LogMomentGate::Check).unwrap(),
            ];
            for r in reports {
                assert!(r.pass, "{} {} β={b}: {:?}", r.identity, s.label(), r.notes);
                assert_eq!(r.outcome, Outcome::Pass);
                assert!(r.points.iter().all(|p| p.abs_diff <= r.tolerance));
            }
        }
    }
}

#[test]
fn lemma1e_on_poisson_atom() {
    let r = verify_lemma1e(&IdMeasure::poisson(1.0, 1.0).unwrap(), beta(0.5)).unwrap();
    assert!(r.pass);
    assert_eq!(r.beta, Some(0.5));
}

#[test]
fn perturbed_factor_is_rejected() {
    for s in seeds() {
        let rho = factor_rho(&s, beta(1.0)).unwrap();
        assert!(verify_factor(&s, &rho, beta(1.0)).unwrap().pass);
        let off = perturbed(&rho, 1e-3).unwrap();
        let r = verify_factor(&s, &off, beta(1.0)).unwrap();
        assert!(!r.pass, "{}", s.label());
        assert_eq!(r.outcome, Outcome::Fail);
    }
}

#[test]
fn spectral_identity_at_a_dyadic_set() {
    // G = 2·δ₁ on one ray, β = 1: M has density 2r on (0, 1].
    let g = SpectralMeasure::new(vec![RadialComponent::new(Vector(vec![1.0])).unwrap().with_atom(1.0, 2.0)]);
    let (r1, r2) = (0.25, 0.5);
    let m_mass = |a: f64, b: f64| b.min(1.0).powi(2) - a.min(1.0).powi(2);
    let m_a = m_mass(r1, r2);
    assert!((m_a - 0.1875).abs() < 1e-15);
    let inner = |t: f64| m_mass(r1 / t, r2 / t);
    let smeared = simpson(inner, r1, r2, 2000) + simpson(inner, r2, 1.0, 2000);
    let lhs = smeared + m_a;
    let rhs = simpson(|t| if t > r1 && t <= r2 { 2.0 } else { 0.0 }, 0.0, 1.0, 4000);
    assert!((rhs - 0.5).abs() < 1e-3);
    assert!((lhs - 0.5).abs() < 1e-9, "{lhs}");

    let report = verify_corollary5(&g, beta(1.0)).unwrap();
    assert!(report.pass, "{:?}", report.notes);
    let p = report
        .points
        .iter()
        .find(|p| p.y == vec![0.0, r1, r2])
        .expect("dyadic set (1/4, 1/2]");
    assert!((p.lhs[0] - lhs).abs() < 1e-9);
    assert!((p.rhs[0] - 0.5).abs() < 1e-9);
}

#[test]
fn spectral_identity_for_several_shapes() {
    let ray = || RadialComponent::new(Vector(vec![1.0])).unwrap();
    let shapes = [
        SpectralMeasure::new(vec![ray().with_atom(1.5, 1.0).with_atom(0.2, 3.0)]),
        SpectralMeasure::new(vec![ray().with_density(idcalc::DensitySegment::power(0.0, 2.0, 1.0, 0.0))]),
        SpectralMeasure::new(vec![ray().with_density(idcalc::DensitySegment::exp_over_r(1.0, 1.0))]),
    ];
    for g in &shapes {
        for b in [0.5, 1.0, 2.0] {
            let r = verify_corollary5(g, beta(b)).unwrap();
            assert!(r.pass, "β={b}: {:?}", r.points.iter().map(|p| p.abs_diff).fold(0.0, f64::max));
        }
    }
    let empty = verify_corollary5(&SpectralMeasure::<f64>::empty(), beta(1.0)).unwrap();
    assert!(empty.pass);
    assert!(!empty.notes.is_empty());
}

#[test]
fn beta_one_reports_carry_class_label() {
    let r = verify_cor1b(&IdMeasure::gamma(1.0, 1.0).unwrap(), beta(1.0)).unwrap();
    assert_eq!(r.class.as_deref(), Some("s-selfdecomposable"));
}
