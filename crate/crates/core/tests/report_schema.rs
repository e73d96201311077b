//! Every verifier's JSON report conforms to the published schema.

use idcalc::factorization::{
    verify_cor1a, verify_cor1b, verify_corollary5, verify_lemma1c, verify_lemma1d, verify_lemma1e, verify_prop1,
    verify_prop2_quadrature, verify_round_trip,
};
use idcalc::grid::identity_grid;
use idcalc::levyarea::{verify_levy_area, AreaParams};
use idcalc::simulate::{cf_distance_test, ecf, sample_integral, KernelIntegralSpec, PathConfig};
use idcalc::{j_beta, Beta, IdMeasure, LogMomentGate, RadialComponent, SpectralMeasure, VerificationReport, Vector};
use serde_json::Value;

fn schema() -> Value {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../schemas/verification_report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn reports() -> Vec<VerificationReport> {
    let b = Beta::new(1.0).unwrap();
    let g = IdMeasure::gamma(1.0, 1.0).unwrap();
    let p = IdMeasure::poisson(1.0, 2.0).unwrap();
    let atom = SpectralMeasure::new(vec![RadialComponent::new(Vector(vec![1.0])).unwrap().with_atom(1.5, 1.0)]);
    let mut out = vec![
        verify_prop1(&g, b).unwrap(),
        verify_lemma1c(&g, b, Beta::new(2.0).unwrap()).unwrap(),
        verify_lemma1d(&g, &p, 0.5, b).unwrap(),
        verify_lemma1e(&p, b).unwrap(),
        verify_cor1a(&g, b).unwrap(),
        verify_cor1b(&g, b).unwrap(),
        verify_round_trip(&p, b).unwrap(),
        verify_prop2_quadrature(&g, b, LogMomentGate::Check).unwrap(),
        verify_corollary5(&atom, b).unwrap(),
        verify_levy_area(AreaParams::new(1.0).unwrap()).unwrap(),
    ];
    let s = sample_integral(g.triplet().unwrap(), &KernelIntegralSpec::j_beta(b), &PathConfig::default(), 2000, 1)
        .unwrap();
    let est = ecf(&s, &identity_grid(1)).unwrap();
    let target = j_beta(&g, b).unwrap();
    out.push(
        cf_distance_test(&est, |y| target.exponent(y))
            .unwrap()
            .into_report(&est, "monte-carlo", Some(1.0), g.label()),
    );
    out
}

#[test]
fn reports_validate_against_schema() {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    for r in reports() {
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        let errors: Vec<String> = validator.iter_errors(&v).map(|e| e.to_string()).collect();
        assert!(errors.is_empty(), "{}: {errors:?}", r.identity);
    }
}

#[test]
fn schema_rejects_malformed_reports() {
    let validator = jsonschema::validator_for(&schema()).unwrap();
    let mut v: Value = serde_json::from_str(&reports()[0].to_json()).unwrap();
    assert!(validator.is_valid(&v));
    v["outcome"] = Value::from("maybe");
    assert!(!validator.is_valid(&v));
    let mut w: Value = serde_json::from_str(&reports()[0].to_json()).unwrap();
    w.as_object_mut().unwrap().remove("points");
    assert!(!validator.is_valid(&w));
}

#[test]
fn reports_round_trip_through_json() {
    for r in reports() {
        let back: VerificationReport = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(back.identity, r.identity);
        assert_eq!(back.pass, r.pass);
        assert_eq!(back.points.len(), r.points.len());
    }
}
