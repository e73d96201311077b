//! Named identity checks, singly or as the full matrix.

use std::path::Path;

use idcalc::factorization::{
    verify_cor1a, verify_cor1b, verify_corollary5, verify_lemma1c, verify_lemma1d, verify_lemma1e, verify_prop1,
    verify_prop2_quadrature, verify_round_trip,
};
use idcalc::levyarea::{verify_levy_area, AreaParams};
use idcalc::simulate::{cf_distance_test, ecf, sample_integral, KernelIntegralSpec};
use idcalc::{
    i_map, i_of_j_beta, j_beta, Beta, DensitySegment, IdMeasure, LogMomentGate, RadialComponent, SpectralMeasure,
    VerificationReport, Vector,
};

use crate::{load_measure, CliResult, Failure, Identity, McArgs, VerifyArgs};

const BETAS: [f64; 3] = [0.5, 1.0, 2.0];
const AREA_TIMES: [f64; 3] = [0.5, 1.0, 2.0];

fn beta(b: f64) -> CliResult<Beta<f64>> {
    Ok(Beta::new(b)?)
}

/// Samples the random integral described by `spec` for the law `m` and
/// tests the empirical characteristic function against `target`.
pub fn monte_carlo(
    m: &IdMeasure<f64>,
    spec: &KernelIntegralSpec,
    target: &IdMeasure<f64>,
    mc: &McArgs,
    grid: &[Vec<f64>],
    dump: Option<&Path>,
) -> CliResult<VerificationReport> {
    let t = m
        .triplet()
        .ok_or_else(|| Failure::Input(format!("{}: sampling needs a triplet spec", m.label())))?;
    let samples = sample_integral(t, spec, &mc.path_config(), mc.n, mc.seed)?;
    if let Some(path) = dump {
        samples.write_csv(std::fs::File::create(path)?)?;
    }
    let est = ecf(&samples, grid)?;
    let test = cf_distance_test(&est, |y| target.exponent(y))?;
    let beta = match spec.target {
        idcalc::simulate::IntegralTarget::JBeta { beta }
        | idcalc::simulate::IntegralTarget::IOfJBeta { beta }
        | idcalc::simulate::IntegralTarget::Cor1a { beta } => Some(beta),
        _ => None,
    };
    let mut report = test.into_report(&est, "monte-carlo", beta, m.label());
    report.note(format!("seed = {}, step = {}, eps = {}", mc.seed, mc.step, mc.eps));
    Ok(report)
}

/// Quadrature pair and Monte Carlo leg as two reports.
fn prop2(m: &IdMeasure<f64>, b: f64, mc: &McArgs) -> CliResult<Vec<VerificationReport>> {
    let bb = beta(b)?;
    let quad = verify_prop2_quadrature(m, bb, LogMomentGate::Check)?;
    let target = i_of_j_beta(m, bb, LogMomentGate::Check)?;
    let grid = idcalc::grid::identity_grid(m.dim());
    let mut sampled = monte_carlo(m, &KernelIntegralSpec::i_of_j_beta(bb, mc.s_max), &target, mc, &grid, None)?;
    sampled.identity = "prop2-monte-carlo".into();
    Ok(vec![quad, sampled])
}

/// `β = 1`: the clocked sampler against `I(J¹(ν))`, plus the quadrature pair.
fn cor3(m: &IdMeasure<f64>, mc: &McArgs) -> CliResult<Vec<VerificationReport>> {
    let one = beta(1.0)?;
    let mut quad = verify_prop2_quadrature(m, one, LogMomentGate::Check)?;
    quad.identity = "cor3".into();
    let nested = i_map(&j_beta(m, one)?, LogMomentGate::Check)?;
    let grid = idcalc::grid::identity_grid(m.dim());
    let mut sampled = monte_carlo(m, &KernelIntegralSpec::i_of_j_beta(one, mc.s_max), &nested, mc, &grid, None)?;
    sampled.identity = "cor3-monte-carlo".into();
    Ok(vec![quad, sampled])
}

fn cor5(m: &IdMeasure<f64>, b: f64) -> CliResult<VerificationReport> {
    let t = m
        .triplet()
        .ok_or_else(|| Failure::Input(format!("{}: cor5 needs a triplet spec", m.label())))?;
    let mut r = verify_corollary5(&t.spectral, beta(b)?)?;
    r.subject = m.label().to_string();
    Ok(r)
}

pub fn single(identity: Identity, a: &VerifyArgs) -> CliResult<Vec<VerificationReport>> {
    if identity == Identity::Levyarea {
        return Ok(vec![verify_levy_area(AreaParams::new(a.u)?)?]);
    }
    let path = a
        .measure
        .as_ref()
        .ok_or_else(|| Failure::Input(format!("--measure is required for {identity:?}")))?;
    let m = load_measure(path)?;
    let b = beta(a.beta)?;
    match identity {
        Identity::Prop2 => return prop2(&m, a.beta, &a.mc),
        Identity::Cor3 => return cor3(&m, &a.mc),
        _ => {}
    }
    let report = match identity {
        Identity::Lemma1c => verify_lemma1c(&m, b, beta(a.beta2)?)?,
        Identity::Lemma1d => {
            let nu = match &a.measure2 {
                Some(p) => load_measure(p)?,
                None => m.clone(),
            };
            verify_lemma1d(&m, &nu, a.power, b)?
        }
        Identity::Lemma1e => verify_lemma1e(&m, b)?,
        Identity::Prop1 => verify_prop1(&m, b)?,
        Identity::Cor1a => verify_cor1a(&m, b)?,
        Identity::Cor1b => verify_cor1b(&m, b)?,
        Identity::Cor5 => cor5(&m, a.beta)?,
        Identity::Roundtrip => verify_round_trip(&m, b)?,
        Identity::Levyarea | Identity::Prop2 | Identity::Cor3 => unreachable!(),
    };
    Ok(vec![report])
}

fn seed_families() -> CliResult<Vec<IdMeasure<f64>>> {
    Ok(vec![
        IdMeasure::gaussian(1.0)?,
        IdMeasure::shift(Vector::scalar(1.0))?,
        IdMeasure::poisson(1.0, 2.0)?,
        IdMeasure::gamma(1.0, 1.0)?,
    ])
}

fn spectral_examples() -> CliResult<Vec<(&'static str, SpectralMeasure<f64>)>> {
    let ray = || RadialComponent::new(Vector(vec![1.0]));
    Ok(vec![
        ("atom", SpectralMeasure::new(vec![ray()?.with_atom(1.5, 1.0)])),
        (
            "uniform",
            SpectralMeasure::new(vec![ray()?.with_density(DensitySegment::power(0.0, 2.0, 1.0, 0.0))]),
        ),
    ])
}

/// Every identity over the seed families and `β ∈ {0.5, 1, 2}`.
pub fn all(mc: &McArgs) -> CliResult<Vec<VerificationReport>> {
    let seeds = seed_families()?;
    let partner = IdMeasure::gamma(2.0, 3.0)?;
    let mut out = Vec::new();
    for s in &seeds {
        for (i, &b) in BETAS.iter().enumerate() {
            let bb = beta(b)?;
            let other = beta(BETAS[(i + 1) % BETAS.len()])?;
            out.push(verify_lemma1c(s, bb, other)?);
            out.push(verify_lemma1d(s, &partner, 0.5, bb)?);
            out.push(verify_lemma1e(s, bb)?);
            out.push(verify_prop1(s, bb)?);
            out.push(verify_cor1a(s, bb)?);
            out.push(verify_cor1b(s, bb)?);
            out.push(verify_round_trip(s, bb)?);
            out.extend(prop2(s, b, mc)?);
        }
    }
    for (name, g) in spectral_examples()? {
        for b in BETAS {
            let mut r = verify_corollary5(&g, beta(b)?)?;
            r.subject = name.into();
            out.push(r);
        }
    }
    for s in [IdMeasure::gamma(1.0, 1.0)?, IdMeasure::poisson(1.0, 2.0)?] {
        out.extend(cor3(&s, mc)?);
    }
    for u in AREA_TIMES {
        out.push(verify_levy_area(AreaParams::new(u)?)?);
    }
    Ok(out)
}
