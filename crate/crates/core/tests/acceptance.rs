//! The ten acceptance criteria, each at its stated tolerance. Prints one
//! `PASS`/`FAIL` line per criterion and fails if any criterion fails.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use idcalc::factorization::{
    perturbed, verify_cor1a, verify_corollary5, verify_factor, verify_lemma1e, verify_prop1,
    verify_prop2_quadrature, verify_round_trip, factor_rho,
};
use idcalc::grid::identity_grid;
use idcalc::levyarea::{verify_levy_area, AreaParams};
use idcalc::simulate::{cf_distance_test, ecf, sample_integral, KernelIntegralSpec, PathConfig, Z_MAX};
use idcalc::{
    corollary1a_kernel, i_map, i_of_j_beta, j_beta, Beta, DensitySegment, IdMeasure, LogMoment, LogMomentGate,
    RadialComponent, SpectralMeasure, TailBound, Vector,
};
use num_complex::Complex;

type Outcome = std::result::Result<String, String>;

const BETAS: [f64; 3] = [0.5, 1.0, 2.0];
const MC_N: usize = 100_000;
const MC_SEED: u64 = 20_240_601;

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

/// Standard Gaussian known only through its exponent, so every mapping
/// of it runs through quadrature.
fn gaussian_evaluator() -> IdMeasure<f64> {
    IdMeasure::from_exponent(1, "gauss-evaluator", |y: &[f64]| Ok(Complex::new(-0.5 * y[0] * y[0], 0.0)))
        .with_log_moment_known(true)
}

/// `−2Φ(y)/y²` over the grid; the variance of a centered Gaussian law.
fn max_variance_error(m: &IdMeasure<f64>, want: f64) -> Result<f64, String> {
    let mut worst = 0.0_f64;
    for y in identity_grid::<f64>(1) {
        let z = m.exponent(&y).map_err(|e| e.to_string())?;
        let var = -2.0 * z.re / (y[0] * y[0]);
        worst = worst.max((var - want).abs()).max(z.im.abs());
    }
    Ok(worst)
}

fn check(cond: bool, detail: String) -> Outcome {
    if cond {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let g = gaussian_evaluator();
    let mut worst = 0.0_f64;
    for b in BETAS {
        worst = worst.max(max_variance_error(&j_beta(&g, beta(b)).unwrap(), b / (b + 2.0))?);
        worst = worst.max(max_variance_error(&i_of_j_beta(&g, beta(b), LogMomentGate::Check).unwrap(), b / (2.0 * (b + 2.0)))?);
        let closed = j_beta(&IdMeasure::gaussian(1.0).unwrap(), beta(b)).unwrap();
        worst = worst.max((closed.triplet().unwrap().cov.get(0, 0) - b / (b + 2.0)).abs());
    }
    worst = worst.max(max_variance_error(&i_map(&g, LogMomentGate::Check).unwrap(), 0.5)?);
    let secs = start.elapsed().as_secs_f64();
    check(
        worst < 1e-10 && secs < 1.0,
        format!("max variance-factor error {worst:.2e} (tol 1e-10), {secs:.2}s (limit 1s)"),
    )
}

fn run_matrix<F>(f: F) -> Result<(f64, Vec<String>), String>
where
    F: Fn(&IdMeasure<f64>, Beta<f64>) -> idcalc::Result<idcalc::VerificationReport>,
{
    let mut worst = 0.0_f64;
    let mut failed = Vec::new();
    for s in seeds() {
        for b in BETAS {
            let r = f(&s, beta(b)).map_err(|e| format!("{} beta={b}: {e}", s.label()))?;
            worst = worst.max(r.grid_max_abs);
            if !r.pass {
                failed.push(format!("{} beta={b} ({:.2e}; {:?})", s.label(), r.grid_max_abs, r.notes));
            }
        }
    }
    Ok((worst, failed))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let (worst, failed) = run_matrix(verify_lemma1e)?;
    let secs = start.elapsed().as_secs_f64();
    check(
        failed.is_empty() && worst < 1e-8 && secs < 30.0,
        format!("max discrepancy {worst:.2e} (tol 1e-8), {secs:.1}s (limit 30s), failures {failed:?}"),
    )
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let (worst, failed) = run_matrix(verify_prop1)?;
    let mut weakest_break = f64::INFINITY;
    for s in seeds() {
        for b in BETAS {
            let rho = factor_rho(&s, beta(b)).unwrap();
            let bad = perturbed(&rho, 0.01).unwrap();
            let r = verify_factor(&s, &bad, beta(b)).unwrap();
            weakest_break = weakest_break.min(r.grid_max_abs);
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        failed.is_empty() && worst < 1e-8 && weakest_break >= 1e-3 && secs < 30.0,
        format!(
            "max discrepancy {worst:.2e} (tol 1e-8), smallest perturbation break {weakest_break:.2e} (need >= 1e-3), {secs:.1}s, failures {failed:?}"
        ),
    )
}

fn criterion_4() -> Outcome {
    let (worst, failed) = run_matrix(verify_cor1a)?;
    let g = gaussian_evaluator();
    let mut factor_err = 0.0_f64;
    for b in BETAS {
        let k = corollary1a_kernel(&g, beta(b)).unwrap();
        factor_err = factor_err.max(max_variance_error(&k, b * b / ((b + 2.0) * (b + 1.0)))?);
    }
    check(
        failed.is_empty() && worst < 1e-8 && factor_err < 1e-10,
        format!("kernel vs composition {worst:.2e} (tol 1e-8), Gaussian factor error {factor_err:.2e} (tol 1e-10), failures {failed:?}"),
    )
}

/// Monte Carlo leg: `(max z, full-rule verdict)`.
fn monte_carlo(seed_law: &IdMeasure<f64>, spec: &KernelIntegralSpec, target: &IdMeasure<f64>) -> Result<(f64, bool), String> {
    let cfg = PathConfig::default();
    let samples = sample_integral(seed_law.triplet().unwrap(), spec, &cfg, MC_N, MC_SEED).map_err(|e| e.to_string())?;
    let est = ecf(&samples, &identity_grid::<f64>(1)).map_err(|e| e.to_string())?;
    let t = cf_distance_test(&est, |y| target.exponent(y)).map_err(|e| e.to_string())?;
    Ok((t.max_z, t.pass()))
}

fn criterion_5() -> Outcome {
    let mut lines = Vec::new();
    let mut ok = true;
    for s in seeds() {
        let start = Instant::now();
        let mut quad_worst = 0.0_f64;
        let mut z_worst = 0.0_f64;
        let mut full = true;
        for b in BETAS {
            let r = verify_prop2_quadrature(&s, beta(b), LogMomentGate::Check).map_err(|e| e.to_string())?;
            quad_worst = quad_worst.max(r.grid_max_abs);
            ok &= r.pass;
            let target = i_of_j_beta(&s, beta(b), LogMomentGate::Check).unwrap();
            let (z, pass) = monte_carlo(&s, &KernelIntegralSpec::i_of_j_beta(beta(b), 20.0), &target)?;
            z_worst = z_worst.max(z);
            full &= pass;
        }
        let secs = start.elapsed().as_secs_f64();
        ok &= quad_worst < 1e-8 && z_worst < Z_MAX && secs < 120.0;
        lines.push(format!(
            "{}: quadrature {quad_worst:.2e}, max z {z_worst:.2}, full rule {}, {secs:.1}s",
            s.label(),
            if full { "pass" } else { "fail" }
        ));
    }
    check(ok, lines.join("; "))
}

fn criterion_6() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    let clock = KernelIntegralSpec::i_of_j_beta(beta(1.0), 20.0);
    for s in [IdMeasure::gamma(1.0, 1.0).unwrap(), IdMeasure::poisson(1.0, 2.0).unwrap()] {
        let target = i_map(&j_beta(&s, beta(1.0)).unwrap(), LogMomentGate::Check).unwrap();
        let (z, full) = monte_carlo(&s, &clock, &target)?;
        ok &= z < Z_MAX;
        lines.push(format!("{}: max z {z:.2}, full rule {}", s.label(), if full { "pass" } else { "fail" }));
    }
    let secs = start.elapsed().as_secs_f64();
    ok &= secs < 120.0;
    lines.push(format!("{secs:.1}s"));
    check(ok, lines.join("; "))
}

fn ray() -> RadialComponent<f64> {
    RadialComponent::new(Vector(vec![1.0])).unwrap()
}

fn criterion_7() -> Outcome {
    let atom = SpectralMeasure::new(vec![ray().with_atom(1.5, 1.0)]);
    let uniform = SpectralMeasure::new(vec![ray().with_density(DensitySegment::power(0.0, 2.0, 1.0, 0.0))]);
    let mut worst = 0.0_f64;
    let mut ok = true;
    for (name, g) in [("atom", &atom), ("uniform", &uniform)] {
        for b in [1.0, 2.0] {
            let r = verify_corollary5(g, beta(b)).map_err(|e| format!("{name} beta={b}: {e}"))?;
            worst = worst.max(r.grid_max_abs);
            ok &= r.pass && !r.points.is_empty();
        }
    }
    check(ok && worst < 1e-6, format!("max mass discrepancy {worst:.2e} on the dyadic mesh (tol 1e-6)"))
}

fn criterion_8() -> Outcome {
    let finite = vec![
        ("poisson atom", SpectralMeasure::new(vec![ray().with_atom(2.0, 1.0)])),
        ("gamma", IdMeasure::<f64>::gamma(1.0, 1.0).unwrap().triplet().unwrap().spectral.clone()),
        ("uniform", SpectralMeasure::new(vec![ray().with_density(DensitySegment::power(0.0, 3.0, 1.0, 0.0))])),
        (
            "pareto tail",
            SpectralMeasure::new(vec![ray().with_density(DensitySegment::power(1.0, f64::INFINITY, 1.0, -2.5))]),
        ),
    ];
    let e = std::f64::consts::E;
    let divergent = SpectralMeasure::new(vec![ray().with_density(
        DensitySegment::custom(e, f64::INFINITY, "1/(r log^2 r)", |r: f64| 1.0 / (r * r.ln().powi(2)))
            .with_tail(TailBound::LogDivergent),
    )]);
    let mut lines = Vec::new();
    let mut ok = true;
    for (name, m) in &finite {
        let base = m.log_moment();
        ok &= matches!(base, LogMoment::Finite(_));
        for b in BETAS {
            let (mb, _) = m.smeared(b).map_err(|e| e.to_string())?;
            let img = mb.log_moment();
            if !matches!(img, LogMoment::Finite(_)) {
                ok = false;
                lines.push(format!("{name} beta={b}: image {img:?}"));
            }
        }
    }
    let base = divergent.log_moment();
    ok &= matches!(base, LogMoment::Infinite | LogMoment::InconclusiveDivergent);
    lines.push(format!("divergent M: {base:?}"));
    for b in BETAS {
        let (mb, _) = divergent.smeared(b).map_err(|e| e.to_string())?;
        let img = mb.log_moment();
        ok &= matches!(img, LogMoment::Infinite | LogMoment::InconclusiveDivergent);
        lines.push(format!("divergent M^(beta={b}): {img:?}"));
    }
    check(ok, format!("finite examples preserved; {}", lines.join(", ")))
}

fn criterion_9() -> Outcome {
    let start = Instant::now();
    let mut worst = 0.0_f64;
    let mut ok = true;
    for u in [0.5, 1.0, 2.0] {
        let p = AreaParams::new(u).unwrap();
        let r = verify_levy_area(p).map_err(|e| e.to_string())?;
        let area_pts = r.points.iter().take(11);
        for pt in area_pts {
            worst = worst.max(pt.abs_diff);
        }
        let chi0 = (idcalc::levyarea::sinh_factor_exponent(&p, 0.0) + idcalc::levyarea::nu_exponent(&p, 0.0)).exp();
        ok &= r.pass && chi0 == Complex::new(1.0, 0.0);
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        ok && worst < 1e-8 && secs < 5.0,
        format!("max |I(nu) - log(tu/sinh tu)| {worst:.2e} (tol 1e-8), chi(0) = 1 exactly, {secs:.2}s (limit 5s)"),
    )
}

fn criterion_10() -> Outcome {
    let (worst, failed) = run_matrix(verify_round_trip)?;
    check(
        failed.is_empty() && worst < 1e-7,
        format!("max round-trip discrepancy {worst:.2e} (tol 1e-7), failures {failed:?}"),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("Gaussian closed-form matrix", criterion_1),
        ("doubled-index composition identity", criterion_2),
        ("factorization and uniqueness sensitivity", criterion_3),
        ("kernel form of the composition", criterion_4),
        ("three-layer representation check", criterion_5),
        ("class L^f clocked sampler", criterion_6),
        ("spectral identity on the dyadic mesh", criterion_7),
        ("log-moment preservation", criterion_8),
        ("Levy area example", criterion_9),
        ("inverse round trip", criterion_10),
    ];
    let mut failures = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS [{secs:6.1}s] {name}: {detail}", i + 1),
            Err(detail) => {
                failures += 1;
                println!("criterion {:>2} FAIL [{secs:6.1}s] {name}: {detail}", i + 1);
            }
        }
    }
    assert_eq!(failures, 0, "{failures} acceptance criteria failed");
}
