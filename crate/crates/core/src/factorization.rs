//! Factorization identities for the classes `U_β = J^β(ID)`.
//!
//! Every check starts from an arbitrary ID seed and compares two
//! independently assembled exponents on the identity grid. Class
//! membership of an arbitrary law is never decided here.

use num_complex::Complex;

use crate::error::Result;
use crate::grid::identity_grid;
use crate::mappings::{corollary1a_kernel, i_map, i_of_j_beta, j_beta, j_beta_inverse, Beta, LogMomentGate};
use crate::measure::{conv_power, convolve, IdMeasure};
use crate::report::VerificationReport;
use crate::scalar::Scalar;
use crate::spectral::SpectralMeasure;

/// Exponent-level tolerance for the factorization identities.
pub const IDENTITY_TOL: f64 = 1e-8;
/// Tolerance for the homomorphism property of `J^β`.
pub const HOMOMORPHISM_TOL: f64 = 1e-10;
/// Round trip through the finite-difference inverse.
pub const ROUND_TRIP_TOL: f64 = 1e-7;
/// Measure-level tolerance for the spectral identity.
pub const SPECTRAL_TOL: f64 = 1e-6;

fn grid<T: Scalar>(mu: &IdMeasure<T>) -> Vec<Vec<T>> {
    identity_grid(mu.dim())
}

fn f64_beta<T: Scalar>(beta: Beta<T>) -> Option<f64> {
    Some(beta.value().as_f64())
}

/// `ρ = J^{2β}(ν^{∗1/2})`, the unique `ρ` with `J^β(ρ) ∗ ρ = J^β(ν)`.
pub fn factor_rho<T: Scalar>(nu: &IdMeasure<T>, beta: Beta<T>) -> Result<IdMeasure<T>> {
    let half = conv_power(nu, T::of(0.5))?;
    j_beta(&half, beta.doubled())
}

/// Checks `J^β(ρ) ∗ ρ = J^β(ν)` for a caller-supplied candidate `ρ`.
pub fn verify_factor<T: Scalar>(nu: &IdMeasure<T>, rho: &IdMeasure<T>, beta: Beta<T>) -> Result<VerificationReport> {
    let left = convolve(&j_beta(rho, beta)?, rho)?;
    let right = j_beta(nu, beta)?;
    Ok(VerificationReport::compare(
        "prop1",
        f64_beta(beta),
        nu.label(),
        IDENTITY_TOL,
        &grid(nu),
        |y| left.exponent(y),
        |y| right.exponent(y),
    ))
}

/// Both sides of the factorization with `ρ = factor_rho(ν, β)`.
pub fn verify_prop1<T: Scalar>(nu: &IdMeasure<T>, beta: Beta<T>) -> Result<VerificationReport> {
    let rho = factor_rho(nu, beta)?;
    verify_factor(nu, &rho, beta)
}

/// `J^{2β}(J^β(ρ) ∗ ρ) = J^β(ρ^{∗2})`
pub fn verify_lemma1e<T: Scalar>(rho: &IdMeasure<T>, beta: Beta<T>) -> Result<VerificationReport> {
    let inner = convolve(&j_beta(rho, beta)?, rho)?;
    let left = j_beta(&inner, beta.doubled())?;
    let right = j_beta(&conv_power(rho, T::of(2.0))?, beta)?;
    Ok(VerificationReport::compare(
        "lemma1e",
        f64_beta(beta),
        rho.label(),
        IDENTITY_TOL,
        &grid(rho),
        |y| left.exponent(y),
        |y| right.exponent(y),
    ))
}

/// `J^{β₁}(J^{β₂}(μ)) = J^{β₂}(J^{β₁}(μ))`
pub fn verify_lemma1c<T: Scalar>(mu: &IdMeasure<T>, b1: Beta<T>, b2: Beta<T>) -> Result<VerificationReport> {
    let left = j_beta(&j_beta(mu, b2)?, b1)?;
    let right = j_beta(&j_beta(mu, b1)?, b2)?;
    let mut r = VerificationReport::compare(
        "lemma1c",
        f64_beta(b1),
        mu.label(),
        IDENTITY_TOL,
        &grid(mu),
        |y| left.exponent(y),
        |y| right.exponent(y),
    );
    r.note(format!("beta2 = {}", b2.value()));
    Ok(r)
}

/// `J^β(μ ∗ ν) = J^β(μ) ∗ J^β(ν)` and `J^β(μ)^{∗c} = J^β(μ^{∗c})`.
pub fn verify_lemma1d<T: Scalar>(
    mu: &IdMeasure<T>,
    nu: &IdMeasure<T>,
    c: T,
    beta: Beta<T>,
) -> Result<VerificationReport> {
    let hom_l = j_beta(&convolve(mu, nu)?, beta)?;
    let hom_r = convolve(&j_beta(mu, beta)?, &j_beta(nu, beta)?)?;
    let mut report = VerificationReport::compare(
        "lemma1d",
        f64_beta(beta),
        &format!("{} * {}", mu.label(), nu.label()),
        HOMOMORPHISM_TOL,
        &grid(mu),
        |y| hom_l.exponent(y),
        |y| hom_r.exponent(y),
    );
    let pow_l = conv_power(&j_beta(mu, beta)?, c)?;
    let pow_r = j_beta(&conv_power(mu, c)?, beta)?;
    report.absorb(VerificationReport::compare(
        "lemma1d-power",
        f64_beta(beta),
        mu.label(),
        HOMOMORPHISM_TOL,
        &grid(mu),
        |y| pow_l.exponent(y),
        |y| pow_r.exponent(y),
    ));
    Ok(report)
}

/// Kernel form `(1−√t)^{1/β}` against the composition `J^{2β}∘J^β`.
pub fn verify_cor1a<T: Scalar>(mu: &IdMeasure<T>, beta: Beta<T>) -> Result<VerificationReport> {
    let kernel = corollary1a_kernel(mu, beta)?;
    let composed = j_beta(&j_beta(mu, beta)?, beta.doubled())?;
    Ok(VerificationReport::compare(
        "cor1a",
        f64_beta(beta),
        mu.label(),
        IDENTITY_TOL,
        &grid(mu),
        |y| kernel.exponent(y),
        |y| composed.exponent(y),
    ))
}

/// For `ρ = J^{2β}(seed)`, `μ = J^β(ρ) ∗ ρ` lies in `U_β`: recovering
/// `ν′ = (J^β)^{-1}(μ)` and mapping it forward reproduces `μ`, and `ν′`
/// equals `seed^{∗2}`.
pub fn verify_cor1b<T: Scalar>(seed: &IdMeasure<T>, beta: Beta<T>) -> Result<VerificationReport> {
    let rho = j_beta(seed, beta.doubled())?;
    let mu = convolve(&j_beta(&rho, beta)?, &rho)?;
    let recovered = j_beta_inverse(&mu, beta)?;
    let forward = j_beta(&recovered, beta)?;
    let mut report = VerificationReport::compare(
        "cor1b",
        f64_beta(beta),
        seed.label(),
        ROUND_TRIP_TOL,
        &grid(seed),
        |y| forward.exponent(y),
        |y| mu.exponent(y),
    );
    let squared = conv_power(seed, T::of(2.0))?;
    report.absorb(VerificationReport::compare(
        "cor1b-driver",
        f64_beta(beta),
        seed.label(),
        ROUND_TRIP_TOL,
        &grid(seed),
        |y| recovered.exponent(y),
        |y| squared.exponent(y),
    ));
    report.tolerance = ROUND_TRIP_TOL;
    Ok(report)
}

/// `(J^β)^{-1}(J^β(μ)) = μ` on the grid.
pub fn verify_round_trip<T: Scalar>(mu: &IdMeasure<T>, beta: Beta<T>) -> Result<VerificationReport> {
    let back = j_beta_inverse(&j_beta(mu, beta)?, beta)?;
    Ok(VerificationReport::compare(
        "roundtrip",
        f64_beta(beta),
        mu.label(),
        ROUND_TRIP_TOL,
        &grid(mu),
        |y| back.exponent(y),
        |y| mu.exponent(y),
    ))
}

/// Quadrature half of the `I∘J^β` representation: the nested route
/// `I(J^β(μ))` against the clocked single integral.
pub fn verify_prop2_quadrature<T: Scalar>(
    mu: &IdMeasure<T>,
    beta: Beta<T>,
    gate: LogMomentGate,
) -> Result<VerificationReport> {
    let nested = i_map(&j_beta(mu, beta)?, gate)?;
    let clocked = i_of_j_beta(mu, beta, gate)?;
    Ok(VerificationReport::compare(
        "prop2",
        f64_beta(beta),
        mu.label(),
        IDENTITY_TOL,
        &grid(mu),
        |y| nested.exponent(y),
        |y| clocked.exponent(y),
    ))
}

/// Dyadic radial test sets `(2^{−k}, 2^{−k+1}]`, `k = −3..=6`.
pub fn dyadic_mesh<T: Scalar>() -> Vec<(T, T)> {
    (-3..=6)
        .map(|k: i32| (T::of(2f64.powi(-k)), T::of(2f64.powi(-k + 1))))
        .collect()
}

/// Spectral form of the factorization: with `M = ½·∫₀¹ T_{t^{1/(2β)}} G dt`,
/// checks `∫₀¹ M(t^{−1/β}A) dt + M(A) = ∫₀¹ G(t^{−1/β}A) dt` on every
/// dyadic set of every ray.
pub fn verify_corollary5<T: Scalar>(g: &SpectralMeasure<T>, beta: Beta<T>) -> Result<VerificationReport> {
    let b = beta.value();
    let (m_raw, _) = g.smeared(b + b)?;
    let m = m_raw.scaled(T::of(0.5));
    let (m_beta, _) = m.smeared(b)?;
    let (g_beta, _) = g.smeared(b)?;
    let mut report = VerificationReport::new("cor5", Some(b.as_f64()), "spectral", SPECTRAL_TOL);
    if g.is_empty() {
        report.note("zero spectral measure: both sides vanish identically");
    }
    for (i, ray) in g.rays.iter().enumerate() {
        let _ = ray;
        for (r1, r2) in dyadic_mesh::<T>() {
            let lhs = m_beta.rays[i].mass(r1, r2)? + m.rays[i].mass(r1, r2)?;
            let rhs = g_beta.rays[i].mass(r1, r2)?;
            report.push(
                vec![i as f64, r1.as_f64(), r2.as_f64()],
                [lhs.as_f64(), 0.0],
                [rhs.as_f64(), 0.0],
                None,
            );
        }
    }
    report.finish();
    Ok(report)
}

/// Exponent of the perturbed factor `ρ ∗ δ_ε` (shift along the first axis).
pub fn perturbed<T: Scalar>(rho: &IdMeasure<T>, eps: T) -> Result<IdMeasure<T>> {
    let d = rho.dim();
    let mut a = vec![T::zero(); d];
    a[0] = eps;
    let shift = IdMeasure::from_exponent(d, format!("δ({eps})"), move |y: &[T]| {
        Ok(Complex::new(T::zero(), crate::linalg::dot(y, &a)))
    });
    convolve(rho, &shift)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Vector;

    fn beta(b: f64) -> Beta<f64> {
        Beta::new(b).unwrap()
    }

    #[test]
    fn gaussian_factor_variance() {
        for b in [0.5, 1.0, 2.0] {
            let rho = factor_rho(&IdMeasure::gaussian(1.0).unwrap(), beta(b)).unwrap();
            let want = b / (2.0 * (b + 1.0));
            assert!((rho.exponent(&[1.0]).unwrap().re + 0.5 * want).abs() < 1e-12);
            assert!((rho.triplet().unwrap().cov.get(0, 0) - want).abs() < 1e-15);
        }
    }

    #[test]
    fn dirac_factor_is_dirac() {
        let rho = factor_rho(&IdMeasure::dirac(1), beta(1.0)).unwrap();
        assert_eq!(rho.exponent(&[2.0]).unwrap(), Complex::new(0.0, 0.0));
        let r = verify_prop1(&IdMeasure::<f64>::dirac(1), beta(1.0)).unwrap();
        assert!(r.pass);
        assert_eq!(r.grid_max_abs, 0.0);
    }

    #[test]
    fn prop1_gaussian_tight() {
        let r = verify_prop1(&IdMeasure::gaussian(1.0).unwrap(), beta(1.0)).unwrap();
        assert!(r.pass && r.grid_max_abs < 1e-10, "{}", r.grid_max_abs);
        assert_eq!(r.class.as_deref(), Some("s-selfdecomposable"));
    }

    #[test]
    fn prop1_poisson() {
        let r = verify_prop1(&IdMeasure::poisson(1.0, 2.0).unwrap(), beta(2.0)).unwrap();
        assert!(r.pass, "{}", r.grid_max_abs);
    }

    #[test]
    fn lemma1e_shift_and_poisson() {
        let s = IdMeasure::shift(Vector(vec![1.0])).unwrap();
        assert!(verify_lemma1e(&s, beta(1.0)).unwrap().pass);
        let p = IdMeasure::poisson(1.0, 1.0).unwrap();
        assert!(verify_lemma1e(&p, beta(0.5)).unwrap().pass);
    }

    #[test]
    fn corollary5_zero_measure() {
        let r = verify_corollary5(&SpectralMeasure::<f64>::empty(), beta(1.0)).unwrap();
        assert!(r.pass);
        assert!(r.points.is_empty());
    }

    #[test]
    fn mesh_spans_expected_range() {
        let m = dyadic_mesh::<f64>();
        assert_eq!(m.len(), 10);
        assert_eq!(m[0], (8.0, 16.0));
        assert_eq!(m[9], (1.0 / 64.0, 1.0 / 32.0));
    }
}
