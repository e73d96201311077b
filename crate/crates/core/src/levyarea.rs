//! Conditional characteristic function of Lévy's stochastic area,
//! `χ(t) = tu/sinh(tu) · exp[−(tu·coth(tu) − 1)]`, as a selfdecomposable
//! factor `I(ν)` times its background driving law `ν`.
//!
//! The second factor is printed with `cosh` in the classical statement of
//! this example; that reading gives `χ(0) = e`, so the `coth` reading is
//! used throughout and the report records the discrepancy.

use std::io::Write;

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grid::AXIS;
use crate::mappings::{i_map, i_of_j_beta, j_beta, Beta, LogMomentGate};
use crate::measure::{convolve, IdMeasure};
use crate::report::VerificationReport;
use crate::scalar::Scalar;

pub const AREA_TOL: f64 = 1e-8;

/// Conditioning time `u > 0` in `B_u = (√u, √u)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AreaParams<T> {
    u: T,
}

impl<T: Scalar> AreaParams<T> {
    pub fn new(u: T) -> Result<Self> {
        if u > T::zero() && u.is_finite() {
            Ok(Self { u })
        } else {
            Err(Error::InvalidParameter(format!("area time u must be positive and finite, got {u}")))
        }
    }

    pub fn u(&self) -> T {
        self.u
    }
}

/// `x·coth(x) − 1`
fn x_coth_x_minus_one<T: Scalar>(x: T) -> T {
    let x2 = x * x;
    if x.abs() < T::of(1e-3) {
        x2 / T::of(3.0) - x2 * x2 / T::of(45.0) + T::of(2.0) * x2 * x2 * x2 / T::of(945.0)
    } else {
        x / x.tanh() - T::one()
    }
}

/// `Φ_ν(t) = −(tu·coth(tu) − 1)`, zero at `t = 0`.
pub fn nu_exponent<T: Scalar>(p: &AreaParams<T>, t: T) -> Complex<T> {
    Complex::new(-x_coth_x_minus_one(t * p.u), T::zero())
}

/// `log(tu / sinh(tu))`
pub fn sinh_factor_exponent<T: Scalar>(p: &AreaParams<T>, t: T) -> Complex<T> {
    let x = (t * p.u).abs();
    let v = if x < T::of(1e-2) {
        let x2 = x * x;
        -(x2 / T::of(6.0) - x2 * x2 / T::of(180.0) + x2 * x2 * x2 / T::of(2835.0))
    } else {
        // log sinh x = x + log(1 − e^{−2x}) − log 2
        let log_sinh = x + (-(-(x + x)).exp_m1()).ln() - T::LN_2();
        x.ln() - log_sinh
    };
    Complex::new(v, T::zero())
}

/// Exponent of the background law of `I(ν) ∗ ν`, i.e. of `ρ` with
/// `I(ρ) = I(ν) ∗ ν`: `Φ_ρ(t) = Φ_ν(t) + tΦ_ν′(t) = 1 − 2x·coth x + x²/sinh²x`.
pub fn rho_exponent<T: Scalar>(p: &AreaParams<T>, t: T) -> Complex<T> {
    let x = (t * p.u).abs();
    let x2 = x * x;
    let v = if x < T::of(1e-3) {
        -x2 + x2 * x2 / T::of(9.0) - T::of(2.0) * x2 * x2 * x2 / T::of(135.0)
    } else {
        let e = (-x).exp();
        let x_over_sinh = T::of(2.0) * x * e / (-(-(x + x)).exp_m1());
        T::one() - T::of(2.0) * x / x.tanh() + x_over_sinh * x_over_sinh
    };
    Complex::new(v, T::zero())
}

/// `ν` as a one-dimensional evaluator-only law (finite variance, so in `ID_log`).
pub fn nu_measure<T: Scalar>(p: AreaParams<T>) -> IdMeasure<T> {
    IdMeasure::from_exponent(1, format!("levy-area-nu(u={})", p.u), move |y: &[T]| Ok(nu_exponent(&p, y[0])))
        .with_log_moment_known(true)
}

pub fn rho_measure<T: Scalar>(p: AreaParams<T>) -> IdMeasure<T> {
    IdMeasure::from_exponent(1, format!("levy-area-rho(u={})", p.u), move |y: &[T]| Ok(rho_exponent(&p, y[0])))
}

/// `±{0.1, 0.5, 1, 2, 5}` plus the origin.
pub fn area_grid<T: Scalar>() -> Vec<Vec<T>> {
    let mut g: Vec<Vec<T>> = AXIS.iter().map(|&t| vec![T::of(t)]).collect();
    g.insert(AXIS.len() / 2, vec![T::zero()]);
    g
}

/// Checks, on the `t`-grid:
/// 1. `I(ν)` has exponent `log(tu/sinh tu)`;
/// 2. `χ = exp(sinh factor + Φ_ν)` is a characteristic function value in `(0, 1]`, `χ(0) = 1`;
/// 3. `I(ν) ∗ ν = I(ρ)` with `ρ` from [`rho_exponent`];
/// 4. the clocked integral `∫₀^∞ Φ_ν(e^{−s}t) dσ₁(s)` equals `I(J¹(ν))`,
///    the class-`L^f` member driven by `ν`.
pub fn verify_levy_area<T: Scalar>(p: AreaParams<T>) -> Result<VerificationReport> {
    let nu = nu_measure(p);
    let grid = area_grid::<T>();
    let i_nu = i_map(&nu, LogMomentGate::Check)?;
    let subject = nu.label().to_string();
    let mut report = VerificationReport::compare(
        "levyarea",
        None,
        &subject,
        AREA_TOL,
        &grid,
        |y| i_nu.exponent(y),
        |y| Ok(sinh_factor_exponent(&p, y[0])),
    );

    let chi0 = (sinh_factor_exponent(&p, T::zero()) + nu_exponent(&p, T::zero())).exp();
    if chi0 != Complex::new(T::one(), T::zero()) {
        report.fail(format!("chi(0) = {chi0} != 1"));
    }
    for y in &grid {
        let chi = (sinh_factor_exponent(&p, y[0]) + nu_exponent(&p, y[0])).exp();
        if !(chi.re > T::zero() && chi.re <= T::one() && chi.im.is_zero()) {
            report.fail(format!("chi({}) = {chi} outside (0, 1]", y[0]));
        }
    }
    report.note(format!(
        "cosh reading of the second factor gives chi(0) = e^1 = {:.6}; coth reading gives chi(0) = 1",
        std::f64::consts::E
    ));

    let product = convolve(&i_nu, &nu)?;
    let i_rho = i_map(&rho_measure(p), LogMomentGate::Override)?;
    report.absorb(VerificationReport::compare(
        "eq7",
        None,
        &subject,
        AREA_TOL,
        &grid,
        |y| product.exponent(y),
        |y| i_rho.exponent(y),
    ));

    let one = Beta::new(T::one())?;
    let clocked = i_of_j_beta(&nu, one, LogMomentGate::Check)?;
    let nested = i_map(&j_beta(&nu, one)?, LogMomentGate::Check)?;
    report.absorb(VerificationReport::compare(
        "cor3",
        Some(1.0),
        &subject,
        AREA_TOL,
        &grid,
        |y| clocked.exponent(y),
        |y| nested.exponent(y),
    ));
    report.finish();
    Ok(report)
}

/// One plot row: `(t, Φ_ν, log-sinh factor, I(ν) exponent, discrepancy)`.
#[derive(Debug, Clone, Serialize)]
pub struct AreaRow {
    pub t: f64,
    pub nu_exponent: f64,
    pub sinh_factor: f64,
    pub i_map: f64,
    pub discrepancy: f64,
}

pub fn area_table<T: Scalar>(p: AreaParams<T>, ts: &[T]) -> Result<Vec<AreaRow>> {
    let i_nu = i_map(&nu_measure(p), LogMomentGate::Check)?;
    ts.iter()
        .map(|&t| {
            let mapped = i_nu.exponent(&[t])?.re;
            let sinh = sinh_factor_exponent(&p, t).re;
            Ok(AreaRow {
                t: t.as_f64(),
                nu_exponent: nu_exponent(&p, t).re.as_f64(),
                sinh_factor: sinh.as_f64(),
                i_map: mapped.as_f64(),
                discrepancy: (mapped - sinh).abs().as_f64(),
            })
        })
        .collect()
}

pub fn write_area_csv<W: Write>(rows: &[AreaRow], out: W) -> std::io::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()
}
