//! The random-integral mappings as transforms of characteristic exponents
//! (and, where available in closed form, of triplets).
//!
//! | mapping | exponent |
//! |---|---|
//! | `J^β(ν)` | `∫₀¹ Φ(t^{1/β} y) dt` |
//! | `I(ν)` | `∫₀^∞ Φ(e^{−s} y) ds` |
//! | `I(J^β(ν))` | `∫₀^∞ Φ(e^{−s} y) dσ_β(s)` |
//! | `J^{2β}(J^β(ν))` | `∫₀¹ Φ((1−√t)^{1/β} y) dt` |

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::measure::IdMeasure;
use crate::quadrature::{integrate, QuadConfig};
use crate::scalar::Scalar;
use crate::spectral::LogMoment;

/// Index `β > 0` of the mapping `J^β`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd)]
pub struct Beta<T>(T);

impl<T: Scalar> Beta<T> {
    pub fn new(value: T) -> Result<Self> {
        if value > T::zero() && value.is_finite() {
            Ok(Self(value))
        } else {
            Err(Error::InvalidParameter(format!("beta must be positive and finite, got {value}")))
        }
    }

    pub fn value(self) -> T {
        self.0
    }

    pub fn doubled(self) -> Self {
        Self(self.0 + self.0)
    }
}

/// Inner clock `σ_β(s) = s + e^{−βs}/β − 1/β`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockSigma<T> {
    pub beta: Beta<T>,
}

impl<T: Scalar> ClockSigma<T> {
    pub fn new(beta: Beta<T>) -> Self {
        Self { beta }
    }

    pub fn value(&self, s: T) -> T {
        let b = self.beta.value();
        // s − (1 − e^{−βs})/β, without cancellation near 0
        s + (-b * s).exp_m1() / b
    }

    pub fn derivative(&self, s: T) -> T {
        -(-self.beta.value() * s).exp_m1()
    }
}

pub fn sigma_clock<T: Scalar>(beta: Beta<T>, s: T) -> Result<T> {
    if !(s >= T::zero()) {
        return Err(Error::InvalidParameter(format!("clock time must be >= 0, got {s}")));
    }
    Ok(ClockSigma::new(beta).value(s))
}

/// Whether `I`-type mappings verify `ν ∈ ID_log` first.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LogMomentGate {
    #[default]
    Check,
    Override,
}

/// Lower cut `δ` of the `u = e^{−s}` range for the improper integrals.
const IMPROPER_CUT: f64 = 1e-16;

fn scaled<T: Scalar>(y: &[T], c: T) -> Vec<T> {
    y.iter().map(|&v| v * c).collect()
}

fn quad<T: Scalar>() -> QuadConfig<T> {
    QuadConfig::default()
}

/// `J^β(μ)`. Carries the closed-form triplet when `μ` has one.
pub fn j_beta<T: Scalar>(mu: &IdMeasure<T>, beta: Beta<T>) -> Result<IdMeasure<T>> {
    let b = beta.value();
    let triplet = mu.triplet().map(|t| t.j_beta(b)).transpose()?;
    let f = mu.evaluator();
    let one = T::one();
    let eval = move |y: &[T]| -> Result<Complex<T>> {
        if b >= one {
            // t = u^β keeps the argument smooth at the origin
            integrate(
                |u: T| Ok(f(&scaled(y, u))? * (b * u.powf(b - one))),
                T::zero(),
                one,
                &quad(),
            )
        } else {
            integrate(|t: T| f(&scaled(y, t.powf(one / b))), T::zero(), one, &quad())
        }
    };
    Ok(IdMeasure::derived(
        mu.dim(),
        triplet,
        mu.log_moment_known(),
        format!("J^{b}({})", mu.label()),
        eval,
    ))
}

/// Finite-difference step for [`j_beta_inverse`].
pub const INVERSE_STEP: f64 = 1e-5;

/// Recovers `ν` from `J^β(ν)` via `Φ_ν(y) = d/ds [s·Φ_μ(s^{1/β} y)]` at `s = 1`
/// (central difference, one Richardson level). No triplet is produced.
pub fn j_beta_inverse<T: Scalar>(mu: &IdMeasure<T>, beta: Beta<T>) -> Result<IdMeasure<T>> {
    let b = beta.value();
    let f = mu.evaluator();
    let one = T::one();
    let h = T::of(INVERSE_STEP);
    let eval = move |y: &[T]| -> Result<Complex<T>> {
        let g = |s: T| -> Result<Complex<T>> { Ok(f(&scaled(y, s.powf(one / b)))? * s) };
        let central = |step: T| -> Result<Complex<T>> { Ok((g(one + step)? - g(one - step)?) / (step + step)) };
        let coarse = central(h)?;
        let fine = central(h * T::of(0.5))?;
        Ok((fine * T::of(4.0) - coarse) / T::of(3.0))
    };
    Ok(IdMeasure::derived(
        mu.dim(),
        None,
        mu.log_moment_known(),
        format!("J^{b}⁻¹({})", mu.label()),
        eval,
    ))
}

fn check_log_moment<T: Scalar>(mu: &IdMeasure<T>, gate: LogMomentGate) -> Result<()> {
    if gate == LogMomentGate::Override {
        return Ok(());
    }
    match (mu.log_moment_known(), mu.triplet()) {
        (Some(true), _) => Ok(()),
        (Some(false), _) => Err(Error::Domain(format!("{} is flagged outside ID_log", mu.label()))),
        (None, Some(t)) => match t.spectral.log_moment() {
            LogMoment::Finite(_) => Ok(()),
            LogMoment::Infinite => Err(Error::Domain(format!(
                "{}: spectral measure has infinite log-moment",
                mu.label()
            ))),
            LogMoment::InconclusiveDivergent => Err(Error::Domain(format!(
                "{}: log-moment check inconclusive (suspected divergence); override to proceed",
                mu.label()
            ))),
        },
        (None, None) => Err(Error::Domain(format!(
            "{}: ID_log membership unknown for an evaluator-only law; override to proceed",
            mu.label()
        ))),
    }
}

/// `∫₀^∞ Φ(e^{−s} y) w(s) ds` with `w → 1` as `s → ∞`: quadrature on
/// `s ∈ [0, ln 1/δ]` plus an order-extrapolated remainder for `u ∈ (0, δ]`.
fn improper<T, F, W>(f: &F, y: &[T], weight: W) -> Result<Complex<T>>
where
    T: Scalar,
    F: Fn(&[T]) -> Result<Complex<T>> + ?Sized,
    W: Fn(T) -> T,
{
    let delta = T::of(IMPROPER_CUT);
    let s_max = -delta.ln();
    let body = integrate(
        |s: T| Ok(f(&scaled(y, (-s).exp()))? * weight(s)),
        T::zero(),
        s_max,
        &quad(),
    )?;
    let at = f(&scaled(y, delta))?;
    let at_half = f(&scaled(y, delta * T::of(0.5)))?;
    let remainder = if at.norm().is_zero() {
        Complex::new(T::zero(), T::zero())
    } else {
        // Φ(uy) ≈ C·u^p on (0, δ]  ⇒  ∫₀^δ Φ(uy)/u du ≈ Φ(δy)/p
        let ratio = at.norm() / at_half.norm().max(T::min_positive_value());
        let p = ratio.log2().max(T::of(0.05)).min(T::of(3.0));
        at / p
    };
    Ok(body + remainder)
}

/// `I(μ) = L(∫₀^∞ e^{−s} dY_μ(s))`, defined on `ID_log`.
pub fn i_map<T: Scalar>(mu: &IdMeasure<T>, gate: LogMomentGate) -> Result<IdMeasure<T>> {
    check_log_moment(mu, gate)?;
    let f = mu.evaluator();
    Ok(IdMeasure::derived(
        mu.dim(),
        None,
        None,
        format!("I({})", mu.label()),
        move |y| improper(&*f, y, |_| T::one()),
    ))
}

/// `I(J^β(μ))` as the single integral `∫₀^∞ Φ(e^{−s} y)(1 − e^{−βs}) ds`,
/// i.e. `∫₀^∞ e^{−s} dY_μ(σ_β(s))`.
pub fn i_of_j_beta<T: Scalar>(mu: &IdMeasure<T>, beta: Beta<T>, gate: LogMomentGate) -> Result<IdMeasure<T>> {
    check_log_moment(mu, gate)?;
    let f = mu.evaluator();
    let clock = ClockSigma::new(beta);
    Ok(IdMeasure::derived(
        mu.dim(),
        None,
        None,
        format!("I∘J^{}({})", beta.value(), mu.label()),
        move |y| improper(&*f, y, |s| clock.derivative(s)),
    ))
}

/// `L(∫₀¹ (1−√t)^{1/β} dY_μ(t))`, the kernel form of `J^{2β}(J^β(μ))`.
pub fn corollary1a_kernel<T: Scalar>(mu: &IdMeasure<T>, beta: Beta<T>) -> Result<IdMeasure<T>> {
    let b = beta.value();
    let f = mu.evaluator();
    let one = T::one();
    let two = one + one;
    // w = 1 − √t gives ∫₀¹ Φ(w^{1/β} y)·2(1−w) dw; for β ≥ 1 also w = u^β.
    let eval = move |y: &[T]| -> Result<Complex<T>> {
        if b >= one {
            integrate(
                |u: T| {
                    let ub = u.powf(b);
                    Ok(f(&scaled(y, u))? * (two * (one - ub) * b * u.powf(b - one)))
                },
                T::zero(),
                one,
                &quad(),
            )
        } else {
            integrate(
                |w: T| Ok(f(&scaled(y, w.powf(one / b)))? * (two * (one - w))),
                T::zero(),
                one,
                &quad(),
            )
        }
    };
    Ok(IdMeasure::derived(
        mu.dim(),
        None,
        mu.log_moment_known(),
        format!("cor1a^{b}({})", mu.label()),
        eval,
    ))
}
