//! Infinitely divisible laws as characteristic exponents, with an optional
//! Lévy–Khintchine triplet attached.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{CovMatrix, Vector};
use crate::scalar::Scalar;
use crate::spectral::{DensitySegment, RadialComponent, SpectralMeasure};
use crate::triplet::{char_exponent, LevyTriplet};

/// Pure evaluator `y ↦ Φ(y)`.
pub type ExponentFn<T> = dyn Fn(&[T]) -> Result<Complex<T>> + Send + Sync;

/// An ID law: `μ̂(y) = e^{Φ(y)}`.
///
/// The evaluator is always present. When a triplet is attached it describes
/// the same law; the evaluator may be a closed form or a quadrature of it.
#[derive(Clone)]
pub struct IdMeasure<T> {
    dim: usize,
    triplet: Option<Arc<LevyTriplet<T>>>,
    exponent: Arc<ExponentFn<T>>,
    log_moment_known: Option<bool>,
    label: String,
}

impl<T: Scalar> fmt::Debug for IdMeasure<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IdMeasure")
            .field("label", &self.label)
            .field("dim", &self.dim)
            .field("has_triplet", &self.triplet.is_some())
            .field("log_moment_known", &self.log_moment_known)
            .finish()
    }
}

impl<T: Scalar> IdMeasure<T> {
    /// Exponent evaluated directly from the triplet.
    pub fn from_triplet(triplet: LevyTriplet<T>) -> Self {
        let t = Arc::new(triplet);
        let eval = t.clone();
        Self {
            dim: t.dim(),
            triplet: Some(t),
            exponent: Arc::new(move |y: &[T]| char_exponent(&eval, y)),
            log_moment_known: None,
            label: "triplet".into(),
        }
    }

    /// Evaluator-only law. `f` must be the exponent of an ID law.
    pub fn from_exponent(
        dim: usize,
        label: impl Into<String>,
        f: impl Fn(&[T]) -> Result<Complex<T>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            triplet: None,
            exponent: Arc::new(f),
            log_moment_known: None,
            label: label.into(),
        }
    }

    /// Triplet plus an independent closed-form evaluator for the same law.
    pub fn with_closed_form(
        triplet: LevyTriplet<T>,
        label: impl Into<String>,
        f: impl Fn(&[T]) -> Result<Complex<T>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim: triplet.dim(),
            triplet: Some(Arc::new(triplet)),
            exponent: Arc::new(f),
            log_moment_known: None,
            label: label.into(),
        }
    }

    pub(crate) fn derived(
        dim: usize,
        triplet: Option<LevyTriplet<T>>,
        log_moment_known: Option<bool>,
        label: String,
        f: impl Fn(&[T]) -> Result<Complex<T>> + Send + Sync + 'static,
    ) -> Self {
        Self {
            dim,
            triplet: triplet.map(Arc::new),
            exponent: Arc::new(f),
            log_moment_known,
            label,
        }
    }

    pub fn with_log_moment_known(mut self, known: bool) -> Self {
        self.log_moment_known = Some(known);
        self
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn triplet(&self) -> Option<&LevyTriplet<T>> {
        self.triplet.as_deref()
    }

    pub fn log_moment_known(&self) -> Option<bool> {
        self.log_moment_known
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// `Φ(y)`; exactly zero at the origin.
    pub fn exponent(&self, y: &[T]) -> Result<Complex<T>> {
        if y.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                found: y.len(),
            });
        }
        if y.iter().all(|v| v.is_zero()) {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        (self.exponent)(y)
    }

    /// Characteristic function `e^{Φ(y)}`.
    pub fn char_fn(&self, y: &[T]) -> Result<Complex<T>> {
        self.exponent(y).map(|z| z.exp())
    }

    pub(crate) fn evaluator(&self) -> Arc<ExponentFn<T>> {
        self.exponent.clone()
    }

    // -- named families (dimension 1) --

    /// Centered normal law with variance `var`.
    pub fn gaussian(var: T) -> Result<Self> {
        let t = LevyTriplet::gaussian(CovMatrix::diagonal(&[var])?);
        let half = var * T::of(0.5);
        Ok(Self::with_closed_form(t, format!("gaussian(var={var})"), move |y| {
            Ok(Complex::new(-half * y[0] * y[0], T::zero()))
        })
        .with_log_moment_known(true))
    }

    /// Point mass at `a`.
    pub fn shift(a: Vector<T>) -> Result<Self> {
        let a = Vector::new(a.0)?;
        let d = a.dim();
        let t = LevyTriplet::new(a.clone(), CovMatrix::zeros(d), SpectralMeasure::empty())?;
        Ok(Self::with_closed_form(t, "shift", move |y| {
            Ok(Complex::new(T::zero(), crate::linalg::dot(y, a.as_slice())))
        })
        .with_log_moment_known(true))
    }

    /// `δ₀` in dimension `d`.
    pub fn dirac(d: usize) -> Self {
        Self::shift(Vector::zeros(d)).expect("zero shift is valid").with_label("dirac")
    }

    /// Poisson law with the given rate and jump size: `Φ(y) = rate(e^{i·jump·y} − 1)`.
    pub fn poisson(rate: T, jump: T) -> Result<Self> {
        if !(rate > T::zero()) || jump.is_zero() || !jump.is_finite() {
            return Err(Error::InvalidParameter("poisson needs rate > 0 and a finite non-zero jump".into()));
        }
        let m = SpectralMeasure::atom(Vector(vec![jump]), rate)?;
        let comp = if jump.abs() <= T::one() { rate * jump } else { T::zero() };
        let t = LevyTriplet::new(Vector(vec![comp]), CovMatrix::zeros(1), m)?;
        Ok(Self::with_closed_form(t, format!("poisson(rate={rate},jump={jump})"), move |y| {
            Ok((Complex::new(T::zero(), jump * y[0]).exp() - T::one()) * rate)
        })
        .with_log_moment_known(true))
    }

    /// Gamma law: spectral density `shape·e^{−rate·r}/r` on `(0, ∞)`,
    /// `Φ(y) = −shape·log(1 − iy/rate)`.
    pub fn gamma(shape: T, rate: T) -> Result<Self> {
        if !(shape > T::zero()) || !(rate > T::zero()) {
            return Err(Error::InvalidParameter("gamma needs shape > 0 and rate > 0".into()));
        }
        let m = SpectralMeasure::new(vec![
            RadialComponent::new(Vector(vec![T::one()]))?.with_density(DensitySegment::exp_over_r(shape, rate))
        ]);
        // compensator ∫₀¹ r·shape·e^{−rate r}/r dr
        let comp = shape * (T::one() - (-rate).exp()) / rate;
        let t = LevyTriplet::new(Vector(vec![comp]), CovMatrix::zeros(1), m)?;
        Ok(Self::with_closed_form(t, format!("gamma(shape={shape},rate={rate})"), move |y| {
            Ok(-(Complex::new(T::one(), -y[0] / rate)).ln() * shape)
        })
        .with_log_moment_known(true))
    }
}

/// `μ ∗ ν`: exponents add; triplets add componentwise.
pub fn convolve<T: Scalar>(mu: &IdMeasure<T>, nu: &IdMeasure<T>) -> Result<IdMeasure<T>> {
    if mu.dim != nu.dim {
        return Err(Error::DimensionMismatch {
            expected: mu.dim,
            found: nu.dim,
        });
    }
    let triplet = match (mu.triplet(), nu.triplet()) {
        (Some(a), Some(b)) => Some(a.sum(b)),
        _ => None,
    };
    let log_known = match (mu.log_moment_known, nu.log_moment_known) {
        (Some(a), Some(b)) => Some(a && b),
        _ => None,
    };
    let (f, g) = (mu.evaluator(), nu.evaluator());
    Ok(IdMeasure::derived(
        mu.dim,
        triplet,
        log_known,
        format!("({})*({})", mu.label, nu.label),
        move |y| Ok(f(y)? + g(y)?),
    ))
}

/// `μ^{∗c}`: exponent `c·Φ`, triplet `(c·a, c·S, c·M)`.
pub fn conv_power<T: Scalar>(mu: &IdMeasure<T>, c: T) -> Result<IdMeasure<T>> {
    if !(c > T::zero()) || !c.is_finite() {
        return Err(Error::InvalidParameter(format!("convolution power must be positive, got {c}")));
    }
    let f = mu.evaluator();
    Ok(IdMeasure::derived(
        mu.dim,
        mu.triplet().map(|t| t.scaled(c)),
        mu.log_moment_known,
        format!("({})^*{c}", mu.label),
        move |y| Ok(f(y)? * c),
    ))
}
