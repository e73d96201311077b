//! Lévy–Khintchine triplets `[a, S, M]` and their characteristic exponents.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{dot, CovMatrix, Vector};
use crate::scalar::Scalar;
use crate::spectral::SpectralMeasure;

/// Shift `a`, Gaussian covariance `S`, spectral measure `M`.
#[derive(Debug, Clone)]
pub struct LevyTriplet<T> {
    pub shift: Vector<T>,
    pub cov: CovMatrix<T>,
    pub spectral: SpectralMeasure<T>,
}

impl<T: Scalar> LevyTriplet<T> {
    pub fn new(shift: Vector<T>, cov: CovMatrix<T>, spectral: SpectralMeasure<T>) -> Result<Self> {
        let d = shift.dim();
        if cov.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: cov.dim(),
            });
        }
        if let Some(md) = spectral.dim() {
            if md != d {
                return Err(Error::DimensionMismatch { expected: d, found: md });
            }
        }
        spectral
            .validate()
            .map_err(|v| Error::Validation(v.to_string()))?;
        Ok(Self { shift, cov, spectral })
    }

    pub fn dim(&self) -> usize {
        self.shift.dim()
    }

    pub fn gaussian(cov: CovMatrix<T>) -> Self {
        let d = cov.dim();
        Self {
            shift: Vector::zeros(d),
            cov,
            spectral: SpectralMeasure::empty(),
        }
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            shift: self.shift.scaled(c),
            cov: self.cov.scaled(c),
            spectral: self.spectral.scaled(c),
        }
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self {
            shift: self.shift.add(&other.shift),
            cov: self.cov.add(&other.cov),
            spectral: self.spectral.sum(&other.spectral),
        }
    }

    /// Closed-form triplet of the `J^β` image:
    /// `a ↦ β/(β+1)·(a + ∫_{‖x‖>1} x‖x‖^{−1−β} M(dx))`, `S ↦ β/(β+2)·S`,
    /// `M ↦ ∫₀¹ T_{t^{1/β}} M dt`.
    pub fn j_beta(&self, beta: T) -> Result<Self> {
        let one = T::one();
        let (spectral, far_shift) = self.spectral.smeared(beta)?;
        let shift = self.shift.add(&far_shift).scaled(beta / (beta + one));
        Ok(Self {
            shift,
            cov: self.cov.scaled(beta / (beta + one + one)),
            spectral,
        })
    }
}

/// `Φ(y) = i⟨y,a⟩ − ½⟨y,Sy⟩ + ∫ [e^{i⟨y,x⟩} − 1 − i⟨y,x⟩·1{‖x‖≤1}] M(dx)`
pub fn char_exponent<T: Scalar>(t: &LevyTriplet<T>, y: &[T]) -> Result<Complex<T>> {
    if y.len() != t.dim() {
        return Err(Error::DimensionMismatch {
            expected: t.dim(),
            found: y.len(),
        });
    }
    let drift = Complex::new(-t.cov.quad_form(y) * T::of(0.5), dot(y, t.shift.as_slice()));
    Ok(drift + t.spectral.exponent(y)?)
}
