//! Exact and numerical calculus for infinitely divisible laws under the
//! random-integral mappings `J^β` (`ν ↦ L(∫₀¹ t^{1/β} dY_ν(t))`) and
//! `I` (`ν ↦ L(∫₀^∞ e^{−s} dY_ν(s))`), with a Monte Carlo layer that samples
//! those integrals directly.
//!
//! Everything numerical is generic over [`Scalar`] (`f32`/`f64`); the
//! aliases at the bottom of this file fix `f64`, which is what the
//! verification tolerances are calibrated for.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod error;
pub mod factorization;
pub mod grid;
pub mod levyarea;
pub mod linalg;
pub mod mappings;
pub mod measure;
pub mod quadrature;
pub mod report;
pub mod scalar;
pub mod simulate;
pub mod spec;
pub mod spectral;
pub mod triplet;

pub use error::{Error, Result};
pub use linalg::{CovMatrix, Vector};
pub use mappings::{
    corollary1a_kernel, i_map, i_of_j_beta, j_beta, j_beta_inverse, sigma_clock, Beta, ClockSigma, LogMomentGate,
};
pub use measure::{conv_power, convolve, IdMeasure};
pub use report::VerificationReport;
pub use scalar::Scalar;
pub use spectral::{Atom, DensitySegment, LogMoment, RadialComponent, RadialDensity, SpectralMeasure, TailBound};
pub use triplet::{char_exponent, LevyTriplet};

pub type Measure = IdMeasure<f64>;
pub type Triplet = LevyTriplet<f64>;
pub type Spectral = SpectralMeasure<f64>;
pub type Segment = DensitySegment<f64>;
pub type Ray = RadialComponent<f64>;
pub type BetaF64 = Beta<f64>;
