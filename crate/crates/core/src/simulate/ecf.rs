//! Empirical characteristic functions and the z-score test against a
//! quadrature exponent.

use num_complex::Complex;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::dot;
use crate::report::{Outcome, ReportPoint, VerificationReport};

use super::Samples;

/// Below this many samples the test reports `Inconclusive`.
pub const MIN_SAMPLES: usize = 100;
/// Per-point rejection level.
pub const Z_MAX: f64 = 4.0;
/// A point with `z > Z_WARN` counts towards the outlier fraction.
pub const Z_WARN: f64 = 2.0;
pub const MAX_WARN_FRACTION: f64 = 0.1;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EcfEstimate {
    pub grid: Vec<Vec<f64>>,
    pub values: Vec<Complex<f64>>,
    pub n_samples: usize,
    pub std_error: Vec<f64>,
}

/// `values[j] = (1/n) Σ_k exp(i⟨y_j, X_k⟩)` with the standard error of the
/// complex sample mean.
pub fn ecf(samples: &Samples, grid: &[Vec<f64>]) -> Result<EcfEstimate> {
    let n = samples.len();
    if n < 2 {
        return Err(Error::InvalidParameter(format!("ecf needs at least 2 samples, got {n}")));
    }
    let mut values = Vec::with_capacity(grid.len());
    let mut std_error = Vec::with_capacity(grid.len());
    for y in grid {
        if y.len() != samples.dim {
            return Err(Error::DimensionMismatch {
                expected: samples.dim,
                found: y.len(),
            });
        }
        if y.iter().all(|&v| v == 0.0) {
            values.push(Complex::new(1.0, 0.0));
            std_error.push(0.0);
            continue;
        }
        let mut acc = Complex::new(0.0, 0.0);
        for x in samples.iter() {
            let (s, c) = dot(y, x).sin_cos();
            acc += Complex::new(c, s);
        }
        let mean = acc / n as f64;
        // Σ|e^{iθ} − m|² = n(1 − |m|²)
        let var = (n as f64 / (n as f64 - 1.0)) * (1.0 - mean.norm_sqr()).max(0.0);
        values.push(mean);
        std_error.push((var / n as f64).sqrt());
    }
    Ok(EcfEstimate {
        grid: grid.to_vec(),
        values,
        n_samples: n,
        std_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CfTest {
    pub outcome: Outcome,
    pub z: Vec<f64>,
    pub max_z: f64,
    pub warn_fraction: f64,
    pub targets: Vec<Complex<f64>>,
}

impl CfTest {
    pub fn pass(&self) -> bool {
        self.outcome == Outcome::Pass
    }

    /// Report in the shared shape; `tolerance` holds the z limit.
    pub fn into_report(self, est: &EcfEstimate, identity: &str, beta: Option<f64>, subject: &str) -> VerificationReport {
        let mut report = VerificationReport::new(identity, beta, subject, Z_MAX);
        for ((y, (v, t)), z) in est.grid.iter().zip(est.values.iter().zip(&self.targets)).zip(&self.z) {
            report.points.push(ReportPoint {
                y: y.clone(),
                lhs: [v.re, v.im],
                rhs: [t.re, t.im],
                abs_diff: (v - t).norm(),
                z: Some(*z),
            });
        }
        report.grid_max_abs = report.points.iter().map(|p| p.abs_diff).fold(0.0, f64::max);
        report.note(format!(
            "monte carlo: n = {}, max z = {:.3}, fraction z > {Z_WARN} = {:.3}",
            est.n_samples, self.max_z, self.warn_fraction
        ));
        match self.outcome {
            Outcome::Pass => {}
            Outcome::Fail => report.fail("statistical band exceeded".into()),
            Outcome::Inconclusive => report.mark_inconclusive(format!("fewer than {MIN_SAMPLES} samples")),
        }
        report
    }
}

/// `z_j = |ecf_j − exp Φ(y_j)| / se_j`; passes iff `max z < 4` and fewer
/// than 10% of points have `z > 2`. The standard error is floored at
/// `0.5/√n` so that near-degenerate points (e.g. a deterministic sample
/// with a small discretization bias) do not produce unbounded z.
pub fn cf_distance_test<F>(est: &EcfEstimate, mut phi: F) -> Result<CfTest>
where
    F: FnMut(&[f64]) -> Result<Complex<f64>>,
{
    let floor = 0.5 / (est.n_samples as f64).sqrt();
    let mut z = Vec::with_capacity(est.grid.len());
    let mut targets = Vec::with_capacity(est.grid.len());
    for ((y, v), se) in est.grid.iter().zip(&est.values).zip(&est.std_error) {
        let target = phi(y)?.exp();
        targets.push(target);
        z.push((v - target).norm() / se.max(floor));
    }
    let max_z = z.iter().copied().fold(0.0, f64::max);
    let warn = z.iter().filter(|&&v| v > Z_WARN).count();
    let warn_fraction = if z.is_empty() { 0.0 } else { warn as f64 / z.len() as f64 };
    let outcome = if est.n_samples < MIN_SAMPLES {
        Outcome::Inconclusive
    } else if max_z < Z_MAX && warn_fraction < MAX_WARN_FRACTION {
        Outcome::Pass
    } else {
        Outcome::Fail
    };
    Ok(CfTest {
        outcome,
        z,
        max_z,
        warn_fraction,
        targets,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::{Distribution, StandardNormal};

    fn normal_samples(n: usize, seed: u64) -> Samples {
        let mut rng = super::super::stream_rng(seed, 0);
        Samples {
            dim: 1,
            values: (0..n).map(|_| StandardNormal.sample(&mut rng)).collect(),
        }
    }

    fn grid() -> Vec<Vec<f64>> {
        crate::grid::AXIS.iter().map(|&t| vec![t]).collect()
    }

    #[test]
    fn constant_zero_sample_has_unit_ecf() {
        let s = Samples {
            dim: 1,
            values: vec![0.0; 10],
        };
        let e = ecf(&s, &grid()).unwrap();
        assert!(e.values.iter().all(|v| *v == Complex::new(1.0, 0.0)));
    }

    #[test]
    fn origin_is_exactly_one() {
        let e = ecf(&normal_samples(50, 1), &[vec![0.0]]).unwrap();
        assert_eq!(e.values[0], Complex::new(1.0, 0.0));
    }

    #[test]
    fn gaussian_ecf_at_one() {
        let e = ecf(&normal_samples(100_000, 2), &[vec![1.0]]).unwrap();
        assert!((e.values[0] - Complex::new((-0.5f64).exp(), 0.0)).norm() < 3.0 * e.std_error[0]);
    }

    #[test]
    fn test_accepts_same_law_and_rejects_wrong_variance() {
        let e = ecf(&normal_samples(100_000, 3), &grid()).unwrap();
        let ok = cf_distance_test(&e, |y| Ok(Complex::new(-y[0] * y[0] / 2.0, 0.0))).unwrap();
        assert!(ok.pass(), "{:?}", ok.z);
        let bad = cf_distance_test(&e, |y| Ok(Complex::new(-y[0] * y[0], 0.0))).unwrap();
        assert_eq!(bad.outcome, Outcome::Fail);
    }

    #[test]
    fn tiny_sample_is_inconclusive() {
        let e = ecf(&normal_samples(10, 4), &grid()).unwrap();
        let t = cf_distance_test(&e, |y| Ok(Complex::new(-y[0] * y[0] / 2.0, 0.0))).unwrap();
        assert_eq!(t.outcome, Outcome::Inconclusive);
    }

    #[test]
    fn needs_two_samples() {
        assert!(ecf(&normal_samples(1, 5), &grid()).is_err());
    }
}
