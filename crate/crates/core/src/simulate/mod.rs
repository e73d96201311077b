//! Monte Carlo layer: Lévy increments from a triplet, samples of random
//! integrals `∫ f(s) dY(τ(s))`, empirical characteristic functions and a
//! z-score test against a quadrature exponent.
//!
//! Streams are keyed by `(seed, stream index)` on a ChaCha8 generator; path
//! chunks are fanned out with rayon and reassembled in chunk order, so the
//! output is bit-identical for any thread count.

mod ecf;
mod levy;

use std::io::Write;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::mappings::{Beta, ClockSigma};
use crate::triplet::LevyTriplet;

pub use ecf::{cf_distance_test, ecf, CfTest, EcfEstimate, MAX_WARN_FRACTION, MIN_SAMPLES, Z_MAX, Z_WARN};
pub use levy::{sample_levy_increments, LevyIncrements, LevySampler};

const CHUNK: usize = 1024;

pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

pub(crate) fn uniform_steps(step: f64, horizon: f64) -> Vec<f64> {
    let full = (horizon / step).floor() as usize;
    let mut steps = vec![step; full];
    let rest = horizon - full as f64 * step;
    if rest > 1e-12 * step {
        steps.push(rest);
    }
    steps
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PathConfig {
    /// Mesh width `Δ`.
    pub step: f64,
    pub horizon: f64,
    /// Jumps with `‖x‖ ≤ ε` are not simulated individually.
    pub small_jump_cutoff: f64,
    /// Replace the dropped small jumps by a Gaussian with matching covariance.
    pub gaussian_correction: bool,
}

impl Default for PathConfig {
    fn default() -> Self {
        Self {
            step: 1e-3,
            horizon: 1.0,
            small_jump_cutoff: 1e-3,
            gaussian_correction: true,
        }
    }
}

impl PathConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.step > 0.0 && self.step.is_finite()) {
            return Err(Error::InvalidParameter(format!("step must be positive, got {}", self.step)));
        }
        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return Err(Error::InvalidParameter(format!("horizon must be positive, got {}", self.horizon)));
        }
        if self.step > self.horizon {
            return Err(Error::InvalidParameter(format!(
                "step {} exceeds horizon {}",
                self.step, self.horizon
            )));
        }
        if !(self.small_jump_cutoff > 0.0 && self.small_jump_cutoff <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "small-jump cutoff must lie in (0, 1], got {}",
                self.small_jump_cutoff
            )));
        }
        Ok(())
    }
}

/// Which random integral a [`KernelIntegralSpec`] encodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "target", rename_all = "snake_case")]
pub enum IntegralTarget {
    /// `∫₀¹ t^{1/β} dY(t)`
    JBeta { beta: f64 },
    /// `∫₀^∞ e^{−s} dY(s)`
    IMap,
    /// `∫₀^∞ e^{−s} dY(σ_β(s))`
    IOfJBeta { beta: f64 },
    /// `∫₀¹ (1 − √t)^{1/β} dY(t)`
    Cor1a { beta: f64 },
    Custom { label: String },
}

pub type RealFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// `∫₀^{s_max} f(s) dY(τ(s))` with `τ(s) = s` when no clock is given.
#[derive(Clone)]
pub struct KernelIntegralSpec {
    pub kernel: RealFn,
    pub clock: Option<RealFn>,
    pub s_max: f64,
    /// The integral is improper and `s_max` truncates it.
    pub infinite_horizon: bool,
    pub target: IntegralTarget,
}

impl std::fmt::Debug for KernelIntegralSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("KernelIntegralSpec")
            .field("target", &self.target)
            .field("s_max", &self.s_max)
            .field("infinite_horizon", &self.infinite_horizon)
            .field("clocked", &self.clock.is_some())
            .finish()
    }
}

/// Largest admissible `e^{−s_max}` for the truncated improper integrals.
pub const TRUNCATION_TAIL: f64 = 1e-4;

impl KernelIntegralSpec {
    pub fn custom(label: &str, kernel: RealFn, clock: Option<RealFn>, s_max: f64) -> Self {
        Self {
            kernel,
            clock,
            s_max,
            infinite_horizon: false,
            target: IntegralTarget::Custom { label: label.into() },
        }
    }

    pub fn j_beta(beta: Beta<f64>) -> Self {
        let inv = 1.0 / beta.value();
        Self {
            kernel: Arc::new(move |t: f64| t.powf(inv)),
            clock: None,
            s_max: 1.0,
            infinite_horizon: false,
            target: IntegralTarget::JBeta { beta: beta.value() },
        }
    }

    pub fn i_map(s_max: f64) -> Self {
        Self {
            kernel: Arc::new(|s: f64| (-s).exp()),
            clock: None,
            s_max,
            infinite_horizon: true,
            target: IntegralTarget::IMap,
        }
    }

    /// Kernel `e^{−s}` on the clock `σ_β(s) = s + e^{−βs}/β − 1/β`.
    pub fn i_of_j_beta(beta: Beta<f64>, s_max: f64) -> Self {
        let clock = ClockSigma::new(beta);
        Self {
            kernel: Arc::new(|s: f64| (-s).exp()),
            clock: Some(Arc::new(move |s: f64| clock.value(s))),
            s_max,
            infinite_horizon: true,
            target: IntegralTarget::IOfJBeta { beta: beta.value() },
        }
    }

    pub fn cor1a(beta: Beta<f64>) -> Self {
        let inv = 1.0 / beta.value();
        Self {
            kernel: Arc::new(move |t: f64| (1.0 - t.sqrt()).max(0.0).powf(inv)),
            clock: None,
            s_max: 1.0,
            infinite_horizon: false,
            target: IntegralTarget::Cor1a { beta: beta.value() },
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.s_max > 0.0 && self.s_max.is_finite()) {
            return Err(Error::InvalidParameter(format!("s_max must be positive, got {}", self.s_max)));
        }
        if self.infinite_horizon && (-self.s_max).exp() >= TRUNCATION_TAIL {
            return Err(Error::InvalidParameter(format!(
                "s_max = {} leaves a kernel tail e^(-s_max) >= {TRUNCATION_TAIL}",
                self.s_max
            )));
        }
        Ok(())
    }
}

/// Left-point mesh of a kernel integral: weights `f(s_k)`, clock
/// increments `h_k = τ(s_{k+1}) − τ(s_k)` and their running sums.
#[derive(Debug, Clone)]
pub struct Mesh {
    pub weights: Vec<f64>,
    pub clock_steps: Vec<f64>,
    cum: Vec<f64>,
}

impl Mesh {
    pub fn new(spec: &KernelIntegralSpec, step: f64) -> Result<Self> {
        spec.validate()?;
        if !(step > 0.0 && step <= spec.s_max) {
            return Err(Error::InvalidParameter(format!(
                "step {step} must lie in (0, s_max = {}]",
                spec.s_max
            )));
        }
        let steps = uniform_steps(step, spec.s_max);
        let tau = |s: f64| spec.clock.as_ref().map_or(s, |c| c(s));
        let mut weights = Vec::with_capacity(steps.len());
        let mut clock_steps = Vec::with_capacity(steps.len());
        let mut cum = Vec::with_capacity(steps.len() + 1);
        cum.push(0.0);
        let mut s = 0.0;
        let mut prev = tau(0.0);
        for (k, h) in steps.iter().enumerate() {
            let f = (spec.kernel)(s);
            if !f.is_finite() {
                return Err(Error::Domain(format!("kernel is not finite at s = {s}")));
            }
            s = if k + 1 == steps.len() { spec.s_max } else { s + h };
            let next = tau(s);
            let dh = next - prev;
            if dh < 0.0 {
                return Err(Error::Domain(format!("clock decreases near s = {s}")));
            }
            weights.push(f);
            clock_steps.push(dh);
            cum.push(cum[k] + dh);
            prev = next;
        }
        Ok(Self {
            weights,
            clock_steps,
            cum,
        })
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Total clock time `τ(s_max) − τ(0)`.
    pub fn clock_length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    fn cell_of(&self, u: f64) -> usize {
        (self.cum.partition_point(|&c| c <= u).max(1) - 1).min(self.len() - 1)
    }
}

/// How the left-point sum `Σ_k f(s_k)·ΔY_k` is drawn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    /// One Gaussian, one Poisson count and the jumps for the whole sum;
    /// same law as the stepwise sum.
    #[default]
    Aggregated,
    /// One increment per mesh cell.
    Stepwise,
}

/// `n` draws in `R^d`, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Samples {
    pub dim: usize,
    pub values: Vec<f64>,
}

impl Samples {
    pub fn len(&self) -> usize {
        self.values.len().checked_div(self.dim).unwrap_or(0)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get(&self, i: usize) -> &[f64] {
        &self.values[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.values.chunks_exact(self.dim.max(1))
    }

    /// Mean of coordinate `j`.
    pub fn mean(&self, j: usize) -> f64 {
        self.iter().map(|x| x[j]).sum::<f64>() / self.len() as f64
    }

    /// Unbiased variance of coordinate `j`.
    pub fn variance(&self, j: usize) -> f64 {
        let m = self.mean(j);
        self.iter().map(|x| (x[j] - m).powi(2)).sum::<f64>() / (self.len() as f64 - 1.0)
    }

    /// One sample per line, `d` comma-separated columns.
    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(out);
        for x in self.iter() {
            w.write_record(x.iter().map(|v| format!("{v:e}")))?;
        }
        w.flush()
    }
}

fn draw_aggregated(
    sampler: &LevySampler,
    mesh: &Mesh,
    moments: (f64, f64),
    rng: &mut ChaCha8Rng,
    out: &mut [f64],
) {
    let (f1, f2) = moments;
    for (o, &a) in out.iter_mut().zip(sampler.drift()) {
        *o = a * f1;
    }
    sampler.add_gaussian(rng, f2.sqrt(), out);
    let total = mesh.clock_length();
    for _ in 0..sampler.poisson_count(rng, total) {
        let u = rand::RngExt::random::<f64>(rng) * total;
        sampler.add_jump(rng, mesh.weights[mesh.cell_of(u)], out);
    }
}

fn draw_stepwise(sampler: &LevySampler, mesh: &Mesh, rng: &mut ChaCha8Rng, out: &mut [f64]) {
    out.iter_mut().for_each(|o| *o = 0.0);
    for (&f, &h) in mesh.weights.iter().zip(&mesh.clock_steps) {
        let inc = sampler.increment(rng, h);
        for (o, x) in out.iter_mut().zip(inc) {
            *o += f * x;
        }
    }
}

/// `n` i.i.d. realizations of `Σ_k f(s_k)·[Y(τ(s_{k+1})) − Y(τ(s_k))]`
/// on the mesh of width `cfg.step` over `(0, spec.s_max]`.
pub fn sample_integral(
    t: &LevyTriplet<f64>,
    spec: &KernelIntegralSpec,
    cfg: &PathConfig,
    n: usize,
    seed: u64,
) -> Result<Samples> {
    sample_integral_with(t, spec, cfg, n, seed, Scheme::default())
}

pub fn sample_integral_with(
    t: &LevyTriplet<f64>,
    spec: &KernelIntegralSpec,
    cfg: &PathConfig,
    n: usize,
    seed: u64,
    scheme: Scheme,
) -> Result<Samples> {
    let path_cfg = PathConfig {
        horizon: cfg.horizon.max(cfg.step),
        ..*cfg
    };
    let sampler = LevySampler::new(t, &path_cfg)?;
    let mesh = Mesh::new(spec, cfg.step)?;
    let d = sampler.dim();
    let f1: f64 = mesh.weights.iter().zip(&mesh.clock_steps).map(|(f, h)| f * h).sum();
    let f2: f64 = mesh.weights.iter().zip(&mesh.clock_steps).map(|(f, h)| f * f * h).sum();
    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Vec<f64>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = stream_rng(seed, c as u64 + 1);
            let count = CHUNK.min(n - c * CHUNK);
            let mut buf = vec![0.0; count * d];
            for row in buf.chunks_exact_mut(d) {
                match scheme {
                    Scheme::Aggregated => draw_aggregated(&sampler, &mesh, (f1, f2), &mut rng, row),
                    Scheme::Stepwise => draw_stepwise(&sampler, &mesh, &mut rng, row),
                }
            }
            buf
        })
        .collect();
    Ok(Samples {
        dim: d,
        values: parts.concat(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::IdMeasure;

    fn triplet(m: IdMeasure<f64>) -> LevyTriplet<f64> {
        m.triplet().unwrap().clone()
    }

    #[test]
    fn config_validation() {
        assert!(PathConfig::default().validate().is_ok());
        let bad = PathConfig {
            small_jump_cutoff: 2.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
        let bad = PathConfig {
            step: 2.0,
            ..Default::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn short_truncation_rejected() {
        assert!(KernelIntegralSpec::i_map(5.0).validate().is_err());
        assert!(KernelIntegralSpec::i_map(20.0).validate().is_ok());
    }

    #[test]
    fn mesh_of_identity_clock() {
        let m = Mesh::new(&KernelIntegralSpec::i_map(20.0), 1e-3).unwrap();
        assert_eq!(m.len(), 20_000);
        assert!((m.clock_length() - 20.0).abs() < 1e-9);
        let beta = Beta::new(1.0).unwrap();
        let m = Mesh::new(&KernelIntegralSpec::i_of_j_beta(beta, 20.0), 1e-3).unwrap();
        assert!((m.clock_length() - (19.0 + (-20.0f64).exp())).abs() < 1e-9);
    }

    #[test]
    fn shift_integral_is_deterministic_riemann_sum() {
        let t = triplet(IdMeasure::shift(crate::Vector::scalar(1.0)).unwrap());
        let s = sample_integral(&t, &KernelIntegralSpec::i_map(20.0), &PathConfig::default(), 10, 1).unwrap();
        let want: f64 = (0..20_000).map(|k| (-(k as f64) * 1e-3).exp() * 1e-3).sum();
        for x in s.iter() {
            assert!((x[0] - want).abs() < 1e-9);
            assert!((x[0] - (1.0 - (-20.0f64).exp())).abs() < 1e-3);
        }
    }

    #[test]
    fn stepwise_and_aggregated_agree_for_gaussian() {
        let t = triplet(IdMeasure::gaussian(1.0).unwrap());
        let spec = KernelIntegralSpec::j_beta(Beta::new(1.0).unwrap());
        let cfg = PathConfig {
            step: 1e-2,
            ..Default::default()
        };
        let a = sample_integral_with(&t, &spec, &cfg, 20_000, 3, Scheme::Stepwise).unwrap();
        let b = sample_integral_with(&t, &spec, &cfg, 20_000, 3, Scheme::Aggregated).unwrap();
        // left-point sum of t² over the mesh
        let want: f64 = (0..100).map(|k| (k as f64 * 1e-2).powi(2) * 1e-2).sum();
        let band = 4.0 * want * (2.0 / 20_000f64).sqrt();
        assert!((a.variance(0) - want).abs() < band);
        assert!((b.variance(0) - want).abs() < band);
    }

    #[test]
    fn csv_dump_has_one_line_per_sample() {
        let s = Samples {
            dim: 2,
            values: vec![1.0, 2.0, 3.0, 4.0],
        };
        let mut buf = Vec::new();
        s.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 2);
        assert_eq!(text.lines().next().unwrap().split(',').count(), 2);
    }
}
