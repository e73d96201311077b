//! Increments of a Lévy process from its triplet: Gaussian part, drift,
//! compound-Poisson jumps above a cutoff `ε`, and optionally a Gaussian
//! stand-in for the compensated jumps below `ε`.

use rand::{Rng, RngExt};
use rand_distr::{Distribution, Poisson, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::spectral::{DensitySegment, RadialDensity};
use crate::triplet::LevyTriplet;

use super::{stream_rng, PathConfig};

const TABLE_CELLS: usize = 2048;
const TAIL_CUT: f64 = 1e-13;

/// Radial sampler for one density segment restricted to `(a, b)`:
/// cells chosen by exact mass, radius inside a cell from the power law
/// interpolating the density at the cell ends.
#[derive(Debug, Clone)]
struct RadialTable {
    edges: Vec<f64>,
    cum: Vec<f64>,
    slopes: Vec<f64>,
}

impl RadialTable {
    fn build(seg: &DensitySegment<f64>, a: f64, b: f64) -> Result<Self> {
        let log_spaced = b / a > 10.0;
        let edges: Vec<f64> = (0..=TABLE_CELLS)
            .map(|i| {
                let t = i as f64 / TABLE_CELLS as f64;
                if log_spaced {
                    a * (b / a).powf(t)
                } else {
                    a + (b - a) * t
                }
            })
            .collect();
        let values = edges
            .iter()
            .map(|&r| {
                let inside = r.clamp(seg.lo.max(a) * (1.0 + 1e-12), seg.hi.min(b) * (1.0 - 1e-12));
                seg.value(inside)
            })
            .collect::<Result<Vec<f64>>>()?;
        let mut cum = Vec::with_capacity(TABLE_CELLS + 1);
        cum.push(0.0);
        let mut slopes = Vec::with_capacity(TABLE_CELLS);
        for i in 0..TABLE_CELLS {
            let m = seg.mass(edges[i], edges[i + 1])?;
            cum.push(cum[i] + m.max(0.0));
            let (g0, g1) = (values[i], values[i + 1]);
            let q = if g0 > 0.0 && g1 > 0.0 {
                (g1 / g0).ln() / (edges[i + 1] / edges[i]).ln()
            } else {
                0.0
            };
            slopes.push(q);
        }
        Ok(Self { edges, cum, slopes })
    }

    fn total(&self) -> f64 {
        *self.cum.last().unwrap_or(&0.0)
    }

    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let target = rng.random::<f64>() * self.total();
        let i = (self.cum.partition_point(|&c| c <= target).max(1) - 1).min(TABLE_CELLS - 1);
        let (x0, x1) = (self.edges[i], self.edges[i + 1]);
        let u: f64 = rng.random();
        let q1 = self.slopes[i] + 1.0;
        // inverse CDF of r^q on (x0, x1)
        if q1.abs() < 1e-9 {
            x0 * (x1 / x0).powf(u)
        } else {
            let (p0, p1) = (x0.powf(q1), x1.powf(q1));
            (p0 + u * (p1 - p0)).powf(1.0 / q1).clamp(x0, x1)
        }
    }
}

#[derive(Debug, Clone)]
enum JumpSource {
    Atom { r: f64 },
    Power { lo: f64, hi: f64, q1: f64 },
    Table(RadialTable),
}

#[derive(Debug, Clone)]
struct WeightedSource {
    direction: Vec<f64>,
    source: JumpSource,
}

/// Prepared law of increments `Y(t+h) − Y(t)` for any `h`.
#[derive(Debug, Clone)]
pub struct LevySampler {
    dim: usize,
    drift: Vec<f64>,
    gauss_root: Vec<f64>,
    jump_rate: f64,
    cum_mass: Vec<f64>,
    sources: Vec<WeightedSource>,
}

fn upper_cut(seg: &DensitySegment<f64>, a: f64) -> Result<f64> {
    if seg.hi.is_finite() {
        return Ok(seg.hi);
    }
    let total = seg.mass(a, f64::INFINITY)?;
    let mut r = (2.0 * a).max(1.0);
    for _ in 0..80 {
        if seg.mass(r, f64::INFINITY)? <= TAIL_CUT * total.max(1e-300) {
            return Ok(r);
        }
        r *= 2.0;
    }
    Err(Error::Domain("could not truncate the jump-size tail".into()))
}

impl LevySampler {
    pub fn new(t: &LevyTriplet<f64>, cfg: &PathConfig) -> Result<Self> {
        cfg.validate()?;
        let d = t.dim();
        let eps = cfg.small_jump_cutoff;
        let mut drift = t.shift.clone();
        let mut small_cov = vec![0.0; d * d];
        let mut cum_mass = vec![0.0];
        let mut sources = Vec::new();

        for ray in &t.spectral.rays {
            let dir = ray.direction().as_slice().to_vec();
            let comp = ray.integrate_against(|r| r, eps, 1.0)?;
            drift = drift.add(&Vector(dir.iter().map(|&x| -x * comp).collect()));
            let second = ray.integrate_against(|r| r * r, 0.0, eps)?;
            for i in 0..d {
                for j in 0..d {
                    small_cov[i * d + j] += dir[i] * dir[j] * second;
                }
            }
            let mut push = |mass: f64, source: JumpSource| {
                if mass > 0.0 {
                    let last = *cum_mass.last().unwrap();
                    cum_mass.push(last + mass);
                    sources.push(WeightedSource {
                        direction: dir.clone(),
                        source,
                    });
                }
            };
            for a in ray.atoms.iter().filter(|a| a.r > eps) {
                push(a.w, JumpSource::Atom { r: a.r });
            }
            for seg in &ray.densities {
                let a = seg.lo.max(eps);
                if a >= seg.hi {
                    continue;
                }
                match seg.density {
                    RadialDensity::Power { exponent, .. } if seg.hi.is_finite() => {
                        push(seg.mass(a, seg.hi)?, JumpSource::Power {
                            lo: a,
                            hi: seg.hi,
                            q1: exponent + 1.0,
                        });
                    }
                    _ => {
                        let b = upper_cut(seg, a)?;
                        let table = RadialTable::build(seg, a, b)?;
                        push(table.total(), JumpSource::Table(table));
                    }
                }
            }
        }

        let mut cov = t.cov.clone();
        if cfg.gaussian_correction {
            cov = cov.add(&crate::linalg::CovMatrix::from_row_major(d, small_cov)?);
        }
        let jump_rate = *cum_mass.last().unwrap();
        if !jump_rate.is_finite() {
            return Err(Error::Domain("mass beyond the small-jump cutoff is not finite".into()));
        }
        Ok(Self {
            dim: d,
            drift: drift.0,
            gauss_root: cov.sqrt_f64(),
            jump_rate,
            cum_mass,
            sources,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// `a − ∫_{ε<‖x‖≤1} x M(dx)`
    pub fn drift(&self) -> &[f64] {
        &self.drift
    }

    /// `M(‖x‖ > ε)`
    pub fn jump_rate(&self) -> f64 {
        self.jump_rate
    }

    /// Adds `scale · S_eff^{1/2} Z` to `out`.
    pub(crate) fn add_gaussian<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64, out: &mut [f64]) {
        let d = self.dim;
        if self.gauss_root.iter().all(|&x| x == 0.0) {
            return;
        }
        let z: Vec<f64> = (0..d).map(|_| StandardNormal.sample(rng)).collect();
        for (o, row) in out.iter_mut().zip(self.gauss_root.chunks_exact(d)) {
            let acc: f64 = row.iter().zip(&z).map(|(a, b)| a * b).sum();
            *o += scale * acc;
        }
    }

    pub(crate) fn poisson_count<R: Rng + ?Sized>(&self, rng: &mut R, clock_len: f64) -> u64 {
        let mean = self.jump_rate * clock_len;
        if mean <= 0.0 {
            return 0;
        }
        let n: f64 = Poisson::new(mean).expect("positive finite mean").sample(rng);
        n as u64
    }

    /// Adds `scale · J` for one jump `J` drawn from the normalized big-jump law.
    pub(crate) fn add_jump<R: Rng + ?Sized>(&self, rng: &mut R, scale: f64, out: &mut [f64]) {
        let target = rng.random::<f64>() * self.jump_rate;
        let k = (self.cum_mass.partition_point(|&c| c <= target).max(1) - 1).min(self.sources.len() - 1);
        let src = &self.sources[k];
        let r = match &src.source {
            JumpSource::Atom { r } => *r,
            JumpSource::Power { lo, hi, q1 } => {
                let u: f64 = rng.random();
                if q1.abs() < 1e-12 {
                    lo * (hi / lo).powf(u)
                } else {
                    let (p0, p1) = (lo.powf(*q1), hi.powf(*q1));
                    (p0 + u * (p1 - p0)).powf(1.0 / q1)
                }
            }
            JumpSource::Table(t) => t.sample(rng),
        };
        for (o, &e) in out.iter_mut().zip(&src.direction) {
            *o += scale * r * e;
        }
    }

    /// One increment over clock length `h`.
    pub fn increment<R: Rng + ?Sized>(&self, rng: &mut R, h: f64) -> Vec<f64> {
        let mut out: Vec<f64> = self.drift.iter().map(|&a| a * h).collect();
        self.add_gaussian(rng, h.sqrt(), &mut out);
        for _ in 0..self.poisson_count(rng, h) {
            self.add_jump(rng, 1.0, &mut out);
        }
        out
    }
}

/// Increments over the uniform mesh `[0, horizon]` with step `cfg.step`.
pub struct LevyIncrements {
    sampler: LevySampler,
    rng: rand_chacha::ChaCha8Rng,
    steps: Vec<f64>,
    next: usize,
}

impl Iterator for LevyIncrements {
    type Item = Vec<f64>;

    fn next(&mut self) -> Option<Vec<f64>> {
        let h = *self.steps.get(self.next)?;
        self.next += 1;
        Some(self.sampler.increment(&mut self.rng, h))
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = self.steps.len() - self.next;
        (left, Some(left))
    }
}

/// Deterministic stream of increments `Y(t_{k+1}) − Y(t_k)` for the given seed.
pub fn sample_levy_increments(t: &LevyTriplet<f64>, cfg: &PathConfig, seed: u64) -> Result<LevyIncrements> {
    let sampler = LevySampler::new(t, cfg)?;
    let steps = super::uniform_steps(cfg.step, cfg.horizon);
    Ok(LevyIncrements {
        sampler,
        rng: stream_rng(seed, 0),
        steps,
        next: 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::IdMeasure;

    #[test]
    fn gamma_sampler_moments() {
        let g = IdMeasure::<f64>::gamma(1.0, 1.0).unwrap();
        let s = LevySampler::new(g.triplet().unwrap(), &PathConfig::default()).unwrap();
        // M(r > 1e-3) = E1(1e-3)
        assert!((s.jump_rate() - 6.331_539_364_136_149).abs() < 1e-8, "{}", s.jump_rate());
        // drift = 1 − e^{−ε}
        assert!((s.drift()[0] - (1.0 - (-1e-3f64).exp())).abs() < 1e-12);
    }

    #[test]
    fn table_sampler_matches_exponential_tail_mean() {
        // jump law ∝ e^{−r}/r on (ε, ∞): E[J] = e^{−ε} / E1(ε)
        let g = IdMeasure::<f64>::gamma(1.0, 1.0).unwrap();
        let s = LevySampler::new(g.triplet().unwrap(), &PathConfig::default()).unwrap();
        let mut rng = stream_rng(7, 0);
        let n = 200_000;
        let mut acc = 0.0;
        let mut sq = 0.0;
        for _ in 0..n {
            let mut out = [0.0];
            s.add_jump(&mut rng, 1.0, &mut out);
            acc += out[0];
            sq += out[0] * out[0];
        }
        let mean = acc / n as f64;
        let sd = ((sq / n as f64 - mean * mean) / n as f64).sqrt();
        let want = (-1e-3f64).exp() / s.jump_rate();
        assert!((mean - want).abs() < 4.0 * sd, "{mean} vs {want} ± {sd}");
    }
}
