//! Lévy spectral measures decomposed into rays.
//!
//! Each ray is a unit direction carrying radial atoms and radial density
//! segments. Scaling `x ↦ c·x` acts on the radial coordinate only, so the
//! smearing transform `∫₀¹ T_{t^{1/β}} M dt` maps ray decompositions to ray
//! decompositions.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{dot, Vector};
use crate::quadrature::{adaptive_real, integrate, integrate_real, wynn_epsilon, QuadConfig};
use crate::scalar::Scalar;

/// Radial atom of mass `w` at distance `r` from the origin.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Atom<T> {
    pub r: T,
    pub w: T,
}

/// Analytic statement about `∫^∞ log r · g(r) dr`, supplied with a segment
/// whose tail cannot be classified automatically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TailBound {
    LogIntegrable,
    LogDivergent,
}

/// Shape of a radial density, before the segment weight is applied.
#[derive(Clone)]
pub enum RadialDensity<T> {
    /// `coef · r^exponent`
    Power { coef: T, exponent: T },
    /// `coef · e^{−rate·r} / r`, the gamma spectral density.
    ExpOverR { coef: T, rate: T },
    /// Image of `source` under `∫₀¹ T_{t^{1/β}} · dt`:
    /// `β ρ^{β−1} ∫_{max(ρ, lo)}^{hi} g(r) r^{−β} dr`.
    Smeared {
        source: Arc<DensitySegment<T>>,
        beta: T,
    },
    Custom {
        label: String,
        eval: Arc<dyn Fn(T) -> T + Send + Sync>,
    },
}

impl<T: fmt::Debug> fmt::Debug for RadialDensity<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power { coef, exponent } => write!(f, "Power({coef:?}·r^{exponent:?})"),
            Self::ExpOverR { coef, rate } => write!(f, "ExpOverR({coef:?}·e^(-{rate:?}r)/r)"),
            Self::Smeared { source, beta } => write!(f, "Smeared(β={beta:?}, {source:?})"),
            Self::Custom { label, .. } => write!(f, "Custom({label})"),
        }
    }
}

/// `weight · density(r)` on the open interval `(lo, hi)`; `hi` may be `+∞`.
#[derive(Debug, Clone)]
pub struct DensitySegment<T> {
    pub lo: T,
    pub hi: T,
    pub weight: T,
    pub density: RadialDensity<T>,
    pub tail: Option<TailBound>,
}

/// Outcome of the log-moment check `∫_{‖x‖>1} log‖x‖ M(dx)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LogMoment<T> {
    Finite(T),
    Infinite,
    /// Quadrature failed to settle; divergence is suspected but not proven.
    InconclusiveDivergent,
}

impl<T> LogMoment<T> {
    pub fn is_finite(&self) -> bool {
        matches!(self, Self::Finite(_))
    }
}

/// Why a spectral measure fails the `∫ min(1, r²) M(dr) < ∞` requirement
/// or a structural check.
#[derive(Debug, Clone, PartialEq)]
pub struct Violation {
    pub ray: usize,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ray {}: {}", self.ray, self.message)
    }
}

fn cfg<T: Scalar>() -> QuadConfig<T> {
    QuadConfig::default()
}

/// Integrates `f` over consecutive pieces of the sorted breakpoint list.
fn integrate_pieces<T, F>(mut f: F, points: &[T]) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    let mut acc = T::zero();
    for w in points.windows(2) {
        if w[1] > w[0] {
            acc = acc + integrate_real(&mut f, w[0], w[1], &cfg())?;
        }
    }
    Ok(acc)
}

fn integrate_pieces_complex<T, F>(mut f: F, points: &[T]) -> Result<Complex<T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<Complex<T>>,
{
    let mut acc = Complex::new(T::zero(), T::zero());
    for w in points.windows(2) {
        if w[1] > w[0] {
            acc = acc + integrate(&mut f, w[0], w[1], &cfg())?;
        }
    }
    Ok(acc)
}

/// Cap on the half periods summed in an oscillatory tail.
const MAX_HALF_PERIODS: usize = 400;

/// Trailing partial sums handed to the ε-algorithm.
const WYNN_WINDOW: usize = 24;

/// Radius below which the compensated kernel is replaced by its leading term.
const NEAR_ORIGIN_CUT: f64 = 1e-100;

/// `[a, (interior kinks…), b]`, sorted and deduplicated.
fn pieces<T: Scalar>(a: T, b: T, kinks: &[T]) -> Vec<T> {
    let mut pts = vec![a];
    pts.extend(kinks.iter().copied().filter(|&k| k > a && k < b));
    pts.push(b);
    pts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    pts.dedup();
    pts
}

/// `∫ r^p dr` over `(a, b)`, `a ≥ 0`, `b ≤ ∞`; `None` when divergent.
fn power_integral<T: Scalar>(p: T, a: T, b: T) -> Option<T> {
    if b <= a {
        return Some(T::zero());
    }
    let q = p + T::one();
    if q.is_zero() {
        if a.is_zero() || !b.is_finite() {
            return None;
        }
        return Some((b / a).ln());
    }
    if a.is_zero() && q < T::zero() {
        return None;
    }
    if !b.is_finite() && q > T::zero() {
        return None;
    }
    let upper = if b.is_finite() { b.powf(q) } else { T::zero() };
    let lower = if a.is_zero() { T::zero() } else { a.powf(q) };
    Some((upper - lower) / q)
}

/// Antiderivative of `r^p log r`.
fn power_log_antiderivative<T: Scalar>(p: T, r: T) -> T {
    let q = p + T::one();
    if q.is_zero() {
        r.ln().powi(2) / T::of(2.0)
    } else {
        r.powf(q) * (r.ln() / q - T::one() / (q * q))
    }
}

/// `e^{ix} − 1 − ix`, stable for small `x`.
pub(crate) fn compensated_kernel<T: Scalar>(x: T) -> Complex<T> {
    let half = x * T::of(0.5);
    let re = -T::of(2.0) * half.sin() * half.sin();
    let im = if x.abs() < T::of(1e-2) {
        let x3 = x * x * x;
        -x3 / T::of(6.0) + x3 * x * x / T::of(120.0)
    } else {
        x.sin() - x
    };
    Complex::new(re, im)
}

/// `e^{ix} − 1`, stable for small `x`.
pub(crate) fn plain_kernel<T: Scalar>(x: T) -> Complex<T> {
    let half = x * T::of(0.5);
    Complex::new(-T::of(2.0) * half.sin() * half.sin(), x.sin())
}

impl<T: Scalar> DensitySegment<T> {
    pub fn new(lo: T, hi: T, density: RadialDensity<T>) -> Self {
        Self {
            lo,
            hi,
            weight: T::one(),
            density,
            tail: None,
        }
    }

    pub fn power(lo: T, hi: T, coef: T, exponent: T) -> Self {
        Self::new(lo, hi, RadialDensity::Power { coef, exponent })
    }

    pub fn exp_over_r(coef: T, rate: T) -> Self {
        Self::new(T::zero(), T::infinity(), RadialDensity::ExpOverR { coef, rate })
    }

    pub fn custom(lo: T, hi: T, label: &str, eval: impl Fn(T) -> T + Send + Sync + 'static) -> Self {
        Self::new(
            lo,
            hi,
            RadialDensity::Custom {
                label: label.to_string(),
                eval: Arc::new(eval),
            },
        )
    }

    pub fn with_tail(mut self, tail: TailBound) -> Self {
        self.tail = Some(tail);
        self
    }

    pub fn scaled(&self, c: T) -> Self {
        let mut s = self.clone();
        s.weight = s.weight * c;
        s
    }

    /// Density value at radius `r`; zero outside `(lo, hi)`.
    pub fn value(&self, r: T) -> Result<T> {
        if !(r > self.lo && r < self.hi) {
            return Ok(T::zero());
        }
        let raw = match &self.density {
            RadialDensity::Power { coef, exponent } => *coef * r.powf(*exponent),
            RadialDensity::ExpOverR { coef, rate } => *coef * (-*rate * r).exp() / r,
            RadialDensity::Smeared { source, beta } => {
                // x = r·e^v keeps the integrand scale-free for small r
                let b = *beta;
                let lower = (r.max(source.lo) / r).ln();
                let upper = (source.hi / r).ln();
                let kinks: Vec<T> = source.breakpoints().iter().map(|&k| (k / r).ln()).collect();
                let inner = integrate_pieces(
                    |v| {
                        let x = r * v.exp();
                        if x.is_infinite() {
                            return Ok(T::zero());
                        }
                        Ok(source.value(x)? * x * (-b * v).exp())
                    },
                    &pieces(lower, upper, &kinks),
                )?;
                b / r * inner
            }
            RadialDensity::Custom { eval, .. } => eval(r),
        };
        Ok(self.weight * raw)
    }

    /// Interior radii where the density may fail to be smooth.
    pub fn breakpoints(&self) -> Vec<T> {
        match &self.density {
            RadialDensity::Smeared { source, .. } => {
                let mut b = source.breakpoints();
                if source.lo > T::zero() {
                    b.push(source.lo);
                }
                b
            }
            _ => Vec::new(),
        }
    }

    /// `∫_{(a,b) ∩ (lo,hi)} φ(r) g(r) dr`, split at `1` and the density's kinks.
    pub fn integrate_against<F>(&self, mut phi: F, a: T, b: T) -> Result<T>
    where
        F: FnMut(T) -> T,
    {
        let lo = a.max(self.lo);
        let hi = b.min(self.hi);
        if hi <= lo {
            return Ok(T::zero());
        }
        let mut kinks = self.breakpoints();
        kinks.push(T::one());
        integrate_pieces(|r| Ok(phi(r) * self.value(r)?), &pieces(lo, hi, &kinks))
    }

    /// Mass of the radial interval `(r1, r2]`.
    pub fn mass(&self, r1: T, r2: T) -> Result<T> {
        let a = r1.max(self.lo);
        let b = r2.min(self.hi);
        if b <= a {
            return Ok(T::zero());
        }
        match &self.density {
            RadialDensity::Power { coef, exponent } => power_integral(*exponent, a, b)
                .map(|v| self.weight * *coef * v)
                .ok_or_else(|| Error::Domain("mass of an interval touching a non-integrable end".into())),
            RadialDensity::Smeared { source, beta } => {
                // Fubini: the fraction of t ∈ (0,1) with t^{1/β}·x ∈ (r1, r2].
                let b_ = *beta;
                let frac = |x: T| {
                    let up = (r2 / x).powf(b_).min(T::one());
                    let dn = if r1 > T::zero() { (r1 / x).powf(b_).min(T::one()) } else { T::zero() };
                    (up - dn).max(T::zero())
                };
                let mut kinks = source.breakpoints();
                kinks.push(r2);
                let v = integrate_pieces(
                    |x| Ok(source.value(x)? * frac(x)),
                    &pieces(r1.max(source.lo), source.hi, &kinks),
                )?;
                Ok(self.weight * v)
            }
            _ => self.integrate_against(|_| T::one(), a, b),
        }
    }

    fn validate(&self) -> std::result::Result<(), String> {
        if !(self.lo >= T::zero() && self.lo < self.hi) || self.lo.is_infinite() {
            return Err(format!("segment support ({}, {}) is not a radial interval", self.lo, self.hi));
        }
        if !(self.weight >= T::zero() && self.weight.is_finite()) {
            return Err(format!("segment weight {} must be finite and non-negative", self.weight));
        }
        match &self.density {
            RadialDensity::Power { coef, exponent } => {
                if !(*coef >= T::zero()) || !exponent.is_finite() {
                    return Err("power density needs coef >= 0 and a finite exponent".into());
                }
                if self.lo.is_zero() && *exponent <= -T::of(3.0) {
                    return Err(format!(
                        "min(1,r²)-integral diverges at 0: ∫ r²·r^{exponent} dr is infinite"
                    ));
                }
                if self.hi.is_infinite() && *exponent >= -T::one() {
                    return Err(format!("mass diverges at ∞: ∫ r^{exponent} dr is infinite"));
                }
                Ok(())
            }
            RadialDensity::ExpOverR { coef, rate } => {
                if !(*coef >= T::zero()) || !(*rate > T::zero()) {
                    return Err("exp-over-r density needs coef >= 0 and rate > 0".into());
                }
                Ok(())
            }
            RadialDensity::Smeared { source, beta } => {
                if !(*beta > T::zero()) {
                    return Err("smearing index must be positive".into());
                }
                // ∫ min(1, t^{2/β} r²) ≤ ∫ min(1, r²): smearing never breaks integrability.
                source.validate()
            }
            RadialDensity::Custom { eval, label } => {
                let probe_hi = if self.hi.is_finite() { self.hi } else { self.lo + T::of(10.0) };
                for k in 1..16 {
                    let r = self.lo + (probe_hi - self.lo) * T::of(k as f64 / 16.0);
                    let v = eval(r);
                    if !(v >= T::zero()) {
                        return Err(format!("density {label} is negative or NaN at r = {r}"));
                    }
                }
                let near = adaptive_real(|r| Ok(r * r * self.value(r)?), self.lo, self.hi.min(T::one()), &cfg());
                let far = if self.hi.is_infinite() {
                    self.log_scale_tail_mass()
                } else {
                    adaptive_real(|r| self.value(r), self.lo.max(T::one()), self.hi, &cfg())
                };
                for part in [near, far] {
                    match part {
                        Ok((v, true)) if v.is_finite() => {}
                        _ => return Err(format!("min(1,r²)-integral of density {label} appears divergent")),
                    }
                }
                Ok(())
            }
        }
    }

    /// `∫_{max(lo,1)}^∞ g(r) dr`, see [`Self::log_scale_mass_from`].
    fn log_scale_tail_mass(&self) -> Result<(T, bool)> {
        self.log_scale_mass_from(self.lo.max(T::one()))
    }

    /// `∫_{from}^∞ g(r) dr` in the variable `u = ln r`, cut below overflow;
    /// the cut tail is extrapolated from the power-law decay of `r·g(r)` in
    /// `u` and must be summable. Requires `from ≥ 1`.
    fn log_scale_mass_from(&self, from: T) -> Result<(T, bool)> {
        let h = |u: T| -> Result<T> {
            let r = u.exp();
            Ok(self.value(r)? * r)
        };
        let u0 = from.ln();
        let cap = T::max_value().ln() * T::of(0.9);
        let (body, ok) = adaptive_real(h, u0, cap, &cfg())?;
        let at = h(cap)?;
        if at.is_zero() {
            return Ok((body, ok));
        }
        let mid = (u0 + cap) * T::of(0.5);
        let decay = (h(mid)? / at).ln() / (cap / mid).ln();
        if !(decay > T::of(1.05)) {
            return Ok((T::infinity(), false));
        }
        Ok((body + at * cap / (decay - T::one()), ok))
    }

    /// `∫_c^∞ (e^{irs} − 1) g(r) dr` for `c ≥ 1`: the mass in log scale and
    /// the oscillatory part as a sum over half periods, accelerated.
    fn oscillatory_tail(&self, c: T, s: T) -> Result<Complex<T>> {
        let mass = match &self.density {
            RadialDensity::Power { coef, exponent } => power_integral(*exponent, c, self.hi)
                .map(|v| self.weight * *coef * v)
                .ok_or_else(|| Error::Domain("power tail is not integrable".into()))?,
            _ => match self.log_scale_mass_from(c)? {
                (v, true) if v.is_finite() => v,
                _ => return Err(Error::Domain("tail mass of the density appears divergent".into())),
            },
        };
        let wave = |r: T| -> Result<Complex<T>> { Ok(Complex::new(T::zero(), r * s).exp() * self.value(r)?) };
        let half = T::PI() / s.abs();
        let first = integrate(
            |u: T| {
                let r = u.exp();
                Ok(wave(r)? * r)
            },
            c.ln(),
            (c + half).ln(),
            &cfg(),
        )?;
        let tol = T::of(1e-13).max(T::epsilon() * T::of(100.0));
        let mut sums = vec![first];
        let mut last = first;
        let mut settled = 0;
        for k in 1..MAX_HALF_PERIODS {
            let a = c + half * T::of(k as f64);
            let piece = integrate(&wave, a, a + half, &cfg())?;
            sums.push(sums[k - 1] + piece);
            if piece.norm() <= tol * T::of(1e-3) * sums[k].norm().max(T::one()) {
                last = sums[k];
                break;
            }
            let window = &sums[sums.len().saturating_sub(WYNN_WINDOW)..];
            let est = wynn_epsilon(window);
            if (est - last).norm() <= tol * est.norm().max(T::one()) {
                settled += 1;
                if settled >= 2 {
                    last = est;
                    break;
                }
            } else {
                settled = 0;
            }
            last = est;
        }
        Ok(last - Complex::new(mass, T::zero()))
    }

    fn log_moment(&self) -> LogMoment<T> {
        let a = self.lo.max(T::one());
        if self.hi <= a {
            return LogMoment::Finite(T::zero());
        }
        if self.tail == Some(TailBound::LogDivergent) {
            return LogMoment::Infinite;
        }
        match &self.density {
            RadialDensity::Power { coef, exponent } => {
                if self.hi.is_infinite() {
                    if *exponent >= -T::one() {
                        return LogMoment::Infinite;
                    }
                    // r^{p+1} log r → 0 at ∞ for p < −1
                    let v = -power_log_antiderivative(*exponent, a);
                    LogMoment::Finite(self.weight * *coef * v)
                } else {
                    let v = power_log_antiderivative(*exponent, self.hi)
                        - power_log_antiderivative(*exponent, a);
                    LogMoment::Finite(self.weight * *coef * v)
                }
            }
            RadialDensity::Smeared { source, beta } => {
                // Fubini: ∫₀¹ log(t^{1/β}x)·1{t^{1/β}x > 1} dt = log x − (1 − x^{−β})/β for x > 1.
                let b = *beta;
                match source.log_moment() {
                    LogMoment::Finite(v) => {
                        match source.integrate_against(|x| (T::one() - x.powf(-b)) / b, T::one(), source.hi) {
                            Ok(c) if c.is_finite() => LogMoment::Finite(self.weight * (v - c)),
                            _ => LogMoment::InconclusiveDivergent,
                        }
                    }
                    other => other,
                }
            }
            _ => {
                let mut kinks = self.breakpoints();
                kinks.push(T::one());
                let pts = pieces(a, self.hi, &kinks);
                let mut acc = T::zero();
                for w in pts.windows(2) {
                    match adaptive_real(|r| Ok(r.ln() * self.value(r)?), w[0], w[1], &cfg()) {
                        Ok((v, true)) if v.is_finite() => acc = acc + v,
                        _ => return LogMoment::InconclusiveDivergent,
                    }
                }
                LogMoment::Finite(acc)
            }
        }
    }

    /// Segment image under `∫₀¹ T_{t^{1/β}} · dt`.
    pub fn smeared(&self, beta: T) -> Self {
        Self::new(
            T::zero(),
            self.hi,
            RadialDensity::Smeared {
                source: Arc::new(self.clone()),
                beta,
            },
        )
    }

    /// `∫ [e^{irs} − 1 − irs·1{r ≤ 1}] g(r) dr`
    fn exponent_contribution(&self, s: T) -> Result<Complex<T>> {
        if s.is_zero() {
            return Ok(Complex::new(T::zero(), T::zero()));
        }
        let mut kinks = self.breakpoints();
        kinks.push(T::one());
        let pts = pieces(self.lo, self.hi, &kinks);
        let term = |r: T| -> Result<Complex<T>> {
            let g = self.value(r)?;
            let k = if r <= T::one() {
                compensated_kernel(r * s)
            } else {
                plain_kernel(r * s)
            };
            Ok(k * g)
        };
        let (finite, tail) = if self.hi.is_infinite() {
            let c = pts[pts.len() - 2];
            (&pts[..pts.len() - 1], self.oscillatory_tail(c, s)?)
        } else {
            (&pts[..], Complex::new(T::zero(), T::zero()))
        };
        if !self.lo.is_zero() {
            return Ok(integrate_pieces_complex(term, finite)? + tail);
        }
        // r = e^{−u} on the piece touching the origin, where r²g(r) may sit
        // arbitrarily close to the non-integrable r^{−1}. Below r_c the kernel
        // is −(rs)²/2 and ∫₀^{r_c} r²g is extrapolated from the local order.
        let cut = T::of(NEAR_ORIGIN_CUT);
        let near = integrate(|u: T| Ok(term((-u).exp())? * (-u).exp()), -finite[1].ln(), -cut.ln(), &cfg())?;
        let h = |r: T| -> Result<T> { Ok(r * r * r * self.value(r)?) };
        let h1 = h(cut)?;
        let below = if h1.is_zero() {
            T::zero()
        } else {
            let q = (h1 / h(cut * T::of(0.5))?).log2().max(T::of(0.01)).min(T::of(3.0));
            -s * s * T::of(0.5) * h1 / q
        };
        let near = near + Complex::new(below, T::zero());
        Ok(near + integrate_pieces_complex(term, &finite[1..])? + tail)
    }
}

/// All mass carried by one direction.
#[derive(Debug, Clone)]
pub struct RadialComponent<T> {
    direction: Vector<T>,
    pub atoms: Vec<Atom<T>>,
    pub densities: Vec<DensitySegment<T>>,
}

impl<T: Scalar> RadialComponent<T> {
    /// Normalizes `direction` to unit length.
    pub fn new(direction: Vector<T>) -> Result<Self> {
        let n = direction.norm();
        if !(n > T::zero()) || !n.is_finite() {
            return Err(Error::Validation("ray direction must be a non-zero finite vector".into()));
        }
        Ok(Self {
            direction: direction.scaled(T::one() / n),
            atoms: Vec::new(),
            densities: Vec::new(),
        })
    }

    pub fn with_atom(mut self, r: T, w: T) -> Self {
        self.atoms.push(Atom { r, w });
        self
    }

    pub fn with_density(mut self, seg: DensitySegment<T>) -> Self {
        self.densities.push(seg);
        self
    }

    pub fn direction(&self) -> &Vector<T> {
        &self.direction
    }

    fn scaled(&self, c: T) -> Self {
        Self {
            direction: self.direction.clone(),
            atoms: self.atoms.iter().map(|a| Atom { r: a.r, w: a.w * c }).collect(),
            densities: self.densities.iter().map(|d| d.scaled(c)).collect(),
        }
    }

    /// Radial mass of `(r1, r2]`.
    pub fn mass(&self, r1: T, r2: T) -> Result<T> {
        let mut acc = self
            .atoms
            .iter()
            .filter(|a| a.r > r1 && a.r <= r2)
            .fold(T::zero(), |acc, a| acc + a.w);
        for d in &self.densities {
            acc = acc + d.mass(r1, r2)?;
        }
        Ok(acc)
    }

    /// `∫ φ(r) M_ray(dr)` over `(a, b]`.
    pub fn integrate_against<F>(&self, mut phi: F, a: T, b: T) -> Result<T>
    where
        F: FnMut(T) -> T,
    {
        let mut acc = self
            .atoms
            .iter()
            .filter(|at| at.r > a && at.r <= b)
            .fold(T::zero(), |acc, at| acc + at.w * phi(at.r));
        for d in &self.densities {
            acc = acc + d.integrate_against(&mut phi, a, b)?;
        }
        Ok(acc)
    }
}

/// Finite union of rays; the empty list is the zero measure.
#[derive(Debug, Clone, Default)]
pub struct SpectralMeasure<T> {
    pub rays: Vec<RadialComponent<T>>,
}

impl<T: Scalar> SpectralMeasure<T> {
    pub fn empty() -> Self {
        Self { rays: Vec::new() }
    }

    pub fn new(rays: Vec<RadialComponent<T>>) -> Self {
        Self { rays }
    }

    /// Single atom of mass `w` at the point `x ≠ 0`.
    pub fn atom(x: Vector<T>, w: T) -> Result<Self> {
        let r = x.norm();
        Ok(Self::new(vec![RadialComponent::new(x)?.with_atom(r, w)]))
    }

    pub fn is_empty(&self) -> bool {
        self.rays
            .iter()
            .all(|ray| ray.atoms.is_empty() && ray.densities.is_empty())
    }

    /// Dimension shared by all rays, `None` for no rays.
    pub fn dim(&self) -> Option<usize> {
        self.rays.first().map(|r| r.direction.dim())
    }

    pub fn scaled(&self, c: T) -> Self {
        Self {
            rays: self.rays.iter().map(|r| r.scaled(c)).collect(),
        }
    }

    /// `M + M′` by ray-list concatenation.
    pub fn sum(&self, other: &Self) -> Self {
        let mut rays = self.rays.clone();
        rays.extend(other.rays.iter().cloned());
        Self { rays }
    }

    /// Checks `∫ min(1, ‖x‖²) M(dx) < ∞` and the structural invariants.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let dim = self.dim();
        for (i, ray) in self.rays.iter().enumerate() {
            let v = |message: String| Violation { ray: i, message };
            if Some(ray.direction.dim()) != dim {
                return Err(v("rays have different dimensions".into()));
            }
            if (ray.direction.norm() - T::one()).abs() > T::of(1e-9) {
                return Err(v("direction is not a unit vector".into()));
            }
            for a in &ray.atoms {
                if !(a.r > T::zero() && a.r.is_finite()) {
                    return Err(v(format!("atom radius {} must be positive and finite", a.r)));
                }
                if !(a.w > T::zero() && a.w.is_finite()) {
                    return Err(v(format!("atom weight {} must be positive and finite", a.w)));
                }
            }
            for d in &ray.densities {
                d.validate().map_err(v)?;
            }
        }
        Ok(())
    }

    /// `∫_{‖x‖>1} log‖x‖ M(dx)`
    pub fn log_moment(&self) -> LogMoment<T> {
        let mut acc = T::zero();
        let mut inconclusive = false;
        for ray in &self.rays {
            for a in ray.atoms.iter().filter(|a| a.r > T::one()) {
                acc = acc + a.w * a.r.ln();
            }
            for d in &ray.densities {
                match d.log_moment() {
                    LogMoment::Finite(v) => acc = acc + v,
                    LogMoment::Infinite => return LogMoment::Infinite,
                    LogMoment::InconclusiveDivergent => inconclusive = true,
                }
            }
        }
        if inconclusive {
            LogMoment::InconclusiveDivergent
        } else {
            LogMoment::Finite(acc)
        }
    }

    /// Jump part of the characteristic exponent at `y`, compensated on the
    /// closed unit ball.
    pub fn exponent(&self, y: &[T]) -> Result<Complex<T>> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for ray in &self.rays {
            let s = dot(y, ray.direction.as_slice());
            if s.is_zero() {
                continue;
            }
            for a in &ray.atoms {
                let k = if a.r <= T::one() {
                    compensated_kernel(a.r * s)
                } else {
                    plain_kernel(a.r * s)
                };
                acc = acc + k * a.w;
            }
            for d in &ray.densities {
                acc = acc + d.exponent_contribution(s)?;
            }
        }
        Ok(acc)
    }

    /// Closed-form image `M^{(β)} = ∫₀¹ T_{t^{1/β}} M dt` together with the
    /// shift it induces, `∫_{‖x‖>1} x‖x‖^{−1−β} M(dx)`.
    pub fn smeared(&self, beta: T) -> Result<(Self, Vector<T>)> {
        let dim = self.dim().unwrap_or(1);
        let mut shift = Vector::zeros(dim);
        let mut rays = Vec::with_capacity(self.rays.len());
        for ray in &self.rays {
            let mut out = RadialComponent {
                direction: ray.direction.clone(),
                atoms: Vec::new(),
                densities: Vec::new(),
            };
            let mut radial = T::zero();
            for a in &ray.atoms {
                let mut seg = DensitySegment::power(T::zero(), a.r, beta * a.r.powf(-beta), beta - T::one());
                seg.weight = a.w;
                out.densities.push(seg);
                if a.r > T::one() {
                    radial = radial + a.w * a.r.powf(-beta);
                }
            }
            for d in &ray.densities {
                out.densities.push(d.smeared(beta));
                radial = radial + d.integrate_against(|r| r.powf(-beta), T::one(), d.hi)?;
            }
            shift = shift.add(&ray.direction.scaled(radial));
            rays.push(out);
        }
        Ok((Self { rays }, shift))
    }
}
