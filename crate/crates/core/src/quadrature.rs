//! Globally adaptive Gauss–Kronrod (10/21) quadrature for complex-valued
//! integrands on finite and infinite intervals.
//!
//! The error estimate and its rescaling follow QUADPACK's `qk21`/`qag`.
//! Infinite endpoints are mapped onto the unit interval before subdivision.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[allow(clippy::excessive_precision)]
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689_003,
    0.973_906_528_517_171_720_077_964_012_084_452,
    0.930_157_491_355_708_226_001_207_180_059_508,
    0.865_063_366_688_984_510_732_096_688_423_493,
    0.780_817_726_586_416_897_063_717_578_345_042,
    0.679_409_568_299_024_406_234_327_365_114_874,
    0.562_757_134_668_604_683_339_000_099_272_694,
    0.433_395_394_129_247_190_799_265_943_165_784,
    0.294_392_862_701_460_198_131_126_603_103_866,
    0.148_874_338_981_631_210_884_826_001_129_720,
    0.0,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893_332,
    0.149_451_349_150_580_593_145_776_339_657_697,
    0.219_086_362_515_982_043_995_534_934_228_163,
    0.269_266_719_309_996_355_091_226_921_569_469,
    0.295_524_224_714_752_870_173_892_994_651_338,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062_192,
    0.032_558_162_307_964_727_478_818_972_459_390,
    0.054_755_896_574_351_996_031_381_300_244_580,
    0.075_039_674_810_919_952_767_043_140_916_190,
    0.093_125_454_583_697_605_535_065_465_083_366,
    0.109_387_158_802_297_641_899_210_590_325_805,
    0.123_491_976_262_065_851_077_958_109_831_074,
    0.134_709_217_311_473_325_928_054_001_771_707,
    0.142_775_938_577_060_080_797_094_273_138_717,
    0.147_739_104_901_338_491_374_841_515_972_068,
    0.149_445_554_002_916_905_664_936_468_389_821,
];

/// Stopping rule for [`adaptive`].
#[derive(Debug, Clone, Copy)]
pub struct QuadConfig<T> {
    pub rel_tol: T,
    pub abs_tol: T,
    pub max_intervals: usize,
    /// A run that exhausts its interval budget is still accepted by
    /// [`integrate`] when its error estimate is within this multiple of the
    /// requested tolerance (roundoff-limited nested integrands).
    pub accept_factor: T,
}

impl<T: Scalar> Default for QuadConfig<T> {
    fn default() -> Self {
        Self {
            rel_tol: T::of(1e-10).max(T::quad_rel_floor()),
            abs_tol: T::of(1e-14).max(T::min_positive_value()),
            max_intervals: 400,
            accept_factor: T::of(100.0),
        }
    }
}

impl<T: Scalar> QuadConfig<T> {
    pub fn with_rel_tol(mut self, rel_tol: T) -> Self {
        self.rel_tol = rel_tol.max(T::quad_rel_floor());
        self
    }

    pub fn with_max_intervals(mut self, n: usize) -> Self {
        self.max_intervals = n;
        self
    }
}

/// Outcome of an adaptive run, converged or not.
#[derive(Debug, Clone, Copy)]
pub struct Estimate<T> {
    pub value: Complex<T>,
    pub abs_err: T,
    /// Tolerance the run was aiming for, `max(abs_tol, rel_tol·|value|)`.
    pub target: T,
    pub converged: bool,
    pub intervals: usize,
}

impl<T: Scalar> Estimate<T> {
    fn accepted(&self, cfg: &QuadConfig<T>) -> bool {
        self.converged || self.abs_err <= cfg.accept_factor * self.target
    }
}

#[derive(Clone, Copy)]
struct Interval<T> {
    a: T,
    b: T,
    value: Complex<T>,
    err: T,
    splittable: bool,
}

fn rescale_error<T: Scalar>(err: T, res_abs: T, res_asc: T) -> T {
    let mut scaled = err.abs();
    if res_asc != T::zero() && scaled != T::zero() {
        let scale = (T::of(200.0) * scaled / res_asc).powf(T::of(1.5));
        scaled = if scale < T::one() { res_asc * scale } else { res_asc };
    }
    let tiny = T::min_positive_value() / (T::of(50.0) * T::epsilon());
    if res_abs > tiny {
        let min_err = T::of(50.0) * T::epsilon() * res_abs;
        if min_err > scaled {
            scaled = min_err;
        }
    }
    scaled
}

fn gk21<T, F>(f: &mut F, a: T, b: T) -> Result<(Complex<T>, T)>
where
    T: Scalar,
    F: FnMut(T) -> Result<Complex<T>>,
{
    let center = (a + b) * T::of(0.5);
    let half = (b - a) * T::of(0.5);
    let abs_half = half.abs();

    let mut fv1 = [Complex::new(T::zero(), T::zero()); 10];
    let mut fv2 = [Complex::new(T::zero(), T::zero()); 10];

    let f_center = f(center)?;
    let mut res_gauss = Complex::new(T::zero(), T::zero());
    let mut res_kronrod = f_center * T::of(WGK[10]);
    let mut res_abs = f_center.norm() * T::of(WGK[10]);

    for j in 0..5 {
        let jtw = 2 * j + 1;
        let dx = half * T::of(XGK[jtw]);
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[jtw] = f1;
        fv2[jtw] = f2;
        res_gauss = res_gauss + (f1 + f2) * T::of(WG[j]);
        res_kronrod = res_kronrod + (f1 + f2) * T::of(WGK[jtw]);
        res_abs = res_abs + (f1.norm() + f2.norm()) * T::of(WGK[jtw]);
    }
    for j in 0..5 {
        let jtwm1 = 2 * j;
        let dx = half * T::of(XGK[jtwm1]);
        let f1 = f(center - dx)?;
        let f2 = f(center + dx)?;
        fv1[jtwm1] = f1;
        fv2[jtwm1] = f2;
        res_kronrod = res_kronrod + (f1 + f2) * T::of(WGK[jtwm1]);
        res_abs = res_abs + (f1.norm() + f2.norm()) * T::of(WGK[jtwm1]);
    }

    let mean = res_kronrod * T::of(0.5);
    let mut res_asc = (f_center - mean).norm() * T::of(WGK[10]);
    for j in 0..10 {
        res_asc = res_asc + ((fv1[j] - mean).norm() + (fv2[j] - mean).norm()) * T::of(WGK[j]);
    }

    let err = (res_kronrod - res_gauss).norm() * abs_half;
    let value = res_kronrod * half;
    let res_abs = res_abs * abs_half;
    let res_asc = res_asc * abs_half;
    if !(value.re.is_finite() && value.im.is_finite()) {
        return Err(Error::Quadrature {
            achieved: f64::INFINITY,
            requested: 0.0,
        });
    }
    Ok((value, rescale_error(err, res_abs, res_asc)))
}

fn adaptive_finite<T, F>(mut f: F, a: T, b: T, cfg: &QuadConfig<T>) -> Result<Estimate<T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<Complex<T>>,
{
    let zero = Complex::new(T::zero(), T::zero());
    if a == b {
        return Ok(Estimate {
            value: zero,
            abs_err: T::zero(),
            target: cfg.abs_tol,
            converged: true,
            intervals: 0,
        });
    }
    let (value, err) = gk21(&mut f, a, b)?;
    let mut intervals = vec![Interval {
        a,
        b,
        value,
        err,
        splittable: true,
    }];

    loop {
        let total = intervals.iter().fold(zero, |acc, iv| acc + iv.value);
        let total_err = intervals.iter().fold(T::zero(), |acc, iv| acc + iv.err);
        let target = cfg.abs_tol.max(cfg.rel_tol * total.norm());
        if total_err <= target {
            return Ok(Estimate {
                value: total,
                abs_err: total_err,
                target,
                converged: true,
                intervals: intervals.len(),
            });
        }

        let worst = intervals
            .iter()
            .enumerate()
            .filter(|(_, iv)| iv.splittable)
            .max_by(|x, y| x.1.err.partial_cmp(&y.1.err).unwrap_or(std::cmp::Ordering::Equal))
            .map(|(i, _)| i);
        let Some(idx) = worst.filter(|_| intervals.len() < cfg.max_intervals) else {
            return Ok(Estimate {
                value: total,
                abs_err: total_err,
                target,
                converged: false,
                intervals: intervals.len(),
            });
        };

        let iv = intervals[idx];
        let mid = (iv.a + iv.b) * T::of(0.5);
        let scale = iv.a.abs().max(iv.b.abs()).max(T::min_positive_value());
        if mid <= iv.a || mid >= iv.b || (iv.b - iv.a) <= T::of(1e3) * T::epsilon() * scale {
            intervals[idx].splittable = false;
            continue;
        }
        let (v1, e1) = gk21(&mut f, iv.a, mid)?;
        let (v2, e2) = gk21(&mut f, mid, iv.b)?;
        intervals[idx] = Interval {
            a: iv.a,
            b: mid,
            value: v1,
            err: e1,
            splittable: true,
        };
        intervals.push(Interval {
            a: mid,
            b: iv.b,
            value: v2,
            err: e2,
            splittable: true,
        });
    }
}

/// Runs the adaptive scheme on `[a, b]`, either endpoint possibly infinite,
/// and reports the estimate whether or not it met the tolerance.
pub fn adaptive<T, F>(mut f: F, a: T, b: T, cfg: &QuadConfig<T>) -> Result<Estimate<T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<Complex<T>>,
{
    if a > b {
        let mut est = adaptive(f, b, a, cfg)?;
        est.value = -est.value;
        return Ok(est);
    }
    let one = T::one();
    match (a.is_finite(), b.is_finite()) {
        (true, true) => adaptive_finite(f, a, b, cfg),
        (true, false) => adaptive_finite(
            |t: T| {
                let s = one - t;
                Ok(f(a + t / s)? * (one / (s * s)))
            },
            T::zero(),
            one,
            cfg,
        ),
        (false, true) => adaptive_finite(
            |t: T| Ok(f(b - (one - t) / t)? * (one / (t * t))),
            T::zero(),
            one,
            cfg,
        ),
        (false, false) => adaptive_finite(
            |t: T| {
                let s = one - t * t;
                Ok(f(t / s)? * ((one + t * t) / (s * s)))
            },
            -one,
            one,
            cfg,
        ),
    }
}

/// Integrates a complex integrand, failing when the error target is missed.
pub fn integrate<T, F>(f: F, a: T, b: T, cfg: &QuadConfig<T>) -> Result<Complex<T>>
where
    T: Scalar,
    F: FnMut(T) -> Result<Complex<T>>,
{
    let est = adaptive(f, a, b, cfg)?;
    if est.accepted(cfg) {
        Ok(est.value)
    } else {
        Err(Error::Quadrature {
            achieved: est.abs_err.as_f64(),
            requested: est.target.as_f64(),
        })
    }
}

/// Real-valued convenience wrapper around [`integrate`].
pub fn integrate_real<T, F>(mut f: F, a: T, b: T, cfg: &QuadConfig<T>) -> Result<T>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    integrate(|x| Ok(Complex::new(f(x)?, T::zero())), a, b, cfg).map(|z| z.re)
}

/// Real-valued [`adaptive`] returning `(value, converged)`.
pub fn adaptive_real<T, F>(mut f: F, a: T, b: T, cfg: &QuadConfig<T>) -> Result<(T, bool)>
where
    T: Scalar,
    F: FnMut(T) -> Result<T>,
{
    let est = adaptive(|x| Ok(Complex::new(f(x)?, T::zero())), a, b, cfg)?;
    Ok((est.value.re, est.accepted(cfg)))
}

/// Wynn's ε-algorithm on a sequence of partial sums; returns the deepest
/// even-column entry. Suited to alternating, slowly converging series.
pub fn wynn_epsilon<T: Scalar>(sums: &[Complex<T>]) -> Complex<T> {
    let n = sums.len();
    let zero = Complex::new(T::zero(), T::zero());
    if n < 3 {
        return sums.last().copied().unwrap_or(zero);
    }
    let mut prev = vec![zero; n];
    let mut cur = sums.to_vec();
    let mut best = sums[n - 1];
    for col in 1..n {
        let mut next = Vec::with_capacity(cur.len() - 1);
        for k in 0..cur.len() - 1 {
            let d = cur[k + 1] - cur[k];
            if d.norm().is_zero() {
                return if col % 2 == 1 { cur[k + 1] } else { best };
            }
            next.push(prev[k + 1] + d.inv());
        }
        prev = cur;
        cur = next;
        if col % 2 == 0 {
            best = *cur.last().unwrap();
        }
        if cur.len() < 2 {
            break;
        }
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> QuadConfig<f64> {
        QuadConfig::default()
    }

    #[test]
    fn wynn_accelerates_alternating_series() {
        // Σ (−1)^k/(k+1) = ln 2
        let mut acc = 0.0;
        let sums: Vec<Complex<f64>> = (0..20)
            .map(|k| {
                acc += if k % 2 == 0 { 1.0 } else { -1.0 } / (k as f64 + 1.0);
                Complex::new(acc, 0.0)
            })
            .collect();
        assert!((sums[19].re - 2f64.ln()).abs() > 1e-2);
        assert!((wynn_epsilon(&sums).re - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn polynomial_is_exact() {
        let v = integrate_real(|x: f64| Ok(x.powi(5) - 3.0 * x * x), 0.0, 2.0, &cfg()).unwrap();
        assert!((v - (64.0 / 6.0 - 8.0)).abs() < 1e-13);
    }

    #[test]
    fn complex_oscillation() {
        // ∫₀^π e^{ix} dx = 2i
        let z = integrate(|x: f64| Ok(Complex::new(0.0, x).exp()), 0.0, std::f64::consts::PI, &cfg())
            .unwrap();
        assert!(z.re.abs() < 1e-12);
        assert!((z.im - 2.0).abs() < 1e-12);
    }

    #[test]
    fn algebraic_endpoint_singularity() {
        let v = integrate_real(|x: f64| Ok(x.powf(-0.5)), 0.0, 1.0, &cfg()).unwrap();
        assert!((v - 2.0).abs() < 1e-9);
    }

    #[test]
    fn semi_infinite_ranges() {
        let v = integrate_real(|x: f64| Ok((-x).exp()), 0.0, f64::INFINITY, &cfg()).unwrap();
        assert!((v - 1.0).abs() < 1e-12);
        let w = integrate_real(|x: f64| Ok(x.exp()), f64::NEG_INFINITY, 0.0, &cfg()).unwrap();
        assert!((w - 1.0).abs() < 1e-12);
        let g = integrate_real(
            |x: f64| Ok((-x * x).exp()),
            f64::NEG_INFINITY,
            f64::INFINITY,
            &cfg(),
        )
        .unwrap();
        assert!((g - std::f64::consts::PI.sqrt()).abs() < 1e-11);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let v = integrate_real(|x: f64| Ok(x), 1.0, 0.0, &cfg()).unwrap();
        assert!((v + 0.5).abs() < 1e-14);
    }

    #[test]
    fn divergent_integral_is_not_converged() {
        let est = adaptive(
            |x: f64| Ok(Complex::new(1.0 / x, 0.0)),
            0.0,
            1.0,
            &cfg(),
        )
        .unwrap();
        assert!(!est.converged);
        assert!(integrate_real(|x: f64| Ok(1.0 / x), 0.0, 1.0, &cfg()).is_err());
    }

    #[test]
    fn integrand_error_propagates() {
        let r = integrate_real(
            |_x: f64| Err(Error::Domain("boom".into())),
            0.0,
            1.0,
            &cfg(),
        );
        assert_eq!(r, Err(Error::Domain("boom".into())));
    }

    #[test]
    fn single_precision_runs() {
        let c = QuadConfig::<f32>::default();
        let v = integrate_real(|x: f32| Ok(x.sin()), 0.0, std::f32::consts::PI, &c).unwrap();
        assert!((v - 2.0).abs() < 1e-5);
    }
}
