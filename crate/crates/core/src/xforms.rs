//! Transform numerics on sampled functions.
//!
//! Quadrature is composite Simpson throughout, with one Richardson halving
//! (Simpson on every other sample) as the error estimate. Functions sampled on
//! a finite grid may carry tail certificates bounding them off the grid; the
//! certified tail contribution is added to the reported error, and transforms
//! whose tail cannot be certified are refused.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::growth::GrowthFunction;
use crate::{Error, Result};

/// Absolute tail contribution above which [`laplace`] refuses to answer
/// (relative to `max(1, |value|)`).
pub const LAPLACE_TAIL_TOL: f64 = 1e-6;

/// Hard cap on the spectral truncation point in [`fourier_invert`].
pub const MAX_TRUNCATION: f64 = 1e4;

const I: Complex64 = Complex64::new(0.0, 1.0);

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// Vanishes on `(-∞, 0)`; the grid starts at or after `0`.
    HalfLine,
    /// Vanishes on `[0, ∞)`. The grid ends at `0` and the sample there holds
    /// the left limit `g(0⁻)`.
    NegativeHalfLine,
    FullLine,
}

/// `|g(t)| ≤ amplitude · e^{-rate · d}` at distance `d` beyond the grid edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailBound {
    pub amplitude: f64,
    pub rate: f64,
}

/// Complex samples on a uniform real grid `start + k·step`.
///
/// A missing tail bound means the function vanishes beyond that grid edge.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledComplexFunction {
    pub start: f64,
    pub step: f64,
    pub values: Vec<Complex64>,
    pub support: Support,
    pub tail_left: Option<TailBound>,
    pub tail_right: Option<TailBound>,
}

impl SampledComplexFunction {
    pub fn new(start: f64, step: f64, values: Vec<Complex64>, support: Support) -> Result<Self> {
        if !(step > 0.0 && step.is_finite()) {
            return Err(Error::Domain(format!("step must be > 0, got {step}")));
        }
        if values.is_empty() {
            return Err(Error::EmptyGrid("sampled function has no values".into()));
        }
        if let Some(v) = values.iter().find(|v| !v.re.is_finite() || !v.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite sample {v}")));
        }
        let end = start + step * (values.len() - 1) as f64;
        match support {
            Support::HalfLine if start < -1e-12 * step => {
                return Err(Error::Domain(format!("half-line samples must start at t >= 0, got {start}")))
            }
            Support::NegativeHalfLine if end.abs() > 1e-9 * step => {
                return Err(Error::Domain(format!("negative half-line samples must end at 0, got {end}")))
            }
            _ => {}
        }
        Ok(SampledComplexFunction { start, step, values, support, tail_left: None, tail_right: None })
    }

    /// Samples `f` at `start + k·step`, `k < len`.
    pub fn from_fn(start: f64, step: f64, len: usize, support: Support, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        let values = (0..len).map(|k| f(start + step * k as f64)).collect();
        Self::new(start, step, values, support)
    }

    pub fn with_tails(mut self, left: Option<TailBound>, right: Option<TailBound>) -> Self {
        self.tail_left = left;
        self.tail_right = right;
        self
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    #[inline]
    pub fn time(&self, k: usize) -> f64 {
        self.start + self.step * k as f64
    }

    pub fn end(&self) -> f64 {
        self.time(self.len() - 1)
    }

    /// Index of the sample at `t`, if `t` lies on the grid (to 1e-9 steps).
    pub fn index_of(&self, t: f64) -> Option<usize> {
        let k = (t - self.start) / self.step;
        let r = k.round();
        ((k - r).abs() < 1e-9 && r >= 0.0 && (r as usize) < self.len()).then_some(r as usize)
    }

    /// Every `k`-th sample starting from the first.
    pub fn subsample(&self, k: usize) -> Self {
        assert!(k >= 1);
        SampledComplexFunction {
            start: self.start,
            step: self.step * k as f64,
            values: self.values.iter().step_by(k).copied().collect(),
            support: self.support,
            tail_left: self.tail_left,
            tail_right: self.tail_right,
        }
    }

    /// Every `k`-th sample, phased so that the sample at `anchor` is kept.
    pub fn subsample_through(&self, k: usize, anchor: f64) -> Result<Self> {
        assert!(k >= 1);
        let a = self
            .index_of(anchor)
            .ok_or_else(|| Error::Alignment(format!("{anchor} is not a sample point")))?;
        let first = a % k;
        let last = first + (self.len() - 1 - first) / k * k;
        // dropped edge samples move into the tails: widen the amplitude so the
        // bound still covers them from the new edge
        let widen = |tail: Option<TailBound>, dropped: &[Complex64], shift: f64| {
            let peak = dropped.iter().map(|v| v.norm()).fold(0.0, f64::max);
            match tail {
                Some(t) => Some(TailBound { amplitude: t.amplitude.max(peak) * (t.rate * shift).exp(), rate: t.rate }),
                None if peak > 0.0 => Some(TailBound { amplitude: peak * std::f64::consts::E, rate: 1.0 / shift }),
                None => None,
            }
        };
        Ok(SampledComplexFunction {
            start: self.time(first),
            step: self.step * k as f64,
            values: self.values[first..=last].iter().step_by(k).copied().collect(),
            support: self.support,
            tail_left: widen(self.tail_left, &self.values[..first], first as f64 * self.step),
            tail_right: widen(self.tail_right, &self.values[last + 1..], (self.len() - 1 - last) as f64 * self.step),
        })
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// `‖g‖_{L¹}` by Simpson on `|g|`, plus certified tail mass.
    pub fn l1_norm(&self) -> f64 {
        let abs: Vec<Complex64> = self.values.iter().map(|v| Complex64::new(v.norm(), 0.0)).collect();
        let tails = self.tail_left.map_or(0.0, |t| t.amplitude / t.rate) + self.tail_right.map_or(0.0, |t| t.amplitude / t.rate);
        simpson(&abs, self.step).re + tails
    }

    /// Pointwise linear combination `a·self + b·other` on identical grids.
    pub fn combine(&self, a: Complex64, other: &Self, b: Complex64) -> Result<Self> {
        if self.len() != other.len() || (self.start - other.start).abs() > 1e-12 || (self.step - other.step).abs() > 1e-15 {
            return Err(Error::Alignment("linear combination needs identical grids".into()));
        }
        let values = self.values.iter().zip(&other.values).map(|(x, y)| a * x + b * y).collect();
        let scale_tail = |s: Option<TailBound>, o: Option<TailBound>| match (s, o) {
            (None, None) => None,
            (s, o) => {
                let s = s.unwrap_or(TailBound { amplitude: 0.0, rate: f64::INFINITY });
                let o = o.unwrap_or(TailBound { amplitude: 0.0, rate: f64::INFINITY });
                Some(TailBound { amplitude: a.norm() * s.amplitude + b.norm() * o.amplitude, rate: s.rate.min(o.rate) })
            }
        };
        Ok(SampledComplexFunction {
            start: self.start,
            step: self.step,
            values,
            support: self.support,
            tail_left: scale_tail(self.tail_left, other.tail_left),
            tail_right: scale_tail(self.tail_right, other.tail_right),
        })
    }
}

/// `∫|p|` for the piecewise cubic Hermite interpolant of real samples
/// `values` with slopes `derivs`, split exactly at sign changes.
///
/// Unlike Simpson on `|f|`, this stays fourth order across the kinks of `|f|`.
pub fn hermite_abs_integral(values: &[f64], derivs: &[f64], step: f64) -> f64 {
    assert_eq!(values.len(), derivs.len());
    let mut total = 0.0;
    for k in 0..values.len().saturating_sub(1) {
        total += hermite_abs_interval(values[k], values[k + 1], derivs[k], derivs[k + 1], step);
    }
    total
}

fn hermite_abs_interval(f0: f64, f1: f64, d0: f64, d1: f64, h: f64) -> f64 {
    // p(s) = a + b s + c s² + d s³ on [0, h]
    let (a, b) = (f0, d0);
    let slope = (f1 - f0) / h;
    let c = (3.0 * slope - 2.0 * d0 - d1) / h;
    let d = (d0 + d1 - 2.0 * slope) / (h * h);
    let p = |s: f64| a + s * (b + s * (c + s * d));
    let prim = |s: f64| s * (a + s * (b / 2.0 + s * (c / 3.0 + s * d / 4.0)));
    // a cubic has at most three roots, so four sub-pieces locate every crossing
    // that changes sign (tangential roots do not affect ∫|p|)
    let mut cuts = vec![0.0];
    let pieces = 4;
    for j in 0..pieces {
        let (lo, hi) = (h * j as f64 / pieces as f64, h * (j + 1) as f64 / pieces as f64);
        let (plo, phi) = (p(lo), p(hi));
        if plo * phi < 0.0 {
            let (l, r) = crate::search::bisect_predicate(|s| (p(s) > 0.0) == (phi > 0.0), lo, hi, 1e-15 * h);
            cuts.push(0.5 * (l + r));
        }
    }
    cuts.push(h);
    cuts.windows(2).map(|w| (prim(w[1]) - prim(w[0])).abs()).sum()
}

/// A quadrature value with its error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub value: Complex64,
    /// Richardson estimate plus certified tail contribution.
    pub error: f64,
}

/// Composite Simpson rule on uniformly spaced samples. An even number of
/// samples closes with Simpson's 3/8 rule on the last three intervals.
pub fn simpson(values: &[Complex64], step: f64) -> Complex64 {
    let n = values.len();
    match n {
        0 | 1 => Complex64::new(0.0, 0.0),
        2 => 0.5 * step * (values[0] + values[1]),
        3 => step / 3.0 * (values[0] + 4.0 * values[1] + values[2]),
        4 => 3.0 * step / 8.0 * (values[0] + 3.0 * values[1] + 3.0 * values[2] + values[3]),
        _ if n % 2 == 1 => simpson_odd(values, step),
        _ => {
            let head = simpson_odd(&values[..n - 3], step);
            let t = &values[n - 4..];
            head + 3.0 * step / 8.0 * (t[0] + 3.0 * t[1] + 3.0 * t[2] + t[3])
        }
    }
}

fn simpson_odd(values: &[Complex64], step: f64) -> Complex64 {
    let n = values.len();
    debug_assert!(n % 2 == 1 && n >= 3);
    let mut odd = Complex64::new(0.0, 0.0);
    let mut even = Complex64::new(0.0, 0.0);
    for (k, v) in values.iter().enumerate().take(n - 1).skip(1) {
        if k % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    step / 3.0 * (values[0] + values[n - 1] + 4.0 * odd + 2.0 * even)
}

/// Simpson value with a Richardson estimate from the every-other-sample rule.
pub fn simpson_estimate(values: &[Complex64], step: f64) -> Estimate {
    let fine = simpson(values, step);
    if values.len() < 5 {
        return Estimate { value: fine, error: 0.0 };
    }
    // the coarse rule needs the same endpoints, so drop a trailing sample
    // from the comparison when the count is even
    let m = if values.len() % 2 == 1 { values.len() } else { values.len() - 1 };
    let coarse: Vec<Complex64> = values[..m].iter().step_by(2).copied().collect();
    let fine_m = if m == values.len() { fine } else { simpson(&values[..m], step) };
    let coarse_v = simpson(&coarse, 2.0 * step);
    Estimate { value: fine, error: (fine_m - coarse_v).norm() / 15.0 }
}

/// Two-sided (or half-line, by support) Laplace transform
/// `∫ e^{-λt} g(t) dt` by composite Simpson.
pub fn laplace(g: &SampledComplexFunction, lambda: Complex64) -> Result<Estimate> {
    laplace_with_tol(g, lambda, LAPLACE_TAIL_TOL)
}

pub fn laplace_with_tol(g: &SampledComplexFunction, lambda: Complex64, tail_tol: f64) -> Result<Estimate> {
    laplace_about(g, lambda, 0.0, tail_tol)
}

/// `∫ e^{-λ(t - origin)} g(t) dt = e^{λ·origin} ĝ(λ)`, which stays in range
/// when `ĝ(λ)` itself would overflow.
pub fn laplace_about(g: &SampledComplexFunction, lambda: Complex64, origin: f64, tail_tol: f64) -> Result<Estimate> {
    if g.is_empty() {
        return Err(Error::EmptyGrid("laplace of an empty sample".into()));
    }
    let integrand: Vec<Complex64> = g
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| (-lambda * (g.time(k) - origin)).exp() * v)
        .collect();
    let mut est = simpson_estimate(&integrand, g.step);
    let x = lambda.re;
    let scale = est.value.norm().max(1.0);
    // right tail: ∫_{end}^∞ e^{-xt} A e^{-r(t-end)} dt = A e^{-x end} / (r + x)
    if let Some(tb) = g.tail_right {
        let decay = tb.rate + x;
        if !(decay > 0.0) {
            return Err(Error::DivergentTail(format!("right tail rate {} does not beat Re λ = {x}", tb.rate)));
        }
        let log_tail = tb.amplitude.ln() - x * (g.end() - origin) - decay.ln();
        if log_tail > (tail_tol * scale).ln() {
            return Err(Error::DivergentTail(format!("right tail contributes up to {:e}", log_tail.exp())));
        }
        est.error += log_tail.exp();
    }
    if let Some(tb) = g.tail_left {
        let decay = tb.rate - x;
        if !(decay > 0.0) {
            return Err(Error::DivergentTail(format!("left tail rate {} does not beat Re λ = {x}", tb.rate)));
        }
        let log_tail = tb.amplitude.ln() - x * (g.start - origin) - decay.ln();
        if log_tail > (tail_tol * scale).ln() {
            return Err(Error::DivergentTail(format!("left tail contributes up to {:e}", log_tail.exp())));
        }
        est.error += log_tail.exp();
    }
    Ok(est)
}

/// `∫_0^T e^{-λt} dt = (1 - e^{-λT})/λ`, with a Taylor branch near `λT = 0`.
pub fn segment_exp_integral(lambda: Complex64, t: f64) -> Complex64 {
    let z = lambda * t;
    if z.norm() < 1e-4 {
        // T (1 - z/2 + z²/6 - z³/24)
        t * (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0)
    } else {
        (1.0 - (-z).exp()) / lambda
    }
}

/// Declared decay of a spectrum, which fixes the truncation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SpectralDecay {
    /// `|F(u)| ≤ exp(-coeff · e^{rate·|u|})`.
    DoubleExponential { rate: f64, coeff: f64 },
    /// `|F(u)| ≤ e^{-u²/2}`.
    Gaussian,
    /// `F` vanishes outside `[-half_width, half_width]`.
    Compact { half_width: f64 },
}

impl SpectralDecay {
    /// Truncation point `U` with the declared bound below `tol·10⁻²`.
    pub fn truncation(&self, tol: f64) -> Result<f64> {
        let target = (100.0 / tol).ln();
        let u = match *self {
            SpectralDecay::DoubleExponential { rate, coeff } => {
                if !(rate > 0.0 && coeff > 0.0) {
                    return Err(Error::Domain(format!("double-exponential decay needs rate, coeff > 0 ({rate}, {coeff})")));
                }
                ((target / coeff).ln() / rate).max(1.0 / rate)
            }
            SpectralDecay::Gaussian => (2.0 * target).sqrt(),
            SpectralDecay::Compact { half_width } => half_width,
        };
        if !(u.is_finite() && u <= MAX_TRUNCATION) {
            return Err(Error::Construction(format!("spectral truncation {u} exceeds the cap {MAX_TRUNCATION}")));
        }
        Ok(u)
    }
}

/// Uniform output grid `start + k·step`, `k < len`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub start: f64,
    pub step: f64,
    pub len: usize,
}

impl GridSpec {
    pub fn new(start: f64, step: f64, len: usize) -> Self {
        GridSpec { start, step, len }
    }

    /// Grid on `[a, b]` with spacing `step` (rounded so that both ends are nodes).
    pub fn spanning(a: f64, b: f64, step: f64) -> Self {
        let n = ((b - a) / step).round() as usize;
        GridSpec { start: a, step: (b - a) / n as f64, len: n + 1 }
    }

    pub fn time(&self, k: usize) -> f64 {
        self.start + self.step * k as f64
    }
}

/// Output of a Fourier inversion.
#[derive(Debug, Clone, PartialEq)]
pub struct Inversion {
    pub function: SampledComplexFunction,
    /// Largest Richardson estimate over the output grid.
    pub error_estimate: f64,
    pub truncation: f64,
    pub intervals: usize,
}

/// `h(t) = (1/2π) ∫ e^{iut} F(u) du` on `out`, truncated at the declared
/// decay and integrated by composite Simpson, refining until the Richardson
/// estimate drops below `tol`.
pub fn fourier_invert<F>(spectrum: F, decay: SpectralDecay, tol: f64, out: GridSpec) -> Result<Inversion>
where
    F: Fn(f64) -> Complex64 + Sync,
{
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let u_max = decay.truncation(tol)?;
    let times: Vec<f64> = (0..out.len).map(|k| out.time(k)).collect();
    let line = LineIntegral { offset: 0.0, u_max };
    let (values, err, n) = line.invert(&|u| spectrum(u), &times, tol)?;
    let function = SampledComplexFunction::new(out.start, out.step, values, Support::FullLine)?;
    // |h(t)| ≤ (1/2π) ∫|F| everywhere, with no decay certified
    let mass = line.abs_mass(&|u| spectrum(u), n);
    let bound = TailBound { amplitude: mass / (2.0 * std::f64::consts::PI), rate: 0.0 };
    Ok(Inversion {
        function: function.with_tails(Some(bound), Some(bound)),
        error_estimate: err,
        truncation: u_max,
        intervals: n,
    })
}

/// Integration line `Re λ = offset` for an analytic transform.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftedLine {
    /// Real part of the line.
    pub offset: f64,
    /// Decay of `u ↦ F(offset + iu)`.
    pub decay: SpectralDecay,
}

/// Inverts an analytic transform `F(λ)` by integrating along vertical lines:
/// for `t ≥ 0` along `right` (which should sit at `Re λ < 0`), for `t < 0`
/// along `left` (at `Re λ > 0`):
///
/// ```text
/// h(t) = (1/2π) e^{offset·t} ∫ e^{iut} F(offset + iu) du
/// ```
///
/// Moving the line to where `e^{offset·t}` is small keeps the relative
/// accuracy of the far tails, and yields tail certificates with rate
/// `|offset|` on each side.
pub fn fourier_invert_analytic<F>(transform: F, right: ShiftedLine, left: ShiftedLine, tol: f64, out: GridSpec) -> Result<Inversion>
where
    F: Fn(Complex64) -> Complex64 + Sync,
{
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    if right.offset > 0.0 || left.offset < 0.0 {
        return Err(Error::Domain("right line must have Re λ <= 0 and left line Re λ >= 0".into()));
    }
    let times: Vec<f64> = (0..out.len).map(|k| out.time(k)).collect();
    let split = times.partition_point(|&t| t < 0.0);
    let mut values = Vec::with_capacity(times.len());
    let mut err: f64 = 0.0;
    let mut intervals = 0;
    let mut tails = [None, None];
    for (side, line, ts) in [(0, left, &times[..split]), (1, right, &times[split..])] {
        let li = LineIntegral { offset: line.offset, u_max: line.decay.truncation(tol)? };
        let f = |u: f64| transform(Complex64::new(line.offset, u));
        if ts.is_empty() {
            continue;
        }
        let (vals, e, n) = li.invert(&f, ts, tol)?;
        for (v, &t) in vals.iter().zip(ts) {
            values.push(v * (line.offset * t).exp());
        }
        let edge = if side == 0 { ts[0] } else { ts[ts.len() - 1] };
        err = err.max(e * (line.offset * edge).exp().max((line.offset * if side == 0 { ts[ts.len() - 1] } else { ts[0] }).exp()));
        intervals = intervals.max(n);
        let mass = li.abs_mass(&f, n) / (2.0 * std::f64::consts::PI);
        // beyond the edge: |h(t)| ≤ e^{offset·t}·mass
        tails[side] = Some(TailBound { amplitude: mass * (line.offset * edge).exp(), rate: line.offset.abs() });
    }
    let function = SampledComplexFunction::new(out.start, out.step, values, Support::FullLine)?;
    Ok(Inversion {
        function: function.with_tails(tails[0], tails[1]),
        error_estimate: err,
        truncation: left.decay.truncation(tol)?.max(right.decay.truncation(tol)?),
        intervals,
    })
}

struct LineIntegral {
    offset: f64,
    u_max: f64,
}

impl LineIntegral {
    /// Returns `(1/2π) ∫_{-U}^{U} e^{iut} F(u) du` for each `t`, the worst
    /// Richardson estimate and the final interval count.
    fn invert(&self, f: &(dyn Fn(f64) -> Complex64 + Sync), times: &[f64], tol: f64) -> Result<(Vec<Complex64>, f64, usize)> {
        let _ = self.offset;
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut n = 256usize;
        loop {
            let du = 2.0 * self.u_max / n as f64;
            let spec: Vec<(f64, Complex64)> = (0..=n)
                .map(|j| {
                    let u = -self.u_max + du * j as f64;
                    (u, f(u))
                })
                .collect();
            if let Some((u, v)) = spec.iter().find(|(_, v)| !v.re.is_finite() || !v.im.is_finite()) {
                return Err(Error::Construction(format!("non-finite spectrum sample {v} at u = {u}")));
            }
            let results: Vec<(Complex64, f64)> = times
                .par_iter()
                .map(|&t| {
                    let integrand: Vec<Complex64> = spec.iter().map(|&(u, v)| (I * (u * t)).exp() * v).collect();
                    let e = simpson_estimate(&integrand, du);
                    (e.value / two_pi, e.error / two_pi)
                })
                .collect();
            let worst = results.iter().map(|r| r.1).fold(0.0, f64::max);
            if worst <= tol || n >= 1 << 18 {
                if worst > tol {
                    return Err(Error::Construction(format!("Fourier inversion did not reach tol {tol} (estimate {worst:e})")));
                }
                return Ok((results.into_iter().map(|r| r.0).collect(), worst, n));
            }
            n *= 2;
        }
    }

    fn abs_mass(&self, f: &(dyn Fn(f64) -> Complex64 + Sync), n: usize) -> f64 {
        let du = 2.0 * self.u_max / n as f64;
        let abs: Vec<Complex64> = (0..=n)
            .map(|j| Complex64::new(f(-self.u_max + du * j as f64).norm(), 0.0))
            .collect();
        simpson(&abs, du).re
    }
}

/// Transform values at points of the complex plane, optionally with the
/// weights `W(|Im λ|)` used for suprema.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformSample {
    pub points: Vec<(Complex64, Complex64)>,
    pub weight_values: Option<Vec<f64>>,
}

impl TransformSample {
    pub fn from_fn(points: &[Complex64], f: impl Fn(Complex64) -> Complex64) -> Self {
        TransformSample { points: points.iter().map(|&z| (z, f(z))).collect(), weight_values: None }
    }

    pub fn with_weights(mut self, w: &GrowthFunction) -> Self {
        self.weight_values = Some(self.points.iter().map(|(z, _)| w.at(z.im.abs())).collect());
        self
    }
}

/// Plain `|F(λ)|/W(|Im λ|)` or derivative `|λF(λ)|/W(|Im λ|)` weighting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Variant {
    Plain,
    Derivative,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Plain => "plain",
            Variant::Derivative => "derivative",
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "plain" => Ok(Variant::Plain),
            "derivative" => Ok(Variant::Derivative),
            other => Err(Error::Parse(format!("unknown variant {other:?} (plain|derivative)"))),
        }
    }
}

/// Grid supremum of the weighted transform.
pub fn weighted_sup(sample: &TransformSample, w: &GrowthFunction, variant: Variant) -> f64 {
    sample
        .points
        .iter()
        .enumerate()
        .map(|(i, &(z, v))| {
            let weight = match &sample.weight_values {
                Some(ws) => ws[i],
                None => w.at(z.im.abs()),
            };
            let num = match variant {
                Variant::Plain => v.norm(),
                Variant::Derivative => (z * v).norm(),
            };
            num / weight
        })
        .fold(0.0, f64::max)
}

/// `n` equally spaced points on the circle `|λ - center| = radius`.
pub fn circle(center: Complex64, radius: f64, n: usize) -> Vec<Complex64> {
    (0..n)
        .map(|k| center + Complex64::from_polar(radius, 2.0 * std::f64::consts::PI * k as f64 / n as f64))
        .collect()
}

/// Mean-value residual `|mean over circle − center value|`.
///
/// For a function analytic on a neighbourhood of the closed disc the mean
/// over equispaced circle points converges geometrically to the centre value;
/// a large residual flags a singularity inside.
pub fn cauchy_check(on_contour: &TransformSample, center_value: Complex64) -> Result<f64> {
    let n = on_contour.points.len();
    if n < 16 {
        return Err(Error::Domain(format!("mean-value check needs at least 16 contour points, got {n}")));
    }
    let mean = on_contour.points.iter().map(|p| p.1).sum::<Complex64>() / n as f64;
    Ok((mean - center_value).norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn simpson_is_exact_on_cubics() {
        for n in [3usize, 4, 5, 6, 7, 10, 11] {
            let h = 2.0 / (n - 1) as f64;
            let v: Vec<Complex64> = (0..n).map(|k| {
                let t = k as f64 * h;
                c(t * t * t - t, 2.0 * t)
            }).collect();
            let s = simpson(&v, h);
            assert_relative_eq!(s.re, 2.0, epsilon = 1e-13);
            assert_relative_eq!(s.im, 4.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn laplace_of_decaying_exponential() {
        let g = SampledComplexFunction::from_fn(0.0, 1e-3, 40_001, Support::HalfLine, |t| c((-t).exp(), 0.0)).unwrap();
        let e = laplace(&g, c(1.0, 0.0)).unwrap();
        assert!((e.value - c(0.5, 0.0)).norm() < 1e-8, "{e:?}");
        assert!(e.error < 1e-8);
    }

    #[test]
    fn laplace_of_indicator_near_zero() {
        let g = SampledComplexFunction::from_fn(0.0, 1e-3, 1001, Support::HalfLine, |_| c(1.0, 0.0)).unwrap();
        for lam in [c(1e-9, 0.0), c(0.0, 0.0), c(1e-6, -2e-7)] {
            let q = laplace(&g, lam).unwrap().value;
            let closed = segment_exp_integral(lam, 1.0);
            assert!((q - closed).norm() < 1e-12);
            assert!((closed - c(1.0, 0.0)).norm() < 1e-5);
        }
        // both branches against exp_m1 on either side of the switch
        for x in [0.99e-4f64, 1.01e-4, 3e-5, 1e-3] {
            let exact = -(-x).exp_m1() / x;
            assert_relative_eq!(segment_exp_integral(c(x, 0.0), 1.0).re, exact, max_relative = 1e-11);
        }
        let exact = (1.0 - (-2.0f64).exp()) / 2.0;
        assert_relative_eq!(segment_exp_integral(c(2.0, 0.0), 1.0).re, exact, max_relative = 1e-15);
    }

    #[test]
    fn laplace_refuses_divergent_tails() {
        let edge = (-20.0f64).exp();
        let g = SampledComplexFunction::from_fn(-20.0, 0.01, 4001, Support::FullLine, |t| c((-t.abs()).exp(), 0.0))
            .unwrap()
            .with_tails(Some(TailBound { amplitude: edge, rate: 1.0 }), Some(TailBound { amplitude: edge, rate: 1.0 }));
        assert!(matches!(laplace(&g, c(-1.5, 0.0)), Err(Error::DivergentTail(_))));
        assert!(matches!(laplace(&g, c(0.9, 0.0)), Err(Error::DivergentTail(_))));
        let e = laplace(&g, c(0.0, 1.0)).unwrap();
        // 2/(1+1) = 1 for e^{-|t|} at λ = i
        assert!((e.value - c(1.0, 0.0)).norm() < 1e-5, "{e:?}");
    }

    #[test]
    fn fourier_invert_gaussian() {
        let inv = fourier_invert(|u| c((-u * u / 2.0).exp(), 0.0), SpectralDecay::Gaussian, 1e-12, GridSpec::spanning(-5.0, 5.0, 0.5)).unwrap();
        let k0 = inv.function.index_of(0.0).unwrap();
        assert_relative_eq!(inv.function.values[k0].re, 1.0 / (2.0 * std::f64::consts::PI).sqrt(), max_relative = 1e-12);
        for (k, v) in inv.function.values.iter().enumerate() {
            let t = inv.function.time(k);
            let exact = (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
            assert!((v - c(exact, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn fourier_invert_indicator() {
        let inv = fourier_invert(|_| c(1.0, 0.0), SpectralDecay::Compact { half_width: 1.0 }, 1e-12, GridSpec::spanning(-10.0, 10.0, 0.25)).unwrap();
        for (k, v) in inv.function.values.iter().enumerate() {
            let t = inv.function.time(k);
            let exact = if t == 0.0 { 1.0 / std::f64::consts::PI } else { t.sin() / (std::f64::consts::PI * t) };
            assert!((v.re - exact).abs() < 1e-11 && v.im.abs() < 1e-12, "t={t} {v} {exact}");
        }
    }

    #[test]
    fn fourier_invert_rejects_bad_input() {
        let g = GridSpec::spanning(-1.0, 1.0, 0.5);
        assert!(fourier_invert(|u| c(1.0 / u, 0.0), SpectralDecay::Compact { half_width: 1.0 }, 1e-8, g).is_err());
        assert!(fourier_invert(|_| c(1.0, 0.0), SpectralDecay::DoubleExponential { rate: 1e-9, coeff: 1.0 }, 1e-8, g).is_err());
    }

    #[test]
    fn analytic_inversion_matches_axis_inversion() {
        // F(λ) = e^{λ²/2}: along iR this is the Gaussian e^{-u²/2}
        let f = |z: Complex64| (z * z / 2.0).exp();
        let grid = GridSpec::spanning(-4.0, 4.0, 0.5);
        let line = |offset: f64| ShiftedLine { offset, decay: SpectralDecay::Gaussian };
        let a = fourier_invert_analytic(f, line(-0.5), line(0.5), 1e-12, grid).unwrap();
        for (k, v) in a.function.values.iter().enumerate() {
            let t = a.function.time(k);
            let exact = (-t * t / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt();
            assert!((v - c(exact, 0.0)).norm() < 1e-11, "t={t}");
        }
        assert!(a.function.tail_right.unwrap().rate == 0.5);
    }

    #[test]
    fn weighted_sup_examples() {
        let one = GrowthFunction::constant(1.0).unwrap();
        let s = TransformSample { points: vec![(c(0.0, 1.0), c(2.0, 0.0))], weight_values: None };
        assert_eq!(weighted_sup(&s, &one, Variant::Plain), 2.0);
        assert_eq!(weighted_sup(&s, &one, Variant::Derivative), 2.0);
        let z = TransformSample::from_fn(&circle(c(0.0, 0.0), 1.0, 20), |_| c(0.0, 0.0));
        assert_eq!(weighted_sup(&z, &one, Variant::Plain), 0.0);
        let p = GrowthFunction::polynomial(2.0).unwrap();
        let s = TransformSample { points: vec![(c(0.0, 1.0), c(8.0, 0.0))], weight_values: None }.with_weights(&p);
        assert_eq!(weighted_sup(&s, &p, Variant::Plain), 2.0);
    }

    #[test]
    fn cauchy_examples() {
        let sq = TransformSample::from_fn(&circle(c(0.0, 0.0), 1.0, 256), |z| z * z);
        assert!(cauchy_check(&sq, c(0.0, 0.0)).unwrap() < 1e-12);
        let center = c(0.1, 0.0);
        let pole = TransformSample::from_fn(&circle(center, 0.5, 256), |z| 1.0 / z);
        let r = cauchy_check(&pole, 1.0 / center).unwrap();
        assert!((r - 10.0).abs() < 1e-9, "{r}");
        let few = TransformSample::from_fn(&circle(center, 0.5, 15), |z| z);
        assert!(cauchy_check(&few, center).is_err());
    }

    #[test]
    fn hermite_abs_integral_of_sine() {
        // ∫_0^{2π} |sin| = 4
        let n = 201;
        let h = 2.0 * std::f64::consts::PI / (n - 1) as f64;
        let v: Vec<f64> = (0..n).map(|k| (k as f64 * h).sin()).collect();
        let d: Vec<f64> = (0..n).map(|k| (k as f64 * h).cos()).collect();
        assert!((hermite_abs_integral(&v, &d, h) - 4.0).abs() < 1e-8);
        // cubics are reproduced exactly, roots included
        let f = |t: f64| (t - 0.3) * (t - 0.7) * (t + 0.2);
        let df = |t: f64| (t - 0.7) * (t + 0.2) + (t - 0.3) * (t + 0.2) + (t - 0.3) * (t - 0.7);
        let prim = |t: f64| t.powi(4) / 4.0 - 0.8 * t.powi(3) / 3.0 + 0.01 * t * t / 2.0 + 0.042 * t;
        let exact = (prim(0.3) - prim(0.0)).abs() + (prim(0.7) - prim(0.3)).abs() + (prim(1.0) - prim(0.7)).abs();
        let got = hermite_abs_integral(&[f(0.0), f(1.0)], &[df(0.0), df(1.0)], 1.0);
        assert_relative_eq!(got, exact, max_relative = 1e-12);
    }

    #[test]
    fn subsample_and_index() {
        let g = SampledComplexFunction::from_fn(-1.0, 0.25, 9, Support::FullLine, |t| c(t, 0.0)).unwrap();
        assert_eq!(g.index_of(0.0), Some(4));
        assert_eq!(g.index_of(0.1), None);
        let s = g.subsample(2);
        assert_eq!(s.len(), 5);
        assert_eq!(s.step, 0.5);
        assert_eq!(s.values[4], c(1.0, 0.0));
    }

    #[test]
    fn support_validation() {
        assert!(SampledComplexFunction::new(-0.5, 0.1, vec![c(1.0, 0.0)], Support::HalfLine).is_err());
        assert!(SampledComplexFunction::new(-1.0, 0.5, vec![c(1.0, 0.0); 2], Support::NegativeHalfLine).is_err());
        assert!(SampledComplexFunction::new(-1.0, 0.5, vec![c(1.0, 0.0); 3], Support::NegativeHalfLine).is_ok());
        assert!(SampledComplexFunction::new(0.0, 0.0, vec![c(1.0, 0.0)], Support::FullLine).is_err());
        assert!(SampledComplexFunction::new(0.0, 0.1, vec![c(f64::NAN, 0.0)], Support::FullLine).is_err());
        assert!(SampledComplexFunction::new(0.0, 0.1, vec![], Support::FullLine).is_err());
    }
}
