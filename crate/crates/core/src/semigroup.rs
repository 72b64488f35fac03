//! Two semigroup models whose decay rates bracket the logarithmic loss.
//!
//! The diagonal multiplication semigroup with eigenvalues
//! `λ_n = -1/M(s_n) + i s_n` has `‖R(is, A)‖ ≍ M(|s|)` and decays like
//! `1/M⁻¹(t)`. The left-shift semigroup on the witness space admits explicit
//! vectors `f` with `‖T(τ)A⁻¹‖ ≥ |f(τ + t0)| / ‖f'‖_X = 1/‖f'‖_X`, which decay
//! only like `1/M_log⁻¹(cτ)`.

use std::io::Write;
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::growth::{find_regularity_constant, linear_grid, right_inverse, m_log, GrowthFunction, RateParams, DEFAULT_INVERSE_TOL};
use crate::regions::{Region, SampleSpec};
use crate::search::golden_section;
use crate::specialfn::KernelH;
use crate::witness::{admissible, bound_rhs, effective_epsilon, g_rt, Variant, Witness};
use crate::{Error, Result};

/// Slopes above this count as non-decaying.
pub const NON_DECAYING_SLOPE: f64 = -1e-3;

/// How the frequencies `s_n` are laid out.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FrequencyRule {
    /// `s_n = base^n` for `n = 1..=count`.
    Geometric { base: f64, count: usize },
    /// `s_n = step·n` for `n = 1..=count`.
    Arithmetic { step: f64, count: usize },
    Explicit(Vec<f64>),
}

impl Default for FrequencyRule {
    fn default() -> Self {
        FrequencyRule::Geometric { base: 2.0, count: 20 }
    }
}

impl FrequencyRule {
    pub fn frequencies(&self) -> Vec<f64> {
        match self {
            FrequencyRule::Geometric { base, count } => (1..=*count).map(|n| base.powi(n as i32)).collect(),
            FrequencyRule::Arithmetic { step, count } => (1..=*count).map(|n| step * n as f64).collect(),
            FrequencyRule::Explicit(v) => v.clone(),
        }
    }
}

/// A diagonal generator with eigenvalues `λ_n = -1/M(s_n) + i s_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultSemigroupSpec {
    pub m: GrowthFunction,
    pub frequencies: Vec<f64>,
    pub eigenvalues: Vec<Complex64>,
}

pub fn mult_semigroup(m: &GrowthFunction, rule: &FrequencyRule) -> Result<MultSemigroupSpec> {
    let frequencies = rule.frequencies();
    if frequencies.len() < 2 {
        return Err(Error::Domain(format!("need at least 2 frequencies, got {}", frequencies.len())));
    }
    if frequencies.iter().any(|s| !(*s > 0.0 && s.is_finite())) || frequencies.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Domain("frequencies must be positive and increasing".into()));
    }
    let eigenvalues = frequencies.iter().map(|&s| Complex64::new(-1.0 / m.at(s), s)).collect();
    Ok(MultSemigroupSpec { m: m.clone(), frequencies, eigenvalues })
}

/// `‖R(is, A)‖ = max_n 1/|is - λ_n|`.
pub fn resolvent_norm(spec: &MultSemigroupSpec, s: f64) -> f64 {
    let is = Complex64::new(0.0, s);
    spec.eigenvalues.iter().map(|&l| 1.0 / (is - l).norm()).fold(0.0, f64::max)
}

/// `e^{-t/M(s_n)} / |λ_n|`, the contribution of one eigenvector.
pub fn mode_decay(spec: &MultSemigroupSpec, n: usize, t: f64) -> f64 {
    let l = spec.eigenvalues[n];
    (t * l.re).exp() / l.norm()
}

/// `‖T(t)A⁻¹‖ = max_n e^{-t/M(s_n)} / |λ_n|`.
pub fn decay_norm(spec: &MultSemigroupSpec, t: f64) -> Result<f64> {
    if !(t >= 0.0) {
        return Err(Error::Domain(format!("t must be >= 0, got {t}")));
    }
    Ok((0..spec.eigenvalues.len()).map(|n| mode_decay(spec, n, t)).fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ReportKind {
    Multiplication,
    ShiftLowerBound,
}

/// Decay measurements (or certified lower bounds) with comparison curves.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecayReport {
    pub kind: ReportKind,
    pub m_spec: String,
    pub t: Vec<f64>,
    /// `NaN` marks an infeasible point.
    pub measured: Vec<f64>,
    pub admissible: Vec<bool>,
    /// `R*` per point for shift reports.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub r_star: Vec<f64>,
    /// `d₁ / M_log⁻¹(c·t)`.
    pub curve_mlog: Vec<f64>,
    /// `d₂ / M⁻¹(C·t)`.
    pub curve_minv: Vec<f64>,
    pub fit: Option<RateFit>,
    pub metadata: Vec<(String, String)>,
}

/// Constants and slopes attached by [`compare_rates`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateFit {
    pub d_mlog: f64,
    pub d_minv: f64,
    pub c: f64,
    pub c_minv: f64,
    /// Least-squares slope of `ln measured` against `ln t`.
    pub slope_measured: f64,
    pub slope_mlog: f64,
    pub slope_minv: f64,
    /// RMS of `ln measured - ln curve` over the fitting window.
    pub residual_mlog: f64,
    pub residual_minv: f64,
    pub non_decaying: bool,
    pub fit_points: usize,
}

impl DecayReport {
    pub fn new(kind: ReportKind, m: &GrowthFunction, t: Vec<f64>, measured: Vec<f64>, admissible: Vec<bool>) -> Result<Self> {
        if t.is_empty() || t.len() != measured.len() || t.len() != admissible.len() {
            return Err(Error::EmptyGrid("decay report needs matching, non-empty columns".into()));
        }
        if t.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Domain("decay report times must be increasing".into()));
        }
        let n = t.len();
        Ok(DecayReport {
            kind,
            m_spec: m.label().to_string(),
            t,
            measured,
            admissible,
            r_star: Vec::new(),
            curve_mlog: vec![f64::NAN; n],
            curve_minv: vec![f64::NAN; n],
            fit: None,
            metadata: Vec::new(),
        })
    }

    pub fn feasible(&self, i: usize) -> bool {
        self.measured[i].is_finite() && self.measured[i] > 0.0
    }

    /// Linear interpolation of `ln measured` in `ln t` (feasible points only).
    pub fn measured_at(&self, t: f64) -> Option<f64> {
        let pts: Vec<(f64, f64)> = (0..self.t.len()).filter(|&i| self.feasible(i)).map(|i| (self.t[i].ln(), self.measured[i].ln())).collect();
        let x = t.ln();
        let k = pts.windows(2).position(|w| w[0].0 <= x + 1e-12 && x <= w[1].0 + 1e-12)?;
        let ((x0, y0), (x1, y1)) = (pts[k], pts[k + 1]);
        Some((y0 + (y1 - y0) * (x - x0) / (x1 - x0)).exp())
    }

    /// CSV with columns `t, measured_or_lower, curve_mlog, curve_minv, admissible`.
    pub fn write_csv(&self, out: impl Write) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let to_err = |e: csv::Error| Error::Parse(e.to_string());
        w.write_record(["t", "measured_or_lower", "curve_mlog", "curve_minv", "admissible"]).map_err(to_err)?;
        for i in 0..self.t.len() {
            w.write_record([
                fmt_float(self.t[i]),
                fmt_float(self.measured[i]),
                fmt_float(self.curve_mlog[i]),
                fmt_float(self.curve_minv[i]),
                self.admissible[i].to_string(),
            ])
            .map_err(to_err)?;
        }
        w.flush().map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        self.write_csv(file)
    }

    /// Reads the columns written by [`write_csv`](Self::write_csv); fits and
    /// metadata are not stored in the CSV.
    pub fn from_csv(path: &Path, kind: ReportKind, m: &GrowthFunction) -> Result<Self> {
        let mut r = csv::Reader::from_path(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let (mut t, mut measured, mut adm, mut mlog, mut minv) = (vec![], vec![], vec![], vec![], vec![]);
        for rec in r.records() {
            let rec = rec.map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
            if rec.len() != 5 {
                return Err(Error::Parse(format!("{}: expected 5 columns, got {}", path.display(), rec.len())));
            }
            let num = |i: usize| rec[i].trim().parse::<f64>().map_err(|_| Error::Parse(format!("{}: bad number {:?}", path.display(), &rec[i])));
            t.push(num(0)?);
            measured.push(num(1)?);
            mlog.push(num(2)?);
            minv.push(num(3)?);
            adm.push(rec[4].trim().parse::<bool>().map_err(|_| Error::Parse(format!("{}: bad flag {:?}", path.display(), &rec[4])))?);
        }
        let mut report = DecayReport::new(kind, m, t, measured, adm)?;
        report.curve_mlog = mlog;
        report.curve_minv = minv;
        Ok(report)
    }

    pub fn summary_json(&self) -> String {
        #[derive(Serialize)]
        struct Summary<'a> {
            kind: ReportKind,
            m_spec: &'a str,
            points: usize,
            feasible: usize,
            t_min: f64,
            t_max: f64,
            fit: &'a Option<RateFit>,
            metadata: &'a [(String, String)],
        }
        let s = Summary {
            kind: self.kind,
            m_spec: &self.m_spec,
            points: self.t.len(),
            feasible: (0..self.t.len()).filter(|&i| self.feasible(i)).count(),
            t_min: self.t[0],
            t_max: self.t[self.t.len() - 1],
            fit: &self.fit,
            metadata: &self.metadata,
        };
        serde_json::to_string_pretty(&s).expect("summary serializes")
    }
}

/// Seventeen significant digits, enough to round-trip every `f64`.
pub fn fmt_float(v: f64) -> String {
    format!("{v:.16e}")
}

/// `‖T(t)A⁻¹‖` of the multiplication semigroup along `t_grid`.
pub fn multiplication_report(spec: &MultSemigroupSpec, t_grid: &[f64]) -> Result<DecayReport> {
    let measured: Vec<f64> = t_grid.par_iter().map(|&t| decay_norm(spec, t)).collect::<Result<_>>()?;
    let mut r = DecayReport::new(ReportKind::Multiplication, &spec.m, t_grid.to_vec(), measured, vec![true; t_grid.len()])?;
    r.metadata.push(("frequencies".into(), spec.frequencies.len().to_string()));
    r.metadata.push(("s_max".into(), fmt_float(*spec.frequencies.last().unwrap())));
    Ok(r)
}

/// Least-squares slope of `y` against `x`.
pub fn ls_slope(x: &[f64], y: &[f64]) -> Result<f64> {
    if x.len() < 2 {
        return Err(Error::Fit(format!("slope needs at least 2 points, got {}", x.len())));
    }
    let n = x.len() as f64;
    let (mx, my) = (x.iter().sum::<f64>() / n, y.iter().sum::<f64>() / n);
    let sxx: f64 = x.iter().map(|a| (a - mx).powi(2)).sum();
    if sxx == 0.0 {
        return Err(Error::Fit("slope needs distinct abscissae".into()));
    }
    Ok(x.iter().zip(y).map(|(a, b)| (a - mx) * (b - my)).sum::<f64>() / sxx)
}

/// Attaches `d₁/M_log⁻¹(c·t)` and `d₂/M⁻¹(t)`, with `d₁, d₂` fitted in log
/// space over the latter half of the feasible points, and the log-log
/// slopes of the measurements and both curves.
pub fn compare_rates(report: &DecayReport, m: &GrowthFunction, params: &RateParams) -> Result<DecayReport> {
    let feasible: Vec<usize> = (0..report.t.len()).filter(|&i| report.feasible(i)).collect();
    if feasible.len() < 4 {
        return Err(Error::Fit(format!("rate comparison needs at least 4 feasible points, got {}", feasible.len())));
    }
    let c_minv = 1.0;
    let mlog = m_log(m);
    let inv_mlog = |t: f64| right_inverse(&mlog, params.c * t, DEFAULT_INVERSE_TOL);
    let inv_m = |t: f64| right_inverse(m, c_minv * t, DEFAULT_INVERSE_TOL);
    let mut out = report.clone();
    let mut mlog_vals = Vec::with_capacity(report.t.len());
    let mut minv_vals = Vec::with_capacity(report.t.len());
    for &t in &report.t {
        mlog_vals.push(inv_mlog(t).ok().filter(|s| *s > 0.0));
        minv_vals.push(inv_m(t).ok().filter(|s| *s > 0.0));
    }
    let window = &feasible[feasible.len() / 2..];
    let fit_d = |vals: &[Option<f64>]| -> Result<(f64, f64)> {
        let logs: Vec<f64> = window
            .iter()
            .map(|&i| vals[i].map(|s| report.measured[i].ln() + s.ln()).ok_or_else(|| Error::Fit(format!("comparison curve undefined at t = {}", report.t[i]))))
            .collect::<Result<_>>()?;
        let mean = logs.iter().sum::<f64>() / logs.len() as f64;
        let rms = (logs.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / logs.len() as f64).sqrt();
        Ok((mean.exp(), rms))
    };
    let (d_mlog, residual_mlog) = fit_d(&mlog_vals)?;
    let (d_minv, residual_minv) = fit_d(&minv_vals)?;
    out.curve_mlog = mlog_vals.iter().map(|v| v.map_or(f64::NAN, |s| d_mlog / s)).collect();
    out.curve_minv = minv_vals.iter().map(|v| v.map_or(f64::NAN, |s| d_minv / s)).collect();

    let lt: Vec<f64> = feasible.iter().map(|&i| report.t[i].ln()).collect();
    let slope_measured = ls_slope(&lt, &feasible.iter().map(|&i| report.measured[i].ln()).collect::<Vec<_>>())?;
    let curve_slope = |curve: &[f64]| -> Result<f64> {
        let (x, y): (Vec<f64>, Vec<f64>) = feasible.iter().filter(|&&i| curve[i].is_finite()).map(|&i| (report.t[i].ln(), curve[i].ln())).unzip();
        ls_slope(&x, &y)
    };
    out.fit = Some(RateFit {
        d_mlog,
        d_minv,
        c: params.c,
        c_minv,
        slope_measured,
        slope_mlog: curve_slope(&out.curve_mlog)?,
        slope_minv: curve_slope(&out.curve_minv)?,
        residual_mlog,
        residual_minv,
        non_decaying: slope_measured > NON_DECAYING_SLOPE,
        fit_points: window.len(),
    });
    Ok(out)
}

/// Controls for [`shift_witness_lower`].
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftParams {
    pub r_max: f64,
    /// Points of the `log R` prescan before golden-section refinement.
    pub seed_points: usize,
    /// Points per row of the `Ω` grid.
    pub nx: usize,
    pub edge_refine: usize,
}

impl Default for ShiftParams {
    fn default() -> Self {
        ShiftParams { r_max: 1e6, seed_points: 12, nx: 16, edge_refine: 16 }
    }
}

/// One shift lower bound at time `τ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ShiftPoint {
    pub tau: f64,
    pub r_star: f64,
    /// `‖f'‖_X`, an upper bound assembled from certified pieces.
    pub norm: f64,
    /// `1/‖f'‖_X`, or `NaN` when infeasible.
    pub lower: f64,
    /// `τ ≤ M(0)·exp(εR*/4)`, the derivative-variant condition (reported, not enforced).
    pub admissible: bool,
}

/// The left shift: `(T(τ)f)(s) = f(s + τ)` on the sample grid.
pub fn shift_apply(f: &crate::xforms::SampledComplexFunction, tau: f64) -> crate::xforms::SampledComplexFunction {
    let mut g = f.clone();
    g.start -= tau;
    g
}

/// Upper bound on `‖f'‖_X` for `f = g_{R,τ}` restricted to `[0, ∞)`:
///
/// ```text
/// ‖f'‖_X = ‖f'‖_{L∞(R₊)} + sup_{λ ∈ Ω} |λ f̂(λ) - f(0)| / M(|Im λ|)
/// ```
///
/// with `f̂ = ĝ - ĝ₋`. When the witness grid starts after `0`, `|g|` on
/// `(-∞, 0]` is covered by the kernel's left tail bound `A e^{-r d}`, so
/// `|g(0)| ≤ A e^{-r·s₀}` and `|ĝ₋(λ)| ≤ A e^{-r·s₀}/(r - Re λ)` with
/// `s₀ = τ + start(h)`; otherwise the cruder `|g(0)| ≤ ‖h‖_∞` and
/// `|ĝ₋(λ)| ≤ ∫_{-∞}^0 |g(s)| e^{-s} ds` are used.
pub fn shift_norm(w: &Witness<'_>, m: &GrowthFunction, params: &ShiftParams) -> Result<f64> {
    let h = w.h;
    let eps = h.epsilon;
    let start = w.samples.start;
    let tail = h
        .samples
        .tail_left
        .filter(|tb| tb.rate > 1.0)
        .ok_or_else(|| Error::DivergentTail("kernel has no left tail certificate faster than e^{-|t|}".into()))?;
    // (log of f(0) bound, log of the g₋ integral scale, rate)
    let (log_f0, log_minus, rate) = if start > 0.0 {
        let l = tail.amplitude.ln() - tail.rate * start;
        (l, l, tail.rate)
    } else {
        let neg: Vec<Complex64> = w
            .samples
            .values
            .iter()
            .enumerate()
            .filter(|(k, _)| w.samples.time(*k) <= 0.0)
            .map(|(k, v)| Complex64::new(v.norm() * (-w.samples.time(k)).exp(), 0.0))
            .collect();
        let mass = crate::xforms::simpson(&neg, w.samples.step).re + w.samples.step * neg.last().map_or(0.0, |v| v.re)
            + tail.amplitude * (-start).exp() / (tail.rate - 1.0);
        (h.linf_norm.ln(), mass.ln(), f64::INFINITY)
    };
    let linf = w.derivative_sup();

    let region = Region::semigroup(m.clone());
    let mut y_max = w.r + 8.0 / eps;
    for _ in 0..24 {
        let spec = SampleSpec::with_row_spacing(y_max, 0.05 / eps, params.nx).refined(params.edge_refine);
        let grid = region.sample_with(&spec)?;
        let value = |z: &Complex64| -> f64 {
            let abs = z.norm().ln();
            let main = abs + w.log_abs_transform(*z);
            // |λ|·|ĝ₋| + |f(0)|
            let minus_factor = if rate.is_finite() { abs - (rate - z.re).ln() } else { abs };
            let extra = log_add_exp(minus_factor + log_minus, log_f0);
            log_add_exp(main, extra) - m.ln_at(z.im.abs())
        };
        let sup = grid.points.par_iter().map(value).reduce(|| f64::NEG_INFINITY, f64::max);
        let band = grid
            .points
            .par_iter()
            .filter(|z| z.im.abs() > grid.spec.y_max - 4.0 / eps)
            .map(value)
            .reduce(|| f64::NEG_INFINITY, f64::max);
        if band < sup + 1e-3f64.ln() {
            return Ok(linf + sup.exp());
        }
        y_max *= 1.5;
    }
    Err(Error::Construction(format!("shift norm supremum still growing at |Im λ| = {y_max}")))
}

fn log_add_exp(a: f64, b: f64) -> f64 {
    let (hi, lo) = if a > b { (a, b) } else { (b, a) };
    if hi == f64::NEG_INFINITY {
        hi
    } else {
        hi + (lo - hi).exp().ln_1p()
    }
}

/// Certified lower bounds `‖T(τ)A⁻¹‖ ≥ 1/‖f'‖_X` along `t_grid`.
///
/// `R` is chosen per `τ` by golden-section search on `ln R` of the measured
/// norm, within a factor 4 of the minimiser of the derivative-variant
/// two-term bound, after a coarse prescan.
pub fn shift_witness_lower(m: &GrowthFunction, h: &KernelH, t_grid: &[f64], params: &ShiftParams) -> Result<DecayReport> {
    let probe = linear_grid(0.0, 1e4, 2001);
    if find_regularity_constant(m, &probe)?.is_none() {
        return Err(Error::Configuration(format!("{} is not regularly growing on [0, 1e4]", m.label())));
    }
    let beta = m
        .envelope()
        .lower
        .map(|l| l.beta)
        .ok_or_else(|| Error::Configuration(format!("{} has no polynomial lower envelope (β)", m.label())))?;
    if ((m.m0() * std::f64::consts::PI / 6.0) - h.epsilon).abs() > 1e-12 * h.epsilon {
        return Err(Error::Configuration(format!("kernel ε = {} was not built for M(0) = {}", h.epsilon, m.m0())));
    }
    let points: Vec<ShiftPoint> = t_grid.par_iter().map(|&tau| shift_point(m, h, tau, params)).collect::<Result<_>>()?;
    let mut report = DecayReport::new(
        ReportKind::ShiftLowerBound,
        m,
        t_grid.to_vec(),
        points.iter().map(|p| p.lower).collect(),
        points.iter().map(|p| p.admissible).collect(),
    )?;
    report.r_star = points.iter().map(|p| p.r_star).collect();
    report.metadata.push(("c".into(), fmt_float(1.0 + 1.0 / beta)));
    report.metadata.push(("epsilon".into(), fmt_float(h.epsilon)));
    report.metadata.push(("t0".into(), fmt_float(h.t0)));
    report.metadata.push(("grid".into(), format!("omega_semigroup:dy={}:nx={}:refine={}", fmt_float(0.05 / h.epsilon), params.nx, params.edge_refine)));
    Ok(report)
}

fn infeasible(tau: f64) -> ShiftPoint {
    ShiftPoint { tau, r_star: f64::NAN, norm: f64::INFINITY, lower: f64::NAN, admissible: false }
}

pub fn shift_point(m: &GrowthFunction, h: &KernelH, tau: f64, params: &ShiftParams) -> Result<ShiftPoint> {
    if !(tau >= 1.0) || params.r_max < 1.0 {
        return Ok(infeasible(tau));
    }
    let eps = effective_epsilon(h.epsilon, Variant::Derivative);
    // unconstrained minimiser of R + R·exp(τ/M(R/2))/M(R/2)
    let formula = |log_r: f64| bound_rhs(m, None, log_r.exp(), tau, eps, Variant::Derivative).map_or(f64::INFINITY, |b| b.value);
    let seed = crate::search::seeded_minimize(formula, 0.0, params.r_max.ln(), 64, 1e-6);
    let lo = (seed.x - 4f64.ln()).max(0.0);
    let hi = (seed.x + 4f64.ln()).min(params.r_max.ln()).max(lo);
    let measure = |log_r: f64| -> f64 {
        g_rt(h, log_r.exp(), tau).and_then(|w| shift_norm(&w, m, params)).unwrap_or(f64::INFINITY)
    };
    let n = params.seed_points.max(3);
    let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
    let vals: Vec<f64> = xs.iter().map(|&x| measure(x)).collect();
    let i = (0..n).fold(0, |b, i| if vals[i] < vals[b] { i } else { b });
    if !vals[i].is_finite() {
        return Ok(infeasible(tau));
    }
    let refined = golden_section(measure, xs[i.saturating_sub(1)], xs[(i + 1).min(n - 1)], 1e-3, 60);
    let (log_r, norm) = if refined.value < vals[i] { (refined.x, refined.value) } else { (xs[i], vals[i]) };
    let r_star = log_r.exp();
    Ok(ShiftPoint { tau, r_star, norm, lower: 1.0 / norm, admissible: admissible(m, r_star, tau, eps) })
}
