//! Modulated translates `g_{R,t}(s) = e^{iR(s-t)} h(s-t)` of the kernel,
//! their norms, the two-term bound on those norms and the optimised choice
//! of `R` that turns each into a per-`t` decay floor.
//!
//! The norm of a witness is
//!
//! ```text
//! ‖g‖_X = ‖g‖_{L¹} + ‖g‖_∞ + ‖g'‖_∞ + sup_{λ ∈ Ω'_M} |ĝ(λ)| / W(|Im λ|)
//! ```
//!
//! with `W = K` when a second growth function is supplied and `W = M`
//! otherwise; the derivative variant weights `|λ ĝ(λ)|` instead. The
//! supremum is taken over a region grid using the closed-form transform
//! `ĝ(λ) = e^{-λt} ĥ(λ - iR)`, in log space so that the `e^{t/M}` and
//! `exp(-e^{ε|y|})` factors never overflow separately.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::growth::{rate_function, right_inverse, GrowthFunction, DEFAULT_INVERSE_TOL};
use crate::regions::{Region, RegionGrid, SampleSpec};
use crate::search::golden_section;
use crate::specialfn::KernelH;
use crate::xforms::{self, SampledComplexFunction, Support};
use crate::{Error, Result};

pub use crate::xforms::Variant;

/// Largest `R` searched by default.
pub const DEFAULT_R_MAX: f64 = 1e6;

/// Points per row of the auto-sized norm grid, and refinement levels at each edge.
const GRID_NX: usize = 16;
const GRID_REFINE: usize = 16;

/// Transform checks performed by [`g_rt`].
const TRANSFORM_CHECKS: usize = 8;
const TRANSFORM_TOL: f64 = 1e-5;

/// A modulated translate of the kernel.
#[derive(Debug, Clone)]
pub struct Witness<'h> {
    pub h: &'h KernelH,
    pub r: f64,
    pub t: f64,
    /// Samples on `t + (kernel grid)`.
    pub samples: SampledComplexFunction,
    /// Largest transform deviation seen at construction.
    pub transform_error: f64,
}

impl<'h> Witness<'h> {
    /// `ĝ(λ) = e^{-λt} ĥ(λ - iR)`.
    pub fn transform(&self, lambda: Complex64) -> Complex64 {
        let shifted = lambda - Complex64::new(0.0, self.r);
        (-lambda * self.t).exp() * self.h.transform(shifted)
    }

    /// `ln|ĝ(λ)| = -t·Re λ + ln|ĥ(λ - iR)|`.
    pub fn log_abs_transform(&self, lambda: Complex64) -> f64 {
        -self.t * lambda.re + self.h.log_abs_transform(lambda - Complex64::new(0.0, self.r))
    }

    /// `g(s)` at a sample point `s = t + u` of the kernel grid.
    pub fn value_at(&self, s: f64) -> Option<Complex64> {
        self.samples.index_of(s).map(|k| self.samples.values[k])
    }

    /// The peak `s = t + t0`, where `|g| = 1`.
    pub fn peak(&self) -> f64 {
        self.t + self.h.t0
    }

    /// `‖g'‖_∞ = sup |iR h + h'|` on the kernel grid.
    pub fn derivative_sup(&self) -> f64 {
        let i_r = Complex64::new(0.0, self.r);
        self.h
            .samples
            .values
            .iter()
            .zip(&self.h.derivative.values)
            .map(|(h, dh)| (i_r * h + dh).norm())
            .fold(0.0, f64::max)
    }
}

/// Builds `g_{R,t}` and checks its transform against quadrature at eight
/// seeded points of the strip near `Im λ = R`.
pub fn g_rt(h: &KernelH, r: f64, t: f64) -> Result<Witness<'_>> {
    if !(r >= 1.0 && t >= 1.0) || !r.is_finite() || !t.is_finite() {
        return Err(Error::Domain(format!("witnesses need R, t >= 1 (got R = {r}, t = {t})")));
    }
    let samples = sample_witness(h, r, t)?;
    let mut w = Witness { h, r, t, samples, transform_error: 0.0 };
    let mut rng = ChaCha8Rng::seed_from_u64(r.to_bits() ^ t.to_bits().rotate_left(17));
    let half_width = 0.9 * h.strip.strip_half_width;
    let spread = 3.0 / h.epsilon;
    let mut worst: f64 = 0.0;
    for _ in 0..TRANSFORM_CHECKS {
        let lambda = Complex64::new(rng.gen_range(-half_width..half_width), r + rng.gen_range(-spread..spread));
        let err = transform_deviation(&w, lambda)?;
        if err > TRANSFORM_TOL {
            return Err(Error::Construction(format!("witness transform mismatch {err:e} at λ = {lambda}")));
        }
        worst = worst.max(err);
    }
    w.transform_error = worst;
    Ok(w)
}

/// Deviation between quadrature and closed form, both scaled by `e^{λt}`:
/// `|∫e^{-λ(s-t)} g(s) ds - ĥ(λ - iR)| / max(1, |ĥ(λ - iR)|)`.
pub fn transform_deviation(w: &Witness<'_>, lambda: Complex64) -> Result<f64> {
    let q = xforms::laplace_about(&w.samples, lambda, w.t, xforms::LAPLACE_TAIL_TOL)?;
    let closed = w.h.transform(lambda - Complex64::new(0.0, w.r));
    Ok((q.value - closed).norm() / closed.norm().max(1.0))
}

fn sample_witness(h: &KernelH, r: f64, t: f64) -> Result<SampledComplexFunction> {
    let k = &h.samples;
    let values = k
        .values
        .iter()
        .enumerate()
        .map(|(j, v)| Complex64::from_polar(1.0, r * k.time(j)) * v)
        .collect();
    Ok(SampledComplexFunction::new(t + k.start, k.step, values, Support::FullLine)?.with_tails(k.tail_left, k.tail_right))
}

/// The parts of `‖g‖_X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormBreakdown {
    pub l1: f64,
    /// `‖g‖_∞ + ‖g'‖_∞`.
    pub w1inf: f64,
    pub weighted_sup: f64,
    /// `ln` of the weighted supremum (finite even when the supremum overflows).
    pub log_weighted_sup: f64,
    pub variant: Variant,
    pub total: f64,
    pub grid_id: String,
}

/// Norm of `w` with the weighted supremum over `grid`.
pub fn x_norm(w: &Witness<'_>, m: &GrowthFunction, k: Option<&GrowthFunction>, variant: Variant, grid: &RegionGrid) -> Result<NormBreakdown> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid("norm grid has no points".into()));
    }
    let log_sup = log_weighted_sup(w, m, k, variant, &grid.points);
    let weighted_sup = log_sup.exp();
    let l1 = w.h.l1_norm;
    let w1inf = w.h.linf_norm + w.derivative_sup();
    Ok(NormBreakdown {
        l1,
        w1inf,
        weighted_sup,
        log_weighted_sup: log_sup,
        variant,
        total: l1 + w1inf + weighted_sup,
        grid_id: grid.id(),
    })
}

fn log_weighted_sup(w: &Witness<'_>, m: &GrowthFunction, k: Option<&GrowthFunction>, variant: Variant, points: &[Complex64]) -> f64 {
    let weight = k.unwrap_or(m);
    points
        .par_iter()
        .map(|&z| {
            let mut v = w.log_abs_transform(z) - weight.ln_at(z.im.abs());
            if variant == Variant::Derivative {
                v += z.norm().ln();
            }
            v
        })
        .reduce(|| f64::NEG_INFINITY, f64::max)
}

/// Grid over `Ω'_M` with rows `0.05/ε` apart out to `|Im λ| ≤ y_max`.
pub fn witness_grid(m: &GrowthFunction, epsilon: f64, y_max: f64) -> Result<RegionGrid> {
    let spec = SampleSpec::with_row_spacing(y_max, 0.05 / epsilon, GRID_NX).refined(GRID_REFINE);
    Region::omega_prime_m(m.clone()).sample_with(&spec)
}

/// [`x_norm`] on a grid sized automatically: starting from `|Im λ| ≤ R + 8/ε`
/// and growing by half until the outer band `|Im λ| > y_max - 4/ε`
/// contributes less than `10⁻³` of the supremum.
pub fn x_norm_auto(w: &Witness<'_>, m: &GrowthFunction, k: Option<&GrowthFunction>, variant: Variant) -> Result<NormBreakdown> {
    let eps = w.h.epsilon;
    let mut y_max = w.r + 8.0 / eps;
    for _ in 0..24 {
        let grid = witness_grid(m, eps, y_max)?;
        let norm = x_norm(w, m, k, variant, &grid)?;
        let band: Vec<Complex64> = grid.points.iter().copied().filter(|z| z.im.abs() > grid.spec.y_max - 4.0 / eps).collect();
        let band_sup = log_weighted_sup(w, m, k, variant, &band);
        if band_sup < norm.log_weighted_sup + 1e-3f64.ln() {
            return Ok(norm);
        }
        y_max *= 1.5;
    }
    Err(Error::Construction(format!("weighted supremum still growing at |Im λ| = {y_max}")))
}

/// Value of the two-term bound and the admissibility flag.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bound {
    /// `+∞` when the exponential term overflows.
    pub value: f64,
    pub admissible: bool,
}

/// `R + (1/W(R/2))·exp(t/M(R/2))` (plain) or `R + (R/W(R/2))·exp(t/M(R/2))`
/// (derivative), with admissibility `t ≤ M(0)·exp(εR/2)`.
pub fn bound_rhs(m: &GrowthFunction, k: Option<&GrowthFunction>, r: f64, t: f64, epsilon: f64, variant: Variant) -> Result<Bound> {
    if !(r >= 1.0 && t >= 1.0) {
        return Err(Error::Domain(format!("bound needs R, t >= 1 (got R = {r}, t = {t})")));
    }
    if !(epsilon > 0.0) {
        return Err(Error::Domain(format!("epsilon must be > 0, got {epsilon}")));
    }
    let half = 0.5 * r;
    let weight = k.unwrap_or(m);
    let mut log_term = t / m.at(half) - weight.ln_at(half);
    if variant == Variant::Derivative {
        log_term += r.ln();
    }
    let value = if log_term > 709.0 { f64::INFINITY } else { r + log_term.exp() };
    Ok(Bound { value, admissible: admissible(m, r, t, epsilon) })
}

/// `t ≤ M(0)·exp(εR/2)`, compared in log form.
pub fn admissible(m: &GrowthFunction, r: f64, t: f64, epsilon: f64) -> bool {
    t.ln() <= m.m0().ln() + 0.5 * epsilon * r
}

/// Smallest admissible `R` at time `t`.
pub fn min_admissible_r(m: &GrowthFunction, t: f64, epsilon: f64) -> f64 {
    (2.0 * (t / m.m0()).ln() / epsilon).max(0.0)
}

/// `ε` entering admissibility: the construction's `ε` for the plain
/// variant, half of it for the derivative variant.
pub fn effective_epsilon(epsilon: f64, variant: Variant) -> f64 {
    match variant {
        Variant::Plain => epsilon,
        Variant::Derivative => 0.5 * epsilon,
    }
}

/// The explicit multiplier `C = 2·max{2, 2α/ε}` with `α` from the upper
/// envelope (1 when absent).
pub fn c_choice(m: &GrowthFunction, epsilon: f64) -> f64 {
    let alpha = m.envelope().upper.map_or(1.0, |u| u.alpha);
    2.0 * 2f64.max(2.0 * alpha / epsilon)
}

/// A numeric sharpness certificate at one time `t`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessCertificate {
    pub m_spec: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub k_spec: Option<String>,
    pub variant: Variant,
    pub t: f64,
    /// The `ε` used for admissibility.
    pub epsilon: f64,
    #[serde(rename = "R_star")]
    pub r_star: f64,
    #[serde(rename = "N")]
    pub n: f64,
    pub admissible: bool,
    /// `1/N` when admissible, otherwise absent.
    pub implied_floor: Option<f64>,
    pub rate_comparison: Option<f64>,
    pub kappa: Option<f64>,
    pub calibration_grid_id: Option<String>,
    pub t0: Option<f64>,
    #[serde(rename = "R_explicit")]
    pub r_explicit: Option<f64>,
    pub n_explicit: Option<f64>,
    pub explicit_admissible: Option<bool>,
    pub witness_value: f64,
}

impl WitnessCertificate {
    pub fn with_kappa(mut self, kappa: &Kappa) -> Self {
        self.kappa = Some(kappa.value);
        self.calibration_grid_id = Some(kappa.grid_id.clone());
        self
    }

    pub fn with_t0(mut self, t0: f64) -> Self {
        self.t0 = Some(t0);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("certificate serializes")
    }
}

/// Minimises the bound over admissible `R ∈ [1, R_max]`: a 64-point scan in
/// `log R`, then golden-section search around the best scan point.
///
/// `epsilon` is the construction's `ε`; the derivative variant uses `ε/2`.
pub fn optimize_r(
    m: &GrowthFunction,
    k: Option<&GrowthFunction>,
    t: f64,
    epsilon: f64,
    variant: Variant,
    r_max: f64,
) -> Result<WitnessCertificate> {
    if !(t >= 1.0) || !(r_max >= 1.0) {
        return Err(Error::Domain(format!("optimize_R needs t >= 1 and R_max >= 1 (got t = {t}, R_max = {r_max})")));
    }
    let eps = effective_epsilon(epsilon, variant);
    let rate = rate_function(m, k);
    let inv = right_inverse(&rate, t, DEFAULT_INVERSE_TOL).ok().filter(|s| *s > 0.0);
    let r_lo = min_admissible_r(m, t, eps).max(1.0);

    let mut cert = WitnessCertificate {
        m_spec: m.label().to_string(),
        k_spec: k.map(|k| k.label().to_string()),
        variant,
        t,
        epsilon: eps,
        r_star: r_lo.min(r_max),
        n: f64::INFINITY,
        admissible: false,
        implied_floor: None,
        rate_comparison: None,
        kappa: None,
        calibration_grid_id: None,
        t0: None,
        r_explicit: None,
        n_explicit: None,
        explicit_admissible: None,
        witness_value: 1.0,
    };
    if let Some(inv) = inv {
        let r_explicit = c_choice(m, eps) * inv;
        if r_explicit >= 1.0 {
            let b = bound_rhs(m, k, r_explicit, t, eps, variant)?;
            cert.r_explicit = Some(r_explicit);
            cert.n_explicit = Some(b.value);
            cert.explicit_admissible = Some(b.admissible);
        }
    }
    if r_lo > r_max {
        return Ok(cert);
    }

    let value = |log_r: f64| -> f64 {
        let r = log_r.exp().clamp(r_lo, r_max);
        bound_rhs(m, k, r, t, eps, variant).map_or(f64::INFINITY, |b| b.value)
    };
    let (a, b) = (r_lo.ln(), r_max.ln());
    let best = if b - a < 1e-12 {
        crate::search::Minimum { x: a, value: value(a), evaluations: 1 }
    } else {
        let n = 64;
        let xs: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
        let vals: Vec<f64> = xs.iter().map(|&x| value(x)).collect();
        let i = (0..n).fold(0, |best, i| if vals[i] < vals[best] { i } else { best });
        let refined = golden_section(value, xs[i.saturating_sub(1)], xs[(i + 1).min(n - 1)], 1e-10, 200);
        if refined.value <= vals[i] {
            refined
        } else {
            crate::search::Minimum { x: xs[i], value: vals[i], evaluations: n }
        }
    };
    let r_star = best.x.exp().clamp(r_lo, r_max);
    let bound = bound_rhs(m, k, r_star, t, eps, variant)?;
    cert.r_star = r_star;
    cert.n = bound.value;
    cert.admissible = bound.admissible && bound.value.is_finite();
    if cert.admissible {
        cert.implied_floor = Some(1.0 / bound.value);
        cert.rate_comparison = inv.map(|s| bound.value / s);
    }
    Ok(cert)
}

/// Frozen norm-to-bound constant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Kappa {
    pub value: f64,
    /// Largest observed `‖g‖_X / bound` on the calibration grid.
    pub max_ratio: f64,
    pub safety: f64,
    pub grid_id: String,
}

/// Safety factor applied on top of the calibrated maximum ratio.
pub const KAPPA_SAFETY: f64 = 1.5;

/// Measures `κ = safety · max ‖g_{R,t}‖_X / bound_rhs(R, t)` over the
/// admissible pairs of `pairs`.
pub fn calibrate_kappa(
    h: &KernelH,
    m: &GrowthFunction,
    k: Option<&GrowthFunction>,
    variant: Variant,
    pairs: &[(f64, f64)],
    grid_id: &str,
) -> Result<Kappa> {
    let eps = effective_epsilon(h.epsilon, variant);
    let ratios: Vec<Option<f64>> = pairs
        .iter()
        .map(|&(r, t)| norm_bound_ratio(h, m, k, variant, r, t, eps))
        .collect::<Result<_>>()?;
    let max_ratio = ratios.into_iter().flatten().fold(f64::NEG_INFINITY, f64::max);
    if !max_ratio.is_finite() {
        return Err(Error::EmptyGrid("no admissible calibration pair".into()));
    }
    Ok(Kappa { value: KAPPA_SAFETY * max_ratio, max_ratio, safety: KAPPA_SAFETY, grid_id: grid_id.to_string() })
}

/// `‖g_{R,t}‖_X / bound_rhs(R, t)`, or `None` for an inadmissible pair.
pub fn norm_bound_ratio(
    h: &KernelH,
    m: &GrowthFunction,
    k: Option<&GrowthFunction>,
    variant: Variant,
    r: f64,
    t: f64,
    eps: f64,
) -> Result<Option<f64>> {
    let b = bound_rhs(m, k, r, t, eps, variant)?;
    if !b.admissible {
        return Ok(None);
    }
    let w = g_rt(h, r, t)?;
    let norm = x_norm_auto(&w, m, k, variant)?;
    Ok(Some(norm.total / b.value))
}

/// Calibration pairs: `n_t` log-spaced times in `[t_lo, t_hi]`, each with
/// `n_r` values of `R` log-spaced from the admissibility threshold up to
/// `r_span` times it.
pub fn admissible_pairs(m: &GrowthFunction, eps: f64, (t_lo, t_hi): (f64, f64), n_t: usize, n_r: usize, r_span: f64, phase: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n_t * n_r);
    for i in 0..n_t {
        let u = (i as f64 + phase) / n_t as f64;
        let t = (t_lo.ln() + (t_hi.ln() - t_lo.ln()) * u).exp();
        let r_lo = min_admissible_r(m, t, eps).max(1.0) * (1.0 + 1e-9);
        for j in 0..n_r {
            let v = (j as f64 + phase) / n_r as f64;
            out.push((r_lo * r_span.powf(v), t));
        }
    }
    out
}

/// Certificates along a time grid with ratio diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCurve {
    pub certificates: Vec<WitnessCertificate>,
    /// `c` in `M_log^{-1}(c·t)`: 1 for the plain variant, `1 + 1/β` for the derivative variant.
    pub c: f64,
    /// `N(t) / M_log^{-1}(c·t)` per point (`None` when infeasible).
    pub ratios: Vec<Option<f64>>,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub all_explicit_admissible: bool,
}

impl RateCurve {
    pub fn band(&self) -> f64 {
        self.ratio_max / self.ratio_min
    }
}

/// Optimised certificates at each `t`, computed in parallel.
pub fn sharpness_curve(
    m: &GrowthFunction,
    k: Option<&GrowthFunction>,
    t_grid: &[f64],
    epsilon: f64,
    variant: Variant,
    r_max: f64,
) -> Result<RateCurve> {
    if t_grid.is_empty() {
        return Err(Error::EmptyGrid("sharpness curve needs at least one time".into()));
    }
    if t_grid.windows(2).any(|w| w[1] <= w[0]) || t_grid[0] < 1.0 {
        return Err(Error::Domain("time grid must be increasing and start at t >= 1".into()));
    }
    let c = match variant {
        Variant::Plain => 1.0,
        Variant::Derivative => {
            let beta = m
                .envelope()
                .lower
                .map(|l| l.beta)
                .ok_or_else(|| Error::Configuration(format!("{} has no polynomial lower envelope (β) for the derivative variant", m.label())))?;
            1.0 + 1.0 / beta
        }
    };
    let certificates: Vec<WitnessCertificate> = t_grid
        .par_iter()
        .map(|&t| optimize_r(m, k, t, epsilon, variant, r_max))
        .collect::<Result<_>>()?;
    let rate = rate_function(m, k);
    let ratios: Vec<Option<f64>> = certificates
        .iter()
        .map(|cert| {
            if !cert.admissible {
                return None;
            }
            right_inverse(&rate, c * cert.t, DEFAULT_INVERSE_TOL).ok().filter(|s| *s > 0.0).map(|s| cert.n / s)
        })
        .collect();
    let finite: Vec<f64> = ratios.iter().flatten().copied().collect();
    let ratio_min = finite.iter().copied().fold(f64::INFINITY, f64::min);
    let ratio_max = finite.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let all_explicit_admissible = certificates.iter().all(|c| c.explicit_admissible == Some(true));
    Ok(RateCurve { certificates, c, ratios, ratio_min, ratio_max, all_explicit_admissible })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::growth::m_log;
    use crate::specialfn::{build_h, build_strip_function, default_kernel_grid};
    use approx::assert_relative_eq;
    use std::sync::OnceLock;

    fn kernel() -> &'static KernelH {
        static K: OnceLock<KernelH> = OnceLock::new();
        K.get_or_init(|| build_h(&build_strip_function(1.0).unwrap(), 1e-12, default_kernel_grid(1.0)).unwrap())
    }

    fn poly2() -> GrowthFunction {
        GrowthFunction::polynomial(2.0).unwrap()
    }

    #[test]
    fn witness_basics() {
        let h = kernel();
        let w = g_rt(h, 2.0, 3.0).unwrap();
        assert_relative_eq!(w.value_at(w.peak()).unwrap().norm(), 1.0, max_relative = 1e-14);
        let i = Complex64::new(0.0, 1.0);
        assert!(transform_deviation(&w, i).unwrap() < 1e-5);
        let q = xforms::laplace(&w.samples, i).unwrap().value;
        assert!((q - w.transform(i)).norm() < 1e-5);
        assert!(g_rt(h, 0.5, 3.0).is_err());
        assert!(g_rt(h, 2.0, 0.5).is_err());
    }

    #[test]
    fn norm_parts() {
        let h = kernel();
        let w = g_rt(h, 10.0, 20.0).unwrap();
        let m = poly2();
        let plain = x_norm_auto(&w, &m, None, Variant::Plain).unwrap();
        assert_eq!(plain.l1, h.l1_norm);
        assert!(plain.w1inf <= h.linf_norm + 10.0 * h.linf_norm + h.deriv_linf_norm + 1e-12);
        assert_relative_eq!(plain.total, plain.l1 + plain.w1inf + plain.weighted_sup);
        let one = GrowthFunction::constant(1.0).unwrap();
        let grid = witness_grid(&m, h.epsilon, 30.0).unwrap();
        let unit = x_norm(&w, &m, Some(&one), Variant::Plain, &grid).unwrap();
        let direct = grid.points.iter().map(|&z| w.transform(z).norm()).fold(0.0, f64::max);
        assert_relative_eq!(unit.weighted_sup, direct, max_relative = 1e-10);
        // derivative weighting dominates wherever |λ| >= 1, which is all of this grid
        assert!(grid.points.iter().all(|z| z.norm() >= 1.0 || z.im.abs() < 1.0));
    }

    #[test]
    fn bound_examples() {
        let one = GrowthFunction::constant(1.0).unwrap();
        assert!(admissible(&one, 10.0, 148.4, 1.0));
        assert!(!admissible(&one, 10.0, 148.42, 1.0));
        let b = bound_rhs(&poly2(), None, 20.0, 100.0, PI_6, Variant::Plain).unwrap();
        assert_relative_eq!(b.value, 20.0 + (100.0f64 / 121.0).exp() / 121.0, max_relative = 1e-15);
        assert!((b.value - 20.019).abs() < 1e-3);
        let d = bound_rhs(&poly2(), None, 20.0, 100.0, PI_6, Variant::Derivative).unwrap();
        assert_relative_eq!(d.value - b.value, 19.0 * (100.0f64 / 121.0).exp() / 121.0, max_relative = 1e-12);
        let huge = bound_rhs(&poly2(), None, 2.0, 1e6, PI_6, Variant::Plain).unwrap();
        assert!(huge.value.is_infinite() && !huge.admissible);
    }

    const PI_6: f64 = std::f64::consts::PI / 6.0;

    #[test]
    fn optimizer_at_thousand() {
        let c = optimize_r(&poly2(), None, 1000.0, PI_6, Variant::Plain, DEFAULT_R_MAX).unwrap();
        assert!(c.admissible);
        assert!((c.r_star - 25.0).abs() < 5.0, "{c:?}");
        assert!((c.n - 26.0).abs() < 5.2, "{c:?}");
        let inv = right_inverse(&m_log(&poly2()), 1000.0, 1e-9).unwrap();
        assert_relative_eq!(c.rate_comparison.unwrap(), c.n / inv);
        assert!((c.rate_comparison.unwrap() - 2.5).abs() < 0.5);
        let b = bound_rhs(&poly2(), None, c.r_star, 1000.0, PI_6, Variant::Derivative).unwrap();
        assert!(b.value >= c.n && b.value <= (c.r_star + 1.0) * c.n);
    }

    #[test]
    fn optimizer_infeasible() {
        let one = GrowthFunction::constant(1.0).unwrap();
        let t = 10.0 * (PI_6 / 2.0).exp();
        let c = optimize_r(&one, None, t, PI_6, Variant::Plain, 1.0).unwrap();
        assert!(!c.admissible);
        assert!(c.implied_floor.is_none());
    }

    #[test]
    fn certificate_json_keys() {
        let c = optimize_r(&poly2(), None, 1000.0, PI_6, Variant::Plain, DEFAULT_R_MAX).unwrap();
        let v: serde_json::Value = serde_json::from_str(&c.to_json()).unwrap();
        for key in ["m_spec", "variant", "t", "epsilon", "R_star", "N", "admissible", "implied_floor", "rate_comparison", "kappa", "calibration_grid_id"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v.get("k_spec").is_none());
        let back: WitnessCertificate = serde_json::from_str(&c.to_json()).unwrap();
        assert_eq!(back, c);
    }

    #[test]
    fn derivative_curve_needs_beta() {
        let c = sharpness_curve(&poly2(), None, &[100.0, 1000.0], PI_6, Variant::Derivative, DEFAULT_R_MAX).unwrap();
        assert_relative_eq!(c.c, 1.5);
        let exp = GrowthFunction::parse("exp:alpha=1").unwrap().with_envelope(Default::default());
        assert!(matches!(
            sharpness_curve(&exp, None, &[100.0], PI_6, Variant::Derivative, DEFAULT_R_MAX),
            Err(Error::Configuration(_))
        ));
    }
}
