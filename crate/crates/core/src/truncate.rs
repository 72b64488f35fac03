//! Truncations `g₊ = g·χ_{[0,∞)}` and `g₋ = g·χ_{(-∞,0)}` of a two-sided
//! function, the half-plane bounds on their transforms, and the numerical
//! check that `ĝ₊` continues across the imaginary axis as `ĝ - ĝ₋`.

use std::hash::{DefaultHasher, Hash, Hasher};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::growth::GrowthFunction;
use crate::regions::Region;
use crate::specialfn::central_difference;
use crate::xforms::{self, cauchy_check, circle, laplace, SampledComplexFunction, Support, TransformSample, Variant};
use crate::{Error, Result};

/// Points per mean-value circle in [`verify_agreement`].
const CIRCLE_POINTS: usize = 64;

/// The two truncations of a sampled function.
///
/// `g_plus` holds the samples at `t ≥ 0`. `g_minus` holds those at `t < 0`
/// followed by one closing sample at `0` carrying the left limit `g(0⁻)`,
/// which for continuous `g` is `g(0)`; it is needed by the quadrature and is
/// not part of the reconstruction.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitPair {
    pub g_plus: SampledComplexFunction,
    pub g_minus: Option<SampledComplexFunction>,
    pub parent_checksum: u64,
}

/// Order-sensitive hash of the sample bits.
pub fn checksum(g: &SampledComplexFunction) -> u64 {
    let mut hasher = DefaultHasher::new();
    g.start.to_bits().hash(&mut hasher);
    g.step.to_bits().hash(&mut hasher);
    for v in &g.values {
        v.re.to_bits().hash(&mut hasher);
        v.im.to_bits().hash(&mut hasher);
    }
    hasher.finish()
}

/// Splits at `t = 0`, which must be a sample point; the `t = 0` sample goes to `g₊`.
pub fn split(g: &SampledComplexFunction) -> Result<SplitPair> {
    let zero = g
        .index_of(0.0)
        .ok_or_else(|| Error::Alignment(format!("t = 0 is not a sample point of the grid starting at {} with step {}", g.start, g.step)))?;
    let g_plus = SampledComplexFunction::new(0.0, g.step, g.values[zero..].to_vec(), Support::HalfLine)?
        .with_tails(None, g.tail_right);
    let g_minus = if zero == 0 {
        None
    } else {
        let mut values = g.values[..zero].to_vec();
        values.push(g.values[zero]);
        Some(
            SampledComplexFunction::new(g.start, g.step, values, Support::NegativeHalfLine)?
                .with_tails(g.tail_left, None),
        )
    };
    Ok(SplitPair { g_plus, g_minus, parent_checksum: checksum(g) })
}

impl SplitPair {
    /// `g₊ + g₋` on the parent grid.
    pub fn reconstruct(&self) -> Result<SampledComplexFunction> {
        let (start, tail_left, mut values) = match &self.g_minus {
            Some(m) => (m.start, m.tail_left, m.values[..m.len() - 1].to_vec()),
            None => (0.0, None, Vec::new()),
        };
        values.extend_from_slice(&self.g_plus.values);
        Ok(SampledComplexFunction::new(start, self.g_plus.step, values, Support::FullLine)?.with_tails(tail_left, self.g_plus.tail_right))
    }

    pub fn part(&self, side: Side) -> Option<&SampledComplexFunction> {
        match side {
            Side::Plus => Some(&self.g_plus),
            Side::Minus => self.g_minus.as_ref(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `g₊`, tested on `Re λ ≥ 0`.
    Plus,
    /// `g₋`, tested on `Re λ ≤ 0`.
    Minus,
}

/// Margins `bound - |lhs|` of the half-plane inequalities.
#[derive(Debug, Clone, PartialEq)]
pub struct HalfPlaneReport {
    pub side: Side,
    pub variant: Variant,
    /// `‖g_±‖_{L¹}` (plain) or `|g(0)| + ‖g'_±‖_{L¹}` (derivative).
    pub bound: f64,
    pub margins: Vec<f64>,
    pub min_margin: f64,
}

impl HalfPlaneReport {
    pub fn holds(&self, tol: f64) -> bool {
        self.min_margin >= -tol
    }
}

/// Checks `|ĝ_±(λ)| ≤ ‖g_±‖_{L¹}` (plain) or `|λĝ_±(λ)| ≤ |g(0)| + ‖g'_±‖_{L¹}`
/// (derivative) at each sample, with `λ` in the closed half-plane of `side`.
///
/// Both sides of the plain inequality use the same positive-weight Simpson
/// rule, so the discrete inequality holds exactly up to rounding and
/// certified tails. Derivatives come from finite differences on each half.
pub fn verify_halfplane_bounds(pair: &SplitPair, side: Side, lambdas: &[Complex64], variant: Variant) -> Result<HalfPlaneReport> {
    if let Some(bad) = lambdas.iter().find(|z| match side {
        Side::Plus => z.re < 0.0,
        Side::Minus => z.re > 0.0,
    }) {
        return Err(Error::Domain(format!("λ = {bad} lies outside the half-plane for {side:?}")));
    }
    let part = pair
        .part(side)
        .ok_or_else(|| Error::EmptyGrid("the negative half of this function has no samples".into()))?;
    let g0 = pair.g_plus.values[0];
    let bound = match variant {
        Variant::Plain => part.l1_norm(),
        Variant::Derivative => g0.norm() + derivative_of(part)?.l1_norm(),
    };
    let margins: Vec<f64> = lambdas
        .par_iter()
        .map(|&z| -> Result<f64> {
            let est = laplace(part, z)?;
            let lhs = match variant {
                Variant::Plain => est.value.norm(),
                Variant::Derivative => (z * est.value).norm(),
            };
            Ok(bound - lhs)
        })
        .collect::<Result<_>>()?;
    let min_margin = margins.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(HalfPlaneReport { side, variant, bound, margins, min_margin })
}

/// Finite-difference derivative of a half-line piece, with the tail
/// certificates carried over at the same rate.
fn derivative_of(g: &SampledComplexFunction) -> Result<SampledComplexFunction> {
    let re: Vec<f64> = g.values.iter().map(|v| v.re).collect();
    let im: Vec<f64> = g.values.iter().map(|v| v.im).collect();
    let (dre, dim) = (central_difference(&re, g.step), central_difference(&im, g.step));
    let values = dre.into_iter().zip(dim).map(|(a, b)| Complex64::new(a, b)).collect();
    // |g'| beyond the edge is not certified by |g|; reuse the rate with the
    // amplitude scaled by it, which is exact for pure exponentials
    let scale = |t: Option<xforms::TailBound>| t.map(|t| xforms::TailBound { amplitude: t.amplitude * t.rate.max(1.0), rate: t.rate });
    Ok(SampledComplexFunction::new(g.start, g.step, values, g.support)?.with_tails(scale(g.tail_left), scale(g.tail_right)))
}

/// Result of [`verify_agreement`].
#[derive(Debug, Clone, PartialEq)]
pub struct AgreementReport {
    /// `max |ĝ₊(λ) - (ĝ(λ) - ĝ₋(λ))|` over the grid.
    pub max_residual: f64,
    pub residuals: Vec<f64>,
    /// Largest mean-value residual over the straddling circles.
    pub cauchy_residual: f64,
    pub circles: usize,
}

/// Compares the quadrature transform of `g₊` with `ĝ - ĝ₋` on `grid`
/// (points of `Ω_M` near the imaginary axis), and checks with mean-value
/// circles straddling the axis that the function equal to `ĝ₊` on
/// `Re λ ≥ 0` and to `ĝ - ĝ₋` on `Re λ < 0` is analytic across it.
///
/// `transform` is the closed-form two-sided transform `ĝ`.
pub fn verify_agreement(
    g: &SampledComplexFunction,
    transform: Option<&(dyn Fn(Complex64) -> Complex64 + Sync)>,
    m: &GrowthFunction,
    grid: &[Complex64],
) -> Result<AgreementReport> {
    let transform = transform.ok_or_else(|| Error::Unsupported("agreement needs a closed-form two-sided transform".into()))?;
    if grid.is_empty() {
        return Err(Error::EmptyGrid("agreement grid has no points".into()));
    }
    let region = Region::omega_m(m.clone());
    if let Some(bad) = grid.iter().find(|z| !region.contains(**z)) {
        return Err(Error::Domain(format!("λ = {bad} lies outside Ω_M")));
    }
    let pair = split(g)?;
    let minus = |z: Complex64| -> Result<Complex64> {
        match &pair.g_minus {
            Some(gm) => Ok(laplace(gm, z)?.value),
            None => Ok(Complex64::new(0.0, 0.0)),
        }
    };
    let plus = |z: Complex64| -> Result<Complex64> { Ok(laplace(&pair.g_plus, z)?.value) };
    let residuals: Vec<f64> = grid
        .par_iter()
        .map(|&z| Ok((plus(z)? - (transform(z) - minus(z)?)).norm()))
        .collect::<Result<_>>()?;
    let max_residual = residuals.iter().copied().fold(0.0, f64::max);

    let candidate = |z: Complex64| -> Result<Complex64> {
        if z.re >= 0.0 {
            plus(z)
        } else {
            Ok(transform(z) - minus(z)?)
        }
    };
    let (y_lo, y_hi) = grid.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), z| (a.min(z.im), b.max(z.im)));
    let centers: Vec<f64> = if y_hi - y_lo < 1e-12 { vec![y_lo] } else { (0..4).map(|j| y_lo + (y_hi - y_lo) * j as f64 / 3.0).collect() };
    let mut cauchy_residual: f64 = 0.0;
    for &y in &centers {
        let center = Complex64::new(0.0, y);
        let radius = 0.5 / m.at(y.abs() + 1.0);
        let pts = circle(center, radius, CIRCLE_POINTS);
        let values: Vec<(Complex64, Complex64)> = pts
            .par_iter()
            .map(|&z| Ok((z, candidate(z)?)))
            .collect::<Result<_>>()?;
        let sample = TransformSample { points: values, weight_values: None };
        cauchy_residual = cauchy_residual.max(cauchy_check(&sample, candidate(center)?)?);
    }
    Ok(AgreementReport { max_residual, residuals, cauchy_residual, circles: centers.len() })
}

/// `nx × ny` points with `Re λ ∈ (x_lo, x_hi)` and `Im λ ∈ [y_lo, y_hi]`,
/// each coordinate inset by half a step.
pub fn rectangle(x: (f64, f64), y: (f64, f64), nx: usize, ny: usize) -> Vec<Complex64> {
    let mut out = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let yy = y.0 + (y.1 - y.0) * (j as f64 + 0.5) / ny as f64;
        for i in 0..nx {
            out.push(Complex64::new(x.0 + (x.1 - x.0) * (i as f64 + 0.5) / nx as f64, yy));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specialfn::{build_h, build_strip_function, default_kernel_grid};
    use crate::witness::g_rt;
    use crate::xforms::TailBound;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn two_sided_exp() -> SampledComplexFunction {
        let edge = (-30.0f64).exp();
        SampledComplexFunction::from_fn(-30.0, 1e-3, 60_001, Support::FullLine, |t| c((-t.abs()).exp(), 0.0))
            .unwrap()
            .with_tails(Some(TailBound { amplitude: edge, rate: 1.0 }), Some(TailBound { amplitude: edge, rate: 1.0 }))
    }

    #[test]
    fn split_examples() {
        let zero = SampledComplexFunction::from_fn(-1.0, 0.25, 9, Support::FullLine, |_| c(0.0, 0.0)).unwrap();
        let p = split(&zero).unwrap();
        assert!(p.g_plus.values.iter().all(|v| *v == c(0.0, 0.0)));
        let gauss = SampledComplexFunction::from_fn(-4.0, 0.5, 17, Support::FullLine, |t| c((-t * t).exp(), 0.0)).unwrap();
        let p = split(&gauss).unwrap();
        assert_eq!(p.g_plus.start, 0.0);
        assert_eq!(p.g_plus.len(), 9);
        assert_eq!(p.reconstruct().unwrap().values, gauss.values);
        assert_eq!(p.parent_checksum, checksum(&gauss));
        let off = SampledComplexFunction::from_fn(-1.1, 0.25, 9, Support::FullLine, |_| c(1.0, 0.0)).unwrap();
        assert!(matches!(split(&off), Err(Error::Alignment(_))));
    }

    #[test]
    fn exponential_half_plane_examples() {
        let p = split(&two_sided_exp()).unwrap();
        let plain = verify_halfplane_bounds(&p, Side::Plus, &[c(1.0, 0.0)], Variant::Plain).unwrap();
        assert_relative_eq!(plain.bound, 1.0, max_relative = 1e-9);
        assert_relative_eq!(plain.bound - plain.margins[0], 0.5, max_relative = 1e-9);
        let der = verify_halfplane_bounds(&p, Side::Plus, &[c(2.0, 0.0)], Variant::Derivative).unwrap();
        assert!((der.bound - 2.0).abs() < 1e-5, "{}", der.bound);
        assert!((der.bound - der.margins[0] - 2.0 / 3.0).abs() < 1e-9);
        assert!(verify_halfplane_bounds(&p, Side::Plus, &[c(-0.1, 0.0)], Variant::Plain).is_err());
        assert!(verify_halfplane_bounds(&p, Side::Minus, &[c(-0.5, 3.0)], Variant::Plain).unwrap().holds(1e-8));
    }

    #[test]
    fn witness_split_norms_add_up() {
        let h = build_h(&build_strip_function(1.0).unwrap(), 1e-12, default_kernel_grid(1.0)).unwrap();
        let w = g_rt(&h, 2.0, 3.0).unwrap();
        let p = split(&w.samples).unwrap();
        let (plus, minus) = (p.g_plus.l1_norm(), p.g_minus.as_ref().unwrap().l1_norm());
        assert!((plus + minus - w.samples.l1_norm()).abs() < 1e-6);

        let m = GrowthFunction::constant(1.0).unwrap();
        let grid = rectangle((-0.4, 0.0), (0.0, 4.0), 10, 10);
        let hat = |z: Complex64| w.transform(z);
        let r = verify_agreement(&w.samples, Some(&hat), &m, &grid).unwrap();
        assert!(r.max_residual < 1e-5, "{r:?}");
        assert!(r.cauchy_residual < 1e-6, "{r:?}");
        assert!(verify_agreement(&w.samples, None, &m, &grid).is_err());
    }

    #[test]
    fn zero_function_agreement() {
        let zero = SampledComplexFunction::from_fn(-2.0, 0.25, 17, Support::FullLine, |_| c(0.0, 0.0)).unwrap();
        let m = GrowthFunction::constant(1.0).unwrap();
        let hat = |_: Complex64| c(0.0, 0.0);
        let r = verify_agreement(&zero, Some(&hat), &m, &rectangle((-0.4, 0.0), (-1.0, 1.0), 4, 4)).unwrap();
        assert_eq!(r.max_residual, 0.0);
    }
}
