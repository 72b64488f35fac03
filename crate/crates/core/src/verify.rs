//! A deterministic battery of numerical checks covering every module.
//!
//! The rendered report contains only seeded, order-stable quantities, so two
//! runs with the same seed produce identical bytes.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::growth::{log_grid, linear_grid, m_k, m_log, right_inverse, GrowthFunction};
use crate::regions::{Region, SampleSpec};
use crate::semigroup::{compare_rates, decay_norm, mode_decay, mult_semigroup, multiplication_report, FrequencyRule};
use crate::specialfn::{build_h, build_strip_function, default_kernel_grid, h_eps, verify_strip_decay, KernelH};
use crate::truncate::{rectangle, split, verify_agreement, verify_halfplane_bounds, Side};
use crate::witness::{admissible_pairs, calibrate_kappa, effective_epsilon, g_rt, norm_bound_ratio, transform_deviation, Variant};
use crate::xforms::{SampledComplexFunction, Support, TailBound};
use crate::growth::RateParams;
use crate::Result;

/// Outcome of one named check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub value: f64,
    pub threshold: f64,
    pub detail: String,
}

impl Check {
    /// Passes when `value ≤ threshold`.
    pub fn at_most(name: &'static str, value: f64, threshold: f64) -> Self {
        Check { name, passed: value <= threshold, value, threshold, detail: String::new() }
    }

    /// Passes when `value ≥ threshold`.
    pub fn at_least(name: &'static str, value: f64, threshold: f64) -> Self {
        Check { name, passed: value >= threshold, value, threshold, detail: String::new() }
    }

    pub fn detail(mut self, d: impl Into<String>) -> Self {
        self.detail = d.into();
        self
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub seed: u64,
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.passed).count()
    }

    pub fn render(&self) -> String {
        let mut s = format!("decaylab verify seed={}\n", self.seed);
        for c in &self.checks {
            let _ = write!(s, "{} {:<24} value={:.6e} threshold={:.6e}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.value, c.threshold);
            if !c.detail.is_empty() {
                let _ = write!(s, " {}", c.detail);
            }
            s.push('\n');
        }
        let _ = writeln!(s, "summary: {}/{} passed", self.checks.len() - self.failures(), self.checks.len());
        s
    }
}

/// Five test functions on `[-L, L]` with `0` on the grid and certified tails.
pub fn halfplane_corpus(h: &KernelH) -> Result<Vec<(&'static str, SampledComplexFunction)>> {
    let c = Complex64::new;
    let (l, step): (f64, f64) = (24.0, 0.005);
    let n = (2.0 * l / step) as usize + 1;
    let both = |a: f64, r: f64| (Some(TailBound { amplitude: a, rate: r }), Some(TailBound { amplitude: a, rate: r }));

    let (tl, tr) = both((-l).exp(), 1.0);
    let exp_abs = SampledComplexFunction::from_fn(-l, step, n, Support::FullLine, |t| c((-t.abs()).exp(), 0.0))?.with_tails(tl, tr);
    let (tl, tr) = both((-l * l).exp(), 2.0 * l);
    let chirp = SampledComplexFunction::from_fn(-l, step, n, Support::FullLine, |t| (-t * t).exp() * Complex64::from_polar(1.0, 2.0 * t))?.with_tails(tl, tr);
    let (tl, tr) = both(2.0 * (-l).exp(), 1.0);
    let sech = SampledComplexFunction::from_fn(-l, step, n, Support::FullLine, |t| c((3.0 * t).cos() / t.cosh(), 0.0))?.with_tails(tl, tr);
    let (tl, tr) = both(l * (-l * l / 2.0).exp(), l - 1.0 / l);
    let odd = SampledComplexFunction::from_fn(-l, step, n, Support::FullLine, |t| c(t * (-t * t / 2.0).exp(), 0.0))?.with_tails(tl, tr);
    let witness = g_rt(h, 2.0, 3.0)?.samples;
    Ok(vec![("exp_abs", exp_abs), ("gauss_chirp", chirp), ("sech_cos", sech), ("odd_gauss", odd), ("witness_2_3", witness)])
}

/// `n` seeded points with `Re λ` in `[0, 3]` (or `[-3, 0]` for `g₋`) and
/// `|Im λ| ≤ 10`.
pub fn halfplane_points(rng: &mut ChaCha8Rng, side: Side, n: usize) -> Vec<Complex64> {
    let sign = match side {
        Side::Plus => 1.0,
        Side::Minus => -1.0,
    };
    (0..n).map(|_| Complex64::new(sign * rng.gen_range(0.0..3.0), rng.gen_range(-10.0..10.0))).collect()
}

/// Smallest half-plane margin over the corpus.
pub fn halfplane_min_margin(corpus: &[(&'static str, SampledComplexFunction)], seed: u64, per_side: usize, variant: Variant) -> Result<(f64, &'static str)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst = (f64::INFINITY, "");
    for (name, g) in corpus {
        let pair = split(g)?;
        for side in [Side::Plus, Side::Minus] {
            let pts = halfplane_points(&mut rng, side, per_side);
            let r = verify_halfplane_bounds(&pair, side, &pts, variant)?;
            if r.min_margin < worst.0 {
                worst = (r.min_margin, name);
            }
        }
    }
    Ok(worst)
}

/// Agreement residuals of `g_{R,t}` at subsampling factors `ks`
/// (coarsest first), on `Re λ ∈ [-0.4, 0]`, `Im λ ∈ [0, 4]` with `M ≡ 1`.
pub fn agreement_ladder(h: &KernelH, r: f64, t: f64, ks: &[usize]) -> Result<Vec<f64>> {
    let w = g_rt(h, r, t)?;
    let m = GrowthFunction::constant(1.0)?;
    let grid = rectangle((-0.4, 0.0), (0.0, 4.0), 10, 10);
    let hat = |z: Complex64| w.transform(z);
    ks.iter()
        .map(|&k| {
            let g = w.samples.subsample_through(k, 0.0)?;
            Ok(verify_agreement(&g, Some(&hat), &m, &grid)?.max_residual)
        })
        .collect()
}

/// Runs every check with randomness drawn from `seed`.
pub fn run_suite(seed: u64) -> Result<VerifyReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut checks = Vec::new();
    let poly2 = GrowthFunction::polynomial(2.0)?;

    // H_ε modulus against the closed form
    let eps = PI / 6.0;
    let mut worst: f64 = 0.0;
    for _ in 0..1000 {
        let z = Complex64::new(rng.gen_range(-20.0..20.0), rng.gen_range(-5.0..5.0));
        let closed = (2.0 * (eps * z.re).cos() * ((eps * z.im).exp() + (-eps * z.im).exp())).exp();
        worst = worst.max((h_eps(eps, z)?.norm() - closed).abs() / closed);
    }
    checks.push(Check::at_most("modulus_identity", worst, 1e-12));
    let e4 = 4f64.exp();
    checks.push(Check::at_most("h_eps_origin", (h_eps(eps, Complex64::new(0.0, 0.0))?.re - e4).abs() / e4, 1e-12));

    // rate calculus
    let mlog = m_log(&poly2);
    let mut over = 0usize;
    let mut deficit: f64 = 0.0;
    for t in log_grid(10.0, 1e8, 50) {
        let v = mlog.at(right_inverse(&mlog, t, 1e-12)?);
        over += usize::from(v > t);
        deficit = deficit.max((t - v) / t);
    }
    checks.push(Check::at_most("rate_inverse", deficit, 1e-6).detail(format!("overshoots={over}")));
    if over > 0 {
        checks.last_mut().unwrap().passed = false;
    }
    let mk = m_k(&poly2, &poly2);
    let diff = linear_grid(0.0, 1e3, 1000).iter().map(|&s| (mk.at(s) - mlog.at(s)).abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("mk_equals_mlog", diff, 0.0));

    // strip decay and kernel
    let strip = build_strip_function(1.0)?;
    let one = GrowthFunction::constant(1.0)?;
    let grid = Region::strip(one).sample_with(&SampleSpec::with_row_spacing(12.0, 0.05, 16))?;
    checks.push(Check::at_most("strip_decay", verify_strip_decay(&strip, eps, &grid)?, std::f64::consts::E));
    let h = build_h(&strip, 1e-10, default_kernel_grid(1.0))?;
    checks.push(Check::at_most("kernel_round_trip", h.round_trip_error, 1e-6));
    let im = h.samples.values.iter().map(|v| v.im.abs()).fold(0.0, f64::max);
    checks.push(Check::at_most("kernel_imaginary", im / h.linf_norm, 1e-8));

    // witness transform
    let w = g_rt(&h, 2.0, 3.0)?;
    let mut dev: f64 = 0.0;
    for _ in 0..16 {
        let z = Complex64::new(rng.gen_range(-0.9..0.9), 2.0 + rng.gen_range(-5.0..5.0));
        dev = dev.max(transform_deviation(&w, z)?);
    }
    checks.push(Check::at_most("witness_transform", dev, 1e-5));

    // bound chain on small disjoint grids
    let eps_plain = effective_epsilon(h.epsilon, Variant::Plain);
    let calib = admissible_pairs(&poly2, eps_plain, (10.0, 1e3), 4, 3, 4.0, 0.0);
    let kappa = calibrate_kappa(&h, &poly2, None, Variant::Plain, &calib, "verify:phase0")?;
    let test = admissible_pairs(&poly2, eps_plain, (10.0, 1e3), 4, 3, 4.0, 0.5);
    let mut worst_ratio: f64 = 0.0;
    for &(r, t) in &test {
        if let Some(q) = norm_bound_ratio(&h, &poly2, None, Variant::Plain, r, t, eps_plain)? {
            worst_ratio = worst_ratio.max(q);
        }
    }
    checks.push(Check::at_most("bound_chain", worst_ratio, kappa.value).detail(format!("pairs={}", test.len())));

    // truncation
    let corpus = halfplane_corpus(&h)?;
    let (margin, name) = halfplane_min_margin(&corpus, rng.gen(), 20, Variant::Plain)?;
    checks.push(Check::at_least("halfplane_plain", margin, -1e-8).detail(format!("worst={name}")));
    let ladder = agreement_ladder(&h, 2.0, 3.0, &[48, 24, 12, 1])?;
    checks.push(Check::at_most("agreement_residual", ladder[3], 1e-5));
    let halving = ladder.windows(2).take(2).map(|p| p[1] / p[0]).fold(0.0, f64::max);
    checks.push(Check::at_most("agreement_refinement", halving, 0.5));

    // multiplication semigroup
    let spec = mult_semigroup(&poly2, &FrequencyRule::default())?;
    let report = compare_rates(&multiplication_report(&spec, &log_grid(1e2, 1e6, 25))?, &poly2, &RateParams::new(1.0, 1.0)?)?;
    let slope = report.fit.as_ref().map_or(f64::NAN, |f| f.slope_measured);
    checks.push(Check::at_most("mult_slope", (slope + 0.5).abs(), 0.05).detail(format!("slope={slope:.6}")));
    let mut violations = 0usize;
    for _ in 0..200 {
        let n = rng.gen_range(0..spec.eigenvalues.len());
        let t = 10f64.powf(rng.gen_range(0.0..6.0));
        violations += usize::from(decay_norm(&spec, t)? < mode_decay(&spec, n, t));
    }
    checks.push(Check::at_most("mult_mode_bound", violations as f64, 0.0));

    Ok(VerifyReport { seed, checks })
}
