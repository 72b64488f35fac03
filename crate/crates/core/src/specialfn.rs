//! The entire function `H_ε(λ) = exp(2e^{iελ} + 2e^{-iελ})`, its shift `H`
//! decaying doubly exponentially on the strip `S_M`, and the kernel `h`
//! whose two-sided Laplace transform is `H`.
//!
//! Since `2e^{iελ} + 2e^{-iελ} = 4cos(ελ)`, `H_ε` is real on the real axis and
//!
//! ```text
//! |H_ε(x + iy)| = exp(2cos(εx)(e^{εy} + e^{-εy}))
//! ```
//!
//! which is doubly-exponentially small wherever `cos(εx) ≤ -1/2`, i.e. for
//! `2π/(3ε) ≤ x ≤ 4π/(3ε)`. The strip function centres the strip in the left
//! half `[2π/(3ε), π/ε]` of that window.

use std::f64::consts::PI;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::regions::RegionGrid;
use crate::xforms::{
    self, fourier_invert_analytic, GridSpec, SampledComplexFunction, ShiftedLine, SpectralDecay, Support, TailBound,
};
use crate::{Error, Result};

/// Largest value whose exponential is finite.
const EXP_MAX: f64 = 709.78;

/// Line offsets for the kernel inversion, in units of `1/M(0)`.
const RIGHT_SHIFT: f64 = 1.8;
const LEFT_SHIFT: f64 = 3.0;

/// `ln|H_ε(x+iy)| = 2cos(εx)(e^{εy} + e^{-εy})`.
pub fn h_eps_log_modulus(eps: f64, lambda: Complex64) -> f64 {
    let ey = (eps * lambda.im).exp();
    2.0 * (eps * lambda.re).cos() * (ey + 1.0 / ey)
}

/// `H_ε(λ)` from the defining formula.
pub fn h_eps(eps: f64, lambda: Complex64) -> Result<Complex64> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("epsilon must be > 0, got {eps}")));
    }
    let log_mod = h_eps_log_modulus(eps, lambda);
    if log_mod > EXP_MAX {
        return Err(Error::Overflow(format!("|H_ε({lambda})| = exp({log_mod:e}) exceeds the f64 range")));
    }
    if (eps * lambda.im).abs() > EXP_MAX {
        // e^{±iελ} itself overflows; the modulus is exp(-∞) here
        return Ok(Complex64::new(0.0, 0.0));
    }
    let i = Complex64::new(0.0, 1.0);
    let z = 2.0 * (i * eps * lambda).exp() + 2.0 * (-i * eps * lambda).exp();
    Ok(z.exp())
}

/// The shifted function `H(λ) = H_ε(λ + x_center)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StripFunction {
    pub epsilon: f64,
    pub x_center: f64,
    pub strip_half_width: f64,
}

impl StripFunction {
    pub fn eval(&self, lambda: Complex64) -> Result<Complex64> {
        h_eps(self.epsilon, lambda + self.x_center)
    }

    /// Same as [`eval`](Self::eval) but saturating to zero instead of failing;
    /// only valid where `cos(ε(Re λ + x_center)) ≤ 0`.
    pub fn eval_decaying(&self, lambda: Complex64) -> Complex64 {
        self.eval(lambda).unwrap_or(Complex64::new(0.0, 0.0))
    }

    pub fn log_modulus(&self, lambda: Complex64) -> f64 {
        h_eps_log_modulus(self.epsilon, lambda + self.x_center)
    }

    /// `-2cos(ε(x_center + x))`: the decay coefficient of `u ↦ H(x + iu)`,
    /// positive inside the decay window.
    pub fn line_coefficient(&self, x: f64) -> f64 {
        -2.0 * (self.epsilon * (self.x_center + x)).cos()
    }

    /// `[2π/(3ε), π/ε]`, where `cos(εx) ≤ -1/2`.
    pub fn window(&self) -> (f64, f64) {
        (2.0 * PI / (3.0 * self.epsilon), PI / self.epsilon)
    }

    /// The pointwise bound `|H(λ)| ≤ exp(-(e^{ε|y|} + e^{-ε|y|}))` on the strip, in log form.
    pub fn strip_log_bound(&self, y: f64) -> f64 {
        let ey = (self.epsilon * y.abs()).exp();
        -(ey + 1.0 / ey)
    }
}

/// `ε = π·m0/6`, `x_center = 5π/(6ε)`, half-width `1/m0`: the largest `ε`
/// for which the shifted strip fits the window `[2π/(3ε), π/ε]`.
pub fn build_strip_function(m0: f64) -> Result<StripFunction> {
    if !(m0 > 0.0 && m0.is_finite()) {
        return Err(Error::Domain(format!("m0 must be positive and finite, got {m0}")));
    }
    let epsilon = PI * m0 / 6.0;
    Ok(StripFunction { epsilon, x_center: 5.0 * PI / (6.0 * epsilon), strip_half_width: 1.0 / m0 })
}

/// Grid supremum of `|H(λ)|·exp(exp(ε_test·|Im λ|))`.
pub fn verify_strip_decay(h: &StripFunction, eps_test: f64, grid: &RegionGrid) -> Result<f64> {
    if !(eps_test > 0.0) {
        return Err(Error::Domain(format!("test exponent must be > 0, got {eps_test}")));
    }
    if eps_test > h.epsilon * (1.0 + 1e-12) {
        return Err(Error::Domain(format!("test exponent {eps_test} exceeds the construction's ε = {}", h.epsilon)));
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid("strip grid has no points".into()));
    }
    let log_sup = grid
        .points
        .iter()
        .map(|&z| h.log_modulus(z) + (eps_test * z.im.abs()).exp())
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(log_sup.exp())
}

/// The kernel `h` with `ĥ = H` (up to normalization), sampled with its first
/// two derivatives.
#[derive(Debug, Clone, PartialEq)]
pub struct KernelH {
    pub samples: SampledComplexFunction,
    pub derivative: SampledComplexFunction,
    pub strip: StripFunction,
    /// Normalization point, `h(t0) = 1`.
    pub t0: f64,
    pub epsilon: f64,
    /// `h = scale·h_raw(±t)` where `h_raw` is the inverse transform of `H`.
    pub scale: f64,
    pub reflected: bool,
    pub l1_norm: f64,
    pub linf_norm: f64,
    pub deriv_l1_norm: f64,
    pub deriv_linf_norm: f64,
    /// Largest `|ĥ - scale·H(±λ)|` seen by the round-trip check.
    pub round_trip_error: f64,
}

/// Metadata written alongside the samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KernelHeader {
    pub epsilon: f64,
    pub x_center: f64,
    pub strip_half_width: f64,
    pub t0: f64,
    pub scale: f64,
    pub reflected: bool,
    pub start: f64,
    pub step: f64,
    pub len: usize,
    pub tail_left: (f64, f64),
    pub tail_right: (f64, f64),
    pub l1_norm: f64,
    pub linf_norm: f64,
    pub deriv_l1_norm: f64,
    pub deriv_linf_norm: f64,
    pub round_trip_error: f64,
}

impl KernelH {
    /// The closed-form transform of the normalized kernel.
    pub fn transform(&self, lambda: Complex64) -> Complex64 {
        let z = if self.reflected { -lambda } else { lambda };
        self.scale * self.strip.eval_decaying(z)
    }

    /// `ln|ĥ(λ)|`, finite where [`transform`](Self::transform) would underflow.
    pub fn log_abs_transform(&self, lambda: Complex64) -> f64 {
        let z = if self.reflected { -lambda } else { lambda };
        self.scale.abs().ln() + self.strip.log_modulus(z)
    }

    /// Open interval of `x` for which `u ↦ ĥ(x + iu)` decays.
    pub fn decay_band(&self) -> (f64, f64) {
        // cos(ε(x_c + x)) < 0  ⇔  π/(2ε) < x_c + x < 3π/(2ε)
        let lo = PI / (2.0 * self.epsilon) - self.strip.x_center;
        let hi = 3.0 * PI / (2.0 * self.epsilon) - self.strip.x_center;
        if self.reflected {
            (-hi, -lo)
        } else {
            (lo, hi)
        }
    }

    pub fn real_values(&self) -> Vec<f64> {
        self.samples.values.iter().map(|v| v.re).collect()
    }

    pub fn real_derivative(&self) -> Vec<f64> {
        self.derivative.values.iter().map(|v| v.re).collect()
    }

    pub fn header(&self) -> KernelHeader {
        let tail = |t: Option<TailBound>| t.map_or((0.0, f64::INFINITY), |t| (t.amplitude, t.rate));
        KernelHeader {
            epsilon: self.epsilon,
            x_center: self.strip.x_center,
            strip_half_width: self.strip.strip_half_width,
            t0: self.t0,
            scale: self.scale,
            reflected: self.reflected,
            start: self.samples.start,
            step: self.samples.step,
            len: self.samples.len(),
            tail_left: tail(self.samples.tail_left),
            tail_right: tail(self.samples.tail_right),
            l1_norm: self.l1_norm,
            linf_norm: self.linf_norm,
            deriv_l1_norm: self.deriv_l1_norm,
            deriv_linf_norm: self.deriv_linf_norm,
            round_trip_error: self.round_trip_error,
        }
    }

    /// Writes `# <json header>` followed by `t<TAB>h(t)` lines.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = BufWriter::new(file);
        let header = serde_json::to_string(&self.header()).map_err(|e| Error::Parse(e.to_string()))?;
        let mut write = || -> std::io::Result<()> {
            writeln!(w, "# {header}")?;
            for (k, v) in self.samples.values.iter().enumerate() {
                writeln!(w, "{:.16e}\t{:.16e}", self.samples.time(k), v.re)?;
            }
            w.flush()
        };
        write().map_err(|e| Error::io(path, e))
    }

    /// Reads a kernel written by [`save`](Self::save). Derivatives are
    /// recomputed with fourth-order centered differences.
    pub fn load(path: &Path) -> Result<Self> {
        let file = File::open(path).map_err(|e| Error::io(path, e))?;
        let mut lines = BufReader::new(file).lines();
        let first = lines
            .next()
            .ok_or_else(|| Error::Parse(format!("{}: empty kernel file", path.display())))?
            .map_err(|e| Error::io(path, e))?;
        let json = first
            .strip_prefix('#')
            .ok_or_else(|| Error::Parse(format!("{}: missing header line", path.display())))?;
        let header: KernelHeader = serde_json::from_str(json.trim()).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
        let mut values = Vec::with_capacity(header.len);
        for line in lines {
            let line = line.map_err(|e| Error::io(path, e))?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let mut cols = line.split('\t');
            let (Some(_t), Some(h), None) = (cols.next(), cols.next(), cols.next()) else {
                return Err(Error::Parse(format!("{}: expected two columns in {line:?}", path.display())));
            };
            let h: f64 = h.trim().parse().map_err(|_| Error::Parse(format!("{}: bad number {h:?}", path.display())))?;
            values.push(Complex64::new(h, 0.0));
        }
        if values.len() != header.len {
            return Err(Error::Parse(format!("{}: header says {} samples, found {}", path.display(), header.len, values.len())));
        }
        let tail = |(a, r): (f64, f64)| (r.is_finite()).then_some(TailBound { amplitude: a, rate: r });
        let samples = SampledComplexFunction::new(header.start, header.step, values, Support::FullLine)?
            .with_tails(tail(header.tail_left), tail(header.tail_right));
        let real: Vec<f64> = samples.values.iter().map(|v| v.re).collect();
        let deriv = central_difference(&real, header.step);
        let derivative = SampledComplexFunction::new(
            header.start,
            header.step,
            deriv.into_iter().map(|d| Complex64::new(d, 0.0)).collect(),
            Support::FullLine,
        )?;
        Ok(KernelH {
            samples,
            derivative,
            strip: StripFunction { epsilon: header.epsilon, x_center: header.x_center, strip_half_width: header.strip_half_width },
            t0: header.t0,
            epsilon: header.epsilon,
            scale: header.scale,
            reflected: header.reflected,
            l1_norm: header.l1_norm,
            linf_norm: header.linf_norm,
            deriv_l1_norm: header.deriv_l1_norm,
            deriv_linf_norm: header.deriv_linf_norm,
            round_trip_error: header.round_trip_error,
        })
    }
}

/// Fourth-order centered differences, one-sided second order at the ends.
pub fn central_difference(f: &[f64], h: f64) -> Vec<f64> {
    let n = f.len();
    (0..n)
        .map(|k| {
            if k >= 2 && k + 2 < n {
                (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h)
            } else if k == 0 && n >= 3 {
                (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h)
            } else if k + 1 == n && n >= 3 {
                (3.0 * f[k] - 4.0 * f[k - 1] + f[k - 2]) / (2.0 * h)
            } else if n >= 2 {
                let (a, b) = (k.saturating_sub(1), (k + 1).min(n - 1));
                (f[b] - f[a]) / ((b - a) as f64 * h)
            } else {
                0.0
            }
        })
        .collect()
}

/// Default sampling of `h` for a strip of half-width `1/m0`: `[-16/m0·…]`,
/// scaled with `m0` because `h_{m0}(t) = m0⁻¹·h_1(t/m0)`.
pub fn default_kernel_grid(m0: f64) -> GridSpec {
    GridSpec::spanning(-16.0 * m0, 40.0 * m0, 0.02 * m0)
}

/// Builds `h(t) = (1/2π)∫ e^{iut} H(iu) du` on `out`, normalizes it so that
/// `h(t0) = 1` at the grid argmax `t0 ≥ 0`, and checks `ĥ = H` on the strip.
///
/// The inversion integrates along vertical lines inside the decay window
/// rather than along `iR`, which gives `h` (and `h'`) to full relative
/// accuracy in both exponentially decaying tails.
pub fn build_h(h: &StripFunction, tol: f64, out: GridSpec) -> Result<KernelH> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    if out.len < 5 {
        return Err(Error::EmptyGrid(format!("kernel grid needs at least 5 points, got {}", out.len)));
    }
    let w = h.strip_half_width;
    let lines = |k: i32| -> Result<(ShiftedLine, ShiftedLine)> {
        let mk = |offset: f64| -> Result<ShiftedLine> {
            let coeff = h.line_coefficient(offset);
            if !(coeff > 0.0) {
                return Err(Error::Construction(format!("line Re λ = {offset} leaves the decay window")));
            }
            // |λ^k H(λ)| ≤ exp(-coeff·e^{ε|u|} + k·ln(|offset| + |u|)); the polynomial
            // factor is absorbed by halving the coefficient
            let coeff = if k == 0 { coeff } else { 0.5 * coeff };
            Ok(ShiftedLine { offset, decay: SpectralDecay::DoubleExponential { rate: h.epsilon, coeff } })
        };
        Ok((mk(-RIGHT_SHIFT * w)?, mk(LEFT_SHIFT * w)?))
    };
    let invert = |k: i32| -> Result<xforms::Inversion> {
        let (right, left) = lines(k)?;
        fourier_invert_analytic(
            |z| {
                let v = h.eval_decaying(z);
                if k == 0 {
                    v
                } else {
                    z.powi(k) * v
                }
            },
            right,
            left,
            tol,
            out,
        )
    };
    let raw = invert(0)?;
    let raw_d = invert(1)?;

    let (k0, peak) = raw
        .function
        .values
        .iter()
        .enumerate()
        .map(|(k, v)| (k, v.norm()))
        .fold((0, 0.0), |acc, x| if x.1 > acc.1 { x } else { acc });
    if peak < 1e-12 {
        return Err(Error::Construction(format!("degenerate kernel: max |h| = {peak:e}")));
    }
    let t_peak = raw.function.time(k0);
    let reflected = t_peak < 0.0;
    let h_t0 = raw.function.values[k0];
    if h_t0.im.abs() > 1e-8 * h_t0.norm() {
        return Err(Error::Construction(format!("kernel is not real at its peak: h(t0) = {h_t0}")));
    }
    let scale = 1.0 / h_t0.re;

    let finish = |f: &SampledComplexFunction, sign: f64| -> Result<SampledComplexFunction> {
        let mut values: Vec<Complex64> = f.values.iter().map(|v| v * scale * sign).collect();
        let mut start = f.start;
        let (mut left, mut right) = (f.tail_left, f.tail_right);
        if reflected {
            values.reverse();
            start = -f.end();
            std::mem::swap(&mut left, &mut right);
        }
        let sc = |t: Option<TailBound>| t.map(|t| TailBound { amplitude: t.amplitude * scale.abs(), rate: t.rate });
        Ok(SampledComplexFunction::new(start, f.step, values, Support::FullLine)?.with_tails(sc(left), sc(right)))
    };
    let samples = finish(&raw.function, 1.0)?;
    // d/dt h(-t) = -h'(-t)
    let derivative = finish(&raw_d.function, if reflected { -1.0 } else { 1.0 })?;
    let t0 = if reflected { -t_peak } else { t_peak };

    let real: Vec<f64> = samples.values.iter().map(|v| v.re).collect();
    let dreal: Vec<f64> = derivative.values.iter().map(|v| v.re).collect();
    let raw_dd = invert(2)?;
    let dd = finish(&raw_dd.function, 1.0)?;
    let ddreal: Vec<f64> = dd.values.iter().map(|v| v.re).collect();
    let tail_mass = |f: &SampledComplexFunction| {
        f.tail_left.map_or(0.0, |t| t.amplitude / t.rate) + f.tail_right.map_or(0.0, |t| t.amplitude / t.rate)
    };
    let l1_norm = xforms::hermite_abs_integral(&real, &dreal, samples.step) + tail_mass(&samples);
    let deriv_l1_norm = xforms::hermite_abs_integral(&dreal, &ddreal, samples.step) + tail_mass(&derivative);

    let mut kernel = KernelH {
        linf_norm: samples.sup_norm(),
        deriv_linf_norm: derivative.sup_norm(),
        samples,
        derivative,
        strip: *h,
        t0,
        epsilon: h.epsilon,
        scale,
        reflected,
        l1_norm,
        deriv_l1_norm,
        round_trip_error: 0.0,
    };
    let err = round_trip_error(&kernel, 20, 20)?;
    // relative to the transform's size on the strip
    let size = kernel.scale.abs() * (-2.0f64 * 3f64.sqrt()).exp();
    let allowed = (10.0 * tol).max(1e-9) * size.max(1.0);
    if !(err <= allowed) {
        return Err(Error::Construction(format!("round trip ĥ = H failed: max deviation {err:e} > {allowed:e}")));
    }
    kernel.round_trip_error = err;
    Ok(kernel)
}

/// `n` rows of points on the strip `|Re λ| < w`, `|Im λ| ≤ y_max`, used for
/// the round-trip check.
pub fn strip_check_points(w: f64, y_max: f64, nx: usize, ny: usize) -> Vec<Complex64> {
    let mut pts = Vec::with_capacity(nx * ny);
    for j in 0..ny {
        let y = -y_max + 2.0 * y_max * (j as f64 + 0.5) / ny as f64;
        for i in 0..nx {
            let x = -w + 2.0 * w * (i as f64 + 0.5) / nx as f64;
            pts.push(Complex64::new(x, y));
        }
    }
    pts
}

/// Max `|ĥ(λ) - scale·H(±λ)|` over an `nx × ny` strip grid reaching
/// `|Im λ| ≤ 4/ε`, with `ĥ` by Simpson quadrature of the samples.
pub fn round_trip_error(kernel: &KernelH, nx: usize, ny: usize) -> Result<f64> {
    let pts = strip_check_points(kernel.strip.strip_half_width, 4.0 / kernel.epsilon, nx, ny);
    let mut worst: f64 = 0.0;
    for z in pts {
        let q = xforms::laplace(&kernel.samples, z)?;
        worst = worst.max((q.value - kernel.transform(z)).norm());
    }
    Ok(worst)
}
