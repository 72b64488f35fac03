//! Growth functions and the rate calculus built on them.
//!
//! A [`GrowthFunction`] is a non-decreasing, continuous, strictly positive
//! function `M: [0, ∞) → (0, ∞)`, either in closed form or tabulated. From it
//! we derive the logarithmic rate
//!
//! ```text
//! M_log(s) = M(s) · (log(1 + s) + log(1 + M(s)))
//! ```
//!
//! and, given a second function `K`, the two-function rate
//! `M_K(s) = M(s) · (log(1 + s) + log(1 + K(s)))`. Decay rates are read off
//! from right inverses of these functions.
//!
//! Growth functions are written in a small mini-language, see
//! [`GrowthFunction::parse`].

use std::fmt;
use std::path::Path;
use std::str::FromStr;
use std::sync::Arc;

use crate::search::bisect_predicate;
use crate::{Error, Result};

/// Default absolute tolerance (in `s`) for [`right_inverse`].
pub const DEFAULT_INVERSE_TOL: f64 = 1e-9;

/// Bracket expansion in [`right_inverse`] doubles up to this bound.
pub const BRACKET_CAP: f64 = 1_152_921_504_606_846_976.0; // 2^60

/// Closed-form or tabulated base shapes.
#[derive(Debug, Clone, PartialEq)]
pub enum GrowthSpec {
    /// `M(s) = (1 + s)^β`.
    Polynomial { beta: f64 },
    /// `M(s) = e^{αs}`.
    Exponential { alpha: f64 },
    /// `M(s) = m₀`.
    Constant { m0: f64 },
    /// `M(s) = m₀ + log(1 + s)`.
    Logarithmic { m0: f64 },
    /// Piecewise-linear interpolation of knots, constant beyond the last one.
    Table(Table),
}

/// Monotone table of `(s, M(s))` knots.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    knots: Vec<(f64, f64)>,
}

impl Table {
    /// Validates and wraps the knots: abscissae strictly increasing and
    /// non-negative, values strictly positive and non-decreasing.
    pub fn new(knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.is_empty() {
            return Err(Error::Domain("table needs at least one knot".into()));
        }
        if knots[0].0 < 0.0 {
            return Err(Error::Domain(format!("table abscissa {} is negative", knots[0].0)));
        }
        for &(s, m) in &knots {
            if !s.is_finite() || !m.is_finite() || m <= 0.0 {
                return Err(Error::Domain(format!("table knot ({s}, {m}) must be finite with M > 0")));
            }
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(Error::Domain(format!(
                    "table abscissae must be strictly increasing ({} then {})",
                    w[0].0, w[1].0
                )));
            }
            if w[1].1 < w[0].1 {
                return Err(Error::Domain(format!(
                    "table values must be non-decreasing ({} then {})",
                    w[0].1, w[1].1
                )));
            }
        }
        Ok(Table { knots })
    }

    /// Reads a two-column whitespace separated text file. Blank lines and
    /// lines starting with `#` are ignored.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut knots = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let cols: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|c| !c.is_empty()).collect();
            if cols.len() != 2 {
                return Err(Error::Parse(format!("table line {}: expected two columns", lineno + 1)));
            }
            let parse = |c: &str| {
                c.parse::<f64>()
                    .map_err(|_| Error::Parse(format!("table line {}: bad number {c:?}", lineno + 1)))
            };
            knots.push((parse(cols[0])?, parse(cols[1])?));
        }
        Table::new(knots)
    }

    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }

    fn eval(&self, s: f64) -> f64 {
        let k = &self.knots;
        if s <= k[0].0 {
            return k[0].1;
        }
        let last = k[k.len() - 1];
        if s >= last.0 {
            return last.1;
        }
        // first knot with abscissa > s
        let i = k.partition_point(|&(x, _)| x <= s);
        let (x0, y0) = k[i - 1];
        let (x1, y1) = k[i];
        y0 + (y1 - y0) * (s - x0) / (x1 - x0)
    }
}

/// Polynomial lower bound `b·s^β` and exponential upper bound `C·e^{αs}`,
/// asserted for `s ≥ onset`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Envelope {
    pub lower: Option<PolyLower>,
    pub upper: Option<ExpUpper>,
    pub onset: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolyLower {
    pub b: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpUpper {
    pub c: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, PartialEq)]
enum Kind {
    Base(GrowthSpec),
    Log(Arc<GrowthFunction>),
    TwoFunction(Arc<GrowthFunction>, Arc<GrowthFunction>),
}

/// A non-decreasing continuous positive function on `[0, ∞)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFunction {
    kind: Kind,
    envelope: Envelope,
    label: String,
}

impl GrowthFunction {
    pub fn new(spec: GrowthSpec) -> Result<Self> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Domain(format!("{name} must be finite and > 0, got {v}")))
            }
        };
        let (label, envelope) = match &spec {
            GrowthSpec::Polynomial { beta } => {
                positive("beta", *beta)?;
                // (1+s)^β ≥ s^β, and (1+s)^β e^{-s} peaks at s = β-1
                let c = if *beta > 1.0 { beta.powf(*beta) * (1.0 - beta).exp() } else { 1.0 };
                (
                    format!("poly:beta={}", fmt_num(*beta)),
                    Envelope {
                        lower: Some(PolyLower { b: 1.0, beta: *beta }),
                        upper: Some(ExpUpper { c, alpha: 1.0 }),
                        onset: 0.0,
                    },
                )
            }
            GrowthSpec::Exponential { alpha } => {
                positive("alpha", *alpha)?;
                (
                    format!("exp:alpha={}", fmt_num(*alpha)),
                    Envelope {
                        lower: Some(PolyLower { b: *alpha, beta: 1.0 }),
                        upper: Some(ExpUpper { c: 1.0, alpha: *alpha }),
                        onset: 0.0,
                    },
                )
            }
            GrowthSpec::Constant { m0 } => {
                positive("m0", *m0)?;
                (
                    format!("const:m0={}", fmt_num(*m0)),
                    Envelope { lower: None, upper: Some(ExpUpper { c: *m0, alpha: 1.0 }), onset: 0.0 },
                )
            }
            GrowthSpec::Logarithmic { m0 } => {
                positive("m0", *m0)?;
                (
                    format!("log:m0={}", fmt_num(*m0)),
                    Envelope { lower: None, upper: Some(ExpUpper { c: m0 + 1.0, alpha: 1.0 }), onset: 0.0 },
                )
            }
            GrowthSpec::Table(_) => ("table".to_string(), Envelope::default()),
        };
        Ok(GrowthFunction { kind: Kind::Base(spec), envelope, label })
    }

    pub fn polynomial(beta: f64) -> Result<Self> {
        Self::new(GrowthSpec::Polynomial { beta })
    }

    pub fn exponential(alpha: f64) -> Result<Self> {
        Self::new(GrowthSpec::Exponential { alpha })
    }

    pub fn constant(m0: f64) -> Result<Self> {
        Self::new(GrowthSpec::Constant { m0 })
    }

    pub fn logarithmic(m0: f64) -> Result<Self> {
        Self::new(GrowthSpec::Logarithmic { m0 })
    }

    pub fn table(knots: Vec<(f64, f64)>) -> Result<Self> {
        Self::new(GrowthSpec::Table(Table::new(knots)?))
    }

    /// Parses the growth mini-language:
    ///
    /// * `poly:beta=2`, `exp:alpha=1`, `const:m0=1`, `log:m0=1`
    /// * `table:<path>` for a two-column `(s, M(s))` text file
    ///
    /// Closed forms accept extra comma separated envelope overrides:
    /// `env_b`, `env_beta`, `env_c`, `env_alpha`, `onset`, e.g.
    /// `exp:alpha=1,env_b=1,env_beta=3`.
    pub fn parse(text: &str) -> Result<Self> {
        let text = text.trim();
        let (head, rest) = text
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("growth spec {text:?} has no ':'")))?;
        if head == "table" {
            let mut g = Self::new(GrowthSpec::Table(Table::from_file(rest)?))?;
            g.label = format!("table:{rest}");
            return Ok(g);
        }
        let mut params: Vec<(String, f64)> = Vec::new();
        for item in rest.split(',').filter(|s| !s.trim().is_empty()) {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| Error::Parse(format!("growth parameter {item:?} is not key=value")))?;
            let v: f64 = v
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("growth parameter {item:?} has a bad value")))?;
            params.push((k.trim().to_string(), v));
        }
        let take = |key: &str, params: &mut Vec<(String, f64)>| -> Option<f64> {
            let i = params.iter().position(|(k, _)| k == key)?;
            Some(params.remove(i).1)
        };
        let required = |key: &str, v: Option<f64>| {
            v.ok_or_else(|| Error::Parse(format!("growth spec {text:?} is missing {key}")))
        };
        let spec = match head {
            "poly" => GrowthSpec::Polynomial { beta: required("beta", take("beta", &mut params))? },
            "exp" => GrowthSpec::Exponential { alpha: required("alpha", take("alpha", &mut params))? },
            "const" => GrowthSpec::Constant { m0: required("m0", take("m0", &mut params))? },
            "log" => GrowthSpec::Logarithmic { m0: required("m0", take("m0", &mut params))? },
            other => return Err(Error::Parse(format!("unknown growth kind {other:?}"))),
        };
        let mut g = Self::new(spec)?;
        let env_b = take("env_b", &mut params);
        let env_beta = take("env_beta", &mut params);
        let env_c = take("env_c", &mut params);
        let env_alpha = take("env_alpha", &mut params);
        let onset = take("onset", &mut params);
        if let Some((k, _)) = params.first() {
            return Err(Error::Parse(format!("unknown growth parameter {k:?}")));
        }
        match (env_b, env_beta) {
            (Some(b), Some(beta)) => g.envelope.lower = Some(PolyLower { b, beta }),
            (None, None) => {}
            _ => return Err(Error::Parse("env_b and env_beta must be given together".into())),
        }
        match (env_c, env_alpha) {
            (Some(c), Some(alpha)) => g.envelope.upper = Some(ExpUpper { c, alpha }),
            (None, None) => {}
            _ => return Err(Error::Parse("env_c and env_alpha must be given together".into())),
        }
        if let Some(o) = onset {
            g.envelope.onset = o;
        }
        if env_b.is_some() || env_c.is_some() || onset.is_some() {
            g.label = text.to_string();
        }
        Ok(g)
    }

    /// Replaces the envelope metadata.
    pub fn with_envelope(mut self, envelope: Envelope) -> Self {
        self.envelope = envelope;
        self
    }

    pub fn envelope(&self) -> &Envelope {
        &self.envelope
    }

    /// Mini-language label (derived functions render as `mlog(..)` / `mk(..;..)`).
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn spec(&self) -> Option<&GrowthSpec> {
        match &self.kind {
            Kind::Base(spec) => Some(spec),
            _ => None,
        }
    }

    /// `M(s)` for `s ≥ 0`.
    pub fn eval(&self, s: f64) -> Result<f64> {
        if !(s >= 0.0) {
            return Err(Error::Domain(format!("growth functions are defined for s >= 0, got {s}")));
        }
        Ok(self.at(s))
    }

    /// Unchecked evaluation; callers guarantee `s ≥ 0`.
    #[inline]
    pub fn at(&self, s: f64) -> f64 {
        debug_assert!(s >= 0.0, "negative argument {s}");
        match &self.kind {
            Kind::Base(spec) => match spec {
                GrowthSpec::Polynomial { beta } => (1.0 + s).powf(*beta),
                GrowthSpec::Exponential { alpha } => (alpha * s).exp(),
                GrowthSpec::Constant { m0 } => *m0,
                GrowthSpec::Logarithmic { m0 } => m0 + s.ln_1p(),
                GrowthSpec::Table(t) => t.eval(s),
            },
            Kind::Log(m) => {
                let v = m.at(s);
                two_function_rate(s, v, v)
            }
            Kind::TwoFunction(m, k) => two_function_rate(s, m.at(s), k.at(s)),
        }
    }

    /// `log M(s)`, computed without overflow for the exponential family.
    pub fn ln_at(&self, s: f64) -> f64 {
        match &self.kind {
            Kind::Base(GrowthSpec::Exponential { alpha }) => alpha * s,
            Kind::Base(GrowthSpec::Polynomial { beta }) => beta * s.ln_1p(),
            _ => self.at(s).ln(),
        }
    }

    /// `M(0)`.
    pub fn m0(&self) -> f64 {
        self.at(0.0)
    }
}

impl FromStr for GrowthFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        GrowthFunction::parse(s)
    }
}

impl fmt::Display for GrowthFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

fn fmt_num(v: f64) -> String {
    // shortest representation that round-trips
    format!("{v}")
}

#[inline]
fn two_function_rate(s: f64, m: f64, k: f64) -> f64 {
    m * (s.ln_1p() + k.ln_1p())
}

/// `s ↦ M(s)(log(1+s) + log(1+M(s)))`.
pub fn m_log(m: &GrowthFunction) -> GrowthFunction {
    GrowthFunction {
        label: format!("mlog({})", m.label),
        kind: Kind::Log(Arc::new(m.clone())),
        envelope: Envelope::default(),
    }
}

/// `s ↦ M(s)(log(1+s) + log(1+K(s)))`.
///
/// Both inputs are already validated as strictly positive, so this never
/// fails; `m_k(M, M)` evaluates through the same arithmetic as `m_log(M)`.
pub fn m_k(m: &GrowthFunction, k: &GrowthFunction) -> GrowthFunction {
    GrowthFunction {
        label: format!("mk({};{})", m.label, k.label),
        kind: Kind::TwoFunction(Arc::new(m.clone()), Arc::new(k.clone())),
        envelope: Envelope::default(),
    }
}

/// Rate function used by the certificates: `M_K` when `K` is given,
/// otherwise `M_log`.
pub fn rate_function(m: &GrowthFunction, k: Option<&GrowthFunction>) -> GrowthFunction {
    match k {
        Some(k) => m_k(m, k),
        None => m_log(m),
    }
}

/// Locates the smallest `s ≥ 0` with `M(s) ≥ t` by bisection.
///
/// Returns `0` when `M(0) = t`. Otherwise the returned point is the lower end
/// of the final bracket, so it lies within `tol` of the smallest preimage and
/// satisfies `M(s) ≤ t`; plateaus resolve to their left endpoint.
pub fn right_inverse(m: &GrowthFunction, t: f64, tol: f64) -> Result<f64> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    if !t.is_finite() {
        return Err(Error::Domain(format!("target must be finite, got {t}")));
    }
    let m0 = m.at(0.0);
    if t < m0 {
        return Err(Error::BelowRange { target: t, m0 });
    }
    if t == m0 {
        return Ok(0.0);
    }
    let mut hi = 1.0;
    while m.at(hi) < t {
        if hi >= BRACKET_CAP {
            return Err(Error::UnboundedSearch { target: t, cap: BRACKET_CAP });
        }
        hi *= 2.0;
    }
    let lo = if hi > 1.0 { hi / 2.0 } else { 0.0 };
    let (lo, _) = bisect_predicate(|s| m.at(s) >= t, lo, hi, tol);
    Ok(lo)
}

/// Rate constants: `c` in `M_log^{-1}(c·t)` and the multiplier in the
/// explicit `R = C·M_log^{-1}(t)` choice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateParams {
    pub c: f64,
    pub c_choice: f64,
}

impl RateParams {
    pub fn new(c: f64, c_choice: f64) -> Result<Self> {
        if !(c > 0.0 && c.is_finite()) || !(c_choice > 0.0 && c_choice.is_finite()) {
            return Err(Error::Domain(format!("rate constants must be > 0 (c = {c}, C = {c_choice})")));
        }
        Ok(RateParams { c, c_choice })
    }
}

/// One grid point where `M(s) < c·M(s + c/M(s))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegularityViolation {
    pub s: f64,
    /// `M(s) - c·M(s + c/M(s))`, negative.
    pub margin: f64,
}

/// Grid-relative report for the no-sudden-jump condition.
#[derive(Debug, Clone, PartialEq)]
pub struct RegularityReport {
    pub c: f64,
    pub grid_min: f64,
    pub grid_max: f64,
    pub grid_len: usize,
    pub violations: Vec<RegularityViolation>,
}

impl RegularityReport {
    pub fn holds(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates `M(s) - c·M(s + c/M(s))` on every grid point.
pub fn check_regularly_growing(m: &GrowthFunction, c: f64, grid: &[f64]) -> Result<RegularityReport> {
    if !(c > 0.0 && c < 1.0) {
        return Err(Error::Domain(format!("c must lie in (0, 1), got {c}")));
    }
    let mut violations = Vec::new();
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &s in grid {
        let ms = m.eval(s)?;
        lo = lo.min(s);
        hi = hi.max(s);
        let margin = ms - c * m.at(s + c / ms);
        if margin < 0.0 {
            violations.push(RegularityViolation { s, margin });
        }
    }
    Ok(RegularityReport { c, grid_min: lo, grid_max: hi, grid_len: grid.len(), violations })
}

/// Largest `c = 2^{-k}` (`k = 1..=20`) for which the condition holds on `grid`.
pub fn find_regularity_constant(m: &GrowthFunction, grid: &[f64]) -> Result<Option<f64>> {
    for k in 1..=20 {
        let c = 0.5f64.powi(k);
        if check_regularly_growing(m, c, grid)?.holds() {
            return Ok(Some(c));
        }
    }
    Ok(None)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EnvelopeSide {
    Lower,
    Upper,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeViolation {
    pub s: f64,
    pub side: EnvelopeSide,
    pub value: f64,
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnvelopeReport {
    pub passed: bool,
    pub first_violation: Option<EnvelopeViolation>,
    pub violations: usize,
    pub checked: usize,
}

/// Checks `b·s^β ≤ M(s) ≤ C·e^{αs}` on `points` equispaced points of
/// `range`, skipping points below the declared onset.
pub fn check_growth_envelope(m: &GrowthFunction, range: (f64, f64), points: usize) -> Result<EnvelopeReport> {
    let env = m.envelope();
    if env.lower.is_none() && env.upper.is_none() {
        return Err(Error::Configuration(format!("{} has no envelope metadata", m.label())));
    }
    let (a, b) = range;
    if !(a >= 0.0 && b >= a) || points == 0 {
        return Err(Error::Domain(format!("bad envelope range [{a}, {b}] with {points} points")));
    }
    let mut first = None;
    let mut violations = 0;
    let mut checked = 0;
    for i in 0..points {
        let s = if points == 1 { a } else { a + (b - a) * i as f64 / (points - 1) as f64 };
        if s < env.onset {
            continue;
        }
        checked += 1;
        let v = m.at(s);
        let mut hit = None;
        if let Some(PolyLower { b, beta }) = env.lower {
            let bound = b * s.powf(beta);
            if v < bound {
                hit = Some(EnvelopeViolation { s, side: EnvelopeSide::Lower, value: v, bound });
            }
        }
        if let Some(ExpUpper { c, alpha }) = env.upper {
            if m.ln_at(s) > c.ln() + alpha * s {
                hit = hit.or(Some(EnvelopeViolation { s, side: EnvelopeSide::Upper, value: v, bound: c * (alpha * s).exp() }));
            }
        }
        if let Some(h) = hit {
            violations += 1;
            first.get_or_insert(h);
        }
    }
    Ok(EnvelopeReport { passed: violations == 0, first_violation: first, violations, checked })
}

/// `n` log-spaced points on `[a, b]`.
pub fn log_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => {
            let (la, lb) = (a.ln(), b.ln());
            (0..n)
                .map(|i| {
                    if i == 0 {
                        a
                    } else if i == n - 1 {
                        b
                    } else {
                        (la + (lb - la) * i as f64 / (n - 1) as f64).exp()
                    }
                })
                .collect()
        }
    }
}

/// `n` equispaced points on `[a, b]`.
pub fn linear_grid(a: f64, b: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![a],
        _ => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn poly2() -> GrowthFunction {
        GrowthFunction::polynomial(2.0).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(poly2().eval(0.0).unwrap(), 1.0);
        assert_relative_eq!(GrowthFunction::exponential(1.0).unwrap().eval(1.0).unwrap(), std::f64::consts::E);
        let t = GrowthFunction::table(vec![(0.0, 1.0), (1.0, 3.0)]).unwrap();
        assert_eq!(t.eval(0.5).unwrap(), 2.0);
        assert_eq!(t.eval(7.0).unwrap(), 3.0);
        assert!(matches!(poly2().eval(-1.0), Err(Error::Domain(_))));
    }

    #[test]
    fn m_log_examples() {
        let ml = m_log(&poly2());
        assert_relative_eq!(ml.at(0.0), std::f64::consts::LN_2, max_relative = 1e-15);
        let c = m_log(&GrowthFunction::constant(1.0).unwrap());
        for s in [0.0, 0.3, 5.0, 1e4] {
            assert_relative_eq!(c.at(s), s.ln_1p() + std::f64::consts::LN_2, max_relative = 1e-15);
        }
        // direct arithmetic: 11.7² (ln 11.7 + ln 137.89)
        let expect = 11.7f64.powi(2) * (11.7f64.ln() + (1.0 + 11.7f64.powi(2)).ln());
        assert_relative_eq!(ml.at(10.7), expect, max_relative = 1e-14);
        assert!((ml.at(10.7) - 1011.0).abs() < 1.0);
    }

    #[test]
    fn m_k_examples() {
        let m = GrowthFunction::constant(1.0).unwrap();
        let k = GrowthFunction::exponential(1.0).unwrap();
        let v = m_k(&m, &k).at(1.0);
        let expect = 2f64.ln() + (1.0 + std::f64::consts::E).ln();
        assert_relative_eq!(v, expect, max_relative = 1e-15);
        assert!((v - 2.006408).abs() < 1e-6);
        assert!(GrowthFunction::constant(0.0).is_err());
        assert!(GrowthFunction::parse("const:m0=0").is_err());
    }

    #[test]
    fn m_k_with_itself_is_m_log_bitwise() {
        let m = poly2();
        let (a, b) = (m_k(&m, &m), m_log(&m));
        for s in linear_grid(0.0, 500.0, 1000) {
            assert_eq!(a.at(s).to_bits(), b.at(s).to_bits());
        }
    }

    #[test]
    fn right_inverse_examples() {
        let s = right_inverse(&poly2(), 4.0, 1e-9).unwrap();
        assert!((s - 1.0).abs() <= 1e-9);
        let s = right_inverse(&GrowthFunction::exponential(1.0).unwrap(), 100.0, 1e-9).unwrap();
        assert!((s - 100f64.ln()).abs() <= 1e-9);
        let flat = GrowthFunction::table(vec![(0.0, 1.0), (1.0, 1.0), (2.0, 5.0)]).unwrap();
        assert_eq!(right_inverse(&flat, 1.0, 1e-9).unwrap(), 0.0);
        // interior plateau resolves to its left endpoint
        let plateau = GrowthFunction::table(vec![(0.0, 1.0), (1.0, 2.0), (3.0, 2.0), (4.0, 9.0)]).unwrap();
        assert!((right_inverse(&plateau, 2.0, 1e-9).unwrap() - 1.0).abs() <= 1e-9);
    }

    #[test]
    fn right_inverse_errors() {
        assert!(matches!(right_inverse(&poly2(), 0.5, 1e-9), Err(Error::BelowRange { .. })));
        let capped = GrowthFunction::table(vec![(0.0, 1.0), (1.0, 3.0)]).unwrap();
        assert!(matches!(right_inverse(&capped, 4.0, 1e-9), Err(Error::UnboundedSearch { .. })));
        assert!(matches!(right_inverse(&poly2(), 4.0, 0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn m_log_inverse_at_thousand() {
        let s = right_inverse(&m_log(&poly2()), 1000.0, 1e-9).unwrap();
        assert!((s - 10.6).abs() < 0.1, "{s}");
    }

    #[test]
    fn regularity_constant_examples() {
        let c = GrowthFunction::constant(3.0).unwrap();
        let grid = linear_grid(0.0, 100.0, 1001);
        assert!(check_regularly_growing(&c, 0.5, &grid).unwrap().holds());
        assert!(check_regularly_growing(&c, 0.01, &grid).unwrap().holds());

        // (1+s)^2 with c = 1/2 fails near the origin: M(0) = 1 < 0.5·M(0.5) = 1.125
        let r = check_regularly_growing(&poly2(), 0.5, &grid).unwrap();
        assert!(!r.holds());
        assert_eq!(r.violations[0].s, 0.0);
        assert_relative_eq!(r.violations[0].margin, 1.0 - 0.5 * 2.25);
        assert!(r.violations.iter().all(|v| v.s < 0.1));
        assert!(check_regularly_growing(&poly2(), 0.4, &grid).unwrap().holds());

        let step = GrowthFunction::table(vec![(0.0, 1.0), (0.999_999, 1.0), (1.0, 10.0)]).unwrap();
        let r = check_regularly_growing(&step, 0.5, &[0.2, 0.9, 2.0]).unwrap();
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.violations[0].s, 0.9);
        assert!((r.violations[0].margin - (1.0 - 5.0)).abs() < 1e-12);

        assert!(check_regularly_growing(&c, 1.0, &grid).is_err());
        assert!(check_regularly_growing(&c, 0.0, &grid).is_err());
    }

    #[test]
    fn envelope_examples() {
        let g = GrowthFunction::parse("poly:beta=2,env_b=1,env_beta=2,env_c=10,env_alpha=1").unwrap();
        let r = check_growth_envelope(&g, (1.0, 50.0), 2000).unwrap();
        assert!(r.passed, "{r:?}");

        let g = GrowthFunction::parse("exp:alpha=1,env_b=1,env_beta=3").unwrap();
        let r = check_growth_envelope(&g, (1.0, 10.0), 9001).unwrap();
        assert!(!r.passed);
        let first = r.first_violation.unwrap();
        assert_eq!(first.side, EnvelopeSide::Lower);
        // e^s = s^3 first crosses at s ≈ 1.8572
        assert!((first.s - 1.857_18).abs() < 2e-3, "{first:?}");
        assert!(4f64.exp() < 64.0);

        let g = GrowthFunction::parse("const:m0=2,env_b=1,env_beta=1").unwrap();
        let r = check_growth_envelope(&g, (0.0, 10.0), 101).unwrap();
        assert!(!r.passed);
        assert!(r.first_violation.unwrap().s > 2.0);

        let t = GrowthFunction::table(vec![(0.0, 1.0), (1.0, 2.0)]).unwrap();
        assert!(matches!(check_growth_envelope(&t, (0.0, 1.0), 10), Err(Error::Configuration(_))));
    }

    #[test]
    fn parse_round_trip_labels() {
        for s in ["poly:beta=2", "exp:alpha=1", "const:m0=1", "log:m0=1.5"] {
            assert_eq!(GrowthFunction::parse(s).unwrap().label(), s);
        }
        assert!(GrowthFunction::parse("bogus:xyz").is_err());
        assert!(GrowthFunction::parse("poly:gamma=2").is_err());
        assert!(GrowthFunction::parse("poly").is_err());
        assert!(GrowthFunction::parse("poly:beta=2,zzz=1").is_err());
    }

    #[test]
    fn table_parsing() {
        let t = Table::from_text("# s M\n0 1\n1 3\n\n2, 4\n").unwrap();
        assert_eq!(t.knots().len(), 3);
        assert!(Table::from_text("0 1\n0 2\n").is_err());
        assert!(Table::from_text("0 2\n1 1\n").is_err());
        assert!(Table::from_text("0 1 2\n").is_err());
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(10.0, 1e8, 50);
        assert_eq!(g.len(), 50);
        assert_eq!(g[0], 10.0);
        assert_eq!(g[49], 1e8);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }
}
