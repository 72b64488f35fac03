//! Continuation regions and interior sampling grids.
//!
//! All regions are open and symmetric under `Im λ ↦ -Im λ`; their horizontal
//! cross-section at height `y` is an open interval of real parts, which is
//! what the grids discretize. Suprema computed on these grids are
//! grid-suprema and carry the grid metadata with them.

use num_complex::Complex64;

use crate::growth::GrowthFunction;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegionKind {
    /// `Re λ > -1/M(|Im λ|)`.
    OmegaM,
    /// `|Re λ| < 1/M(|Im λ|)`.
    OmegaPrimeM,
    /// `|Re λ| < 1/M(0)`.
    StripSM,
    /// `Re λ > -1/M(|Im λ|)` and `|Re λ| < cap` (cap defaults to 1).
    OmegaSemigroup,
}

impl RegionKind {
    pub fn name(self) -> &'static str {
        match self {
            RegionKind::OmegaM => "omega_m",
            RegionKind::OmegaPrimeM => "omega_prime_m",
            RegionKind::StripSM => "strip_s_m",
            RegionKind::OmegaSemigroup => "omega_semigroup",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Region {
    pub kind: RegionKind,
    pub m: GrowthFunction,
    /// Real-part cap. For `OmegaSemigroup` this is `|Re λ| < cap`; for
    /// `OmegaM` it only bounds the sampled interval on the right.
    pub cap: Option<f64>,
}

impl Region {
    pub fn new(kind: RegionKind, m: GrowthFunction) -> Self {
        let cap = match kind {
            RegionKind::OmegaSemigroup => Some(1.0),
            _ => None,
        };
        Region { kind, m, cap }
    }

    pub fn omega_m(m: GrowthFunction) -> Self {
        Self::new(RegionKind::OmegaM, m)
    }

    pub fn omega_prime_m(m: GrowthFunction) -> Self {
        Self::new(RegionKind::OmegaPrimeM, m)
    }

    pub fn strip(m: GrowthFunction) -> Self {
        Self::new(RegionKind::StripSM, m)
    }

    pub fn semigroup(m: GrowthFunction) -> Self {
        Self::new(RegionKind::OmegaSemigroup, m)
    }

    pub fn with_cap(mut self, cap: f64) -> Self {
        self.cap = Some(cap);
        self
    }

    /// Exact strict-inequality membership.
    pub fn contains(&self, lambda: Complex64) -> bool {
        let (x, y) = (lambda.re, lambda.im.abs());
        match self.kind {
            RegionKind::OmegaM => x > -1.0 / self.m.at(y),
            RegionKind::OmegaPrimeM => x.abs() < 1.0 / self.m.at(y),
            RegionKind::StripSM => x.abs() < 1.0 / self.m.m0(),
            RegionKind::OmegaSemigroup => {
                let cap = self.cap.unwrap_or(1.0);
                x > -1.0 / self.m.at(y) && x.abs() < cap
            }
        }
    }

    /// Open interval of real parts sampled at height `y`, or `None` when empty.
    ///
    /// `OmegaM` is unbounded on the right; its sampled interval stops at the
    /// cap, or at `1/M(0)` when no cap is set.
    pub fn real_interval(&self, y: f64) -> Option<(f64, f64)> {
        let w = 1.0 / self.m.at(y.abs());
        let (lo, hi) = match self.kind {
            RegionKind::OmegaM => (-w, self.cap.unwrap_or(1.0 / self.m.m0())),
            RegionKind::OmegaPrimeM => (-w, w),
            RegionKind::StripSM => {
                let w0 = 1.0 / self.m.m0();
                (-w0, w0)
            }
            RegionKind::OmegaSemigroup => {
                let cap = self.cap.unwrap_or(1.0);
                ((-w).max(-cap), cap)
            }
        };
        (hi > lo).then_some((lo, hi))
    }

    /// Uniform interior grid, see [`SampleSpec`].
    pub fn sample(&self, y_max: f64, nx: usize, ny: usize) -> Result<RegionGrid> {
        self.sample_with(&SampleSpec::uniform(y_max, nx, ny))
    }

    pub fn sample_with(&self, spec: &SampleSpec) -> Result<RegionGrid> {
        if spec.nx < 2 || spec.ny < 2 {
            return Err(Error::Domain(format!("grids need nx, ny >= 2 (got {} x {})", spec.nx, spec.ny)));
        }
        if !(spec.y_max > 0.0) {
            return Err(Error::Domain(format!("y_max must be > 0, got {}", spec.y_max)));
        }
        let dy = 2.0 * spec.y_max / spec.ny as f64;
        let mut points = Vec::with_capacity(spec.ny * (spec.nx + 2 * spec.edge_refine));
        let mut rows = Vec::with_capacity(spec.ny);
        let mut skipped = Vec::new();
        for j in 0..spec.ny {
            let y = -spec.y_max + (j as f64 + 0.5) * dy;
            let Some((lo, hi)) = self.real_interval(y) else {
                skipped.push(y);
                continue;
            };
            let start = points.len();
            push_row(&mut points, lo, hi, y, spec.nx, spec.edge_refine);
            // rounding at the open boundary can land exactly on it
            let mut k = start;
            while k < points.len() {
                if self.contains(points[k]) {
                    k += 1;
                } else {
                    points.swap_remove(k);
                }
            }
            rows.push(GridRow { y, start, len: points.len() - start });
        }
        Ok(RegionGrid { kind: self.kind, spec: *spec, points, rows, skipped_rows: skipped })
    }
}

fn push_row(points: &mut Vec<Complex64>, lo: f64, hi: f64, y: f64, nx: usize, refine: usize) {
    let w = hi - lo;
    let dx = w / nx as f64;
    for i in 0..nx {
        points.push(Complex64::new(lo + (i as f64 + 0.5) * dx, y));
    }
    let mut d = 0.5 * dx;
    for _ in 0..refine {
        d *= 0.5;
        points.push(Complex64::new(lo + d, y));
        points.push(Complex64::new(hi - d, y));
    }
}

/// Grid layout: `ny` rows at `y = -y_max + (j + ½)·2y_max/ny`, each with `nx`
/// real parts inset by half a step from the open boundary, plus
/// `edge_refine` geometrically refined points next to each boundary.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SampleSpec {
    pub y_max: f64,
    pub nx: usize,
    pub ny: usize,
    pub edge_refine: usize,
}

impl SampleSpec {
    pub fn uniform(y_max: f64, nx: usize, ny: usize) -> Self {
        SampleSpec { y_max, nx, ny, edge_refine: 0 }
    }

    /// Rows spaced exactly `dy` apart; grids with commensurate `y_max` share rows.
    pub fn with_row_spacing(y_max: f64, dy: f64, nx: usize) -> Self {
        let ny = ((2.0 * y_max / dy).round() as usize).max(2);
        SampleSpec { y_max: 0.5 * dy * ny as f64, nx, ny, edge_refine: 0 }
    }

    pub fn refined(mut self, levels: usize) -> Self {
        self.edge_refine = levels;
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridRow {
    pub y: f64,
    pub start: usize,
    pub len: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegionGrid {
    pub kind: RegionKind,
    pub spec: SampleSpec,
    pub points: Vec<Complex64>,
    pub rows: Vec<GridRow>,
    pub skipped_rows: Vec<f64>,
}

impl RegionGrid {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn row_points(&self, row: &GridRow) -> &[Complex64] {
        &self.points[row.start..row.start + row.len]
    }

    /// Short identifier recorded alongside grid-suprema.
    pub fn id(&self) -> String {
        format!(
            "{}:y_max={}:nx={}:ny={}:refine={}",
            self.kind.name(),
            self.spec.y_max,
            self.spec.nx,
            self.spec.ny,
            self.spec.edge_refine
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn membership_examples() {
        let one = GrowthFunction::constant(1.0).unwrap();
        assert!(Region::omega_m(one.clone()).contains(c(0.0, 0.0)));
        assert!(!Region::omega_prime_m(one.clone()).contains(c(1.5, 0.0)));
        let p = GrowthFunction::polynomial(2.0).unwrap();
        assert!(!Region::omega_prime_m(p.clone()).contains(c(0.5, 1.0)));
        assert!(Region::omega_prime_m(p.clone()).contains(c(0.2, 1.0)));
        assert!(Region::semigroup(one.clone()).contains(c(0.9, 3.0)));
        assert!(!Region::semigroup(one).contains(c(1.0, 3.0)));
        assert!(!Region::semigroup(p).contains(c(-0.5, 1.0)));
    }

    #[test]
    fn strip_sample_small() {
        let one = GrowthFunction::constant(1.0).unwrap();
        let g = Region::strip(one).sample(1.0, 2, 2).unwrap();
        assert_eq!(g.len(), 4);
        assert!(g.points.iter().all(|p| p.re.abs() < 1.0));
        assert!(g.skipped_rows.is_empty());
    }

    #[test]
    fn sampled_points_are_interior() {
        let p = GrowthFunction::polynomial(2.0).unwrap();
        for kind in [RegionKind::OmegaM, RegionKind::OmegaPrimeM, RegionKind::StripSM, RegionKind::OmegaSemigroup] {
            let r = Region::new(kind, p.clone());
            let g = r.sample_with(&SampleSpec::uniform(10.0, 20, 50).refined(30)).unwrap();
            assert_eq!(g.len(), 50 * (20 + 60));
            assert!(g.points.iter().all(|&z| r.contains(z)), "{kind:?}");
        }
        let g = Region::omega_prime_m(p).sample(10.0, 10, 10).unwrap();
        assert!(g.points.iter().all(|z| z.re.abs() < 1.0 / (1.0 + z.im.abs()).powi(2)));
    }

    #[test]
    fn degenerate_rows_are_skipped() {
        let p = GrowthFunction::polynomial(2.0).unwrap();
        // cap below the left boundary everywhere except near y = 0
        let r = Region::semigroup(p).with_cap(0.3);
        let g = r.sample(5.0, 4, 10).unwrap();
        assert!(g.skipped_rows.is_empty());
        let r = Region::omega_m(GrowthFunction::constant(1.0).unwrap()).with_cap(-2.0);
        let g = r.sample(5.0, 4, 10).unwrap();
        assert_eq!(g.skipped_rows.len(), 10);
        assert!(g.is_empty());
    }

    #[test]
    fn commensurate_spacing_shares_rows() {
        let a = SampleSpec::with_row_spacing(12.0, 0.1, 8);
        let b = SampleSpec::with_row_spacing(16.0, 0.1, 8);
        assert_eq!(a.ny, 240);
        assert_eq!(b.ny, 320);
        let one = GrowthFunction::constant(1.0).unwrap();
        let ga = Region::strip(one.clone()).sample_with(&a).unwrap();
        let gb = Region::strip(one).sample_with(&b).unwrap();
        let ya: Vec<f64> = ga.rows.iter().map(|r| r.y).collect();
        let shared = gb.rows.iter().filter(|r| ya.iter().any(|&y| (y - r.y).abs() < 1e-9)).count();
        assert_eq!(shared, 240);
    }

    #[test]
    fn rejects_tiny_grids() {
        let one = GrowthFunction::constant(1.0).unwrap();
        assert!(Region::strip(one.clone()).sample(1.0, 1, 5).is_err());
        assert!(Region::strip(one).sample(0.0, 4, 5).is_err());
    }
}
