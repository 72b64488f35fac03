//! One-dimensional search primitives shared by the growth calculus and the
//! witness optimiser.

/// Inverse golden ratio, `(sqrt(5) - 1) / 2`.
const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Bisects a monotone predicate on `[lo, hi]`.
///
/// Requires `pred(lo) == false` and `pred(hi) == true`. Returns the final
/// bracket `(lo, hi)` with `hi - lo <= tol`, preserving both invariants.
pub fn bisect_predicate<P>(mut pred: P, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64)
where
    P: FnMut(f64) -> bool,
{
    // 2^-1074 spacing means at most ~2100 halvings, cap defensively anyway
    for _ in 0..4096 {
        if hi - lo <= tol {
            break;
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    (lo, hi)
}

/// Result of a bracketed minimisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Minimum {
    pub x: f64,
    pub value: f64,
    pub evaluations: usize,
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
///
/// Stops when the bracket is narrower than `xtol` or after `max_iter`
/// iterations. Non-finite values compare as `+inf`.
pub fn golden_section<F>(mut f: F, mut a: f64, mut b: f64, xtol: f64, max_iter: usize) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let mut eval = |x: f64| {
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };
    if a > b {
        std::mem::swap(&mut a, &mut b);
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = eval(x1);
    let mut f2 = eval(x2);
    let mut evaluations = 2;

    for _ in 0..max_iter {
        if (b - a).abs() <= xtol {
            break;
        }
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = eval(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = eval(x2);
        }
        evaluations += 1;
    }

    if f1 <= f2 {
        Minimum { x: x1, value: f1, evaluations }
    } else {
        Minimum { x: x2, value: f2, evaluations }
    }
}

/// Minimises `f` over `[a, b]` by scanning `seed_points` equispaced points,
/// then refining around the best one with golden-section search.
///
/// The scan guards against multimodal objectives; the refinement bracket
/// spans the neighbours of the best scan point.
pub fn seeded_minimize<F>(mut f: F, a: f64, b: f64, seed_points: usize, xtol: f64) -> Minimum
where
    F: FnMut(f64) -> f64,
{
    let n = seed_points.max(3);
    let xs: Vec<f64> = (0..n)
        .map(|i| a + (b - a) * i as f64 / (n - 1) as f64)
        .collect();
    let mut best = 0;
    let mut best_val = f64::INFINITY;
    let vals: Vec<f64> = xs.iter().map(|&x| f(x)).collect();
    for (i, &v) in vals.iter().enumerate() {
        if v < best_val {
            best_val = v;
            best = i;
        }
    }
    if !best_val.is_finite() {
        return Minimum { x: xs[best], value: best_val, evaluations: n };
    }
    let lo = xs[best.saturating_sub(1)];
    let hi = xs[(best + 1).min(n - 1)];
    let refined = golden_section(&mut f, lo, hi, xtol, 200);
    if refined.value <= best_val {
        Minimum { evaluations: refined.evaluations + n, ..refined }
    } else {
        Minimum { x: xs[best], value: best_val, evaluations: refined.evaluations + n }
    }
}
