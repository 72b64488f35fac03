use std::sync::OnceLock;

use decaylab::growth::{linear_grid, log_grid, m_k, m_log, right_inverse, GrowthFunction};
use decaylab::regions::Region;
use decaylab::semigroup::{decay_norm, mode_decay, mult_semigroup, resolvent_norm, shift_apply, FrequencyRule};
use decaylab::specialfn::{build_h, build_strip_function, default_kernel_grid, KernelH};
use decaylab::truncate::{split, verify_halfplane_bounds, Side};
use decaylab::witness::{admissible, g_rt, optimize_r, Variant, WitnessCertificate};
use decaylab::xforms::{cauchy_check, circle, laplace, SampledComplexFunction, Support, TailBound, TransformSample};
use decaylab::Complex64;
use proptest::prelude::*;

fn kernel() -> &'static KernelH {
    static K: OnceLock<KernelH> = OnceLock::new();
    K.get_or_init(|| build_h(&build_strip_function(1.0).unwrap(), 1e-10, default_kernel_grid(1.0)).unwrap())
}

fn growth() -> impl Strategy<Value = GrowthFunction> {
    prop_oneof![
        (0.5f64..4.0).prop_map(|b| GrowthFunction::polynomial(b).unwrap()),
        (0.05f64..2.0).prop_map(|a| GrowthFunction::exponential(a).unwrap()),
        (0.2f64..5.0).prop_map(|m| GrowthFunction::constant(m).unwrap()),
        (0.2f64..5.0).prop_map(|m| GrowthFunction::logarithmic(m).unwrap()),
    ]
}

fn half_line_gauss(a: f64, w: f64) -> SampledComplexFunction {
    let end = 12.0;
    SampledComplexFunction::from_fn(0.0, 0.01, 1201, Support::HalfLine, |t| Complex64::from_polar((-a * (t - 2.0) * (t - 2.0)).exp(), w * t))
        .unwrap()
        .with_tails(None, Some(TailBound { amplitude: (-a * (end - 2.0) * (end - 2.0)).exp(), rate: 2.0 * a * (end - 2.0) }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn rate_functions_are_monotone(m in growth(), k in growth()) {
        let grid = linear_grid(0.0, 50.0, 1000);
        let (ml, mk) = (m_log(&m), m_k(&m, &k));
        for w in grid.windows(2) {
            prop_assert!(ml.at(w[1]) >= ml.at(w[0]));
            prop_assert!(mk.at(w[1]) >= mk.at(w[0]));
        }
    }

    #[test]
    fn two_function_rate_with_itself_is_mlog(m in growth(), s in 0.0f64..1e6) {
        prop_assert_eq!(m_k(&m, &m).at(s), m_log(&m).at(s));
    }

    #[test]
    fn mlog_dominates_m_log2(m in growth(), s in 0.0f64..1e4) {
        let v = m.at(s);
        if v >= 1.0 {
            prop_assert!(m_log(&m).at(s) >= v * 2f64.ln());
        }
    }

    #[test]
    fn right_inverse_brackets_the_preimage(beta in 0.5f64..4.0, log_t in 0.1f64..18.0) {
        let m = GrowthFunction::polynomial(beta).unwrap();
        let t = log_t.exp();
        let tol = 1e-9;
        let s = right_inverse(&m, t, tol).unwrap();
        prop_assert!(m.at(s) < t);
        prop_assert!(m.at(s + tol.max(4.0 * f64::EPSILON * s)) >= t);
    }

    #[test]
    fn sampled_points_lie_in_their_region(beta in 0.5f64..3.0, y_max in 1.0f64..30.0, nx in 2usize..12, ny in 2usize..40) {
        let m = GrowthFunction::polynomial(beta).unwrap();
        for region in [Region::omega_m(m.clone()), Region::omega_prime_m(m.clone()), Region::strip(m.clone()), Region::semigroup(m.clone())] {
            let grid = region.sample(y_max, nx, ny).unwrap();
            prop_assert!(grid.points.iter().all(|z| region.contains(*z)));
        }
        let strip = Region::strip(m.clone());
        let inner = Region::omega_prime_m(m).sample(y_max, nx, ny).unwrap();
        prop_assert!(inner.points.iter().all(|z| strip.contains(*z)));
    }

    #[test]
    fn laplace_is_linear(a in 0.5f64..3.0, w in -5.0f64..5.0, x in 0.0f64..2.0, y in -10.0f64..10.0, p in -2.0f64..2.0, q in -2.0f64..2.0) {
        let (g1, g2) = (half_line_gauss(a, w), half_line_gauss(a + 0.5, -w));
        let (ca, cb) = (Complex64::new(p, q), Complex64::new(q, -p));
        let lambda = Complex64::new(x, y);
        let lhs = laplace(&g1.combine(ca, &g2, cb).unwrap(), lambda).unwrap().value;
        let rhs = ca * laplace(&g1, lambda).unwrap().value + cb * laplace(&g2, lambda).unwrap().value;
        prop_assert!((lhs - rhs).norm() <= 1e-12 * (1.0 + rhs.norm()));
    }

    #[test]
    fn half_line_transform_bounded_by_l1(a in 0.5f64..3.0, w in -5.0f64..5.0, x in 0.0f64..3.0, y in -20.0f64..20.0) {
        let g = half_line_gauss(a, w);
        let v = laplace(&g, Complex64::new(x, y)).unwrap();
        prop_assert!(v.value.norm() <= g.l1_norm() + v.error + 1e-12);
    }

    #[test]
    fn split_reconstructs_exactly(shift in 0usize..40, n in 41usize..200, w in -3.0f64..3.0) {
        let start = -(shift as f64) * 0.125;
        let g = SampledComplexFunction::from_fn(start, 0.125, n, Support::FullLine, |t| Complex64::from_polar((-t * t / 8.0).exp(), w * t)).unwrap();
        let pair = split(&g).unwrap();
        prop_assert_eq!(pair.reconstruct().unwrap().values, g.values);
        let lambdas = [Complex64::new(0.5, w), Complex64::new(0.0, 1.0)];
        prop_assert!(verify_halfplane_bounds(&pair, Side::Plus, &lambdas, Variant::Plain).unwrap().holds(1e-8));
    }

    #[test]
    fn admissibility_is_monotone(r in 1.0f64..200.0, t in 1.0f64..1e6, f in 1.0f64..4.0) {
        let m = GrowthFunction::polynomial(2.0).unwrap();
        let eps = std::f64::consts::PI / 6.0;
        if admissible(&m, r, t, eps) {
            prop_assert!(admissible(&m, r * f, t, eps));
            prop_assert!(admissible(&m, r, t / f, eps));
        }
    }

    #[test]
    fn multiplication_decay_is_monotone_and_dominates_modes(beta in 0.5f64..3.0, t in 0.0f64..1e5, dt in 0.0f64..1e4, n in 0usize..20) {
        let spec = mult_semigroup(&GrowthFunction::polynomial(beta).unwrap(), &FrequencyRule::default()).unwrap();
        let (a, b) = (decay_norm(&spec, t).unwrap(), decay_norm(&spec, t + dt).unwrap());
        prop_assert!(b <= a);
        prop_assert!(a >= mode_decay(&spec, n, t));
    }

    #[test]
    fn resolvent_norm_hits_m_at_frequencies(beta in 0.5f64..3.0, n in 0usize..20) {
        let m = GrowthFunction::polynomial(beta).unwrap();
        let spec = mult_semigroup(&m, &FrequencyRule::default()).unwrap();
        let s = spec.frequencies[n];
        let v = resolvent_norm(&spec, s);
        prop_assert!((v - m.at(s)).abs() <= 1e-15 * m.at(s));
    }

    #[test]
    fn certificate_json_round_trips(beta in 0.5f64..3.0, t in 10.0f64..1e5) {
        let m = GrowthFunction::polynomial(beta).unwrap();
        let cert = optimize_r(&m, None, t, std::f64::consts::PI / 6.0, Variant::Plain, 1e6).unwrap();
        let back: WitnessCertificate = serde_json::from_str(&cert.to_json()).unwrap();
        prop_assert_eq!(back, cert);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn witness_l1_is_translation_invariant(r in 1.0f64..50.0, t in 1.0f64..500.0) {
        let h = kernel();
        let (a, b) = (g_rt(h, r, t).unwrap(), g_rt(h, r, 2.0 * t).unwrap());
        let (la, lb) = (a.samples.l1_norm(), b.samples.l1_norm());
        prop_assert!((la - lb).abs() <= 1e-12 * la);
        // Simpson on |g| is first-order accurate at the zeros of h
        prop_assert!((la - h.l1_norm).abs() <= 1e-5 * la, "{} vs {}", la, h.l1_norm);
    }

    #[test]
    fn shifting_moves_the_peak(r in 1.0f64..50.0, tau in 1.0f64..500.0) {
        let h = kernel();
        let w = g_rt(h, r, tau).unwrap();
        let shifted = shift_apply(&w.samples, tau);
        let k = shifted.index_of(h.t0).unwrap();
        prop_assert_eq!(shifted.values[k], w.value_at(tau + h.t0).unwrap());
        prop_assert!((shifted.values[k].norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn strip_function_passes_mean_value_check(x in -0.9f64..0.9, y in -3.0f64..3.0) {
        let h = build_strip_function(1.0).unwrap();
        let center = Complex64::new(x, y);
        let pts = circle(center, 0.1, 64);
        let sample = TransformSample::from_fn(&pts, |z| h.eval(z).unwrap());
        let r = cauchy_check(&sample, h.eval(center).unwrap()).unwrap();
        prop_assert!(r < 1e-8 * (1.0 + h.eval(center).unwrap().norm()));
    }
}

#[test]
fn separation_holds_across_the_grid() {
    use decaylab::semigroup::{shift_point, ShiftParams};
    let m = GrowthFunction::polynomial(2.0).unwrap();
    let spec = mult_semigroup(&m, &FrequencyRule::default()).unwrap();
    let h = kernel();
    let taus = log_grid(1e3, 1e6, 7);
    let lower: Vec<f64> = taus.iter().map(|&t| shift_point(&m, h, t, &ShiftParams::default()).unwrap().lower).collect();
    let mult: Vec<f64> = taus.iter().map(|&t| decay_norm(&spec, t).unwrap()).collect();
    let ratios: Vec<f64> = (0..taus.len()).map(|i| (lower[i] / lower[0]) / (mult[i] / mult[0])).collect();
    assert!(ratios.iter().all(|&q| q >= 1.0 - 1e-12), "{ratios:?}");
    assert!(*ratios.last().unwrap() >= 1.3, "{ratios:?}");
}
