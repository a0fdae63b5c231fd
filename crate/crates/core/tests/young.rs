mod common;

use proptest::prelude::*;

use common::{config, young_functions};
use riembed_core::young::{EmFunction, YoungFunction};

fn log_grid(lo: f64, hi: f64, per_decade: usize) -> Vec<f64> {
    let n = ((hi / lo).log10() * per_decade as f64).round() as usize;
    (0..=n).map(|i| lo * (hi / lo).powf(i as f64 / n as f64)).collect()
}

/// `sup_τ (τ t - B(τ))`: a log grid scan refined by ternary search around the best node.
fn brute_conjugate(b: &dyn Fn(f64) -> f64, t: f64) -> f64 {
    let g = |tau: f64| tau * t - b(tau);
    let taus = log_grid(1e-16, 1e12, 100);
    let i = (0..taus.len()).max_by(|&i, &j| g(taus[i]).total_cmp(&g(taus[j]))).unwrap();
    let (mut lo, mut hi) = (taus[i.saturating_sub(1)], taus[(i + 1).min(taus.len() - 1)]);
    for _ in 0..200 {
        let (x, y) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
        if g(x) < g(y) {
            lo = x;
        } else {
            hi = y;
        }
    }
    g(0.5 * (lo + hi)).max(0.0)
}

#[test]
fn conjugate_inverse_sandwich() {
    for (name, a) in young_functions() {
        let c = a.conjugate_function();
        for t in log_grid(1e-6, 1e6, 8) {
            let p = a.inverse(t) * c.inverse(t);
            assert!(p >= t * (1.0 - 1e-6), "{name}: A^-1 Ã^-1 ({t}) = {p} < t");
            assert!(p <= 2.0 * t * (1.0 + 1e-6), "{name}: A^-1 Ã^-1 ({t}) = {p} > 2t");
        }
    }
}

#[test]
fn biconjugation() {
    for a in [YoungFunction::power(2.0, 1.0).unwrap(), YoungFunction::power(1.5, 0.3).unwrap(), YoungFunction::power(4.0, 2.0).unwrap()] {
        let c = a.conjugate_function();
        for t in log_grid(1e-3, 1e3, 4) {
            let b = brute_conjugate(&|s| c.eval(s), t);
            assert!((b - a.eval(t)).abs() <= 1e-6 * a.eval(t), "{a:?} at {t}: {b}");
        }
    }
    for a in [YoungFunction::power_log(2.0, 1.0, 1.0).unwrap(), YoungFunction::power_log(3.0, -1.0, 1.0).unwrap(), YoungFunction::zygmund(1.5, 2.0).unwrap()] {
        let c = a.conjugate_function();
        for t in log_grid(1e-2, 1e2, 4) {
            let b = brute_conjugate(&|s| c.eval(s), t);
            assert!(b >= a.eval(t / 2.0) && b <= a.eval(2.0 * t), "{a:?} at {t}: {b}");
        }
    }
}

#[test]
fn em_function_is_monotone_and_invertible() {
    let cases = [
        (YoungFunction::power(1.5, 1.0).unwrap(), 3, 1),
        (YoungFunction::power(2.0, 1.0).unwrap(), 4, 1),
        (YoungFunction::power_log(2.0, 1.0, 1.0).unwrap(), 3, 1),
        (YoungFunction::zygmund(1.5, 2.0).unwrap(), 3, 1),
        (YoungFunction::zygmund(1.2, -0.5).unwrap(), 4, 2),
    ];
    for (a, n, m) in cases {
        let e = EmFunction::new(&a, n, m).unwrap();
        let ts = log_grid(1e-4, 1e6, 8);
        let vals: Vec<f64> = ts.iter().map(|&t| e.eval(t)).collect();
        for w in vals.windows(2) {
            if w[1].is_finite() {
                assert!(w[1] > w[0], "{a:?}: E not increasing: {w:?}");
            }
        }
        for y in log_grid(1e-6, 1e12, 2) {
            let back = e.eval(e.inverse(y));
            assert!((back - y).abs() <= 1e-8 * y, "{a:?}: E(E^-1({y})) = {back}");
        }
    }
}

proptest! {
    #![proptest_config(config(512))]

    #[test]
    fn young_inequality(s in -6.0..6.0f64, t in -6.0..6.0f64) {
        let (s, t) = (10f64.powf(s), 10f64.powf(t));
        for (name, a) in young_functions() {
            let rhs = a.eval(s) + a.conjugate_eval(t);
            prop_assert!(s * t <= rhs * (1.0 + 1e-9), "{name}: {s} * {t} > {rhs}");
        }
    }
}
