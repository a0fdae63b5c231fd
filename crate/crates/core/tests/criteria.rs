mod common;

use proptest::prelude::*;

use common::{config, rearranged, rel_le, spaces};
use riembed_core::criteria::{
    check_campanato, check_morrey, kernel_norm_morrey, marcinkiewicz_norm, optimal_campanato_target,
    optimal_morrey_target, CheckOptions, Verdict,
};
use riembed_core::norms::PowerKernel;
use riembed_core::step::{integrate_power_against, integrate_power_against_double_star};
use riembed_core::{Grid, PowerPiece, RiSpace, StepFunction, Weight};

fn coarse() -> Grid {
    Grid::log_spaced(1e-14, 8).unwrap()
}

fn kernel(x: &RiSpace, exponent: f64, lo: f64, hi: f64) -> f64 {
    x.kernel_norm(&PowerKernel::new(exponent, lo, hi).unwrap()).unwrap().value
}

#[test]
fn morrey_kernel_is_nonincreasing() {
    for (name, x) in spaces() {
        for (n, m) in [(2, 1), (3, 1), (3, 2), (4, 3)] {
            let vals: Vec<f64> =
                coarse().interior().iter().map(|&r| kernel_norm_morrey(&x, n, m, r).unwrap()).collect();
            for w in vals.windows(2) {
                assert!(w[1] <= w[0] * (1.0 + 1e-9), "{name}, n = {n}, m = {m}: {w:?}");
            }
        }
    }
}

#[test]
fn restricted_supremum_is_equivalent() {
    let x = RiSpace::lebesgue(2.0).unwrap();
    let opts = CheckOptions::default();
    for phi in [Weight::power(-0.5), Weight::power(-0.3), Weight::power_log(-0.5, 1.0, 0.0).unwrap(), Weight::one()] {
        let full = check_morrey(&x, 3, 1, &phi, &opts).unwrap();
        let restricted = full.grid_values.iter().filter(|v| v.0 < 1e-2).map(|v| v.1).fold(0.0, f64::max);
        assert!(full.finite_sup >= restricted);
        if full.verdict == Verdict::Holds {
            assert!(full.finite_sup <= 10.0 * restricted, "{phi:?}: {} vs {restricted}", full.finite_sup);
        }
    }
}

#[test]
fn optimal_targets_are_self_consistent() {
    let opts = CheckOptions { grid: coarse(), ..Default::default() };
    let cases = [
        (RiSpace::lebesgue(2.0).unwrap(), 3, 1),
        (RiSpace::lebesgue(1.5).unwrap(), 4, 2),
        (RiSpace::weak_lebesgue(3.0).unwrap(), 3, 1),
        (RiSpace::lorentz(2.0, 1.0).unwrap(), 3, 1),
        (RiSpace::zygmund(2.0, 1.0).unwrap(), 3, 1),
    ];
    for (x, n, m) in &cases {
        let phi = optimal_morrey_target(x, *n, *m, &opts.grid).unwrap();
        let r = check_morrey(x, *n, *m, &phi, &opts).unwrap();
        assert!((r.finite_sup - 1.0).abs() <= 1e-9, "{x:?}: {}", r.finite_sup);
        assert_eq!(r.verdict, Verdict::Holds, "{x:?}");
    }
    for (x, n, m, k) in [(RiSpace::lebesgue(4.0).unwrap(), 2, 1, 0), (RiSpace::lebesgue(2.0).unwrap(), 3, 2, 0), (RiSpace::lebesgue(2.0).unwrap(), 3, 2, 1)] {
        let phi = optimal_campanato_target(&x, n, m, k, &opts.grid).unwrap();
        let r = check_campanato(&x, n, m, k, &phi, &opts).unwrap();
        let sup = r.grid_values.iter().filter(|v| v.0 <= 0.5).map(|v| v.1).fold(0.0, f64::max);
        assert!((sup - 1.0).abs() <= 1e-9, "{x:?}, k = {k}: {sup}");
        assert_eq!(r.verdict, Verdict::Holds, "{x:?}, k = {k}");
    }
}

#[test]
fn half_interval() {
    for (name, x) in spaces() {
        for alpha in [-2.0 / 3.0, -0.5, -1.0 / 3.0] {
            for i in 0..=10 {
                let r = 10f64.powf(-2.0 - i as f64);
                let q = kernel(&x, alpha, r, 1.0) / kernel(&x, alpha, r, 0.5);
                assert!(q >= 1.0 - 1e-9 && q <= 1.0 + 2f64.powf(alpha) + 1e-9, "{name}, α = {alpha}, r = {r}: {q}");
            }
        }
    }
}

#[test]
fn comparison_of_conditions() {
    for (name, x) in spaces() {
        for alpha in [1.0 / 3.0, 2.0 / 3.0, 1.0] {
            for i in 0..=12 {
                let r = 10f64.powf(-(i as f64));
                let q = kernel(&x, alpha, 0.0, r) / (r.powf(alpha) * x.fundamental(r).unwrap());
                assert!(q >= 2f64.powf(-alpha - 1.0) && q <= 1.0 + 1e-9, "{name}, α = {alpha}, r = {r}: {q}");
            }
        }
    }
}

/// Cell averages of `s^α min(1, r/s)` on a fine log grid, rearranged.
fn interval_profile(alpha: f64, r: f64) -> StepFunction {
    let grid = Grid::log_spaced(1e-14, 32).unwrap();
    let values = (0..grid.cell_count())
        .map(|i| {
            let (a, b) = grid.cell(i);
            let mut s = 0.0;
            if a < r {
                s += riembed_core::quad::power_integral(alpha, a, b.min(r));
            }
            if b > r {
                s += r * riembed_core::quad::power_integral(alpha - 1.0, a.max(r), b);
            }
            s / (b - a)
        })
        .collect();
    StepFunction::new(grid, values).unwrap().rearranged()
}

#[test]
fn interval_norm() {
    let families = [
        RiSpace::lebesgue(1.0).unwrap(),
        RiSpace::lebesgue(2.0).unwrap(),
        RiSpace::lebesgue(4.0).unwrap(),
        RiSpace::zygmund(2.0, 1.0).unwrap(),
        RiSpace::orlicz(riembed_core::YoungFunction::power_log(1.5, -0.5, 1.0).unwrap()),
    ];
    for x in &families {
        for alpha in [1.0 / 3.0, 0.5, 2.0 / 3.0, 1.0] {
            let c = 2f64.powf(1.0 - alpha).max(1.0) + 1.0;
            for r in [1e-1, 1e-3, 1e-6] {
                let lhs = x.norm(&interval_profile(alpha, r)).unwrap().value;
                let rhs = r * kernel(x, alpha - 1.0, r, 1.0);
                let q = lhs / rhs;
                assert!(q >= 1.0 / c && q <= c, "{x:?}, α = {alpha}, r = {r}: {q}");
            }
        }
    }
}

proptest! {
    #![proptest_config(config(128))]

    #[test]
    fn double_integral_lemma(f in rearranged(16), r in -8.0..-0.61f64) {
        let r = 10f64.powf(r);
        for alpha in [0.25, 0.5, 0.75] {
            let mid = integrate_power_against_double_star(&f, &PowerPiece::new(1.0, -1.0 + alpha, r, 1.0).unwrap()).unwrap();
            let rhs = r.powf(-1.0 + alpha) * f.primitive(r)
                + integrate_power_against(&f, &PowerPiece::new(1.0, -1.0 + alpha, r, 1.0 - r).unwrap()).unwrap();
            let upper = 2.0 / (1.0 - alpha);
            let lower = (1.0 - 2f64.powf(-1.0 + alpha)) / (2.0 * (1.0 - alpha));
            prop_assert!(rel_le(lower * rhs, mid, 1e-12), "α = {alpha}: lower");
            prop_assert!(rel_le(mid, upper * rhs, 1e-12), "α = {alpha}: upper");
        }
    }

    #[test]
    fn bmo_equivalence(f in rearranged(16)) {
        let grid = coarse();
        for n in 2..=4u32 {
            for m in 1..=n {
                let nf = n as f64;
                let mut lhs: f64 = 0.0;
                let mut rhs: f64 = 0.0;
                for &r in grid.interior() {
                    let piece = PowerPiece::new(1.0, -1.0 + (m - 1) as f64 / nf, r, 1.0).unwrap();
                    lhs = lhs.max(r.powf(1.0 / nf) * integrate_power_against_double_star(&f, &piece).unwrap());
                    rhs = rhs.max(r.powf(m as f64 / nf) * f.double_star(r).unwrap());
                }
                let c = 4.0 * nf;
                prop_assert!(lhs <= c * rhs && rhs <= c * lhs, "n = {n}, m = {m}: {lhs} vs {rhs}");
            }
        }
    }

    #[test]
    fn marcinkiewicz_dominates_averages(f in rearranged(16), a in -0.8..0.0f64, t0 in 0.0..0.5f64) {
        let phi = Weight::power(a);
        let grid = coarse();
        let n = 3;
        let marc = marcinkiewicz_norm(&phi, n, &f, &grid).unwrap();
        for &t in grid.interior() {
            if t0 + t > 1.0 {
                continue;
            }
            let avg = (f.primitive(t0 + t) - f.primitive(t0)) / t / phi.eval(t.powf(1.0 / n as f64));
            prop_assert!(rel_le(avg, marc, 1e-12), "t = {t}: {avg} > {marc}");
        }
    }
}
