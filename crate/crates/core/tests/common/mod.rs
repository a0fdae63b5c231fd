#![allow(dead_code)]

use proptest::prelude::*;
use proptest::test_runner::{Config, RngSeed};

use riembed_core::young::YoungFunction;
use riembed_core::{rearrange, RiSpace, StepFunction};

pub const SEED: u64 = 0x5eed_2024;

pub fn config(cases: u32) -> Config {
    eprintln!("proptest seed {SEED:#x}");
    Config { cases, rng_seed: RngSeed::Fixed(SEED), failure_persistence: None, ..Config::default() }
}

/// `(value, measure)` pairs with measures spread over eight decades and summing to 1.
pub fn samples(max_cells: usize) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((0.0..10.0f64, 0.0..8.0f64), 1..max_cells).prop_map(|raw| {
        let w: Vec<f64> = raw.iter().map(|(_, e)| 10f64.powf(-e)).collect();
        let total: f64 = w.iter().sum();
        raw.iter().zip(&w).map(|((v, _), w)| (*v, w / total)).collect()
    })
}

pub fn rearranged(max_cells: usize) -> impl Strategy<Value = StepFunction> {
    samples(max_cells).prop_map(|s| rearrange(&s).unwrap())
}

pub fn spaces() -> Vec<(&'static str, RiSpace)> {
    let pl = YoungFunction::power_log(2.0, 1.0, 1.0).unwrap();
    vec![
        ("L1", RiSpace::lebesgue(1.0).unwrap()),
        ("L2", RiSpace::lebesgue(2.0).unwrap()),
        ("L3.5", RiSpace::lebesgue(3.5).unwrap()),
        ("Linf", RiSpace::lebesgue(f64::INFINITY).unwrap()),
        ("Lw3", RiSpace::weak_lebesgue(3.0).unwrap()),
        ("Lor(2,1)", RiSpace::lorentz(2.0, 1.0).unwrap()),
        ("Lor(3,2)", RiSpace::lorentz(3.0, 2.0).unwrap()),
        ("Orl-lux", RiSpace::orlicz(pl.clone())),
        ("Orl-ame", RiSpace::Orlicz { young: pl, form: riembed_core::norms::OrliczForm::Amemiya }),
        ("Zyg(2,1)", RiSpace::zygmund(2.0, 1.0).unwrap()),
    ]
}

pub fn young_functions() -> Vec<(&'static str, YoungFunction)> {
    vec![
        ("t^2", YoungFunction::power(2.0, 1.0).unwrap()),
        ("t^1.5/3", YoungFunction::power(1.5, 1.0 / 3.0).unwrap()),
        ("t", YoungFunction::power(1.0, 1.0).unwrap()),
        ("linf", YoungFunction::LinfLike),
        ("t^2 log(e+t)", YoungFunction::power_log(2.0, 1.0, 1.0).unwrap()),
        ("t^3 log(e+t)^-1", YoungFunction::power_log(3.0, -1.0, 1.0).unwrap()),
        ("t log(e+t)", YoungFunction::power_log(1.0, 1.0, 1.0).unwrap()),
        ("zyg(1.5,2)", YoungFunction::zygmund(1.5, 2.0).unwrap()),
        ("tab", YoungFunction::tabulated(vec![(1.0, 0.5), (2.0, 2.0), (4.0, 10.0)]).unwrap()),
        ("lin0(t^2 log)", YoungFunction::power_log(2.0, 1.0, 1.0).unwrap().linear_near_zero()),
    ]
}

pub fn rel_le(a: f64, b: f64, tol: f64) -> bool {
    a <= b + tol * b.abs().max(1e-300)
}

fn simpson_rec(f: &dyn Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature of a smooth integrand on `[a, b]`.
pub fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let (fa, fm, fb) = (f(a), f(0.5 * (a + b)), f(b));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_rec(f, a, b, fa, fm, fb, whole, tol, 50)
}

/// Adaptive Simpson on geometric panels of `[a, b]`, for integrands that vary on a log scale.
pub fn simpson_log(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let panels = ((b / a).log10().ceil() as usize * 4).max(1);
    let q = (b / a).powf(1.0 / panels as f64);
    (0..panels).map(|i| simpson(f, a * q.powi(i as i32), (a * q.powi(i as i32 + 1)).min(b), tol)).sum()
}

/// `(1/r) ∫_0^r ∫_ϱ^1 s^(-m+m/n) f(s) (s-ϱ)^(m-1) ds dϱ` by nested adaptive quadrature.
pub fn extremal_average_oracle(f: &StepFunction, n: u32, m: u32, r: f64) -> f64 {
    let g = m as f64 / n as f64;
    let edges = f.grid().edges().to_vec();
    let inner = |rho: f64| -> f64 {
        let mut cuts = vec![rho];
        cuts.extend(edges.iter().copied().filter(|&e| e > rho && e < 1.0));
        cuts.push(1.0);
        cuts.windows(2)
            .map(|w| {
                let v = f.value_at(0.5 * (w[0] + w[1]));
                if v == 0.0 {
                    return 0.0;
                }
                v * simpson_log(&|s: f64| s.powf(-(m as f64) + g) * (s - rho).powi(m as i32 - 1), w[0], w[1], 1e-14)
            })
            .sum()
    };
    let mut cuts = vec![1e-14];
    cuts.extend(edges.iter().copied().filter(|&e| e > 1e-14 && e < r));
    cuts.push(r);
    cuts.windows(2).map(|w| simpson_log(&inner, w[0], w[1], 1e-12)).sum::<f64>() / r
}
