//! One test per acceptance criterion. Each prints a `acceptance N: PASS|FAIL` line.

use std::io::Write;
use std::time::Instant;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use riembed_cli::commands::{random_profile, selftest_doc, table_doc};
use riembed_cli::config::RunConfig;
use riembed_core::asymptotics::{RowStatus, TOL_A, TOL_B, TOL_C};
use riembed_core::criteria::{
    check_campanato, check_morrey, check_vanishing_morrey, kernel_norm_morrey, optimal_morrey_target, CheckOptions,
    Trend, Verdict,
};
use riembed_core::norms::{conjugate_exponent, OrliczForm, PowerKernel};
use riembed_core::step::{integrate_power_against, integrate_power_against_double_star};
use riembed_core::witnesses::{extremal_vf_centered_average, tail_pairing};
use riembed_core::young::{orlicz_campanato_weight, orlicz_morrey_weight, YoungFunction};
use riembed_core::{Grid, PowerPiece, RiSpace, StepFunction, Weight};

const SEED: u64 = 20241019;

fn log(line: &str) {
    let mut e = std::io::stderr().lock();
    let _ = writeln!(e, "{line}");
}

fn report(n: u32, pass: bool, detail: &str) {
    log(&format!("acceptance {n}: {} ({detail})", if pass { "PASS" } else { "FAIL" }));
    assert!(pass, "acceptance {n} failed: {detail}");
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn criterion_01_corollary_tables() {
    let start = Instant::now();
    let doc = table_doc(&RunConfig::default()).unwrap();
    let secs = start.elapsed().as_secs_f64();
    let mut bad = Vec::new();
    for r in &doc.rows {
        let d = [r.deltas[0].0, r.deltas[1].0, r.deltas[2].0];
        let ok = r.status == RowStatus::Pass && d[0].abs() <= TOL_A && d[1].abs() <= TOL_B && d[2].abs() <= TOL_C;
        log(&format!(
            "  {:<58} {:<5} da = {:+.4} db = {:+.4} dc = {:+.4}",
            r.key,
            if ok { "ok" } else { "FAIL" },
            d[0],
            d[1],
            d[2]
        ));
        if !ok {
            bad.push(r.key.clone());
        }
    }
    let families = ["zygmund-morrey:", "lebesgue-morrey:", "zygmund-campanato:", "lebesgue-campanato:"];
    let covered = families.iter().all(|f| doc.rows.iter().any(|r| r.key.starts_with(f)));
    let pass = doc.rows.len() >= 24 && covered && bad.is_empty() && secs <= 60.0;
    report(
        1,
        pass,
        &format!("{} rows, {} outside tolerance {:?}, {secs:.1} s", doc.rows.len(), bad.len(), bad),
    );
}

fn lebesgue_morrey_closed_form(p: f64, n: u32, m: u32, r: f64) -> f64 {
    let (nf, mf) = (n as f64, m as f64);
    let q = conjugate_exponent(p);
    if q.is_infinite() {
        return r.powf(mf - nf);
    }
    let beta = (-1.0 + mf / nf) * q + 1.0;
    if beta == 0.0 {
        (nf * (1.0 / r).ln()).powf(1.0 / q)
    } else {
        ((1.0 - r.powf(nf * beta)) / beta).powf(1.0 / q)
    }
}

#[test]
fn criterion_02_closed_forms() {
    let grid = Grid::default_log();
    let mut worst: f64 = 0.0;
    for p in [1.0, 1.5, 2.0, 3.0, 6.0, f64::INFINITY] {
        let x = RiSpace::lebesgue(p).unwrap();
        for (n, m) in [(2, 1), (3, 1), (3, 2), (4, 1), (4, 3)] {
            for &r in grid.interior() {
                let got = kernel_norm_morrey(&x, n, m, r).unwrap();
                worst = worst.max(rel(got, lebesgue_morrey_closed_form(p, n, m, r)));
            }
        }
    }
    let mut worst_target: f64 = 0.0;
    for (n, m) in [(2, 1), (3, 1), (3, 2), (4, 2)] {
        let x = RiSpace::lebesgue(n as f64 / m as f64).unwrap();
        let Weight::Sampled { radii, values } = optimal_morrey_target(&x, n, m, &grid).unwrap() else {
            panic!("target is sampled")
        };
        for (r, v) in radii.iter().zip(&values) {
            let want = (n as f64 * (1.0 / r).ln()).powf(1.0 - m as f64 / n as f64);
            worst_target = worst_target.max(rel(*v, want));
        }
    }
    report(
        2,
        worst <= 1e-9 && worst_target <= 1e-9,
        &format!("max relative error {worst:.2e} for kernels, {worst_target:.2e} for L^(n/m) targets"),
    );
}

#[test]
fn criterion_03_double_integral_lemma() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let radii: Vec<f64> = (0..10).map(|i| 0.2 * 10f64.powf(-0.7 * i as f64)).collect();
    let mut violations = 0;
    let mut checks = 0;
    for _ in 0..1000 {
        let f = random_profile(&mut rng).unwrap();
        for alpha in [0.25, 0.5, 0.75] {
            let upper = 2.0 / (1.0 - alpha);
            let lower = (1.0 - 2f64.powf(-1.0 + alpha)) / (2.0 * (1.0 - alpha));
            for &r in &radii {
                let mid = integrate_power_against_double_star(&f, &PowerPiece::new(1.0, alpha - 1.0, r, 1.0).unwrap())
                    .unwrap();
                let rhs = r.powf(alpha - 1.0) * f.primitive(r)
                    + integrate_power_against(&f, &PowerPiece::new(1.0, alpha - 1.0, r, 1.0 - r).unwrap()).unwrap();
                checks += 1;
                if mid < lower * rhs * (1.0 - 1e-12) || mid > upper * rhs * (1.0 + 1e-12) {
                    violations += 1;
                }
            }
        }
    }
    report(3, violations == 0, &format!("{violations} violations in {checks} checks, seed {SEED}"));
}

#[test]
fn criterion_04_fundamental_identity() {
    let radii: Vec<f64> = (0..50).map(|i| 10f64.powf(-12.0 + 12.0 * i as f64 / 50.0)).collect();
    let exact = [
        RiSpace::lebesgue(1.0).unwrap(),
        RiSpace::lebesgue(1.5).unwrap(),
        RiSpace::lebesgue(4.0).unwrap(),
        RiSpace::orlicz(YoungFunction::power(2.0, 1.0).unwrap()),
        RiSpace::orlicz(YoungFunction::power_log(2.0, 1.0, 1.0).unwrap()),
        RiSpace::orlicz(YoungFunction::power_log(3.0, -1.0, 1.0).unwrap()),
        RiSpace::zygmund(1.5, 2.0).unwrap(),
    ];
    let mut worst: f64 = 0.0;
    for x in &exact {
        let y = x.associate();
        for &r in &radii {
            worst = worst.max((x.fundamental(r).unwrap() * y.fundamental(r).unwrap() / r - 1.0).abs());
        }
    }
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for x in [RiSpace::lorentz(2.0, 1.0).unwrap(), RiSpace::lorentz(3.0, 2.0).unwrap(), RiSpace::lorentz(1.5, 4.0).unwrap()] {
        let y = x.associate();
        for &r in &radii {
            let q = x.fundamental(r).unwrap() * y.fundamental(r).unwrap() / r;
            lo = lo.min(q);
            hi = hi.max(q);
        }
    }
    report(
        4,
        worst <= 0.01 && lo >= 0.25 && hi <= 4.0,
        &format!("Lebesgue/Orlicz max deviation {worst:.2e}, Lorentz ratios in [{lo:.3}, {hi:.3}]"),
    );
}

#[test]
fn criterion_05_young_inequality() {
    let functions = [
        YoungFunction::power(2.0, 1.0).unwrap(),
        YoungFunction::power(1.5, 0.25).unwrap(),
        YoungFunction::power(1.0, 1.0).unwrap(),
        YoungFunction::LinfLike,
        YoungFunction::power_log(2.0, 1.0, 1.0).unwrap(),
        YoungFunction::power_log(3.0, -1.0, 1.0).unwrap(),
        YoungFunction::zygmund(1.0, 1.0).unwrap(),
        YoungFunction::tabulated(vec![(1.0, 1.0), (2.0, 3.0), (3.0, 7.0)]).unwrap(),
        YoungFunction::power_log(2.0, 1.0, 1.0).unwrap().linear_near_zero(),
    ];
    let ts: Vec<f64> = (0..=96).map(|i| 10f64.powf(-6.0 + i as f64 / 8.0)).collect();
    let mut violations = 0;
    for a in &functions {
        let c = a.conjugate_function();
        for &t in &ts {
            let p = a.inverse(t) * c.inverse(t);
            if p < t * (1.0 - 1e-6) || p > 2.0 * t * (1.0 + 1e-6) {
                violations += 1;
            }
            for &s in &ts {
                if s * t > (a.eval(s) + c.eval(t)) * (1.0 + 1e-9) {
                    violations += 1;
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    for _ in 0..200 {
        let f = random_profile(&mut rng).unwrap();
        let p = 1.0 + 5.0 * rng.random::<f64>();
        let lux = RiSpace::orlicz(YoungFunction::power(p, 1.0).unwrap()).norm(&f).unwrap().value;
        let lp = RiSpace::lebesgue(p).unwrap().norm(&f).unwrap().value;
        worst = worst.max(rel(lux, lp));
    }
    report(
        5,
        violations == 0 && worst <= 1e-9,
        &format!("{violations} inequality violations, Luxemburg vs L^p max relative error {worst:.2e}"),
    );
}

#[test]
fn criterion_06_orlicz_equivalences() {
    let families = [
        ("t^1.5", YoungFunction::power(1.5, 1.0).unwrap()),
        ("t^2", YoungFunction::power(2.0, 1.0).unwrap()),
        ("t^2 log(e+t)", YoungFunction::power_log(2.0, 1.0, 1.0).unwrap()),
        ("t^2 log(e+t)^-1", YoungFunction::power_log(2.0, -1.0, 1.0).unwrap()),
        ("t^1.5 log(e+t)", YoungFunction::power_log(1.5, 1.0, 1.0).unwrap()),
    ];
    let radii: Vec<f64> = (0..=6).map(|i| 10f64.powf(-8.0 + i as f64)).collect();
    let (n, m, k) = (3u32, 2u32, 0u32);
    let nf = n as f64;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for (name, a) in &families {
        let x = RiSpace::Orlicz { young: a.conjugate_function(), form: OrliczForm::Luxemburg };
        for &r in &radii {
            let rn = r.powf(nf);
            let j = m - k - 1;
            let kern = |e: f64| x.kernel_norm(&PowerKernel::new(e, rn, 1.0).unwrap()).unwrap().value;
            let campanato = r * kern(-1.0 + j as f64 / nf) / orlicz_campanato_weight(a, n, m, k, r).unwrap();
            let morrey = kern(-1.0 + 1.0 / nf) / orlicz_morrey_weight(a, n, 1, r).unwrap();
            let fundamental = x.fundamental(rn).unwrap() / (rn * a.inverse(1.0 / rn));
            log(&format!(
                "  {name:<16} r = {r:.0e}: campanato {campanato:.4}, morrey {morrey:.4}, fundamental {fundamental:.4}"
            ));
            for q in [campanato, morrey, fundamental] {
                lo = lo.min(q);
                hi = hi.max(q);
            }
        }
    }
    report(6, lo >= 0.125 && hi <= 8.0, &format!("ratios in [{lo:.4}, {hi:.4}]"));
}

/// Adaptive Simpson on `[a, b]`.
fn simpson(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let whole = (b - a) / 6.0 * (f(a) + 4.0 * f(m) + f(b));
    let left = (m - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + m)) + f(m));
    let right = (b - m) / 6.0 * (f(m) + 4.0 * f(0.5 * (m + b)) + f(b));
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        left + right + (left + right - whole) / 15.0
    } else {
        simpson(f, a, m, tol / 2.0, depth - 1) + simpson(f, m, b, tol / 2.0, depth - 1)
    }
}

fn geometric(f: &dyn Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let panels = ((b / a).log10().ceil() as usize * 4).max(1);
    let q = (b / a).powf(1.0 / panels as f64);
    (0..panels).map(|i| simpson(f, a * q.powi(i as i32), (a * q.powi(i as i32 + 1)).min(b), tol, 40)).sum()
}

fn double_quadrature(f: &StepFunction, n: u32, m: u32, r: f64) -> f64 {
    let g = m as f64 / n as f64;
    let edges = f.grid().edges().to_vec();
    let inner = |rho: f64| -> f64 {
        let mut cuts = vec![rho];
        cuts.extend(edges.iter().copied().filter(|&e| e > rho && e < 1.0));
        cuts.push(1.0);
        cuts.windows(2)
            .map(|w| {
                let v = f.value_at(0.5 * (w[0] + w[1]));
                v * geometric(&|s: f64| s.powf(g - m as f64) * (s - rho).powi(m as i32 - 1), w[0], w[1], 1e-14)
            })
            .sum()
    };
    let mut cuts = vec![1e-14];
    cuts.extend(edges.iter().copied().filter(|&e| e > 1e-14 && e < r));
    cuts.push(r);
    cuts.windows(2).map(|w| geometric(&inner, w[0], w[1], 1e-12)).sum::<f64>() / r
}

#[test]
fn criterion_07_extremal_lower_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let radii: Vec<f64> = (0..10).map(|i| 0.45 * 10f64.powf(-0.8 * i as f64)).collect();
    let mut violations = 0;
    let mut checks = 0;
    let mut worst: f64 = 0.0;
    for trial in 0..500 {
        let f = random_profile(&mut rng).unwrap();
        let n = rng.random_range(2..6u32);
        let m = rng.random_range(1..n);
        for (i, &r) in radii.iter().enumerate() {
            let avg = extremal_vf_centered_average(&f, n, m, r).unwrap();
            checks += 1;
            if avg < 2f64.powi(-(m as i32)) * tail_pairing(&f, n, m, r) {
                violations += 1;
            }
            if trial % 25 == 0 && i % 3 == 0 {
                worst = worst.max(rel(avg, double_quadrature(&f, n, m, r)));
            }
        }
    }
    report(
        7,
        violations == 0 && worst <= 1e-6,
        &format!("{violations} violations in {checks} checks, oracle max relative error {worst:.2e}, seed {SEED}"),
    );
}

#[test]
fn criterion_08_bmo() {
    let opts = CheckOptions::default();
    let mut lines = Vec::new();
    let mut pass = true;
    for (n, m) in [(2u32, 1u32), (3, 1), (3, 2), (4, 2)] {
        let p = n as f64 / m as f64;
        let strong = check_campanato(&RiSpace::lebesgue(p).unwrap(), n, m, 0, &Weight::one(), &opts).unwrap().verdict;
        let weak = check_campanato(&RiSpace::weak_lebesgue(p).unwrap(), n, m, 0, &Weight::one(), &opts).unwrap().verdict;
        let q = 0.5 * (1.0 + p);
        let larger = check_campanato(&RiSpace::lebesgue(q).unwrap(), n, m, 0, &Weight::one(), &opts).unwrap().verdict;
        pass &= strong == Verdict::Holds && weak == Verdict::Holds && larger == Verdict::Fails;
        lines.push(format!("(n,m)=({n},{m}): L^{p} {strong:?}, weak {weak:?}, L^{q} {larger:?}"));
    }
    report(8, pass, &lines.join("; "));
}

fn rate(t: Trend) -> f64 {
    match t {
        Trend::Bounded { rate } | Trend::Diverging { rate } | Trend::Vanishing { rate } => rate,
    }
}

#[test]
fn criterion_09_vanishing() {
    let opts = CheckOptions::default();
    let x = RiSpace::lebesgue(2.0).unwrap();
    let half = Weight::power(-0.5);
    let three_quarters = Weight::power(-0.75);
    let v_half = check_vanishing_morrey(&x, 3, 1, &half, &opts).unwrap();
    let plain = check_morrey(&x, 3, 1, &half, &opts).unwrap();
    let v_three = check_vanishing_morrey(&x, 3, 1, &three_quarters, &opts).unwrap();
    let (r0, r1) = (rate(v_half.trend), rate(v_three.trend));
    let pass = v_half.verdict == Verdict::Fails
        && plain.verdict == Verdict::Holds
        && v_three.verdict == Verdict::Holds
        && r0.abs() <= 0.05
        && (r1.abs() - 0.25).abs() <= 0.05;
    report(
        9,
        pass,
        &format!(
            "r^-1/2: vanishing {:?} (rate {r0:.4}), plain {:?}; r^-3/4: vanishing {:?} (rate {r1:.4})",
            v_half.verdict, plain.verdict, v_three.verdict
        ),
    );
}

#[test]
fn criterion_10_determinism() {
    let doc = selftest_doc(&RunConfig::default()).unwrap();
    report(
        10,
        doc.identical,
        &format!("{} report bytes, sha256 {}", doc.report_bytes, doc.report_sha256),
    );
}
