//! Quadrature helpers.

use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::GaussLegendre;

const NODES: usize = 10;

fn rule() -> &'static [(f64, f64)] {
    static RULE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    RULE.get_or_init(|| {
        GaussLegendre::new(NonZeroUsize::new(NODES).unwrap())
            .into_node_weight_pairs()
            .into_vec()
    })
}

/// `∫_a^b s^beta ds` for `0 <= a <= b`, evaluated without cancellation near `beta = -1`.
/// Returns `+inf` when the integral diverges at 0.
pub fn power_integral(beta: f64, a: f64, b: f64) -> f64 {
    if b <= a {
        return 0.0;
    }
    let e = beta + 1.0;
    if a == 0.0 {
        return if e > 0.0 { b.powf(e) / e } else { f64::INFINITY };
    }
    let l = (b / a).ln();
    let x = e * l;
    if x.abs() < 1e-8 {
        a.powf(e) * l * (1.0 + 0.5 * x)
    } else if x > 700.0 {
        (b.powf(e) - a.powf(e)) / e
    } else {
        a.powf(e) * x.exp_m1() / e
    }
}

/// Gauss-Legendre on `[a,b]`.
pub fn gauss<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let h = 0.5 * (b - a);
    let c = 0.5 * (b + a);
    rule().iter().map(|&(x, w)| w * f(c + h * x)).sum::<f64>() * h
}

/// `∫_lo^hi f(x) dx` for `0 < lo < hi`, using panels uniform in `ln x`.
pub fn integrate_log<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64, panels_per_decade: f64) -> f64 {
    if hi <= lo {
        return 0.0;
    }
    let (wl, wh) = (lo.ln(), hi.ln());
    let decades = (wh - wl) / std::f64::consts::LN_10;
    let panels = (decades * panels_per_decade).ceil().max(1.0) as usize;
    let step = (wh - wl) / panels as f64;
    let g = |w: f64| {
        let x = w.exp();
        f(x) * x
    };
    let mut total = 0.0;
    for i in 0..panels {
        let a = wl + step * i as f64;
        total += gauss(&g, a, a + step);
        if !total.is_finite() {
            return total;
        }
    }
    total
}
