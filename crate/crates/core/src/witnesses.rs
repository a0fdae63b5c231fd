//! Lower-bound witnesses: the extremal family `v_f` averaged over centered balls,
//! its comparison with the Morrey kernel, and Morrey norms of radial profiles.

use serde::{Deserialize, Serialize};

use crate::criteria::{require_admissible, Kernels};
use crate::error::{domain, invalid, Result};
use crate::grid::Grid;
use crate::norms::{conjugate_exponent, RiSpace};
use crate::quad::power_integral;
use crate::step::StepFunction;
use crate::weight::Weight;

/// Cells per decade used to discretise truncated powers.
const DICTIONARY_DENSITY: f64 = 32.0;

fn binomial(m: u32, j: u32) -> f64 {
    (0..j).fold(1.0, |acc, i| acc * (m - i) as f64 / (i + 1) as f64)
}

/// `(1/r) ∫_0^r ∫_ϱ^1 s^(-m+m/n) f(s) (s-ϱ)^(m-1) ds dϱ`, i.e. the average of `v_f`
/// over the centered ball of measure `r`.
pub fn extremal_vf_centered_average(f: &StepFunction, n: u32, m: u32, r: f64) -> Result<f64> {
    if n < 2 || m < 1 || m >= n {
        return invalid(format!("need 1 <= m <= n-1, got n = {n}, m = {m}"));
    }
    if !(r > 0.0 && r < 1.0) {
        return domain(format!("ball measure must lie in (0,1), got {r}"));
    }
    let g = m as f64 / n as f64;
    let coef: Vec<f64> =
        (1..=m).map(|j| binomial(m, j) * if j % 2 == 1 { 1.0 } else { -1.0 } * r.powi(j as i32)).collect();
    let mut total = 0.0;
    for (i, &v) in f.values().iter().enumerate() {
        if v == 0.0 {
            continue;
        }
        let (a, b) = f.grid().cell(i);
        if a < r {
            total += v * power_integral(g, a, b.min(r));
        }
        if b > r {
            let lo = a.max(r);
            let s: f64 = coef.iter().enumerate().map(|(j, c)| c * power_integral(g - (j + 1) as f64, lo, b)).sum();
            total += v * s;
        }
    }
    Ok(total / (r * m as f64))
}

/// `∫_r^1 s^(-1+m/n) f(s) ds`.
pub fn tail_pairing(f: &StepFunction, n: u32, m: u32, r: f64) -> f64 {
    let beta = -1.0 + m as f64 / n as f64;
    f.values()
        .iter()
        .enumerate()
        .filter(|(_, v)| **v > 0.0)
        .map(|(i, v)| {
            let (a, b) = f.grid().cell(i);
            if b <= r {
                0.0
            } else {
                v * power_integral(beta, a.max(r), b)
            }
        })
        .sum()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessRow {
    /// Measure of the centered ball.
    pub r: f64,
    pub best_ratio: f64,
    pub best_element: String,
    /// `‖s^(-1+m/n) χ_(r,1)‖_X' / φ(r^(1/n))`.
    pub kernel_ratio: f64,
    pub tracking: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub rows: Vec<WitnessRow>,
    pub sup_ratio: f64,
    pub min_tracking: f64,
    pub max_tracking: f64,
    /// Constant in `average >= c ∫_r^1 s^(-1+m/n) f`.
    pub lower_constant: f64,
}

/// Step approximation of `s^(-β) χ_(lo,1)` by exact cell averages.
fn truncated_power(beta: f64, lo: f64) -> Result<StepFunction> {
    let decades = -lo.log10();
    let cells = (decades * DICTIONARY_DENSITY).ceil().max(1.0) as usize;
    let mut edges = vec![lo];
    for i in 1..cells {
        edges.push(lo * (-lo.ln() * i as f64 / cells as f64).exp());
    }
    let mut values = vec![0.0];
    let mut prev = lo;
    for &e in edges.iter().skip(1).chain(std::iter::once(&1.0)) {
        values.push(power_integral(-beta, prev, e) / (e - prev));
        prev = e;
    }
    StepFunction::new(Grid::from_breakpoints(&edges)?, values)
}

fn indicator(a: f64, b: f64) -> Result<StepFunction> {
    let mut edges = Vec::new();
    let mut values = Vec::new();
    if a > 0.0 {
        edges.push(a);
        values.push(0.0);
    }
    values.push(1.0);
    if b < 1.0 {
        edges.push(b);
        values.push(0.0);
    }
    StepFunction::new(Grid::from_breakpoints(&edges)?, values)
}

fn dictionary(x: &RiSpace, n: u32, m: u32, r: f64) -> Result<Vec<(String, StepFunction)>> {
    let mut out = Vec::new();
    for factor in [0.5, 1.0, 2.0, 4.0, 16.0] {
        let a = (r * factor).min(1.0);
        out.push((format!("indicator(0,{a:.3e})"), indicator(0.0, a)?));
    }
    out.push(("indicator(0,1)".into(), indicator(0.0, 1.0)?));
    let mut betas = vec![0.0, 0.25, 0.5, 0.75];
    let q = match x.canonical() {
        RiSpace::Lebesgue { p } => Some(p),
        _ => None,
    };
    match q {
        Some(p) if p == 1.0 => {
            let b = (r * 1.01).min(1.0);
            out.push(("dual-maximizer".into(), indicator(r, b)?));
        }
        Some(p) if p.is_finite() => {
            let pp = conjugate_exponent(p);
            betas.push((1.0 - m as f64 / n as f64) * (pp - 1.0));
        }
        _ => {}
    }
    for (i, beta) in betas.into_iter().enumerate() {
        let label = if i == 4 { "dual-maximizer".to_string() } else { format!("power(-{beta})") };
        out.push((label, truncated_power(beta, r)?));
    }
    Ok(out)
}

/// For each ball measure `r`, the largest `average(v_f)/φ(r^(1/n))` over unit
/// vectors `f` of a fixed dictionary, set against the kernel ratio.
pub fn morrey_lower_witness(x: &RiSpace, n: u32, m: u32, phi: &Weight, r_list: &[f64]) -> Result<WitnessReport> {
    require_admissible(phi, &Grid::default_log())?;
    let kern = Kernels::new(x, n, m)?;
    let nf = n as f64;
    let mut rows = Vec::with_capacity(r_list.len());
    for &r in r_list {
        let rho = r.powf(1.0 / nf);
        let w = phi.eval(rho);
        let mut best = (0.0, String::new());
        for (label, f) in dictionary(x, n, m, r)? {
            let norm = x.norm(&f.rearranged())?.value;
            if !(norm > 0.0 && norm.is_finite()) {
                continue;
            }
            let ratio = extremal_vf_centered_average(&f, n, m, r)? / norm / w;
            if ratio > best.0 {
                best = (ratio, label);
            }
        }
        let kernel_ratio = kern.morrey(rho)? / w;
        rows.push(WitnessRow {
            r,
            best_ratio: best.0,
            best_element: best.1,
            kernel_ratio,
            tracking: best.0 / kernel_ratio,
        });
    }
    let sup_ratio = rows.iter().map(|w| w.best_ratio).fold(0.0, f64::max);
    let min_tracking = rows.iter().map(|w| w.tracking).fold(f64::INFINITY, f64::min);
    let max_tracking = rows.iter().map(|w| w.tracking).fold(0.0, f64::max);
    Ok(WitnessReport { rows, sup_ratio, min_tracking, max_tracking, lower_constant: 2f64.powi(-(m as i32)) })
}

/// A radial function on a ball of measure 1, written in the measure coordinate
/// `t = ω_n |x|^n`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadialProfile {
    pub profile: StepFunction,
}

impl RadialProfile {
    pub fn new(profile: StepFunction) -> Self {
        Self { profile }
    }

    /// Average over the centered ball of measure `t`.
    pub fn centered_average(&self, t: f64) -> f64 {
        self.profile.primitive(t) / t
    }
}

/// `sup_t (1/φ(t^(1/n))) (1/t) ∫_0^t u` over the sampled measures.
pub fn radial_morrey_norm(u: &RadialProfile, phi: &Weight, n: u32, samples: &[f64]) -> Result<f64> {
    if n < 1 {
        return invalid("dimension must be positive");
    }
    let nf = n as f64;
    let mut best: f64 = 0.0;
    for &t in samples {
        if !(t > 0.0 && t <= 1.0) {
            return domain(format!("sample measure must lie in (0,1], got {t}"));
        }
        best = best.max(u.centered_average(t) / phi.eval(t.powf(1.0 / nf)));
    }
    Ok(best)
}
