//! Embedding criteria for Sobolev spaces built on an r.i. space `X` into
//! Morrey and Campanato spaces, optimal targets and optimal domains.
//!
//! Every criterion is a supremum over `r in (0,1)` of a kernel norm divided by
//! a weight. On a finite grid the supremum is replaced by the grid values and a
//! classification of their behaviour over the last two decades.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::grid::Grid;
use crate::norms::{PowerKernel, RiSpace};
use crate::quad::integrate_log;
use crate::step::{integrate_power_against_double_star, PowerPiece, StepFunction};
use crate::weight::Weight;

pub const ADMISSIBILITY_LADDER: [f64; 3] = [1e-2, 1e-1, 0.5];

/// Thresholds used to turn grid values into a trend and a verdict.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrendConfig {
    /// Bound on the slope of `log v` against `log(1/r)`.
    pub slope_tol: f64,
    /// Bound on the slope of `log v` against `log log(1/r)`.
    pub log_slope_tol: f64,
    /// Relative growth over the window beyond which a bounded trend is not trusted.
    pub growth_tol: f64,
    pub vanish_tol: f64,
    pub window_decades: f64,
}

impl Default for TrendConfig {
    fn default() -> Self {
        Self { slope_tol: 0.02, log_slope_tol: 0.1, growth_tol: 1e-3, vanish_tol: 0.2, window_decades: 2.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Trend {
    Bounded { rate: f64 },
    Diverging { rate: f64 },
    Vanishing { rate: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    Morrey,
    VanishingMorrey,
    Campanato,
    VanishingCampanato,
    CampanatoToHolder,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmbeddingReport {
    pub theorem: Criterion,
    pub grid_values: Vec<(f64, f64)>,
    pub finite_sup: f64,
    pub trend: Trend,
    pub verdict: Verdict,
    pub diagnostics: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Admissibility {
    /// `(a, inf_{r >= a} φ(r))` over the grid.
    pub ladder: Vec<(f64, f64)>,
    pub admissible: bool,
}

/// Checks positivity of `φ` on the grid and its infimum on `[a, 1)` for each rung of the ladder.
pub fn admissibility(phi: &Weight, grid: &Grid) -> Admissibility {
    let radii = grid.interior();
    let positive = radii.iter().all(|&r| {
        let v = phi.eval(r);
        v > 0.0 && v.is_finite()
    });
    let ladder: Vec<(f64, f64)> = ADMISSIBILITY_LADDER
        .iter()
        .map(|&a| {
            let inf = radii.iter().filter(|&&r| r >= a).map(|&r| phi.eval(r)).fold(f64::INFINITY, f64::min);
            (a, inf)
        })
        .collect();
    let admissible = positive && ladder.iter().all(|&(_, v)| v > 0.0 && v.is_finite());
    Admissibility { ladder, admissible }
}

pub(crate) fn require_admissible(phi: &Weight, grid: &Grid) -> Result<()> {
    let adm = admissibility(phi, grid);
    if adm.admissible {
        Ok(())
    } else {
        Err(Error::Inadmissible(format!(
            "weight {phi} is not positive and finite on the grid (ladder infima {:?})",
            adm.ladder
        )))
    }
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        domain(format!("radius must lie in (0,1), got {r}"))
    }
}

fn check_orders(n: u32, m: u32) -> Result<()> {
    if n < 1 || m < 1 {
        return invalid(format!("dimension and order must be positive, got n = {n}, m = {m}"));
    }
    Ok(())
}

/// Kernel norms of a fixed space; the associate space is computed once.
#[derive(Debug, Clone)]
pub struct Kernels {
    associate: RiSpace,
    n: u32,
    m: u32,
}

impl Kernels {
    pub fn new(x: &RiSpace, n: u32, m: u32) -> Result<Self> {
        check_orders(n, m)?;
        Ok(Self { associate: x.associate(), n, m })
    }

    pub fn associate(&self) -> &RiSpace {
        &self.associate
    }

    /// `‖s^(-1+j/n) χ_(r^n,1)‖_X'`.
    fn tail_kernel(&self, j: u32, r: f64) -> Result<f64> {
        let nf = self.n as f64;
        let k = PowerKernel::new(-1.0 + j as f64 / nf, r.powf(nf), 1.0)?;
        Ok(self.associate.kernel_norm(&k)?.value)
    }

    /// `‖s^(-1+m/n) χ_(r^n,1)‖_X'`.
    pub fn morrey(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        self.tail_kernel(self.m, r)
    }

    /// `r ‖s^(-1+(m-k-1)/n) χ_(r^n,1)‖_X'` for `k <= m-2`, `r^(1-n) ‖χ_(0,r^n)‖_X'` for `k = m-1`.
    pub fn campanato(&self, k: u32, r: f64) -> Result<f64> {
        check_radius(r)?;
        if k + 1 > self.m {
            return domain(format!("Campanato order k = {k} exceeds m-1 = {}", self.m - 1));
        }
        let nf = self.n as f64;
        if k + 1 == self.m {
            Ok(r.powf(1.0 - nf) * self.associate.fundamental(r.powf(nf))?)
        } else {
            Ok(r * self.tail_kernel(self.m - k - 1, r)?)
        }
    }

    /// `ϑ(r) = ‖s^(-1+m/n) χ_(0,r^n)‖_X'`.
    pub fn theta(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        let nf = self.n as f64;
        let k = PowerKernel::new(-1.0 + self.m as f64 / nf, 0.0, r.powf(nf))?;
        Ok(self.associate.kernel_norm(&k)?.value)
    }

    /// `ϱ(r) = r ‖s^(-1+(m-1)/n) χ_(r^n,1)‖_X'`.
    pub fn rho(&self, r: f64) -> Result<f64> {
        check_radius(r)?;
        Ok(r * self.tail_kernel(self.m - 1, r)?)
    }
}

pub fn kernel_norm_morrey(x: &RiSpace, n: u32, m: u32, r: f64) -> Result<f64> {
    Kernels::new(x, n, m)?.morrey(r)
}

pub fn kernel_norm_campanato(x: &RiSpace, n: u32, m: u32, k: u32, r: f64) -> Result<f64> {
    Kernels::new(x, n, m)?.campanato(k, r)
}

fn least_squares_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    if sxx == 0.0 {
        0.0
    } else {
        sxy / sxx
    }
}

/// Values in the last `window_decades` decades towards 0, ordered by decreasing `r`.
fn window(values: &[(f64, f64)], cfg: &TrendConfig) -> Vec<(f64, f64)> {
    let r_min = values.iter().map(|v| v.0).fold(f64::INFINITY, f64::min);
    let cut = r_min * 10f64.powf(cfg.window_decades);
    let mut w: Vec<(f64, f64)> = values.iter().copied().filter(|v| v.0 <= cut * (1.0 + 1e-12)).collect();
    w.sort_by(|a, b| b.0.total_cmp(&a.0));
    w
}

/// Classifies the behaviour of `values` as `r -> 0`.
pub fn classify_trend(values: &[(f64, f64)], cfg: &TrendConfig) -> Trend {
    let w = window(values, cfg);
    if w.iter().any(|v| v.1.is_infinite()) {
        return Trend::Diverging { rate: f64::INFINITY };
    }
    if w.last().is_some_and(|v| v.1 == 0.0) {
        return Trend::Vanishing { rate: f64::INFINITY };
    }
    let pts: Vec<&(f64, f64)> = w.iter().filter(|v| v.1 > 0.0).collect();
    if pts.len() < 2 {
        return Trend::Bounded { rate: 0.0 };
    }
    let x: Vec<f64> = pts.iter().map(|v| -v.0.ln()).collect();
    let lx: Vec<f64> = x.iter().map(|x| x.ln()).collect();
    let y: Vec<f64> = pts.iter().map(|v| v.1.ln()).collect();
    let s_pow = least_squares_slope(&x, &y);
    let s_log = least_squares_slope(&lx, &y);
    if s_pow > cfg.slope_tol || s_log > cfg.log_slope_tol {
        Trend::Diverging { rate: s_pow }
    } else if s_pow < -cfg.slope_tol || s_log < -cfg.log_slope_tol {
        Trend::Vanishing { rate: -s_pow }
    } else {
        Trend::Bounded { rate: s_pow }
    }
}

fn still_growing(values: &[(f64, f64)], cfg: &TrendConfig) -> bool {
    let w = window(values, cfg);
    let Some(first) = w.first() else { return false };
    let max = w.iter().map(|v| v.1).fold(0.0, f64::max);
    max > first.1 * (1.0 + cfg.growth_tol)
}

fn finite_sup(values: &[(f64, f64)]) -> f64 {
    values.iter().map(|v| v.1).fold(0.0, f64::max)
}

fn value_near(values: &[(f64, f64)], r: f64) -> f64 {
    values
        .iter()
        .min_by(|a, b| (a.0.ln() - r.ln()).abs().total_cmp(&(b.0.ln() - r.ln()).abs()))
        .map_or(f64::NAN, |v| v.1)
}

fn bounded_verdict(values: &[(f64, f64)], trend: Trend, cfg: &TrendConfig) -> Verdict {
    match trend {
        Trend::Diverging { .. } => Verdict::Fails,
        Trend::Vanishing { .. } => Verdict::Holds,
        Trend::Bounded { .. } => {
            if still_growing(values, cfg) {
                Verdict::Inconclusive
            } else {
                Verdict::Holds
            }
        }
    }
}

fn vanishing_verdict(values: &[(f64, f64)], trend: Trend, cfg: &TrendConfig) -> Verdict {
    match trend {
        Trend::Vanishing { .. } => {
            let w = window(values, cfg);
            let monotone = w.windows(2).all(|p| p[1].1 <= p[0].1 * (1.0 + 1e-12));
            let reference = value_near(values, 1e-2);
            let max = w.iter().map(|v| v.1).fold(0.0, f64::max);
            if monotone && max <= cfg.vanish_tol * reference {
                Verdict::Holds
            } else {
                Verdict::Inconclusive
            }
        }
        _ => Verdict::Fails,
    }
}

/// Grid and trend thresholds shared by the checks.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckOptions {
    pub grid: Grid,
    pub trend: TrendConfig,
}

impl Default for CheckOptions {
    fn default() -> Self {
        Self { grid: Grid::default_log(), trend: TrendConfig::default() }
    }
}

fn ratio_values(
    radii: &[f64],
    phi: &Weight,
    kernel: impl Fn(f64) -> Result<f64>,
) -> Result<Vec<(f64, f64)>> {
    radii
        .iter()
        .map(|&r| {
            let k = kernel(r)?;
            let v = if k == 0.0 {
                0.0
            } else if k.is_infinite() {
                f64::INFINITY
            } else {
                (k.ln() - phi.ln_eval(r)).exp()
            };
            Ok((r, v))
        })
        .collect()
}

fn report(
    theorem: Criterion,
    values: Vec<(f64, f64)>,
    vanishing: bool,
    cfg: &TrendConfig,
    mut diagnostics: Vec<String>,
    forced: Option<(Trend, Verdict)>,
) -> EmbeddingReport {
    let trend = classify_trend(&values, cfg);
    let mut verdict =
        if vanishing { vanishing_verdict(&values, trend, cfg) } else { bounded_verdict(&values, trend, cfg) };
    let mut trend_out = trend;
    if let Some((t, v)) = forced {
        trend_out = t;
        verdict = v;
    }
    if verdict == Verdict::Inconclusive {
        diagnostics.push("values are still changing over the last two decades".into());
    }
    EmbeddingReport {
        theorem,
        finite_sup: finite_sup(&values),
        grid_values: values,
        trend: trend_out,
        verdict,
        diagnostics,
    }
}

/// Trend of `1/φ`: diverging means `φ` tends to 0.
fn reciprocal_trend(phi: &Weight, radii: &[f64], cfg: &TrendConfig) -> Trend {
    let v: Vec<(f64, f64)> = radii.iter().map(|&r| (r, (-phi.ln_eval(r)).exp())).collect();
    classify_trend(&v, cfg)
}

fn morrey_impl(
    x: &RiSpace,
    n: u32,
    m: u32,
    phi: &Weight,
    opts: &CheckOptions,
    vanishing: bool,
) -> Result<EmbeddingReport> {
    require_admissible(phi, &opts.grid)?;
    let kern = Kernels::new(x, n, m)?;
    let radii = opts.grid.interior();
    let values = ratio_values(radii, phi, |r| kern.morrey(r))?;
    let theorem = if vanishing { Criterion::VanishingMorrey } else { Criterion::Morrey };
    let mut diagnostics = Vec::new();
    let mut forced = None;
    let recip = reciprocal_trend(phi, radii, &opts.trend);
    if matches!(recip, Trend::Diverging { .. }) {
        diagnostics.push("φ tends to 0: the kernel norm is bounded below, so the criterion fails".into());
        let t = classify_trend(&values, &opts.trend);
        forced = Some((if matches!(t, Trend::Diverging { .. }) { t } else { recip }, Verdict::Fails));
    } else if m >= n {
        diagnostics.push("m >= n: the criterion reduces to a positive lower bound for φ".into());
        if !vanishing {
            forced = Some((recip, Verdict::Holds));
        }
    }
    Ok(report(theorem, values, vanishing, &opts.trend, diagnostics, forced))
}

pub fn check_morrey(x: &RiSpace, n: u32, m: u32, phi: &Weight, opts: &CheckOptions) -> Result<EmbeddingReport> {
    morrey_impl(x, n, m, phi, opts, false)
}

pub fn check_vanishing_morrey(
    x: &RiSpace,
    n: u32,
    m: u32,
    phi: &Weight,
    opts: &CheckOptions,
) -> Result<EmbeddingReport> {
    morrey_impl(x, n, m, phi, opts, true)
}

fn campanato_impl(
    x: &RiSpace,
    n: u32,
    m: u32,
    k: u32,
    phi: &Weight,
    opts: &CheckOptions,
    vanishing: bool,
) -> Result<EmbeddingReport> {
    if k + 1 > m {
        return domain(format!("Campanato order k = {k} must satisfy k <= m-1"));
    }
    require_admissible(phi, &opts.grid)?;
    let kern = Kernels::new(x, n, m)?;
    let radii = opts.grid.interior();
    let values = ratio_values(radii, phi, |r| kern.campanato(k, r))?;
    let theorem = if vanishing { Criterion::VanishingCampanato } else { Criterion::Campanato };
    let mut diagnostics = Vec::new();
    let mut forced = None;
    let lower: Vec<(f64, f64)> = radii.iter().map(|&r| (r, (r.ln() - phi.ln_eval(r)).exp())).collect();
    let lower_trend = classify_trend(&lower, &opts.trend);
    if matches!(lower_trend, Trend::Diverging { .. }) {
        diagnostics.push("liminf φ(r)/r = 0: no Campanato criterion can hold".into());
        let t = classify_trend(&values, &opts.trend);
        forced = Some((if matches!(t, Trend::Diverging { .. }) { t } else { lower_trend }, Verdict::Fails));
    } else if k + 2 <= m && m >= n + k + 1 {
        diagnostics.push("m >= n+k+1: the kernel is bounded and the criterion reduces to r/φ(r)".into());
    }
    Ok(report(theorem, values, vanishing, &opts.trend, diagnostics, forced))
}

pub fn check_campanato(
    x: &RiSpace,
    n: u32,
    m: u32,
    k: u32,
    phi: &Weight,
    opts: &CheckOptions,
) -> Result<EmbeddingReport> {
    campanato_impl(x, n, m, k, phi, opts, false)
}

pub fn check_vanishing_campanato(
    x: &RiSpace,
    n: u32,
    m: u32,
    k: u32,
    phi: &Weight,
    opts: &CheckOptions,
) -> Result<EmbeddingReport> {
    campanato_impl(x, n, m, k, phi, opts, true)
}

fn sampled_target(radii: &[f64], f: impl Fn(f64) -> Result<f64>) -> Result<Weight> {
    let mut rs: Vec<f64> = radii.iter().copied().filter(|&r| r < 0.5).collect();
    rs.push(0.5);
    let values = rs.iter().map(|&r| f(r)).collect::<Result<Vec<f64>>>()?;
    if let Some(v) = values.iter().find(|v| !(v.is_finite() && **v > 0.0)) {
        return Err(Error::Degenerate(format!("target weight takes the value {v} on the grid")));
    }
    Weight::sampled(rs, values)
}

/// `φ̂(r) = ‖s^(-1+m/n) χ_(r^n,1)‖_X'` on `(0,1/2]`, constant beyond.
pub fn optimal_morrey_target(x: &RiSpace, n: u32, m: u32, grid: &Grid) -> Result<Weight> {
    let kern = Kernels::new(x, n, m)?;
    sampled_target(grid.interior(), |r| kern.morrey(r))
}

/// The optimal Campanato weight of order `k`, sampled on the grid.
pub fn optimal_campanato_target(x: &RiSpace, n: u32, m: u32, k: u32, grid: &Grid) -> Result<Weight> {
    if k + 1 > m {
        return domain(format!("Campanato order k = {k} must satisfy k <= m-1"));
    }
    let kern = Kernels::new(x, n, m)?;
    sampled_target(grid.interior(), |r| kern.campanato(k, r))
}

/// `sup_r (1/φ(r^(1/n))) ∫_r^1 s^(-1+m/n) f**(s) ds`.
pub fn optimal_morrey_domain_norm(phi: &Weight, n: u32, m: u32, f: &StepFunction, grid: &Grid) -> Result<f64> {
    check_orders(n, m)?;
    f.require_rearranged()?;
    require_admissible(phi, grid)?;
    let nf = n as f64;
    let mut best: f64 = 0.0;
    for &r in grid.interior() {
        let piece = PowerPiece::new(1.0, -1.0 + m as f64 / nf, r, 1.0)?;
        let v = integrate_power_against_double_star(f, &piece)?;
        best = best.max(v / phi.eval(r.powf(1.0 / nf)));
    }
    Ok(best)
}

/// Norm of the largest r.i. domain for the Campanato target of order `k`.
pub fn optimal_campanato_domain_norm(
    phi: &Weight,
    n: u32,
    m: u32,
    k: u32,
    f: &StepFunction,
    grid: &Grid,
) -> Result<f64> {
    check_orders(n, m)?;
    f.require_rearranged()?;
    if k + 1 > m {
        return domain(format!("Campanato order k = {k} must satisfy k <= m-1"));
    }
    require_admissible(phi, grid)?;
    let lower: Vec<(f64, f64)> =
        grid.interior().iter().map(|&r| (r, (r.ln() - phi.ln_eval(r)).exp())).collect();
    if matches!(classify_trend(&lower, &TrendConfig::default()), Trend::Diverging { .. }) {
        return Err(Error::Inadmissible("liminf φ(r)/r = 0 on the grid".into()));
    }
    if k + 2 <= m && m >= n + k + 1 {
        return Ok(f.integral());
    }
    let nf = n as f64;
    let mut best: f64 = 0.0;
    for &r in grid.interior() {
        let rho = r.powf(1.0 / nf);
        let v = if k + 1 == m {
            f.primitive(r) / r
        } else {
            let piece = PowerPiece::new(1.0, -1.0 + (m - k - 1) as f64 / nf, r, 1.0)?;
            integrate_power_against_double_star(f, &piece)?
        };
        best = best.max(rho * v / phi.eval(rho));
    }
    Ok(best)
}

/// `sup_t f**(t) / φ(t^(1/n))` over the grid, including `t = 1`.
pub fn marcinkiewicz_norm(phi: &Weight, n: u32, f: &StepFunction, grid: &Grid) -> Result<f64> {
    if n < 1 {
        return invalid("dimension must be positive");
    }
    f.require_rearranged()?;
    let nf = n as f64;
    let mut best: f64 = 0.0;
    for &t in grid.interior().iter().chain(std::iter::once(&1.0)) {
        best = best.max(f.primitive(t) / t / phi.eval(t.powf(1.0 / nf)));
    }
    Ok(best)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ModulusTargets {
    pub theta: f64,
    pub rho: f64,
    pub sigma_hat: f64,
}

/// `ϑ`, `ϱ` and the optimal modulus of continuity `σ̂` at `r`.
pub fn modulus_targets(x: &RiSpace, n: u32, m: u32, r: f64) -> Result<ModulusTargets> {
    if m > n {
        return domain(format!("modulus targets need m <= n, got m = {m}, n = {n}"));
    }
    let kern = Kernels::new(x, n, m)?;
    modulus_with(&kern, r)
}

pub fn modulus_with(kern: &Kernels, r: f64) -> Result<ModulusTargets> {
    let (n, m) = (kern.n, kern.m);
    if m > n {
        return domain(format!("modulus targets need m <= n, got m = {m}, n = {n}"));
    }
    let theta = if m < n { kern.theta(r)? } else { f64::NAN };
    let rho = if m > 1 { kern.rho(r)? } else { f64::NAN };
    let sigma_hat = if m == 1 {
        theta
    } else if m < n {
        theta + rho
    } else {
        rho
    };
    Ok(ModulusTargets { theta, rho, sigma_hat })
}

/// `(∫_0^r φ(s)/s ds) / σ(r)`, `+inf` when the integral diverges.
pub fn campanato_to_holder_condition(phi: &Weight, sigma: &Weight, r: f64, eps_min: f64) -> Result<f64> {
    check_radius(r)?;
    if !(eps_min > 0.0 && eps_min < r) {
        return domain(format!("need 0 < eps_min < r, got eps_min = {eps_min}, r = {r}"));
    }
    let tail = phi.lower_tail_integral(eps_min);
    if tail.is_infinite() {
        return Ok(f64::INFINITY);
    }
    let body = integrate_log(|s| phi.eval(s) / s, eps_min, r, 8.0);
    Ok((tail + body) / sigma.eval(r))
}

/// Evaluates [`campanato_to_holder_condition`] on the grid; bounded values mean the
/// Campanato space with weight `φ` embeds into the space with modulus `σ`.
pub fn check_campanato_to_holder(phi: &Weight, sigma: &Weight, opts: &CheckOptions) -> Result<EmbeddingReport> {
    require_admissible(phi, &opts.grid)?;
    let eps = opts.grid.interior()[0];
    let radii: Vec<f64> = opts.grid.interior().iter().copied().filter(|&r| r > eps).collect();
    let values =
        radii.iter().map(|&r| Ok((r, campanato_to_holder_condition(phi, sigma, r, eps)?))).collect::<Result<Vec<_>>>()?;
    let mut diagnostics = Vec::new();
    if values.iter().any(|v| v.1.is_infinite()) {
        diagnostics.push("∫_0 φ(s)/s ds diverges".into());
    }
    Ok(report(Criterion::CampanatoToHolder, values, false, &opts.trend, diagnostics, None))
}
