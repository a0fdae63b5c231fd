//! Young functions, their complementary functions, Luxemburg and Amemiya
//! functionals, and the function `E_m` governing Orlicz targets.

use std::f64::consts::E;
use std::fmt;

use crate::error::{invalid, Error, Result};
use crate::quad::{gauss, integrate_log};
use crate::solve::{increasing_level, minimize_log};
use crate::step::StepFunction;

const ROOT_TOL: f64 = 1e-13;
const PANELS_PER_DECADE: f64 = 2.0;
const TABLE_STEP: f64 = std::f64::consts::LN_10 / 64.0;
const TABLE_SPAN: f64 = 240.0;

/// A Young function `A: [0,∞) -> [0,∞]`, convex, left continuous, `A(0) = 0`.
#[derive(Debug, Clone, PartialEq)]
pub enum YoungFunction {
    /// `scale * t^exponent`, exponent >= 1.
    Power { exponent: f64, scale: f64 },
    /// `scale * t^exponent * log(e + t)^log_exponent`.
    PowerLog { exponent: f64, log_exponent: f64, scale: f64 },
    /// Piecewise linear interpolation of convex knots starting at the origin,
    /// continued linearly past the last knot.
    Tabulated { knots: Vec<(f64, f64)> },
    /// `0` on `[0,1]`, `+inf` beyond.
    LinfLike,
    /// `A(1) t` on `[0,1]` and `A(t)` beyond; for `LinfLike` the slope is 1.
    LinearNearZero { base: Box<YoungFunction> },
    /// The complementary function `sup_τ (τ t - A(τ))` of `base`.
    Conjugate { base: Box<YoungFunction>, table: Option<ConjugateTable> },
}

/// Inverse-slope table used to evaluate the complementary function of a
/// power-log Young function: pairs `(ln(A'(τ) - A'(0)), ln τ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct ConjugateTable {
    slope_at_zero: f64,
    log_excess: Vec<f64>,
    log_tau: Vec<f64>,
}

impl YoungFunction {
    pub fn power(exponent: f64, scale: f64) -> Result<Self> {
        if !(exponent >= 1.0 && exponent.is_finite()) {
            return invalid(format!("power Young function needs exponent >= 1, got {exponent}"));
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return invalid(format!("scale must be positive, got {scale}"));
        }
        Ok(Self::Power { exponent, scale })
    }

    pub fn power_log(exponent: f64, log_exponent: f64, scale: f64) -> Result<Self> {
        if !(exponent >= 1.0 && exponent.is_finite() && log_exponent.is_finite()) {
            return invalid(format!(
                "power-log Young function needs exponent >= 1, got ({exponent}, {log_exponent})"
            ));
        }
        if exponent == 1.0 && log_exponent < 0.0 {
            return invalid("t log(e+t)^a with a < 0 is not convex");
        }
        if !(scale > 0.0 && scale.is_finite()) {
            return invalid(format!("scale must be positive, got {scale}"));
        }
        if log_exponent == 0.0 {
            return Self::power(exponent, scale);
        }
        let a = Self::PowerLog { exponent, log_exponent, scale };
        let mut prev = 0.0;
        for i in -240..=240 {
            let s = a.slope(10f64.powf(i as f64 / 20.0));
            if !(s >= prev * (1.0 - 1e-12)) {
                return invalid(format!(
                    "t^{exponent} log(e+t)^{log_exponent} is not convex"
                ));
            }
            prev = s;
        }
        Ok(a)
    }

    /// `t^p log(e+t)^α`, normalised so that `A(1) = 1`.
    pub fn zygmund(p: f64, alpha: f64) -> Result<Self> {
        Self::power_log(p, alpha, (1.0 + E).ln().powf(-alpha))
    }

    pub fn tabulated(mut knots: Vec<(f64, f64)>) -> Result<Self> {
        if knots.first().map(|k| k.0) != Some(0.0) {
            knots.insert(0, (0.0, 0.0));
        }
        if knots[0].1 != 0.0 {
            return invalid("tabulated Young function must vanish at 0");
        }
        if knots.len() < 2 {
            return invalid("tabulated Young function needs at least one knot besides 0");
        }
        let mut prev_slope = 0.0;
        for w in knots.windows(2) {
            let ((x0, y0), (x1, y1)) = (w[0], w[1]);
            if !(x1 > x0) || !x1.is_finite() || !y1.is_finite() {
                return invalid("tabulated knots must have strictly increasing finite abscissae");
            }
            let s = (y1 - y0) / (x1 - x0);
            if s < prev_slope - 1e-12 * s.abs().max(1.0) {
                return invalid("tabulated knots are not convex");
            }
            prev_slope = s;
        }
        if prev_slope <= 0.0 {
            return invalid("tabulated Young function is identically zero");
        }
        Ok(Self::Tabulated { knots })
    }

    pub fn linear_near_zero(self) -> Self {
        Self::LinearNearZero { base: Box::new(self) }
    }

    pub fn is_linf_like(&self) -> bool {
        matches!(self, Self::LinfLike)
    }

    /// `A(t)`.
    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        match self {
            Self::Power { exponent, scale } => scale * t.powf(*exponent),
            Self::PowerLog { exponent, log_exponent, scale } => {
                scale * t.powf(*exponent) * (E + t).ln().powf(*log_exponent)
            }
            Self::Tabulated { knots } => tabulated_eval(knots, t),
            Self::LinfLike => {
                if t <= 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Self::LinearNearZero { base } => {
                if t <= 1.0 {
                    knee_slope(base) * t
                } else {
                    base.eval(t)
                }
            }
            Self::Conjugate { base, table } => conjugate_eval(base, table.as_ref(), t),
        }
    }

    /// Right derivative `A'(t+)`.
    pub fn slope(&self, t: f64) -> f64 {
        let t = t.max(0.0);
        match self {
            Self::Power { exponent, scale } => {
                if *exponent == 1.0 {
                    *scale
                } else {
                    scale * exponent * t.powf(exponent - 1.0)
                }
            }
            Self::PowerLog { exponent, log_exponent, scale } => {
                let l = (E + t).ln();
                let lead = if *exponent == 1.0 { 1.0 } else { t.powf(exponent - 1.0) };
                scale * lead * l.powf(log_exponent - 1.0) * (exponent * l + log_exponent * t / (E + t))
            }
            Self::Tabulated { knots } => {
                let i = knots.partition_point(|k| k.0 <= t).clamp(1, knots.len() - 1);
                (knots[i].1 - knots[i - 1].1) / (knots[i].0 - knots[i - 1].0)
            }
            Self::LinfLike => {
                if t < 1.0 {
                    0.0
                } else {
                    f64::INFINITY
                }
            }
            Self::LinearNearZero { base } => {
                if t < 1.0 {
                    knee_slope(base)
                } else if base.is_linf_like() {
                    f64::INFINITY
                } else {
                    base.slope(t)
                }
            }
            Self::Conjugate { .. } => {
                let h = 1e-7 * t.max(1e-300);
                (self.eval(t + h) - self.eval(t)) / h
            }
        }
    }

    /// `sup{t : A(t) = 0}`.
    pub fn zero_threshold(&self) -> f64 {
        match self {
            Self::Power { .. } | Self::PowerLog { .. } | Self::LinearNearZero { .. } => 0.0,
            Self::Tabulated { knots } => {
                knots.iter().take_while(|k| k.1 == 0.0).last().map_or(0.0, |k| k.0)
            }
            Self::LinfLike => 1.0,
            Self::Conjugate { base, .. } => base.slope(0.0),
        }
    }

    /// `sup{t : A(t) < ∞}`.
    pub fn finite_limit(&self) -> f64 {
        match self {
            Self::LinfLike => 1.0,
            Self::LinearNearZero { base } => base.finite_limit(),
            Self::Conjugate { base, .. } => match base.as_ref() {
                Self::Power { exponent, scale } if *exponent == 1.0 => *scale,
                Self::Tabulated { .. } => base.slope(f64::MAX),
                Self::PowerLog { .. } | Self::Power { .. } | Self::Conjugate { .. } => f64::INFINITY,
                Self::LinfLike | Self::LinearNearZero { .. } => f64::INFINITY,
            },
            _ => f64::INFINITY,
        }
    }

    /// Points where `A` fails to be smooth.
    pub(crate) fn kinks(&self) -> Vec<f64> {
        let mut k = match self {
            Self::Tabulated { knots } => knots.iter().map(|k| k.0).collect(),
            Self::LinearNearZero { base } => {
                let mut k = base.kinks();
                k.push(1.0);
                k
            }
            Self::Conjugate { base, .. } => match base.as_ref() {
                Self::Tabulated { knots } => knots
                    .windows(2)
                    .map(|w| (w[1].1 - w[0].1) / (w[1].0 - w[0].0))
                    .collect(),
                Self::LinearNearZero { base: inner } => {
                    let mut v = vec![knee_slope(inner)];
                    if !inner.is_linf_like() {
                        v.push(inner.slope(1.0));
                    }
                    v
                }
                _ => vec![],
            },
            _ => vec![],
        };
        k.push(self.zero_threshold());
        k.push(self.finite_limit());
        k.retain(|x| *x > 0.0 && x.is_finite());
        k.sort_by(f64::total_cmp);
        k.dedup();
        k
    }

    /// `Ã(t) = sup_τ (τ t - A(τ))`.
    pub fn conjugate_eval(&self, t: f64) -> f64 {
        self.conjugate_function().eval(t)
    }

    /// The complementary Young function `Ã`.
    pub fn conjugate_function(&self) -> YoungFunction {
        match self {
            Self::Power { exponent, scale } if *exponent > 1.0 => {
                let (p, c) = (*exponent, *scale);
                let q = p / (p - 1.0);
                Self::Power { exponent: q, scale: (p - 1.0) * c * (c * p).powf(-q) }
            }
            Self::Power { scale, .. } if *scale == 1.0 => Self::LinfLike,
            Self::LinfLike => Self::Power { exponent: 1.0, scale: 1.0 },
            Self::Conjugate { base, .. } => (**base).clone(),
            Self::PowerLog { .. } => {
                Self::Conjugate { base: Box::new(self.clone()), table: Some(ConjugateTable::build(self)) }
            }
            _ => Self::Conjugate { base: Box::new(self.clone()), table: None },
        }
    }

    /// Generalised inverse `sup{t >= 0 : A(t) <= y}`.
    pub fn inverse(&self, y: f64) -> f64 {
        if y < 0.0 {
            return 0.0;
        }
        match self {
            Self::Power { exponent, scale } => (y / scale).powf(1.0 / exponent),
            Self::LinfLike => 1.0,
            _ => {
                let z = self.zero_threshold();
                if y == 0.0 {
                    return z;
                }
                let lim = self.finite_limit();
                let x0 = if lim.is_finite() { 0.5 * (z + lim).max(1e-300) } else { z.max(1.0) };
                let t = increasing_level(|t| self.eval(t), y, x0, ROOT_TOL, 400);
                t.min(lim)
            }
        }
    }

    /// `∫_lo^hi A(u) u^e du` for `0 <= lo < hi <= ∞`.
    pub fn weighted_integral(&self, e: f64, lo: f64, hi: f64) -> f64 {
        let lo = lo.max(self.zero_threshold());
        if !(hi > lo) {
            return 0.0;
        }
        let lim = self.finite_limit();
        if hi > lim && lim < f64::INFINITY {
            return f64::INFINITY;
        }
        let integrand = |u: f64| {
            let a = self.eval(u);
            if a == 0.0 {
                0.0
            } else {
                a * u.powf(e)
            }
        };
        let mut cuts: Vec<f64> = self.kinks().into_iter().filter(|&k| k > lo && k < hi).collect();
        cuts.insert(0, lo);
        cuts.push(hi);
        let mut total = 0.0;
        for w in cuts.windows(2) {
            let (a, b) = (w[0], w[1]);
            let part = if a == 0.0 && b.is_infinite() {
                march_down(&integrand, 1.0) + march_up(&integrand, 1.0)
            } else if a == 0.0 {
                march_down(&integrand, b)
            } else if b.is_infinite() {
                march_up(&integrand, a)
            } else {
                piece_integral(&integrand, a, b)
            };
            total += part;
            if !total.is_finite() {
                return f64::INFINITY;
            }
        }
        total
    }
}

fn knee_slope(base: &YoungFunction) -> f64 {
    if base.is_linf_like() {
        1.0
    } else {
        base.eval(1.0)
    }
}

fn tabulated_eval(knots: &[(f64, f64)], t: f64) -> f64 {
    let i = knots.partition_point(|k| k.0 <= t).clamp(1, knots.len() - 1);
    let (x0, y0) = knots[i - 1];
    let (x1, y1) = knots[i];
    y0 + (y1 - y0) / (x1 - x0) * (t - x0)
}

fn conjugate_eval(base: &YoungFunction, table: Option<&ConjugateTable>, t: f64) -> f64 {
    if t <= 0.0 {
        return 0.0;
    }
    match base {
        YoungFunction::Power { exponent, scale } => {
            if *exponent == 1.0 {
                if t <= *scale {
                    0.0
                } else {
                    f64::INFINITY
                }
            } else {
                base.conjugate_function().eval(t)
            }
        }
        YoungFunction::LinfLike => t,
        YoungFunction::Tabulated { knots } => {
            let last = knots.len() - 1;
            let final_slope = (knots[last].1 - knots[last - 1].1) / (knots[last].0 - knots[last - 1].0);
            if t > final_slope {
                return f64::INFINITY;
            }
            knots.iter().map(|&(x, y)| x * t - y).fold(0.0, f64::max)
        }
        YoungFunction::LinearNearZero { base: inner } => {
            let c = knee_slope(inner);
            if t <= c {
                return 0.0;
            }
            if inner.is_linf_like() {
                return t - c;
            }
            let d = inner.slope(1.0);
            if t <= d {
                t - c
            } else {
                inner.conjugate_eval(t)
            }
        }
        YoungFunction::Conjugate { base: inner, .. } => inner.eval(t),
        YoungFunction::PowerLog { .. } => match table {
            Some(tab) => tab.conjugate(base, t),
            None => ConjugateTable::build(base).conjugate(base, t),
        },
    }
}

impl ConjugateTable {
    fn build(a: &YoungFunction) -> Self {
        let slope_at_zero = a.slope(0.0);
        let mut log_excess = Vec::new();
        let mut log_tau = Vec::new();
        let mut u = -TABLE_SPAN;
        while u <= TABLE_SPAN {
            let le = log_slope_excess(a, u);
            if le.is_finite() && log_excess.last().is_none_or(|&p| le > p) {
                log_excess.push(le);
                log_tau.push(u);
            }
            u += TABLE_STEP;
        }
        Self { slope_at_zero, log_excess, log_tau }
    }

    /// Solves `A'(τ) = t` and returns `τ t - A(τ)`.
    fn conjugate(&self, a: &YoungFunction, t: f64) -> f64 {
        let t0 = self.slope_at_zero;
        if t <= t0 {
            return 0.0;
        }
        let y = (t - t0).ln();
        let xs = &self.log_excess;
        let n = xs.len();
        let i = xs.partition_point(|&x| x <= y).clamp(1, n - 1);
        let slope = (self.log_tau[i] - self.log_tau[i - 1]) / (xs[i] - xs[i - 1]);
        let mut u = self.log_tau[i - 1] + slope * (y - xs[i - 1]);
        for _ in 0..3 {
            let g = log_slope_excess(a, u) - y;
            if !g.is_finite() || g.abs() < 1e-9 {
                break;
            }
            u -= g * slope;
        }
        let tau = u.exp();
        if !tau.is_finite() {
            return f64::INFINITY;
        }
        let v = tau * (t - t0) - value_excess(a, tau);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    }
}

/// `ln(A'(τ) - A'(0))` at `τ = e^u`, for a power-log `A`.
fn log_slope_excess(a: &YoungFunction, u: f64) -> f64 {
    let YoungFunction::PowerLog { exponent: p, log_exponent: al, scale: c } = *a else {
        return a.slope(u.exp()).ln();
    };
    let tau = u.exp();
    let ll = (tau / E).ln_1p().ln_1p();
    let l = ll.exp();
    let frac = tau / (E + tau);
    if p == 1.0 {
        let x = (al * ll).exp_m1() + al * (ll * (al - 1.0)).exp() * frac;
        c.ln() + x.ln()
    } else {
        c.ln() + (p - 1.0) * u + (al - 1.0) * ll + (p * l + al * frac).ln()
    }
}

/// `A(τ) - A'(0) τ` for a power-log `A`.
fn value_excess(a: &YoungFunction, tau: f64) -> f64 {
    match *a {
        YoungFunction::PowerLog { exponent: p, log_exponent: al, scale: c } if p == 1.0 => {
            let ll = (tau / E).ln_1p().ln_1p();
            c * tau * (al * ll).exp_m1()
        }
        _ => a.eval(tau),
    }
}

pub(crate) fn piece_integral<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    if b / a < 4.0 {
        let n = ((b - a) / a * 4.0).ceil().max(1.0) as usize;
        let h = (b - a) / n as f64;
        (0..n).map(|i| gauss(f, a + h * i as f64, a + h * (i + 1) as f64)).sum()
    } else {
        integrate_log(f, a, b, PANELS_PER_DECADE)
    }
}

/// `∫_0^b f`, adding decades leftwards until they stop contributing and
/// closing with a power-law tail.
pub(crate) fn march_down<F: Fn(f64) -> f64>(f: &F, b: f64) -> f64 {
    let mut total = 0.0;
    let mut hi = b;
    for _ in 0..340 {
        let lo = hi * 0.1;
        let part = integrate_log(f, lo, hi, PANELS_PER_DECADE);
        if !part.is_finite() {
            return f64::INFINITY;
        }
        total += part;
        hi = lo;
        if part <= 1e-17 * total {
            break;
        }
    }
    let (j1, j2) = (f(hi) * hi, f(10.0 * hi) * 10.0 * hi);
    if j1 == 0.0 {
        return total;
    }
    let k = (j2 / j1).log10();
    if k > 1e-3 {
        total + j1 / (k * std::f64::consts::LN_10)
    } else {
        f64::INFINITY
    }
}

/// `∫_a^∞ f`, adding decades rightwards and closing with a power-law or
/// logarithmic tail.
pub(crate) fn march_up<F: Fn(f64) -> f64>(f: &F, a: f64) -> f64 {
    let mut total = 0.0;
    let mut lo = a;
    for _ in 0..300 {
        let hi = lo * 10.0;
        let part = integrate_log(f, lo, hi, PANELS_PER_DECADE);
        if !part.is_finite() {
            return if total > 0.0 && part.is_nan() { total } else { f64::INFINITY };
        }
        total += part;
        lo = hi;
        if part <= 1e-17 * total {
            return total;
        }
    }
    // J(w) = f(e^w) e^w, modelled as exp(A + B w) w^C near the end.
    let w = lo.ln();
    let j = |w: f64| f(w.exp()) * w.exp();
    let (w0, w1, w2) = (w - 2.0, w - 1.0, w);
    let (l0, l1, l2) = (j(w0).ln(), j(w1).ln(), j(w2).ln());
    if !(l0.is_finite() && l1.is_finite() && l2.is_finite()) {
        return f64::INFINITY;
    }
    let b = l2 - l1;
    if b < -1e-3 {
        return total + l2.exp() / -b;
    }
    let c = (l2 - l0) / (w2.ln() - w0.ln());
    if c < -1.0 {
        total + l2.exp() * w / (-c - 1.0)
    } else {
        f64::INFINITY
    }
}

/// `∫ A(κ f)` over the cells of a step function.
pub fn step_modular(a: &YoungFunction, f: &StepFunction, kappa: f64) -> f64 {
    let mut total = 0.0;
    for (v, w) in f.cells() {
        if v > 0.0 {
            total += w * a.eval(kappa * v);
            if total.is_infinite() {
                break;
            }
        }
    }
    total
}

/// Luxemburg norm `inf{λ > 0 : ∫ A(f/λ) <= 1}`.
pub fn luxemburg_step(a: &YoungFunction, f: &StepFunction) -> f64 {
    let sup = f.sup();
    if sup == 0.0 {
        return 0.0;
    }
    luxemburg_from_modular(|k| step_modular(a, f, k), 1.0 / sup)
}

/// Amemiya (Orlicz) norm `inf_{k>0} (1 + ∫ A(k f)) / k`.
pub fn amemiya_step(a: &YoungFunction, f: &StepFunction) -> f64 {
    let sup = f.sup();
    if sup == 0.0 {
        return 0.0;
    }
    amemiya_from_modular(|k| step_modular(a, f, k), 1.0 / sup)
}

pub(crate) fn luxemburg_from_modular(m: impl Fn(f64) -> f64, k0: f64) -> f64 {
    let k = increasing_level(m, 1.0, k0, ROOT_TOL, 400);
    if k == 0.0 {
        f64::INFINITY
    } else {
        1.0 / k
    }
}

pub(crate) fn amemiya_from_modular(m: impl Fn(f64) -> f64, k0: f64) -> f64 {
    let lux = luxemburg_from_modular(&m, k0);
    if !lux.is_finite() {
        return f64::INFINITY;
    }
    if lux == 0.0 {
        return 0.0;
    }
    let (_, v) = minimize_log(|k| (1.0 + m(k)) / k, 1.0 / lux, 1e-6);
    v.min(2.0 * lux)
}

/// `E_j(t) = t^q ∫_0^t Ã(τ) τ^(-1-q) dτ` with `q = n/(n-j)`.
#[derive(Debug, Clone)]
pub struct EmFunction {
    conjugate: YoungFunction,
    q: f64,
}

impl EmFunction {
    pub fn new(a: &YoungFunction, n: u32, j: u32) -> Result<Self> {
        if n < 2 || j == 0 || j >= n {
            return invalid(format!("E_m needs 1 <= m <= n-1, got n = {n}, m = {j}"));
        }
        Ok(Self { conjugate: a.conjugate_function(), q: n as f64 / (n - j) as f64 })
    }

    pub fn eval(&self, t: f64) -> f64 {
        if t <= 0.0 {
            return 0.0;
        }
        let q = self.q;
        if let YoungFunction::Power { exponent, scale } = self.conjugate {
            if exponent > q {
                return scale * t.powf(exponent) / (exponent - q);
            }
        }
        let integral = self.conjugate.weighted_integral(-1.0 - q, 0.0, t);
        if integral.is_infinite() {
            f64::INFINITY
        } else {
            t.powf(q) * integral
        }
    }

    /// `sup{t : E(t) <= y}`.
    pub fn inverse(&self, y: f64) -> f64 {
        increasing_level(|t| self.eval(t), y, 1.0, 1e-12, 200)
    }

    /// True when `E` is identically `+inf` on (0,∞).
    pub fn is_divergent(&self) -> bool {
        self.conjugate.zero_threshold() == 0.0 && self.eval(1e-3).is_infinite()
    }
}

/// `E_m(t)` for a single argument.
pub fn em_function(a: &YoungFunction, n: u32, m: u32, t: f64) -> Result<f64> {
    Ok(EmFunction::new(a, n, m)?.eval(t))
}

/// `1 / (r^(n-m) E_m^{-1}(r^-n))`, the Morrey target of the Orlicz space `L^A`.
pub fn orlicz_morrey_weight(a: &YoungFunction, n: u32, m: u32, r: f64) -> Result<f64> {
    Ok(orlicz_morrey_curve(a, n, m, &[r])?[0])
}

pub fn orlicz_morrey_curve(a: &YoungFunction, n: u32, m: u32, radii: &[f64]) -> Result<Vec<f64>> {
    let em = EmFunction::new(a, n, m)?;
    if em.is_divergent() {
        return Err(Error::Degenerate(format!(
            "E_{m} is infinite for this Young function with n = {n}; \
             its conjugate grows too slowly at 0 (try the linear-near-zero regularisation)"
        )));
    }
    radii
        .iter()
        .map(|&r| {
            check_radius(r)?;
            let nf = n as f64;
            let inv = em.inverse(r.powf(-nf));
            Ok(1.0 / (r.powf(nf - m as f64) * inv))
        })
        .collect()
}

/// Campanato target of `L^A`: `r A^{-1}(r^-n)` for `k = m-1`, and
/// `1 / (r^(n-m+k) E_(m-k-1)^{-1}(r^-n))` for `k <= m-2`.
pub fn orlicz_campanato_weight(a: &YoungFunction, n: u32, m: u32, k: u32, r: f64) -> Result<f64> {
    Ok(orlicz_campanato_curve(a, n, m, k, &[r])?[0])
}

pub fn orlicz_campanato_curve(
    a: &YoungFunction,
    n: u32,
    m: u32,
    k: u32,
    radii: &[f64],
) -> Result<Vec<f64>> {
    if k + 1 > m {
        return invalid(format!("Campanato order k = {k} must satisfy k <= m-1 = {}", m as i64 - 1));
    }
    let nf = n as f64;
    if k + 1 == m {
        return radii
            .iter()
            .map(|&r| {
                check_radius(r)?;
                Ok(r * a.inverse(r.powf(-nf)))
            })
            .collect();
    }
    let j = m - k - 1;
    if j >= n {
        return invalid(format!("E_(m-k-1) needs m-k-1 <= n-1, got m-k-1 = {j}, n = {n}"));
    }
    let em = EmFunction::new(a, n, j)?;
    if em.is_divergent() {
        return Err(Error::Degenerate(format!(
            "E_{j} is infinite for this Young function with n = {n}"
        )));
    }
    radii
        .iter()
        .map(|&r| {
            check_radius(r)?;
            let inv = em.inverse(r.powf(-nf));
            Ok(1.0 / (r.powf(nf - m as f64 + k as f64) * inv))
        })
        .collect()
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r < 1.0 {
        Ok(())
    } else {
        Err(Error::Domain(format!("radius must lie in (0,1), got {r}")))
    }
}

impl fmt::Display for YoungFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Power { exponent, scale } if *scale == 1.0 => write!(f, "t^{exponent}"),
            Self::Power { exponent, scale } => write!(f, "{scale}*t^{exponent}"),
            Self::PowerLog { exponent, log_exponent, scale } => {
                write!(f, "{scale}*t^{exponent}*log(e+t)^{log_exponent}")
            }
            Self::Tabulated { knots } => write!(f, "tabulated[{} knots]", knots.len()),
            Self::LinfLike => write!(f, "inf*chi(1,inf)"),
            Self::LinearNearZero { base } => write!(f, "linear-near-zero({base})"),
            Self::Conjugate { base, .. } => write!(f, "conjugate({base})"),
        }
    }
}
