//! Rearrangement-invariant norms, their associate norms and fundamental functions.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Result};
use crate::quad::{integrate_log, power_integral};
use crate::step::StepFunction;
use crate::young::{
    amemiya_from_modular, luxemburg_from_modular, luxemburg_step, amemiya_step, march_down,
    piece_integral, YoungFunction,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OrliczForm {
    /// `inf{λ : ∫A(f/λ) <= 1}`.
    Luxemburg,
    /// `inf_k (1 + ∫A(k f)) / k`.
    Amemiya,
}

/// A rearrangement-invariant (quasi)norm on (0,1).
#[derive(Debug, Clone, PartialEq)]
pub enum RiSpace {
    Lebesgue { p: f64 },
    WeakLebesgue { p: f64 },
    Lorentz { p: f64, q: f64 },
    Orlicz { young: YoungFunction, form: OrliczForm },
    /// `L^p (log L)^α`, the Orlicz space of `t^p log(e+t)^α` normalised to `A(1) = 1`.
    Zygmund { p: f64, alpha: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NormMethod {
    ClosedForm,
    CellSum,
    Quadrature,
    RootFind,
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NormValue {
    pub value: f64,
    pub method: NormMethod,
}

impl NormValue {
    fn new(value: f64, method: NormMethod) -> Self {
        Self { value, method }
    }
}

/// `s^exponent χ_(lo,hi)(s)` on (0,1).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerKernel {
    pub exponent: f64,
    pub lo: f64,
    pub hi: f64,
}

impl PowerKernel {
    pub fn new(exponent: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(0.0 <= lo && lo < hi && hi <= 1.0) || !exponent.is_finite() {
            return domain(format!("kernel support ({lo}, {hi}) must be a nonempty subinterval of (0,1)"));
        }
        Ok(Self { exponent, lo, hi })
    }

    pub fn indicator(len: f64) -> Result<Self> {
        Self::new(0.0, 0.0, len)
    }

    /// Decreasing rearrangement of the kernel at `t` in `(0, hi-lo)`.
    fn rearranged_at(&self, t: f64) -> f64 {
        if self.exponent < 0.0 {
            (t + self.lo).powf(self.exponent)
        } else if self.exponent > 0.0 {
            (self.hi - t).powf(self.exponent)
        } else {
            1.0
        }
    }
}

pub fn conjugate_exponent(p: f64) -> f64 {
    if p == 1.0 {
        f64::INFINITY
    } else if p.is_infinite() {
        1.0
    } else {
        p / (p - 1.0)
    }
}

impl RiSpace {
    pub fn lebesgue(p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return invalid(format!("Lebesgue exponent must lie in [1,∞], got {p}"));
        }
        Ok(Self::Lebesgue { p })
    }

    pub fn weak_lebesgue(p: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) {
            return invalid(format!("weak Lebesgue exponent must lie in (1,∞), got {p}"));
        }
        Ok(Self::WeakLebesgue { p })
    }

    pub fn lorentz(p: f64, q: f64) -> Result<Self> {
        if !(p > 1.0 && p.is_finite()) || !(q >= 1.0) {
            return invalid(format!("Lorentz indices need 1 < p < ∞ and q >= 1, got ({p}, {q})"));
        }
        if q.is_infinite() {
            return Ok(Self::WeakLebesgue { p });
        }
        Ok(Self::Lorentz { p, q })
    }

    pub fn orlicz(young: YoungFunction) -> Self {
        Self::Orlicz { young, form: OrliczForm::Luxemburg }
    }

    pub fn zygmund(p: f64, alpha: f64) -> Result<Self> {
        YoungFunction::zygmund(p, alpha)?;
        Ok(Self::Zygmund { p, alpha })
    }

    /// The Orlicz representation of a Zygmund space; other spaces are returned unchanged.
    pub fn canonical(&self) -> RiSpace {
        match self {
            Self::Zygmund { p, alpha } => Self::Orlicz {
                young: YoungFunction::zygmund(*p, *alpha).expect("validated on construction"),
                form: OrliczForm::Luxemburg,
            },
            other => other.clone(),
        }
    }

    /// The associate space `X'`, normed so that Hölder's inequality holds with constant 1.
    pub fn associate(&self) -> RiSpace {
        match self.canonical() {
            Self::Lebesgue { p } => Self::Lebesgue { p: conjugate_exponent(p) },
            Self::WeakLebesgue { p } => Self::Lorentz { p: conjugate_exponent(p), q: 1.0 },
            Self::Lorentz { p, q } => {
                let (pp, qq) = (conjugate_exponent(p), conjugate_exponent(q));
                if qq.is_infinite() {
                    Self::WeakLebesgue { p: pp }
                } else {
                    Self::Lorentz { p: pp, q: qq }
                }
            }
            Self::Orlicz { young, form } => Self::Orlicz {
                young: young.conjugate_function(),
                form: match form {
                    OrliczForm::Luxemburg => OrliczForm::Amemiya,
                    OrliczForm::Amemiya => OrliczForm::Luxemburg,
                },
            },
            Self::Zygmund { .. } => unreachable!("canonical() removes Zygmund"),
        }
    }

    /// `‖χ_(0,r)‖_X` for `r` in (0,1].
    pub fn fundamental(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r <= 1.0) {
            return domain(format!("fundamental function is evaluated on (0,1], got {r}"));
        }
        Ok(match self.canonical() {
            Self::Lebesgue { p } => r.powf(1.0 / p),
            Self::WeakLebesgue { p } => r.powf(1.0 / p),
            Self::Lorentz { p, q } => (p / q).powf(1.0 / q) * r.powf(1.0 / p),
            Self::Orlicz { young, form: OrliczForm::Luxemburg } => 1.0 / young.inverse(1.0 / r),
            Self::Orlicz { young, form: OrliczForm::Amemiya } => {
                r * young.conjugate_function().inverse(1.0 / r)
            }
            Self::Zygmund { .. } => unreachable!(),
        })
    }

    /// `‖f‖_X` for a decreasing rearrangement `f`.
    pub fn norm(&self, f: &StepFunction) -> Result<NormValue> {
        f.require_rearranged()?;
        Ok(match self.canonical() {
            Self::Lebesgue { p } if p.is_infinite() => NormValue::new(f.sup(), NormMethod::CellSum),
            Self::Lebesgue { p } => {
                let s: f64 = f.cells().map(|(v, w)| w * v.powf(p)).sum();
                NormValue::new(s.powf(1.0 / p), NormMethod::CellSum)
            }
            Self::WeakLebesgue { p } => {
                let e = f.grid().edges();
                let v = f
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v * e[i + 1].powf(1.0 / p))
                    .fold(0.0, f64::max);
                NormValue::new(v, NormMethod::CellSum)
            }
            Self::Lorentz { p, q } => {
                let e = f.grid().edges();
                let s: f64 = f
                    .values()
                    .iter()
                    .enumerate()
                    .map(|(i, v)| v.powf(q) * power_integral(q / p - 1.0, e[i], e[i + 1]))
                    .sum();
                NormValue::new(s.powf(1.0 / q), NormMethod::CellSum)
            }
            Self::Orlicz { young, form: OrliczForm::Luxemburg } => {
                NormValue::new(luxemburg_step(&young, f), NormMethod::RootFind)
            }
            Self::Orlicz { young, form: OrliczForm::Amemiya } => {
                NormValue::new(amemiya_step(&young, f), NormMethod::Minimize)
            }
            Self::Zygmund { .. } => unreachable!(),
        })
    }

    /// `‖g‖_X'`.
    pub fn associate_norm(&self, g: &StepFunction) -> Result<NormValue> {
        self.associate().norm(g)
    }

    /// `‖s^γ χ_(lo,hi)‖_X`.
    pub fn kernel_norm(&self, k: &PowerKernel) -> Result<NormValue> {
        let space = self.canonical();
        Ok(match &space {
            Self::Lebesgue { p } => NormValue::new(lebesgue_kernel(*p, k), NormMethod::ClosedForm),
            Self::WeakLebesgue { p } => NormValue::new(weak_kernel(*p, k), NormMethod::ClosedForm),
            Self::Lorentz { p, q } => NormValue::new(lorentz_kernel(*p, *q, k), NormMethod::Quadrature),
            Self::Orlicz { young, form } => {
                if k.exponent == 0.0 && k.lo == 0.0 {
                    return Ok(NormValue::new(space.fundamental(k.hi)?, NormMethod::ClosedForm));
                }
                let m = |kappa: f64| kernel_modular(young, k, kappa);
                let k0 = 1.0 / k.lo.max(1e-300).powf(k.exponent).max(k.hi.powf(k.exponent)).min(1e300);
                let v = match form {
                    OrliczForm::Luxemburg => luxemburg_from_modular(m, k0),
                    OrliczForm::Amemiya => amemiya_from_modular(m, k0),
                };
                NormValue::new(v, NormMethod::Quadrature)
            }
            Self::Zygmund { .. } => unreachable!(),
        })
    }

    /// Lower estimate of `‖g‖_X'` by testing `g` against unit vectors of `X`:
    /// normalised indicators `χ_(0,a)` and powers of `g`.
    pub fn dual_norm_estimate(&self, g: &StepFunction) -> Result<f64> {
        g.require_rearranged()?;
        let mut best: f64 = 0.0;
        for &a in g.grid().edges().iter().skip(1) {
            let phi = self.fundamental(a)?;
            if phi > 0.0 && phi.is_finite() {
                best = best.max(g.primitive(a) / phi);
            }
        }
        let mut thetas = vec![0.25, 0.5, 1.0, 2.0];
        if let Self::Lebesgue { p } = self {
            let pp = conjugate_exponent(*p);
            if pp.is_finite() {
                thetas.push(pp - 1.0);
            }
        }
        for theta in thetas {
            let samples: Vec<(f64, f64)> = g.cells().map(|(v, w)| (v.powf(theta), w)).collect();
            let f = crate::step::rearrange(&samples)?;
            let nf = self.norm(&f)?.value;
            if nf > 0.0 && nf.is_finite() {
                let pairing: f64 = g.cells().map(|(v, w)| w * v.powf(theta + 1.0)).sum();
                best = best.max(pairing / nf);
            }
        }
        Ok(best)
    }
}

fn lebesgue_kernel(p: f64, k: &PowerKernel) -> f64 {
    if p.is_infinite() {
        return if k.exponent < 0.0 {
            if k.lo == 0.0 {
                f64::INFINITY
            } else {
                k.lo.powf(k.exponent)
            }
        } else {
            k.hi.powf(k.exponent)
        };
    }
    power_integral(k.exponent * p, k.lo, k.hi).powf(1.0 / p)
}

fn weak_kernel(p: f64, k: &PowerKernel) -> f64 {
    let len = k.hi - k.lo;
    let g = |t: f64| t.powf(1.0 / p) * k.rearranged_at(t);
    let gamma = k.exponent;
    if gamma < 0.0 {
        if k.lo == 0.0 {
            return if 1.0 / p + gamma >= 0.0 { len.powf(1.0 / p + gamma) } else { f64::INFINITY };
        }
        let mut best = g(len);
        if -gamma * p > 1.0 {
            let t = k.lo / (-gamma * p - 1.0);
            if t < len {
                best = best.max(g(t));
            }
        }
        best
    } else {
        let t = k.hi / (1.0 + gamma * p);
        g(t.min(len))
    }
}

fn lorentz_kernel(p: f64, q: f64, k: &PowerKernel) -> f64 {
    let len = k.hi - k.lo;
    let a = q / p - 1.0;
    let gamma = k.exponent;
    let integral = if gamma == 0.0 {
        power_integral(a, 0.0, len)
    } else if gamma < 0.0 && k.lo == 0.0 {
        power_integral(a + gamma * q, 0.0, len)
    } else if gamma < 0.0 {
        let f = |t: f64| t.powf(a) * (t + k.lo).powf(gamma * q);
        let split = k.lo.min(len);
        march_down(&f, split) + if len > split { integrate_log(f, split, len, 8.0) } else { 0.0 }
    } else {
        let f = |t: f64| t.powf(a) * (k.hi - t).powf(gamma * q);
        let half = 0.5 * len;
        // Right half in the variable v = hi - t.
        let g = |v: f64| (k.hi - v).powf(a) * v.powf(gamma * q);
        let right = if k.lo == 0.0 {
            march_down(&g, k.hi - half)
        } else {
            piece_integral(&g, k.lo, k.hi - half)
        };
        march_down(&f, half) + right
    };
    integral.powf(1.0 / q)
}

/// `∫_lo^hi A(κ s^γ) ds`, integrated in `s` with cuts at the kinks of `A`.
fn kernel_modular(a: &YoungFunction, k: &PowerKernel, kappa: f64) -> f64 {
    let gamma = k.exponent;
    if gamma == 0.0 {
        return (k.hi - k.lo) * a.eval(kappa);
    }
    let to_s = |u: f64| (u / kappa).powf(1.0 / gamma);
    let (mut lo, mut hi) = (k.lo, k.hi);
    // Restrict to where the integrand is neither identically 0 nor +inf.
    let z = a.zero_threshold();
    if z > 0.0 {
        let s = to_s(z);
        if gamma < 0.0 {
            hi = hi.min(s);
        } else {
            lo = lo.max(s);
        }
    }
    if !(hi > lo) {
        return 0.0;
    }
    let lim = a.finite_limit();
    if lim.is_finite() {
        let s = to_s(lim);
        if (gamma < 0.0 && lo < s) || (gamma > 0.0 && hi > s) {
            return f64::INFINITY;
        }
    }
    let f = |s: f64| a.eval(kappa * s.powf(gamma));
    let mut cuts: Vec<f64> = a.kinks().into_iter().map(to_s).filter(|&s| s > lo && s < hi).collect();
    cuts.push(lo);
    cuts.push(hi);
    cuts.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for w in cuts.windows(2) {
        total += if w[0] == 0.0 { march_down(&f, w[1]) } else { piece_integral(&f, w[0], w[1]) };
        if !total.is_finite() {
            return f64::INFINITY;
        }
    }
    total
}

/// `T_γ f(r) = r^(1-γ) ∫_r^1 s^(γ-2) f(s) ds`, averaged over the cells of `f`.
pub fn t_gamma(f: &StepFunction, gamma: f64) -> Result<StepFunction> {
    if !(gamma < 1.0) {
        return domain(format!("T_γ needs γ < 1, got {gamma}"));
    }
    let grid = f.grid();
    let n = grid.cell_count();
    let mut tail = vec![0.0; n + 1];
    for i in (0..n).rev() {
        let (a, b) = grid.cell(i);
        tail[i] = tail[i + 1] + f.values()[i] * power_integral(gamma - 2.0, a, b);
    }
    let values = (0..n)
        .map(|i| {
            let (a, b) = grid.cell(i);
            let v = f.values()[i];
            let pi = power_integral(1.0 - gamma, a, b);
            let inner = (b.powf(gamma - 1.0) * pi - (b - a)) / (gamma - 1.0);
            ((tail[i + 1] * pi + v * inner) / (b - a)).max(0.0)
        })
        .collect();
    StepFunction::new(grid.clone(), values)
}

impl fmt::Display for RiSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Lebesgue { p } if p.is_infinite() => write!(f, "L^inf"),
            Self::Lebesgue { p } => write!(f, "L^{p}"),
            Self::WeakLebesgue { p } => write!(f, "L^({p},inf)"),
            Self::Lorentz { p, q } => write!(f, "L^({p},{q})"),
            Self::Orlicz { young, form: OrliczForm::Luxemburg } => write!(f, "L^[{young}]"),
            Self::Orlicz { young, form: OrliczForm::Amemiya } => write!(f, "L^({young}) (Amemiya)"),
            Self::Zygmund { p, alpha } => write!(f, "L^{p}(log L)^{alpha}"),
        }
    }
}
