//! Weights `φ: (0,∞) -> (0,∞)` parametrising Morrey and Campanato targets.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Either `r^a L(r)^b LL(r)^c` with `L = 1 + log(1/r)`, `LL = 1 + log L`
/// (constant for `r >= 1`), or log-log interpolated samples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Weight {
    PowerLog { a: f64, b: f64, c: f64 },
    Sampled { radii: Vec<f64>, values: Vec<f64> },
}

impl Weight {
    pub fn one() -> Self {
        Self::PowerLog { a: 0.0, b: 0.0, c: 0.0 }
    }

    pub fn power(a: f64) -> Self {
        Self::PowerLog { a, b: 0.0, c: 0.0 }
    }

    pub fn power_log(a: f64, b: f64, c: f64) -> Result<Self> {
        if !(a.is_finite() && b.is_finite() && c.is_finite()) {
            return invalid("weight exponents must be finite");
        }
        Ok(Self::PowerLog { a, b, c })
    }

    /// Samples at strictly increasing radii in (0,1]; continued as a constant to the right
    /// of the last sample and as a power to the left of the first.
    pub fn sampled(radii: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if radii.len() != values.len() || radii.len() < 2 {
            return invalid("sampled weight needs at least two (radius, value) pairs");
        }
        if radii.windows(2).any(|w| !(w[1] > w[0])) || !(radii[0] > 0.0) {
            return invalid("sampled weight radii must be positive and strictly increasing");
        }
        if values.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return invalid("sampled weight values must be positive and finite");
        }
        Ok(Self::Sampled { radii, values })
    }

    /// `ln φ(r)`.
    pub fn ln_eval(&self, r: f64) -> f64 {
        match self {
            Self::PowerLog { a, b, c } => {
                let r = r.min(1.0);
                let l = 1.0 - r.ln();
                let mut v = a * r.ln();
                if *b != 0.0 {
                    v += b * l.ln();
                }
                if *c != 0.0 {
                    v += c * l.ln().ln_1p();
                }
                v
            }
            Self::Sampled { radii, values } => {
                let n = radii.len();
                let x = r.ln();
                if r >= radii[n - 1] {
                    return values[n - 1].ln();
                }
                let i = radii.partition_point(|&s| s <= r).clamp(1, n - 1);
                let (x0, x1) = (radii[i - 1].ln(), radii[i].ln());
                let (y0, y1) = (values[i - 1].ln(), values[i].ln());
                y0 + (y1 - y0) * (x - x0) / (x1 - x0)
            }
        }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.ln_eval(r).exp()
    }

    /// `∫_0^eps φ(s)/s ds`, or `+inf` when it diverges.
    pub(crate) fn lower_tail_integral(&self, eps: f64) -> f64 {
        use crate::young::{march_down, march_up};
        match self {
            Self::PowerLog { a, b, c } if *a == 0.0 => {
                // With x = 1 + log(1/s) the integral becomes ∫_x0^∞ x^b (1 + log x)^c dx.
                let x0 = 1.0 - eps.ln();
                let (b, c) = (*b, *c);
                if b > -1.0 || (b == -1.0 && c >= -1.0) {
                    return f64::INFINITY;
                }
                march_up(&|x: f64| x.powf(b) * x.ln().ln_1p().powf(c), x0)
            }
            Self::PowerLog { a, .. } if *a < 0.0 => f64::INFINITY,
            _ => march_down(&|s: f64| self.eval(s) / s, eps),
        }
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::PowerLog { a, b, c } if *b == 0.0 && *c == 0.0 && *a == 0.0 => write!(f, "one"),
            Self::PowerLog { a, b, c } if *b == 0.0 && *c == 0.0 => write!(f, "pow:{a}"),
            Self::PowerLog { a, b, c } if *c == 0.0 => write!(f, "powlog:{a}:{b}"),
            Self::PowerLog { a, b, c } => write!(f, "powloglog:{a}:{b}:{c}"),
            Self::Sampled { radii, .. } => write!(f, "sampled[{}]", radii.len()),
        }
    }
}
