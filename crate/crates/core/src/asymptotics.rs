//! Fits of sampled weights to `r^a (log 1/r)^b (log log 1/r)^c` near 0 and the
//! table of expected exponents for Lebesgue and Zygmund domains.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::criteria::{optimal_campanato_target, optimal_morrey_target, Kernels};
use crate::error::{invalid, Error, Result};
use crate::grid::Grid;
use crate::norms::RiSpace;
use crate::weight::Weight;

pub const DEFAULT_WINDOW: (f64, f64) = (1e-12, 1e-4);
pub const TOL_A: f64 = 0.02;
pub const TOL_B: f64 = 0.1;
pub const TOL_C: f64 = 0.2;
pub const MAX_RESIDUAL: f64 = 0.05;
/// Cells per decade of the grid on which table targets are sampled.
pub const TABLE_DENSITY: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LogPowerFit {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub constant: f64,
    /// RMS of the residuals of `log(value)`.
    pub residual: f64,
    pub window: (f64, f64),
    pub loglog_included: bool,
    pub samples: usize,
}

fn solve(columns: &[Vec<f64>], y: &[f64]) -> Result<(Vec<f64>, f64)> {
    let rows = y.len();
    let cols = columns.len();
    // Columns are scaled to unit norm before the SVD solve.
    let scales: Vec<f64> = columns.iter().map(|c| c.iter().map(|v| v * v).sum::<f64>().sqrt().max(1e-300)).collect();
    let a = DMatrix::from_fn(rows, cols, |i, j| columns[j][i] / scales[j]);
    let b = DVector::from_column_slice(y);
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&b, 1e-13).map_err(|e| Error::Fit(e.to_string()))?;
    let res = &a * &x - &b;
    let rms = (res.norm_squared() / rows as f64).sqrt();
    Ok(((0..cols).map(|j| x[j] / scales[j]).collect(), rms))
}

fn window_samples(samples: &[(f64, f64)], window: (f64, f64)) -> Result<Vec<(f64, f64)>> {
    let (lo, hi) = window;
    if !(lo > 0.0 && lo < hi && hi < (-1f64).exp()) {
        return invalid(format!("fit window ({lo}, {hi}) must satisfy 0 < lo < hi < 1/e"));
    }
    let pts: Vec<(f64, f64)> =
        samples.iter().copied().filter(|&(r, _)| r >= lo * (1.0 - 1e-12) && r <= hi * (1.0 + 1e-12)).collect();
    if pts.len() < 20 {
        return Err(Error::Fit(format!("{} samples in the fit window, need at least 20", pts.len())));
    }
    if let Some(p) = pts.iter().find(|p| !(p.1 > 0.0) || !p.1.is_finite()) {
        return Err(Error::Fit(format!("nonpositive or non-finite value {} at r = {}", p.1, p.0)));
    }
    Ok(pts)
}

struct Design {
    y: Vec<f64>,
    base: Vec<Vec<f64>>,
    lll: Vec<f64>,
}

fn design(pts: &[(f64, f64)]) -> Design {
    let y: Vec<f64> = pts.iter().map(|p| p.1.ln()).collect();
    let one = vec![1.0; pts.len()];
    let lr: Vec<f64> = pts.iter().map(|p| p.0.ln()).collect();
    let ll: Vec<f64> = lr.iter().map(|l| (-l).ln()).collect();
    let lll: Vec<f64> = ll.iter().map(|l| l.ln()).collect();
    Design { y, base: vec![one, lr, ll], lll }
}

fn fit_from(d: &Design, loglog: bool, window: (f64, f64)) -> Result<LogPowerFit> {
    let mut cols = d.base.clone();
    if loglog {
        cols.push(d.lll.clone());
    }
    let (coef, residual) = solve(&cols, &d.y)?;
    Ok(LogPowerFit {
        constant: coef[0],
        a: coef[1],
        b: coef[2],
        c: if loglog { coef[3] } else { 0.0 },
        residual,
        window,
        loglog_included: loglog,
        samples: d.y.len(),
    })
}

/// Least-squares fit of `log v` against `1, log r, log log(1/r)` and, when it
/// lowers the residual by at least 10%, `log log log(1/r)`.
pub fn fit_log_power(samples: &[(f64, f64)], window: (f64, f64)) -> Result<LogPowerFit> {
    let d = design(&window_samples(samples, window)?);
    let base = fit_from(&d, false, window)?;
    let ext = fit_from(&d, true, window)?;
    Ok(if base.residual > 1e-12 && ext.residual <= 0.9 * base.residual { ext } else { base })
}

/// Fit with a fixed regressor set: the `log log log(1/r)` column is used iff `loglog`.
pub fn fit_log_power_form(samples: &[(f64, f64)], window: (f64, f64), loglog: bool) -> Result<LogPowerFit> {
    fit_from(&design(&window_samples(samples, window)?), loglog, window)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Corollary {
    ZygmundMorrey,
    LebesgueMorrey,
    ZygmundCampanato,
    LebesgueCampanato,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Lebesgue,
    Zygmund,
}

/// Which regressor carries the leading behaviour of the row.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Regime {
    Power,
    Log,
    Loglog,
    Bounded,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Exponents {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorollaryRow {
    pub key: String,
    pub corollary: Corollary,
    pub family: Family,
    pub p: f64,
    pub alpha: f64,
    pub n: u32,
    pub m: u32,
    pub k: Option<u32>,
    pub expected: Exponents,
    pub case: String,
    pub regime: Regime,
}

impl CorollaryRow {
    pub fn space(&self) -> Result<RiSpace> {
        match self.family {
            Family::Lebesgue => RiSpace::lebesgue(self.p),
            Family::Zygmund => RiSpace::zygmund(self.p, self.alpha),
        }
    }

    /// Values of the optimal target weight of the row at the given radii.
    pub fn target_values(&self, radii: &[f64]) -> Result<Vec<(f64, f64)>> {
        let kern = Kernels::new(&self.space()?, self.n, self.m)?;
        radii
            .iter()
            .map(|&r| match (self.corollary, self.k) {
                (Corollary::ZygmundMorrey | Corollary::LebesgueMorrey, None) => Ok((r, kern.morrey(r)?)),
                (Corollary::ZygmundCampanato | Corollary::LebesgueCampanato, Some(k)) => {
                    Ok((r, kern.campanato(k, r)?))
                }
                _ => Err(Error::Table(format!("row {} has an inconsistent Campanato order", self.key))),
            })
            .collect()
    }

    /// The optimal target weight of the row, sampled on `grid`.
    pub fn target(&self, grid: &Grid) -> Result<Weight> {
        let x = self.space()?;
        match (self.corollary, self.k) {
            (Corollary::ZygmundMorrey | Corollary::LebesgueMorrey, None) => {
                optimal_morrey_target(&x, self.n, self.m, grid)
            }
            (Corollary::ZygmundCampanato | Corollary::LebesgueCampanato, Some(k)) => {
                optimal_campanato_target(&x, self.n, self.m, k, grid)
            }
            _ => Err(Error::Table(format!("row {} has an inconsistent Campanato order", self.key))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorollaryTable {
    pub schema: String,
    pub version: u32,
    pub rows: Vec<CorollaryRow>,
}

const TABLE_V1: &str = include_str!("../tables/corollaries.v1");

impl CorollaryTable {
    pub fn builtin() -> Self {
        Self::parse(TABLE_V1).expect("bundled table is valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let t: CorollaryTable = serde_json::from_str(text).map_err(|e| Error::Table(e.to_string()))?;
        if t.schema != "corollary-table" || t.version != 1 {
            return Err(Error::Table(format!("unsupported table {} v{}", t.schema, t.version)));
        }
        let mut keys: Vec<&str> = t.rows.iter().map(|r| r.key.as_str()).collect();
        keys.sort_unstable();
        if keys.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Table("duplicate row keys".into()));
        }
        Ok(t)
    }

    pub fn row(&self, key: &str) -> Option<&CorollaryRow> {
        self.rows.iter().find(|r| r.key == key)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RowStatus {
    Pass,
    Fail,
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RowOutcome {
    pub key: String,
    pub status: RowStatus,
    /// Fit with the regressors of the expected form.
    pub fit: LogPowerFit,
    /// Fit with regressors chosen by residual improvement.
    pub selected_fit: LogPowerFit,
    pub expected: Exponents,
    pub deltas: Exponents,
    pub reason: Option<String>,
}

fn samples_of(computed: &Weight, window: (f64, f64)) -> Vec<(f64, f64)> {
    match computed {
        Weight::Sampled { radii, values } => radii.iter().copied().zip(values.iter().copied()).collect(),
        Weight::PowerLog { .. } => {
            let (lo, hi) = window;
            let n = 64;
            (0..=n)
                .map(|i| {
                    let r = (lo.ln() + (hi.ln() - lo.ln()) * i as f64 / n as f64).exp();
                    (r, computed.eval(r))
                })
                .collect()
        }
    }
}

/// Compares a fit of `computed` over `window` with the expected exponents of `row`.
pub fn verify_corollary(row: &CorollaryRow, computed: &Weight, window: (f64, f64)) -> Result<RowOutcome> {
    verify_samples(row, &samples_of(computed, window), window)
}

pub fn verify_samples(row: &CorollaryRow, samples: &[(f64, f64)], window: (f64, f64)) -> Result<RowOutcome> {
    let e = row.expected;
    let fit = fit_log_power_form(samples, window, e.c != 0.0)?;
    let selected_fit = fit_log_power(samples, window)?;
    let deltas = Exponents { a: fit.a - e.a, b: fit.b - e.b, c: fit.c - e.c };
    let within = deltas.a.abs() <= TOL_A && deltas.b.abs() <= TOL_B && deltas.c.abs() <= TOL_C;
    let (status, reason) = if fit.residual > MAX_RESIDUAL {
        (RowStatus::Inconclusive, Some(format!("fit residual {:.3e} exceeds {MAX_RESIDUAL}", fit.residual)))
    } else if within {
        (RowStatus::Pass, None)
    } else {
        (RowStatus::Fail, Some("exponent outside tolerance".to_string()))
    };
    Ok(RowOutcome { key: row.key.clone(), status, fit, selected_fit, expected: e, deltas, reason })
}

/// The grid used to sample table targets: `TABLE_DENSITY` cells per decade down to
/// a decade below the fit window.
pub fn table_grid(window: (f64, f64)) -> Result<Grid> {
    Grid::log_spaced((window.0 * 0.1).min(1e-13), TABLE_DENSITY)
}

/// Computes the target of `row` on the grid points inside `window` and verifies it.
pub fn run_row(row: &CorollaryRow, window: (f64, f64)) -> Result<RowOutcome> {
    let grid = table_grid(window)?;
    let radii: Vec<f64> = grid
        .interior()
        .iter()
        .copied()
        .filter(|&r| r >= window.0 * (1.0 - 1e-12) && r <= window.1 * (1.0 + 1e-12))
        .collect();
    verify_samples(row, &row.target_values(&radii)?, window)
}
