//! Nonnegative step functions on (0,1) and decreasing rearrangements.

use serde::{Deserialize, Serialize};

use crate::error::{domain, invalid, Error, Result};
use crate::grid::Grid;
use crate::quad::power_integral;

const MEASURE_TOL: f64 = 1e-12;

/// A nonnegative function, constant on the cells of a [`Grid`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepFunction {
    grid: Grid,
    values: Vec<f64>,
    /// `primitive[i] = ∫_0^{e_i} f`.
    primitive: Vec<f64>,
    rearranged: bool,
}

/// The function `coefficient * s^exponent` restricted to `(lo, hi)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPiece {
    pub coefficient: f64,
    pub exponent: f64,
    pub lo: f64,
    pub hi: f64,
}

impl PowerPiece {
    pub fn new(coefficient: f64, exponent: f64, lo: f64, hi: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&lo) || !(0.0..=1.0).contains(&hi) || lo > hi {
            return domain(format!("piece support ({lo}, {hi}) is not inside (0,1)"));
        }
        if !coefficient.is_finite() || !exponent.is_finite() {
            return invalid("piece coefficient and exponent must be finite");
        }
        Ok(Self { coefficient, exponent, lo, hi })
    }
}

impl StepFunction {
    pub fn new(grid: Grid, values: Vec<f64>) -> Result<Self> {
        if values.len() != grid.cell_count() {
            return invalid(format!(
                "{} values for a grid with {} cells",
                values.len(),
                grid.cell_count()
            ));
        }
        if let Some(v) = values.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return invalid(format!("step values must be finite and nonnegative, got {v}"));
        }
        let rearranged = values.windows(2).all(|w| w[0] >= w[1]);
        Ok(Self::build(grid, values, rearranged))
    }

    fn build(grid: Grid, values: Vec<f64>, rearranged: bool) -> Self {
        let mut primitive = Vec::with_capacity(values.len() + 1);
        primitive.push(0.0);
        let mut acc = 0.0;
        for (i, v) in values.iter().enumerate() {
            let (a, b) = grid.cell(i);
            acc += v * (b - a);
            primitive.push(acc);
        }
        Self { grid, values, primitive, rearranged }
    }

    /// Lays out `(value, measure)` pairs left to right in the given order.
    pub fn from_samples(samples: &[(f64, f64)]) -> Result<Self> {
        let cells = validate_samples(samples)?;
        let mut edges = Vec::with_capacity(cells.len());
        let mut values = Vec::with_capacity(cells.len());
        let mut acc = 0.0;
        for (i, &(v, w)) in cells.iter().enumerate() {
            acc += w;
            if i + 1 < cells.len() {
                edges.push(acc.min(1.0));
            }
            values.push(v);
        }
        dedup_edges(&mut edges, &mut values);
        let grid = Grid::from_breakpoints(&edges)?;
        Self::new(grid, values)
    }

    pub fn grid(&self) -> &Grid {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn is_rearranged(&self) -> bool {
        self.rearranged
    }

    /// `(value, measure)` for every cell of positive measure.
    pub fn cells(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.values.iter().enumerate().filter_map(|(i, &v)| {
            let (a, b) = self.grid.cell(i);
            (b > a).then_some((v, b - a))
        })
    }

    /// Value on the cell containing `t` (cells are half open on the right).
    pub fn value_at(&self, t: f64) -> f64 {
        let e = self.grid.edges();
        let i = e.partition_point(|&x| x <= t).saturating_sub(1).min(self.values.len() - 1);
        self.values[i]
    }

    pub fn sup(&self) -> f64 {
        self.cells().map(|c| c.0).fold(0.0, f64::max)
    }

    pub fn integral(&self) -> f64 {
        *self.primitive.last().unwrap()
    }

    /// `∫_0^t f` for `t` in [0,1].
    pub fn primitive(&self, t: f64) -> f64 {
        let t = t.clamp(0.0, 1.0);
        let e = self.grid.edges();
        let i = e.partition_point(|&x| x <= t).saturating_sub(1).min(self.values.len() - 1);
        self.primitive[i] + self.values[i] * (t - e[i])
    }

    /// The decreasing rearrangement of this function.
    pub fn rearranged(&self) -> StepFunction {
        if self.rearranged {
            return self.clone();
        }
        let samples: Vec<(f64, f64)> = self.cells().collect();
        rearrange(&samples).expect("cells of a valid step function form a valid sample")
    }

    /// `f**(t) = (1/t) ∫_0^t f*` for `t` in (0,1).
    pub fn double_star(&self, t: f64) -> Result<f64> {
        if !(t > 0.0 && t < 1.0) {
            return domain(format!("f** is evaluated on (0,1), got t = {t}"));
        }
        self.require_rearranged()?;
        Ok(self.primitive(t) / t)
    }

    /// The dilation `(E_λ f)(t) = f(t/λ)` for `t < λ`, zero beyond.
    pub fn dilate(&self, lambda: f64) -> Result<StepFunction> {
        if !(lambda > 0.0 && lambda <= 1.0) {
            return domain(format!("dilation factor must lie in (0,1], got {lambda}"));
        }
        let mut edges = Vec::new();
        let mut values = Vec::new();
        for (i, &v) in self.values.iter().enumerate() {
            let (_, b) = self.grid.cell(i);
            values.push(v);
            edges.push(b * lambda);
        }
        edges.pop();
        if lambda < 1.0 {
            edges.push(lambda);
            values.push(0.0);
        }
        dedup_edges(&mut edges, &mut values);
        let grid = Grid::from_breakpoints(&edges)?;
        StepFunction::new(grid, values)
    }

    pub(crate) fn require_rearranged(&self) -> Result<()> {
        if self.rearranged {
            Ok(())
        } else {
            invalid("expected a decreasing rearrangement")
        }
    }
}

fn validate_samples(samples: &[(f64, f64)]) -> Result<Vec<(f64, f64)>> {
    if samples.is_empty() {
        return invalid("empty sample list");
    }
    let mut total = 0.0;
    let mut cells = Vec::with_capacity(samples.len());
    for &(v, w) in samples {
        if !v.is_finite() || v < 0.0 {
            return invalid(format!("sample value must be finite and nonnegative, got {v}"));
        }
        if !w.is_finite() || w < 0.0 {
            return invalid(format!("sample measure must be finite and nonnegative, got {w}"));
        }
        total += w;
        if w > 0.0 {
            cells.push((v, w));
        }
    }
    if (total - 1.0).abs() > MEASURE_TOL {
        return Err(Error::InvalidInput(format!("sample measures sum to {total}, expected 1")));
    }
    Ok(cells)
}

fn dedup_edges(edges: &mut Vec<f64>, values: &mut Vec<f64>) {
    // Drop cells that collapsed to zero width after rounding.
    let mut e = Vec::with_capacity(edges.len());
    let mut v = Vec::with_capacity(values.len());
    let mut prev = 0.0;
    for (i, &val) in values.iter().enumerate() {
        let right = if i < edges.len() { edges[i] } else { 1.0 };
        if right > prev {
            if i < edges.len() {
                e.push(right);
            }
            v.push(val);
            prev = right;
        }
    }
    if e.last() == Some(&1.0) {
        e.pop();
    }
    *edges = e;
    *values = v;
}

/// Decreasing rearrangement of `(value, measure)` pairs whose measures sum to 1.
pub fn rearrange(samples: &[(f64, f64)]) -> Result<StepFunction> {
    let mut cells = validate_samples(samples)?;
    cells.sort_by(|a, b| b.0.total_cmp(&a.0));
    let mut merged: Vec<(f64, f64)> = Vec::with_capacity(cells.len());
    for (v, w) in cells {
        match merged.last_mut() {
            Some(last) if last.0 == v => last.1 += w,
            _ => merged.push((v, w)),
        }
    }
    let mut edges = Vec::with_capacity(merged.len());
    let mut acc = 0.0;
    for &(_, w) in &merged[..merged.len() - 1] {
        acc += w;
        edges.push(acc.min(1.0));
    }
    let mut values: Vec<f64> = merged.iter().map(|c| c.0).collect();
    dedup_edges(&mut edges, &mut values);
    let grid = Grid::from_breakpoints(&edges)?;
    Ok(StepFunction::build(grid, values, true))
}

fn piece_overlaps<'a>(f: &'a StepFunction, piece: &PowerPiece) -> impl Iterator<Item = (usize, f64, f64)> + 'a {
    let (lo, hi) = (piece.lo, piece.hi);
    (0..f.values.len()).filter_map(move |i| {
        let (a, b) = f.grid.cell(i);
        let (x, y) = (a.max(lo), b.min(hi));
        (y > x).then_some((i, x, y))
    })
}

/// `∫ f(s) c s^β ds` over the support of the piece, summed exactly cell by cell.
pub fn integrate_power_against(f: &StepFunction, piece: &PowerPiece) -> Result<f64> {
    if piece.exponent <= -1.0 && piece.lo == 0.0 && f.values[0] > 0.0 {
        return Err(Error::Divergent(format!(
            "s^{} is not integrable at 0",
            piece.exponent
        )));
    }
    let mut total = 0.0;
    for (i, x, y) in piece_overlaps(f, piece) {
        let v = f.values[i];
        if v > 0.0 {
            total += v * power_integral(piece.exponent, x, y);
        }
    }
    Ok(piece.coefficient * total)
}

/// `∫ f**(s) c s^β ds` over the support of the piece; `f` must be rearranged.
pub fn integrate_power_against_double_star(f: &StepFunction, piece: &PowerPiece) -> Result<f64> {
    f.require_rearranged()?;
    if piece.exponent <= -1.0 && piece.lo == 0.0 && f.values[0] > 0.0 {
        return Err(Error::Divergent(format!(
            "s^{} f** is not integrable at 0",
            piece.exponent
        )));
    }
    let e = f.grid.edges();
    let mut total = 0.0;
    for (i, x, y) in piece_overlaps(f, piece) {
        // f**(s) = (P_i + v (s - e_i)) / s on cell i.
        let v = f.values[i];
        let shift = f.primitive[i] - v * e[i];
        let mut part = v * power_integral(piece.exponent, x, y);
        if shift != 0.0 {
            part += shift * power_integral(piece.exponent - 1.0, x, y);
        }
        total += part;
    }
    Ok(piece.coefficient * total)
}
