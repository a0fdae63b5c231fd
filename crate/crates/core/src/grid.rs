//! Partitions of the unit interval.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};

/// Default smallest breakpoint of the logarithmic grid.
pub const EPS_MIN: f64 = 1e-14;
/// Default number of cells per decade.
pub const CELLS_PER_DECADE: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridScale {
    Log,
    UserSupplied,
}

/// A finite partition `0 = e_0 < e_1 < ... < e_N = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid {
    edges: Vec<f64>,
    scale: GridScale,
}

impl Grid {
    /// Breakpoints `eps_min * 10^(i / cells_per_decade)` up to 1, preceded by 0.
    pub fn log_spaced(eps_min: f64, cells_per_decade: usize) -> Result<Self> {
        if !(eps_min > 0.0 && eps_min < 1.0) {
            return invalid(format!("eps_min must lie in (0,1), got {eps_min}"));
        }
        if cells_per_decade == 0 {
            return invalid("cells_per_decade must be positive");
        }
        let decades = -eps_min.log10();
        let cells = (decades * cells_per_decade as f64).round().max(1.0) as usize;
        let mut edges = Vec::with_capacity(cells + 2);
        edges.push(0.0);
        let ln_min = eps_min.ln();
        for i in 0..cells {
            edges.push((ln_min * (1.0 - i as f64 / cells as f64)).exp());
        }
        edges.push(1.0);
        Ok(Self { edges, scale: GridScale::Log })
    }

    pub fn default_log() -> Self {
        Self::log_spaced(EPS_MIN, CELLS_PER_DECADE).expect("default grid parameters are valid")
    }

    /// Builds a grid from strictly increasing breakpoints in (0,1); 0 and 1 are added.
    pub fn from_breakpoints(points: &[f64]) -> Result<Self> {
        let mut edges = Vec::with_capacity(points.len() + 2);
        edges.push(0.0);
        for &p in points {
            if !(p > 0.0 && p <= 1.0) || !p.is_finite() {
                return invalid(format!("breakpoint {p} outside (0,1]"));
            }
            if p <= *edges.last().unwrap() {
                return invalid("breakpoints must be strictly increasing");
            }
            edges.push(p);
        }
        if *edges.last().unwrap() < 1.0 {
            edges.push(1.0);
        }
        Ok(Self { edges, scale: GridScale::UserSupplied })
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn scale(&self) -> GridScale {
        self.scale
    }

    pub fn cell_count(&self) -> usize {
        self.edges.len() - 1
    }

    pub fn cell(&self, i: usize) -> (f64, f64) {
        (self.edges[i], self.edges[i + 1])
    }

    /// Interior breakpoints, i.e. the sample radii in (0,1).
    pub fn interior(&self) -> &[f64] {
        &self.edges[1..self.edges.len() - 1]
    }

    /// Interior breakpoints not exceeding `r_max`.
    pub fn radii_up_to(&self, r_max: f64) -> Vec<f64> {
        self.interior().iter().copied().filter(|&r| r <= r_max).collect()
    }
}
