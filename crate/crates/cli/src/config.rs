//! Run configuration: TOML file merged with command-line flags.

use std::path::Path;

use serde::{Deserialize, Serialize};

use riembed_core::asymptotics::DEFAULT_WINDOW;
use riembed_core::grid::{CELLS_PER_DECADE, EPS_MIN};
use riembed_core::{Grid, RiSpace, Weight};

use crate::output::{Format, Num, Params};
use crate::spec::{parse_profile, parse_space, parse_weight};
use crate::CliError;

pub const DEFAULT_SEED: u64 = 0x5eed;

/// Every field is optional; flags given on the command line win over the file.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub space: Option<String>,
    pub n: Option<u32>,
    pub m: Option<u32>,
    pub k: Option<u32>,
    pub weight: Option<String>,
    pub sigma: Option<String>,
    pub profile: Option<String>,
    pub theorem: Option<String>,
    pub grid_eps: Option<f64>,
    pub grid_density: Option<usize>,
    pub window: Option<String>,
    pub format: Option<Format>,
    pub seed: Option<u64>,
    pub only: Option<Vec<String>>,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    /// Fields set in `other` replace those of `self`.
    pub fn overlay(self, other: RunConfig) -> Self {
        Self {
            space: other.space.or(self.space),
            n: other.n.or(self.n),
            m: other.m.or(self.m),
            k: other.k.or(self.k),
            weight: other.weight.or(self.weight),
            sigma: other.sigma.or(self.sigma),
            profile: other.profile.or(self.profile),
            theorem: other.theorem.or(self.theorem),
            grid_eps: other.grid_eps.or(self.grid_eps),
            grid_density: other.grid_density.or(self.grid_density),
            window: other.window.or(self.window),
            format: other.format.or(self.format),
            seed: other.seed.or(self.seed),
            only: other.only.or(self.only),
        }
    }

    /// Parses every field that is present, so malformed input is reported before any computation.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.space.is_some() {
            self.space()?;
        }
        if self.weight.is_some() {
            self.weight()?;
        }
        if self.sigma.is_some() {
            self.sigma()?;
        }
        if let Some(p) = &self.profile {
            parse_profile(p)?;
        }
        self.window()?;
        self.grid()?;
        Ok(())
    }

    pub fn space(&self) -> Result<RiSpace, CliError> {
        let s = self.space.as_deref().ok_or_else(|| CliError::Usage("--space is required".into()))?;
        Ok(parse_space(s)?)
    }

    pub fn weight(&self) -> Result<Weight, CliError> {
        let s = self.weight.as_deref().ok_or_else(|| CliError::Usage("--weight is required".into()))?;
        Ok(parse_weight(s)?)
    }

    pub fn sigma(&self) -> Result<Weight, CliError> {
        let s = self.sigma.as_deref().ok_or_else(|| CliError::Usage("--sigma is required".into()))?;
        Ok(parse_weight(s)?)
    }

    pub fn n(&self) -> Result<u32, CliError> {
        self.n.ok_or_else(|| CliError::Usage("--n is required".into()))
    }

    pub fn m(&self) -> Result<u32, CliError> {
        self.m.ok_or_else(|| CliError::Usage("--m is required".into()))
    }

    pub fn k(&self) -> Result<u32, CliError> {
        self.k.ok_or_else(|| CliError::Usage("--k is required".into()))
    }

    pub fn grid_eps(&self) -> f64 {
        self.grid_eps.unwrap_or(EPS_MIN)
    }

    pub fn grid_density(&self) -> usize {
        self.grid_density.unwrap_or(CELLS_PER_DECADE)
    }

    pub fn grid(&self) -> Result<Grid, CliError> {
        Grid::log_spaced(self.grid_eps(), self.grid_density()).map_err(|e| CliError::Usage(e.to_string()))
    }

    pub fn window(&self) -> Result<(f64, f64), CliError> {
        match self.window.as_deref() {
            None => Ok(DEFAULT_WINDOW),
            Some(w) => parse_window(w),
        }
    }

    pub fn format(&self) -> Format {
        self.format.unwrap_or_default()
    }

    pub fn seed(&self) -> u64 {
        self.seed.unwrap_or(DEFAULT_SEED)
    }

    pub fn params(&self) -> Params {
        Params {
            space: self.space.clone(),
            n: self.n,
            m: self.m,
            k: self.k,
            weight: self.weight.clone(),
            sigma: self.sigma.clone(),
            grid_eps: Num(self.grid_eps()),
            grid_density: self.grid_density(),
        }
    }
}

pub fn parse_window(w: &str) -> Result<(f64, f64), CliError> {
    let bad = || CliError::Usage(format!("window '{w}' must be lo:hi with 0 < lo < hi < 1/e"));
    let (lo, hi) = w.split_once(':').ok_or_else(bad)?;
    let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
    let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
    if !(lo > 0.0 && lo < hi && hi < (-1f64).exp()) {
        return Err(bad());
    }
    Ok((lo, hi))
}
