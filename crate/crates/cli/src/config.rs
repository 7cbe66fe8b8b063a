//! Flat JSON run configuration.

use crate::CliError;
use dpcbound::bounds::BoundOptions;
use dpcbound::model::{PowerSplit, SystemConfig, Thresholds};
use dpcbound::opt::{Grid, Objective, SearchSpec};
use dpcbound::sim::{SimOptions, DEFAULT_MEMORY_BUDGET};
use serde::Deserialize;
use std::path::PathBuf;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// A grid given either as explicit values or as `lin:min:max:points` /
/// `log:min:max:points`.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum GridField {
    Values(Vec<f64>),
    Spec(String),
}

impl GridField {
    fn to_grid(&self, key: &str) -> Result<Grid, CliError> {
        match self {
            GridField::Values(v) => Ok(Grid::Values(v.clone())),
            GridField::Spec(s) => Grid::parse(s).ok_or_else(|| {
                CliError::config(format!("{key}: expected a list or \"lin|log:min:max:points\", got {s:?}"))
            }),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub power: Option<f64>,
    pub channel_gain: Option<f64>,
    pub n_e: Option<u64>,
    pub n_u: Option<u64>,
    pub rho: Option<f64>,
    pub l_e: Option<u64>,
    pub l_u: Option<u64>,
    pub l_v: Option<u64>,

    pub alpha: Option<f64>,
    pub beta_e: Option<f64>,
    /// Optional; must equal 1 − beta_e when given.
    pub beta_u: Option<f64>,
    pub delta_b: Option<f64>,
    pub gamma_u: Option<f64>,
    pub gamma_e: Option<f64>,
    pub gamma_e_tilde: Option<f64>,

    pub objective: Option<Objective>,
    pub urllc_target: Option<f64>,
    pub alpha_grid: Option<GridField>,
    pub beta_e_grid: Option<GridField>,
    /// Shell widths as fractions of n_U β_U P.
    pub delta_b_fraction_grid: Option<GridField>,
    pub gamma_u_grid: Option<GridField>,
    pub gamma_e_grid: Option<GridField>,
    pub gamma_e_tilde_grid: Option<GridField>,
    pub refine_rounds: Option<u32>,
    pub sweep_values: Option<Vec<f64>>,
    /// n_e / n_U for blocklength sweeps.
    pub blocklength_ratio: Option<u64>,

    pub n_trials: Option<u64>,
    pub seed: Option<u64>,
    pub memory_budget_mb: Option<u64>,
    pub appendix_mu: Option<bool>,
    pub format: Option<Format>,
    pub output_path: Option<PathBuf>,
}

fn need<T: Copy>(v: Option<T>, key: &str) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::config(format!("missing required key {key:?}")))
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::new(2, "ConfigParse", e.to_string()))
    }

    pub fn system(&self) -> Result<SystemConfig, CliError> {
        let cfg = SystemConfig {
            power: need(self.power, "power")?,
            channel_gain: need(self.channel_gain, "channel_gain")?,
            n_e: need(self.n_e, "n_e")?,
            n_u: need(self.n_u, "n_u")?,
            rho: need(self.rho, "rho")?,
            l_e: need(self.l_e, "l_e")?,
            l_u: need(self.l_u, "l_u")?,
            l_v: need(self.l_v, "l_v")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn split(&self, cfg: &SystemConfig) -> Result<PowerSplit, CliError> {
        let mut split = PowerSplit::new(need(self.alpha, "alpha")?, need(self.beta_e, "beta_e")?, need(self.delta_b, "delta_b")?);
        if let Some(bu) = self.beta_u {
            split.beta_u = bu;
        }
        split.validate(cfg)?;
        Ok(split)
    }

    pub fn thresholds(&self) -> Result<Thresholds, CliError> {
        let thr = Thresholds {
            gamma_u: need(self.gamma_u, "gamma_u")?,
            gamma_e: need(self.gamma_e, "gamma_e")?,
            gamma_e_tilde: need(self.gamma_e_tilde, "gamma_e_tilde")?,
        };
        thr.validate()?;
        Ok(thr)
    }

    pub fn options(&self) -> BoundOptions {
        BoundOptions { appendix_mu: self.appendix_mu.unwrap_or(false) }
    }

    pub fn search(&self, cfg: &SystemConfig) -> Result<SearchSpec, CliError> {
        let mut spec = SearchSpec::new(self.objective.unwrap_or(Objective::Tin), self.urllc_target.unwrap_or(1e-5));
        let grid = |g: &Option<GridField>, key: &str| g.as_ref().map(|g| g.to_grid(key)).transpose();
        if let Some(g) = grid(&self.alpha_grid, "alpha_grid")? {
            spec.alpha = g;
        }
        if let Some(g) = grid(&self.beta_e_grid, "beta_e_grid")? {
            spec.beta_e = g;
        }
        if let Some(g) = grid(&self.delta_b_fraction_grid, "delta_b_fraction_grid")? {
            spec.delta_frac = g;
        }
        spec.gamma_u = grid(&self.gamma_u_grid, "gamma_u_grid")?;
        spec.gamma_e = grid(&self.gamma_e_grid, "gamma_e_grid")?;
        spec.gamma_e_tilde = grid(&self.gamma_e_tilde_grid, "gamma_e_tilde_grid")?;
        if let Some(r) = self.refine_rounds {
            spec.refine_rounds = r;
        }
        spec.options = self.options();
        spec.validate(cfg)?;
        Ok(spec)
    }

    pub fn sim_options(&self) -> SimOptions {
        SimOptions {
            memory_budget_bytes: self.memory_budget_mb.map_or(DEFAULT_MEMORY_BUDGET, |mb| mb.saturating_mul(1 << 20)),
            noiseless: false,
        }
    }
}
