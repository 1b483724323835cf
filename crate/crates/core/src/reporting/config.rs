use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::subordinator::{TimeGrid, DEFAULT_LEVELS};

pub const DEFAULT_REPLICATES: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 20_190_601;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    LaplaceCheck,
    CdfCheck,
    Scaling,
    MomentBoundTheta,
    MomentBoundExp,
    Blowup,
    IbpConsistency,
    KernelClassify,
}

impl ExperimentKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExperimentKind::LaplaceCheck => "laplace_check",
            ExperimentKind::CdfCheck => "cdf_check",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::MomentBoundTheta => "moment_bound_theta",
            ExperimentKind::MomentBoundExp => "moment_bound_exp",
            ExperimentKind::Blowup => "blowup",
            ExperimentKind::IbpConsistency => "ibp_consistency",
            ExperimentKind::KernelClassify => "kernel_classify",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GridKindConfig {
    Geometric,
    Uniform,
}

/// Grid settings. Geometric grids reach `ε = T·ratio^levels`; uniform grids
/// use `levels` equal steps after an initial point `epsilon`
/// (default `T·2^{-40}`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    #[serde(default = "GridConfig::default_kind")]
    pub kind: GridKindConfig,
    #[serde(default = "GridConfig::default_ratio")]
    pub ratio: f64,
    #[serde(default = "GridConfig::default_levels")]
    pub levels: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

impl GridConfig {
    fn default_kind() -> GridKindConfig {
        GridKindConfig::Geometric
    }

    fn default_ratio() -> f64 {
        0.5
    }

    fn default_levels() -> usize {
        DEFAULT_LEVELS
    }

    pub fn build(&self, horizon: f64) -> Result<TimeGrid> {
        match self.kind {
            GridKindConfig::Geometric => TimeGrid::geometric(horizon, self.ratio, self.levels),
            GridKindConfig::Uniform => {
                TimeGrid::uniform(horizon, self.levels, self.epsilon.unwrap_or(horizon * 2f64.powi(-40)))
            }
        }
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            kind: Self::default_kind(),
            ratio: Self::default_ratio(),
            levels: Self::default_levels(),
            epsilon: None,
        }
    }
}

/// One experiment, fully specified. Together with the library version this
/// is enough to reproduce a run exactly.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Kernel exponent; for `kernel_classify` the exponent `c` of `h(t) = t^c`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default = "default_horizon", alias = "T")]
    pub horizon: f64,
    /// Horizons for the scaling experiment (default `0.25, 1, 4`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub times: Option<Vec<f64>>,
    /// Truncation levels for the blow-up experiment (default `T·2^{-k}`, `k = 10..=30`).
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_levels: Option<Vec<f64>>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default = "default_replicates")]
    pub n_replicates: u64,
    #[serde(default = "default_seed")]
    pub master_seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_path: Option<String>,
}

fn default_horizon() -> f64 {
    1.0
}

fn default_replicates() -> u64 {
    DEFAULT_REPLICATES
}

fn default_seed() -> u64 {
    DEFAULT_SEED
}

impl ExperimentConfig {
    /// A config with every optional field unset and defaults elsewhere.
    pub fn new(experiment: ExperimentKind) -> Self {
        Self {
            experiment,
            alpha: None,
            theta: None,
            p: None,
            lambda: None,
            horizon: default_horizon(),
            times: None,
            epsilon_levels: None,
            grid: GridConfig::default(),
            n_replicates: default_replicates(),
            master_seed: default_seed(),
            output_path: None,
        }
    }

    fn require(&self, key: &str, value: Option<f64>) -> Result<f64> {
        value.ok_or_else(|| {
            Error::Config(format!(
                "missing required field `{key}` for experiment {}",
                self.experiment.name()
            ))
        })
    }

    pub fn require_alpha(&self) -> Result<f64> {
        self.require("alpha", self.alpha)
    }

    pub fn require_theta(&self) -> Result<f64> {
        self.require("theta", self.theta)
    }

    pub fn require_p(&self) -> Result<f64> {
        self.require("p", self.p)
    }

    pub fn require_lambda(&self) -> Result<f64> {
        self.require("lambda", self.lambda)
    }

    /// Checks every constraint of the selected experiment.
    pub fn validate(&self) -> Result<()> {
        use ExperimentKind::*;
        let bad = |msg: String| Err(Error::Config(msg));

        if !(self.horizon > 0.0 && self.horizon.is_finite()) {
            return bad(format!("horizon must be > 0, got {}", self.horizon));
        }
        if self.n_replicates < 2 {
            return bad(format!("n_replicates must be >= 2, got {}", self.n_replicates));
        }
        if let Some(a) = self.alpha {
            let ok = if self.experiment == KernelClassify {
                a > 0.0 && a <= 1.0
            } else {
                a > 0.0 && a < 1.0
            };
            if !ok {
                return bad(if self.experiment == KernelClassify {
                    format!("alpha must lie in (0,1], got {a}")
                } else {
                    format!("alpha must lie in (0,1), got {a}")
                });
            }
        }
        if let Some(l) = self.lambda {
            if !(l > 0.0 && l.is_finite()) {
                return bad(format!("lambda must be > 0, got {l}"));
            }
        }
        if let Some(t) = self.theta {
            if !(t > 0.0 && t.is_finite()) {
                return bad(format!("theta must be > 0, got {t}"));
            }
        }
        if let Some(p) = self.p {
            if !(p > 0.0) {
                return bad(format!("p must be > 0, got {p}"));
            }
            if let Some(a) = self.alpha {
                if !(p < a) {
                    return bad(format!("p must be < alpha (p = {p}, alpha = {a})"));
                }
            }
        }
        if self.grid.kind == GridKindConfig::Geometric && !(self.grid.ratio > 0.0 && self.grid.ratio < 1.0) {
            return bad(format!("grid.ratio must lie in (0,1), got {}", self.grid.ratio));
        }
        if self.grid.kind == GridKindConfig::Geometric && self.grid.epsilon.is_some() {
            return bad("grid.epsilon applies to uniform grids; geometric grids use grid.levels".into());
        }
        if let Some(times) = &self.times {
            if times.is_empty() || times.iter().any(|t| !(*t > 0.0 && t.is_finite())) {
                return bad("times must be a non-empty list of positive values".into());
            }
        }
        if let Some(levels) = &self.epsilon_levels {
            if levels.len() < 2 || levels.windows(2).any(|w| !(w[0] > w[1])) {
                return bad("epsilon_levels must hold at least two strictly decreasing values".into());
            }
            if levels.iter().any(|e| !(*e > 0.0 && *e < self.horizon)) {
                return bad("epsilon_levels must lie in (0, horizon)".into());
            }
        }

        let theta_below_threshold = |theta: f64, alpha: f64| {
            if theta < 1.0 / alpha {
                Ok(())
            } else {
                bad(format!("theta must be < 1/alpha = {} (got theta = {theta})", 1.0 / alpha))
            }
        };

        match self.experiment {
            LaplaceCheck => {}
            CdfCheck => {
                if let Some(a) = self.alpha {
                    if a != 0.5 {
                        return bad(format!("cdf_check compares against the alpha = 0.5 law; got alpha = {a}"));
                    }
                }
            }
            Scaling => {
                self.require_alpha()?;
                self.require_p()?;
            }
            MomentBoundTheta => {
                let alpha = self.require_alpha()?;
                let theta = self.require_theta()?;
                self.require_p()?;
                theta_below_threshold(theta, alpha)?;
                self.grid.build(self.horizon)?;
            }
            MomentBoundExp => {
                self.require_alpha()?;
                self.require_p()?;
                self.require_lambda()?;
                self.grid.build(self.horizon)?;
            }
            Blowup => {
                self.require_alpha()?;
                self.require_theta()?;
                if self.n_replicates < 100 {
                    return bad(format!(
                        "n_replicates must be >= 100 for a stable median, got {}",
                        self.n_replicates
                    ));
                }
            }
            IbpConsistency => {
                let alpha = self.require_alpha()?;
                let theta = self.require_theta()?;
                theta_below_threshold(theta, alpha)?;
            }
            KernelClassify => {
                self.require_alpha()?;
                self.require_theta()?;
            }
        }
        Ok(())
    }

    /// Grid for experiments that take one; the exponential kernel defaults to
    /// a uniform grid when the grid section was left at its default.
    pub fn resolved_grid(&self) -> Result<TimeGrid> {
        self.grid.build(self.horizon)
    }
}

/// Parses and validates a TOML experiment document, filling defaults
/// (grid ratio 1/2, 40 levels, `ε = T·2^{-40}`, `10^5` replicates).
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let config: ExperimentConfig = toml::from_str(text).map_err(|e| Error::Config(e.message().to_string()))?;
    config.validate()?;
    Ok(config)
}

/// Renders a config back to TOML; `parse_config(render_config(c)) == c`.
pub fn render_config(config: &ExperimentConfig) -> Result<String> {
    toml::to_string(config).map_err(|e| Error::Serialize(e.to_string()))
}

/// Merges `overrides` (top-level `key = value` pairs, dotted keys for the
/// grid section) into an optional base document and parses the result.
pub fn config_with_overrides(
    base: Option<&str>,
    experiment: ExperimentKind,
    overrides: &[(&str, toml::Value)],
) -> Result<ExperimentConfig> {
    let mut table: toml::Table = match base {
        Some(text) => text.parse().map_err(|e: toml::de::Error| Error::Config(e.message().to_string()))?,
        None => toml::Table::new(),
    };
    if let Some(existing) = table.get("experiment").and_then(|v| v.as_str()) {
        if existing != experiment.name() {
            return Err(Error::Config(format!(
                "config file describes experiment `{existing}` but `{}` was requested",
                experiment.name()
            )));
        }
    }
    table.insert("experiment".into(), toml::Value::String(experiment.name().into()));
    for (key, value) in overrides {
        match key.split_once('.') {
            Some((section, field)) => {
                let entry = table
                    .entry(section.to_string())
                    .or_insert_with(|| toml::Value::Table(toml::Table::new()));
                let sub = entry
                    .as_table_mut()
                    .ok_or_else(|| Error::Config(format!("`{section}` must be a table")))?;
                sub.insert(field.to_string(), value.clone());
            }
            None => {
                table.insert((*key).to_string(), value.clone());
            }
        }
    }
    parse_config(&table.to_string())
}
