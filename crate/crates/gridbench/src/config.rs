//! Experiment configuration: the TOML schema behind `run --config` and the
//! struct the `sweep` flags assemble.
//!
//! # Schema
//!
//! ```toml
//! kind = "matmul"          # kernel name (see `gridbench verify --help`)
//! sizes = [64, 128, 256]   # problem sizes, strictly ascending, all >= 1
//! cache_entries = 256      # cache capacity M, in entries
//! line_entries = 8         # line size B, in entries; must divide M
//! omegas = [1.0, 8.0]      # write costs, each >= 1
//! policy = "classic"       # "classic" | "asym"; default "classic"
//! base_threshold = 8       # recursion leaf size; default 8
//! seed = 1                 # instance seed
//! preset = "random(1,9)"   # weight preset; default "random(<seed>,9)"
//! out = "rows.csv"         # output CSV path
//! ```
//!
//! Weight presets: `linear`, `quadratic`, `random(seed,range)`,
//! `constant(c)`. One CSV row is emitted per (size, omega) pair, sizes
//! outermost.

use crate::runner::CliError;
use gridsim::{ExecOptions, Kind, Mode, SplitPolicy, WeightPreset};
use serde::Deserialize;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

/// Split-policy selector as it appears in configs and flags.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Policy {
    Classic,
    Asym,
}

impl Policy {
    /// The engine policy for one omega value.
    pub fn split_policy(&self, omega: f64) -> SplitPolicy {
        match self {
            Policy::Classic => SplitPolicy::Classic,
            Policy::Asym => SplitPolicy::Asymmetric { write_cost: omega },
        }
    }
}

impl fmt::Display for Policy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Policy::Classic => "classic",
            Policy::Asym => "asym",
        })
    }
}

impl FromStr for Policy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "classic" => Ok(Policy::Classic),
            "asym" => Ok(Policy::Asym),
            other => Err(format!("unknown policy `{other}` (want classic or asym)")),
        }
    }
}

/// One experiment: a kernel swept over sizes and write costs under a fixed
/// cache geometry and policy.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: String,
    pub sizes: Vec<usize>,
    pub cache_entries: usize,
    pub line_entries: usize,
    pub omegas: Vec<f64>,
    #[serde(default = "default_policy")]
    pub policy: Policy,
    #[serde(default = "default_threshold")]
    pub base_threshold: usize,
    pub seed: u64,
    #[serde(default)]
    pub preset: Option<String>,
    pub out: PathBuf,
}

fn default_policy() -> Policy {
    Policy::Classic
}

fn default_threshold() -> usize {
    8
}

impl ExperimentConfig {
    /// Parses and validates a TOML config file.
    pub fn load(path: &std::path::Path) -> Result<ExperimentConfig, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
        let cfg: ExperimentConfig = toml::from_str(&text)
            .map_err(|e| CliError::Usage(format!("bad config {}: {e}", path.display())))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Checks the invariants the schema promises.
    pub fn validate(&self) -> Result<(), CliError> {
        self.parsed_kind()?;
        self.parsed_preset()?;
        if self.sizes.is_empty() {
            return Err(CliError::Usage("sizes must be non-empty".into()));
        }
        if self.sizes.windows(2).any(|w| w[0] >= w[1]) {
            return Err(CliError::Usage(format!(
                "sizes must be strictly ascending, got {:?}",
                self.sizes
            )));
        }
        if self.sizes[0] == 0 {
            return Err(CliError::Usage("sizes must be positive".into()));
        }
        if self.omegas.is_empty() {
            return Err(CliError::Usage("omegas must be non-empty".into()));
        }
        if let Some(w) = self.omegas.iter().find(|w| !w.is_finite() || **w < 1.0) {
            return Err(CliError::Usage(format!("write cost {w} out of range (need >= 1)")));
        }
        if self.base_threshold == 0 {
            return Err(CliError::Usage("base_threshold must be positive".into()));
        }
        // Cache geometry rules (positivity, divisibility) live with the
        // simulator; surface its message as a usage error.
        gridsim::CacheConfig::new(self.cache_entries, self.line_entries, self.omegas[0])
            .map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(())
    }

    pub fn parsed_kind(&self) -> Result<Kind, CliError> {
        self.kind.parse::<Kind>().map_err(CliError::Usage)
    }

    /// The weight preset, defaulting to small random integers keyed from
    /// the instance seed.
    pub fn parsed_preset(&self) -> Result<WeightPreset, CliError> {
        match &self.preset {
            None => Ok(WeightPreset::Random { seed: self.seed, range: 9 }),
            Some(text) => text.parse::<WeightPreset>().map_err(CliError::Usage),
        }
    }

    /// Engine options for one omega value.
    pub fn exec_options(&self, omega: f64) -> ExecOptions {
        ExecOptions::default()
            .with_policy(self.policy.split_policy(omega))
            .with_mode(Mode::Sequential)
            .with_base_threshold(self.base_threshold)
    }
}
