//! TOML run configuration. Every table rejects unknown keys.

use std::path::Path;

use anyhow::{Context, Result};
use serde::Deserialize;

use scroll_ulrich::beilinson::TwistBox;
use scroll_ulrich::classify::{IntRange, SearchBox};
use scroll_ulrich::{SuitePlan, Variety};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Json,
    Markdown,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    /// Default variety for single-sheaf subcommands.
    #[serde(default)]
    pub variety: Option<Variety>,
    #[serde(default)]
    pub format: Format,
    /// Worker threads; 0 lets the runtime decide.
    #[serde(default)]
    pub workers: usize,
    #[serde(default)]
    pub sample_box: TwistBox,
    #[serde(default)]
    pub suite: SuiteSection,
    #[serde(default)]
    pub fault: FaultSection,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            variety: None,
            format: Format::Json,
            workers: 0,
            sample_box: TwistBox::default(),
            suite: SuiteSection::default(),
            fault: FaultSection::default(),
        }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SuiteSection {
    pub varieties: Vec<Variety>,
    pub line_box: SearchBox,
    pub omega_box: SearchBox,
    pub pullback_a: IntRange,
    pub pullback_b: IntRange,
    pub g_max_abs: i64,
    pub rank_cap: u64,
}

impl Default for SuiteSection {
    fn default() -> Self {
        let plan = SuitePlan::default();
        SuiteSection {
            varieties: plan.varieties,
            line_box: plan.line_box,
            omega_box: plan.omega_box,
            pullback_a: plan.pullback_a,
            pullback_b: plan.pullback_b,
            g_max_abs: plan.g_max_abs,
            rank_cap: plan.rank_cap,
        }
    }
}

/// Deliberate corruption for exercising failure paths.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FaultSection {
    /// Added to the degree `h^3` used by the Riemann-Roch check.
    #[serde(default)]
    pub degree_offset: i64,
}

impl Config {
    pub fn load(path: &Path) -> Result<Self> {
        let text =
            std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing {}", path.display()))
    }

    pub fn plan(&self) -> SuitePlan {
        SuitePlan {
            varieties: self.suite.varieties.clone(),
            sample_box: self.sample_box,
            line_box: self.suite.line_box,
            omega_box: self.suite.omega_box,
            pullback_a: self.suite.pullback_a,
            pullback_b: self.suite.pullback_b,
            g_max_abs: self.suite.g_max_abs,
            rank_cap: self.suite.rank_cap,
            degree_offset: self.fault.degree_offset,
        }
    }
}
