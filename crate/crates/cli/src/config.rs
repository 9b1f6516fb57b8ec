use std::path::{Path, PathBuf};

use nilrenorm::verify::VerifyConfig;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrbitSystem {
    /// `(y, z) ↦ (y + 1/φ², z + y − 1/(2φ³))`, exact.
    #[default]
    SkewMap,
    /// Translation by `exp(α, β, γ)` of the substitution, exact.
    Niltranslation,
    /// Expanding flow of the substitution, floating point.
    Nilflow,
    /// Return map to the section through the contracting line, exact.
    Section,
    /// The strip map with the `induce` parameters, exact.
    Strip,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OrbitConfig {
    pub system: OrbitSystem,
    /// Starting point as exact scalar strings; missing entries are zero.
    pub start: Vec<String>,
    /// Sampling step of the nilflow.
    pub step: f64,
}

impl Default for OrbitConfig {
    fn default() -> Self {
        OrbitConfig {
            system: OrbitSystem::default(),
            start: Vec::new(),
            step: nilrenorm::dynamics::equidistribution::NILFLOW_STEP,
        }
    }
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InduceConfig {
    pub s: String,
    pub s_prime: String,
    pub theta: String,
}

impl Default for InduceConfig {
    fn default() -> Self {
        InduceConfig {
            s: "-1".into(),
            s_prime: "-1".into(),
            theta: "0".into(),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WeylSystems {
    #[default]
    Both,
    SkewMap,
    Nilflow,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EquidistributionConfig {
    pub system: WeylSystems,
    pub max_index: i64,
    pub iterates: Vec<usize>,
    pub threshold: f64,
}

impl Default for EquidistributionConfig {
    fn default() -> Self {
        EquidistributionConfig {
            system: WeylSystems::Both,
            max_index: 3,
            iterates: vec![1_000_000, 10_000_000],
            threshold: nilrenorm::dynamics::equidistribution::DEFAULT_THRESHOLD,
        }
    }
}

/// Everything a run depends on. Loaded from `--config`, then overridden by
/// command-line flags.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub substitution: String,
    pub seed: u64,
    pub samples: Option<usize>,
    pub iters: Option<usize>,
    pub format: Format,
    pub out: Option<PathBuf>,
    pub orbit: OrbitConfig,
    pub induce: InduceConfig,
    pub equidistribution: EquidistributionConfig,
    pub verify: VerifyConfig,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            substitution: "a->ab;b->a".into(),
            seed: 0,
            samples: None,
            iters: None,
            format: Format::Csv,
            out: None,
            orbit: OrbitConfig::default(),
            induce: InduceConfig::default(),
            equidistribution: EquidistributionConfig::default(),
            verify: VerifyConfig::default(),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io(path.display().to_string(), e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
    }
}
