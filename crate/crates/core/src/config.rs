//! Experiment configuration files.
//!
//! A TOML document with `[instance]`, `[policy]` and `[experiment]` sections
//! and an optional `[growing_k]` section. See [`TEMPLATE`].

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::bandit::{ArmSpec, BanditInstance};
use crate::error::{Error, Result};
use crate::harness::{ExperimentConfig, GapProfile, GrowingKConfig};
use crate::inference::CiFormula;
use crate::policy::PolicyKind;
use crate::stability::DEFAULT_TOLERANCE;

/// Documented template; parses to a valid configuration.
pub const TEMPLATE: &str = r#"# banditlab experiment configuration

[instance]
# Known horizon T (total number of pulls).
horizon = 10000
# Optional: reject arms whose sub-Gaussian parameter exceeds this bound.
# sub_gaussian_bound = 1.0
# One entry per arm. Families:
#   { family = "gaussian", mean = <real>, std_dev = <real > 0> }
#   { family = "bernoulli", p = <real in [0, 1]> }
#   { family = "uniform", low = <real>, high = <real> }
arms = [
    { family = "gaussian", mean = 0.3, std_dev = 1.0 },
    { family = "gaussian", mean = 0.3, std_dev = 1.0 },
]

[policy]
# "ucb" or "epsilon-greedy"
kind = "ucb"
# Exploration probability, epsilon-greedy only.
# epsilon = 0.1

[experiment]
replications = 5000
root_seed = 20240601
# Contrast u for intervals on u . mu (one entry per arm).
direction = [0.0, 1.0]
alpha = 0.05
# "standard-error" (default) or "unrooted" (for comparison only).
ci_formula = "standard-error"
solver_tolerance = 1e-10
# Horizons used by the `stability` subcommand; defaults to [instance.horizon].
stability_horizons = [1000, 10000, 100000]

# Needed only by the `growing-k` subcommand. The first arm is the template
# for every arm; K = round(exp((ln T)^(1 - delta_exponent))).
[growing_k]
delta_exponent = 0.5
horizons = [1000, 10000, 100000]
min_fraction = 0.5
# "equal" (default) or "linear" together with max_gap.
gap_profile = "equal"
# max_gap = 0.05
"#;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ArmEntry {
    Gaussian { mean: f64, std_dev: f64 },
    Bernoulli { p: f64 },
    Uniform { low: f64, high: f64 },
}

impl ArmEntry {
    fn to_spec(&self, index: usize) -> Result<ArmSpec> {
        let spec = match *self {
            ArmEntry::Gaussian { mean, std_dev } => ArmSpec::gaussian(mean, std_dev),
            ArmEntry::Bernoulli { p } => ArmSpec::bernoulli(p),
            ArmEntry::Uniform { low, high } => ArmSpec::bounded_uniform(low, high),
        };
        spec.map_err(|e| match e {
            Error::InvalidConfig { key, message } => Error::InvalidConfig {
                key: format!("instance.arms[{index}].{key}"),
                message,
            },
            other => other,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceSection {
    pub horizon: u64,
    pub arms: Vec<ArmEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sub_gaussian_bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PolicyName {
    Ucb,
    EpsilonGreedy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolicySection {
    pub kind: PolicyName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
}

fn default_alpha() -> f64 {
    0.05
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub replications: usize,
    pub root_seed: u64,
    pub direction: Vec<f64>,
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default)]
    pub ci_formula: CiFormula,
    #[serde(default = "default_tolerance")]
    pub solver_tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub stability_horizons: Option<Vec<u64>>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapProfileName {
    #[default]
    Equal,
    Linear,
}

fn default_min_fraction() -> f64 {
    0.5
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowingKSection {
    pub delta_exponent: f64,
    pub horizons: Vec<u64>,
    #[serde(default = "default_min_fraction")]
    pub min_fraction: f64,
    #[serde(default)]
    pub gap_profile: GapProfileName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_gap: Option<f64>,
}

/// Parsed configuration file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub instance: InstanceSection,
    pub policy: PolicySection,
    pub experiment: ExperimentSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub growing_k: Option<GrowingKSection>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::config("config", e.message().to_string()))
    }

    pub fn template() -> Self {
        ConfigFile::parse(TEMPLATE).expect("template parses")
    }

    /// Canonical TOML rendering; stable for equal configurations.
    pub fn canonical(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// SHA-256 of the canonical rendering, hex encoded.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.canonical().as_bytes()))
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("configuration serializes")
    }

    pub fn instance(&self) -> Result<BanditInstance> {
        let arms = self
            .instance
            .arms
            .iter()
            .enumerate()
            .map(|(i, a)| a.to_spec(i))
            .collect::<Result<Vec<_>>>()?;
        let instance = BanditInstance::new(arms, self.instance.horizon)?;
        if let Some(bound) = self.instance.sub_gaussian_bound {
            instance.check_sub_gaussian_bound(bound)?;
        }
        Ok(instance)
    }

    pub fn policy(&self) -> Result<PolicyKind> {
        let kind = match (self.policy.kind, self.policy.epsilon) {
            (PolicyName::Ucb, None) => PolicyKind::Ucb,
            (PolicyName::Ucb, Some(_)) => {
                return Err(Error::config("policy.epsilon", "only applies to epsilon-greedy"))
            }
            (PolicyName::EpsilonGreedy, Some(epsilon)) => PolicyKind::EpsilonGreedy { epsilon },
            (PolicyName::EpsilonGreedy, None) => {
                return Err(Error::config("policy.epsilon", "required for epsilon-greedy"))
            }
        };
        kind.validate()?;
        Ok(kind)
    }

    fn growing(&self) -> Result<Option<GrowingKConfig>> {
        let Some(g) = &self.growing_k else {
            return Ok(None);
        };
        let gap_profile = match (g.gap_profile, g.max_gap) {
            (GapProfileName::Equal, None) => GapProfile::Equal,
            (GapProfileName::Equal, Some(_)) => {
                return Err(Error::config("growing_k.max_gap", "only applies to the linear profile"))
            }
            (GapProfileName::Linear, Some(max_gap)) => GapProfile::Linear { max_gap },
            (GapProfileName::Linear, None) => {
                return Err(Error::config("growing_k.max_gap", "required for the linear profile"))
            }
        };
        Ok(Some(GrowingKConfig {
            delta_exponent: g.delta_exponent,
            horizons: g.horizons.clone(),
            min_fraction: g.min_fraction,
            gap_profile,
        }))
    }

    pub fn experiment(&self) -> Result<ExperimentConfig> {
        let e = &self.experiment;
        let config = ExperimentConfig {
            instance: self.instance()?,
            policy: self.policy()?,
            replications: e.replications,
            root_seed: e.root_seed,
            direction: e.direction.clone(),
            alpha: e.alpha,
            ci_formula: e.ci_formula,
            solver_tolerance: e.solver_tolerance,
            growing_k: self.growing()?,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn stability_horizons(&self) -> Result<Vec<u64>> {
        match &self.experiment.stability_horizons {
            None => Ok(vec![self.instance.horizon]),
            Some(h) if h.is_empty() => {
                Err(Error::config("experiment.stability_horizons", "must not be empty"))
            }
            Some(h) if h.windows(2).any(|w| w[0] >= w[1]) => Err(Error::config(
                "experiment.stability_horizons",
                "must be strictly increasing",
            )),
            Some(h) => Ok(h.clone()),
        }
    }
}
