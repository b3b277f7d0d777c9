//! TOML experiment configuration.
//!
//! ```toml
//! horizon = 10000
//! trials = 30
//! seed = 1
//! output = "out/stochastic"
//!
//! [instance]
//! kind = "transport"
//! supplies = [1, 4, 5]
//! demands = [4, 6]
//!
//! [environment]
//! kind = "random_costs"
//! cost_range = [0.10, 0.50]
//! corruption = { kind = "flip", after = 2000 }   # optional
//!
//! [algorithm]
//! kind = "genlbinfv"            # gencts | genlbinfv | dup-cts | dup-lbinfv
//! predictor = "least_squares"   # or "gradient_descent" (with eta)
//! eta = 0.25
//! epsilon_fraction = 0.5
//! ```
//!
//! A `fixed` environment lists the arm distributions directly:
//! `arms = [{ family = "uniform", lo = 0.0, hi = 0.4 }, ...]`, with an optional
//! `schedule` of corruption phases.

use std::path::{Path, PathBuf};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::environment::{ArmDistribution, CorruptionSchedule, Environment};
use crate::error::{Error, Result};
use crate::genlbinfv::{GenLbinfvConfig, PredictorKind};
use crate::model::InstanceSpec;
use crate::{stream_rng, STREAM_INSTANCE};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub horizon: u64,
    pub trials: usize,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    pub instance: InstanceSpec,
    pub environment: EnvironmentConfig,
    pub algorithm: AlgorithmConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum EnvironmentConfig {
    Fixed {
        arms: Vec<ArmDistribution>,
        #[serde(default, skip_serializing_if = "CorruptionSchedule::is_identity")]
        schedule: CorruptionSchedule,
    },
    /// Per-trial costs `c_i ~ U[lo, hi]` and losses `U(0, 2 c_i)`.
    RandomCosts {
        cost_range: [f64; 2],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        corruption: Option<CorruptionConfig>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CorruptionConfig {
    /// `U(0, 2c)` becomes `U(1 − 2c, 1)` for rounds `t > after`.
    Flip { after: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AlgorithmKind {
    Gencts,
    Genlbinfv,
    DupCts,
    DupLbinfv,
}

impl AlgorithmKind {
    pub fn name(self) -> &'static str {
        match self {
            Self::Gencts => "gencts",
            Self::Genlbinfv => "genlbinfv",
            Self::DupCts => "dup-cts",
            Self::DupLbinfv => "dup-lbinfv",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PredictorName {
    #[default]
    LeastSquares,
    GradientDescent,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgorithmConfig {
    pub kind: AlgorithmKind,
    #[serde(default)]
    pub predictor: PredictorName,
    #[serde(default = "default_eta")]
    pub eta: f64,
    #[serde(default = "default_epsilon_fraction")]
    pub epsilon_fraction: f64,
}

fn default_eta() -> f64 {
    0.25
}

fn default_epsilon_fraction() -> f64 {
    0.5
}

impl AlgorithmConfig {
    pub fn new(kind: AlgorithmKind) -> Self {
        Self {
            kind,
            predictor: PredictorName::LeastSquares,
            eta: default_eta(),
            epsilon_fraction: default_epsilon_fraction(),
        }
    }

    pub fn lbinfv(&self) -> GenLbinfvConfig {
        GenLbinfvConfig {
            predictor: match self.predictor {
                PredictorName::LeastSquares => PredictorKind::LeastSquares,
                PredictorName::GradientDescent => PredictorKind::GradientDescent { eta: self.eta },
            },
            epsilon_fraction: self.epsilon_fraction,
        }
    }
}

impl ExperimentConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_toml_str(&std::fs::read_to_string(path)?)
    }

    pub fn to_toml_string(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon == 0 {
            return Err(Error::Config("horizon must be at least 1".into()));
        }
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        let d = self.instance.dim();
        match &self.environment {
            EnvironmentConfig::Fixed { arms, schedule } => {
                if arms.len() != d {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        actual: arms.len(),
                    });
                }
                for arm in arms.iter().chain(schedule.phases.iter().flat_map(|p| &p.arms)) {
                    arm.validate()?;
                }
                if let Some(p) = schedule.phases.iter().find(|p| p.arms.len() != d) {
                    return Err(Error::DimensionMismatch {
                        expected: d,
                        actual: p.arms.len(),
                    });
                }
            }
            EnvironmentConfig::RandomCosts { cost_range, .. } => {
                let [lo, hi] = *cost_range;
                if !(0.0 <= lo && lo <= hi && hi <= 0.5) {
                    return Err(Error::Config(format!(
                        "cost range [{lo}, {hi}] must lie within [0, 0.5]"
                    )));
                }
            }
        }
        let lb = self.algorithm.lbinfv();
        lb.predictor.validate()?;
        if !(lb.epsilon_fraction > 0.0 && lb.epsilon_fraction <= 0.5) {
            return Err(Error::Config(format!(
                "epsilon fraction {} outside (0, 0.5]",
                lb.epsilon_fraction
            )));
        }
        Ok(())
    }

    /// Seed of trial `k`.
    pub fn trial_seed(&self, trial: usize) -> u64 {
        self.seed.wrapping_add(trial as u64)
    }

    /// Per-arm costs of a `random_costs` trial, drawn from the trial seed.
    pub fn trial_costs(&self, trial_seed: u64) -> Option<Vec<f64>> {
        let EnvironmentConfig::RandomCosts { cost_range, .. } = &self.environment else {
            return None;
        };
        let mut rng = stream_rng(trial_seed, STREAM_INSTANCE);
        let [lo, hi] = *cost_range;
        Some(
            (0..self.instance.dim())
                .map(|_| lo + (hi - lo) * rng.random::<f64>())
                .collect(),
        )
    }

    pub fn build_environment(&self, trial_seed: u64) -> Result<Environment> {
        match &self.environment {
            EnvironmentConfig::Fixed { arms, schedule } => Environment::new(
                self.instance.clone(),
                arms.clone(),
                schedule.clone(),
                trial_seed,
            ),
            EnvironmentConfig::RandomCosts { corruption, .. } => {
                let costs = self.trial_costs(trial_seed).expect("random-cost environment");
                let arms = costs
                    .iter()
                    .map(|&c| ArmDistribution::Uniform { lo: 0.0, hi: 2.0 * c })
                    .collect();
                let schedule = match corruption {
                    Some(CorruptionConfig::Flip { after }) => {
                        CorruptionSchedule::flip_uniform(&costs, *after)
                    }
                    None => CorruptionSchedule::identity(),
                };
                Environment::new(self.instance.clone(), arms, schedule, trial_seed)
            }
        }
    }
}
