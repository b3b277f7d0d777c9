//! Loss generation for the stochastic, corrupted and scripted-adversarial regimes.
//!
//! Every round the environment fills the whole loss table (all `n_i` slots of
//! every arm) before the learner acts. Each slot is driven by one uniform
//! variate `u`; the clean loss is the arm distribution's quantile at `u` and the
//! corrupted loss is the active replacement distribution's quantile at the same
//! `u`. Under the identity schedule both tables coincide.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ActionVector, InstanceSpec, LossTable, Observation, Sample};
use crate::stream_rng;

/// Per-arm loss distribution, supported on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum ArmDistribution {
    Uniform { lo: f64, hi: f64 },
    Bernoulli { p: f64 },
    Constant { value: f64 },
}

impl ArmDistribution {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            Self::Uniform { lo, hi } => 0.0 <= lo && lo <= hi && hi <= 1.0,
            Self::Bernoulli { p } => (0.0..=1.0).contains(&p),
            Self::Constant { value } => (0.0..=1.0).contains(&value),
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidDistribution(format!("{self:?} is not supported on [0, 1]")))
        }
    }

    pub fn mean(&self) -> f64 {
        match *self {
            Self::Uniform { lo, hi } => 0.5 * (lo + hi),
            Self::Bernoulli { p } => p,
            Self::Constant { value } => value,
        }
    }

    pub fn variance(&self) -> f64 {
        match *self {
            Self::Uniform { lo, hi } => (hi - lo) * (hi - lo) / 12.0,
            Self::Bernoulli { p } => p * (1.0 - p),
            Self::Constant { .. } => 0.0,
        }
    }

    /// Inverse CDF at `u ∈ [0, 1)`.
    pub fn quantile(&self, u: f64) -> f64 {
        match *self {
            Self::Uniform { lo, hi } => (lo + u * (hi - lo)).min(hi),
            Self::Bernoulli { p } => {
                if u >= 1.0 - p {
                    1.0
                } else {
                    0.0
                }
            }
            Self::Constant { value } => value,
        }
    }
}

/// Replacement distributions active for rounds `after < t ≤ until`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CorruptionPhase {
    pub after: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub until: Option<u64>,
    pub arms: Vec<ArmDistribution>,
}

impl CorruptionPhase {
    pub fn is_active(&self, t: u64) -> bool {
        t > self.after && self.until.is_none_or(|u| t <= u)
    }
}

/// Time-indexed corruption rule; the first active phase wins. No phases is the identity.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CorruptionSchedule {
    pub phases: Vec<CorruptionPhase>,
}

impl CorruptionSchedule {
    pub fn identity() -> Self {
        Self::default()
    }

    /// Switch every arm from `U(0, 2c)` to `U(1 - 2c, 1)` after round `after`.
    pub fn flip_uniform(costs: &[f64], after: u64) -> Self {
        Self {
            phases: vec![CorruptionPhase {
                after,
                until: None,
                arms: costs
                    .iter()
                    .map(|&c| ArmDistribution::Uniform {
                        lo: 1.0 - 2.0 * c,
                        hi: 1.0,
                    })
                    .collect(),
            }],
        }
    }

    pub fn is_identity(&self) -> bool {
        self.phases.is_empty()
    }

    pub fn replacement(&self, t: u64, arm: usize) -> Option<&ArmDistribution> {
        self.phases
            .iter()
            .find(|p| p.is_active(t))
            .map(|p| &p.arms[arm])
    }
}

/// A seeded loss generator for one trial.
#[derive(Debug, Clone)]
pub struct Environment {
    spec: InstanceSpec,
    arms: Vec<ArmDistribution>,
    schedule: CorruptionSchedule,
    rng: ChaCha8Rng,
    corruption: f64,
}

impl Environment {
    pub fn new(
        spec: InstanceSpec,
        arms: Vec<ArmDistribution>,
        schedule: CorruptionSchedule,
        seed: u64,
    ) -> Result<Self> {
        if arms.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                actual: arms.len(),
            });
        }
        for dist in &arms {
            dist.validate()?;
        }
        for phase in &schedule.phases {
            if phase.arms.len() != spec.dim() {
                return Err(Error::DimensionMismatch {
                    expected: spec.dim(),
                    actual: phase.arms.len(),
                });
            }
            for dist in &phase.arms {
                dist.validate()?;
            }
        }
        Ok(Self {
            spec,
            arms,
            schedule,
            rng: stream_rng(seed, crate::STREAM_ENVIRONMENT),
            corruption: 0.0,
        })
    }

    /// Stochastic environment: no corruption.
    pub fn stochastic(spec: InstanceSpec, arms: Vec<ArmDistribution>, seed: u64) -> Result<Self> {
        Self::new(spec, arms, CorruptionSchedule::identity(), seed)
    }

    pub fn spec(&self) -> &InstanceSpec {
        &self.spec
    }

    pub fn arms(&self) -> &[ArmDistribution] {
        &self.arms
    }

    pub fn schedule(&self) -> &CorruptionSchedule {
        &self.schedule
    }

    /// Running corruption level `Σ_t max_{i,j} |L_{i,j}(t) − L'_{i,j}(t)|`.
    pub fn corruption_level(&self) -> f64 {
        self.corruption
    }

    /// Draws the clean and corrupted loss tables of round `t ≥ 1`.
    pub fn draw_round(&mut self, t: u64) -> (LossTable, LossTable) {
        let d = self.spec.dim();
        let mut clean = Vec::with_capacity(d);
        let mut corrupted = Vec::with_capacity(d);
        let mut worst: f64 = 0.0;
        for (i, arm) in self.spec.arms().iter().enumerate() {
            let dist = self.arms[i];
            let replacement = self.schedule.replacement(t, i).copied();
            let mut clean_row = Vec::with_capacity(arm.cap as usize);
            let mut corrupted_row = Vec::with_capacity(arm.cap as usize);
            for _ in 0..arm.cap {
                let u: f64 = self.rng.random();
                let l_clean = dist.quantile(u);
                let l = replacement.map_or(l_clean, |r| r.quantile(u));
                worst = worst.max((l - l_clean).abs());
                clean_row.push(l_clean);
                corrupted_row.push(l);
            }
            clean.push(clean_row);
            corrupted.push(corrupted_row);
        }
        self.corruption += worst;
        // Quantiles of validated distributions stay in [0, 1].
        (
            LossTable::new(clean).expect("quantiles lie in [0, 1]"),
            LossTable::new(corrupted).expect("quantiles lie in [0, 1]"),
        )
    }

    /// `Σ_i a_i ℓ_i` under the clean distributions. Fails under a corruption
    /// schedule, where losses have no stationary mean.
    pub fn expected_action_loss(&self, a: &ActionVector) -> Result<f64> {
        if !self.schedule.is_identity() {
            return Err(Error::NoStationaryMean);
        }
        Ok(a.dot(&self.clean_means()))
    }

    pub fn clean_means(&self) -> Vec<f64> {
        self.arms.iter().map(ArmDistribution::mean).collect()
    }

    pub fn clean_variances(&self) -> Vec<f64> {
        self.arms.iter().map(ArmDistribution::variance).collect()
    }

    /// Expected per-arm losses of the (possibly corrupted) round-`t` table.
    pub fn round_means(&self, t: u64) -> Vec<f64> {
        (0..self.spec.dim())
            .map(|i| {
                self.schedule
                    .replacement(t, i)
                    .unwrap_or(&self.arms[i])
                    .mean()
            })
            .collect()
    }

    /// Per-arm means averaged over rounds `1..=horizon`; the comparator for regret.
    pub fn horizon_means(&self, horizon: u64) -> Vec<f64> {
        let mut totals = self.clean_means();
        if self.schedule.is_identity() || horizon == 0 {
            return totals;
        }
        let clean = totals.clone();
        for v in totals.iter_mut() {
            *v = 0.0;
        }
        // Sum per maximal run of rounds sharing the same active phase.
        let mut boundaries: Vec<u64> = vec![0, horizon];
        for p in &self.schedule.phases {
            boundaries.push(p.after.min(horizon));
            if let Some(u) = p.until {
                boundaries.push(u.min(horizon));
            }
        }
        boundaries.sort_unstable();
        boundaries.dedup();
        for w in boundaries.windows(2) {
            let (lo, hi) = (w[0], w[1]);
            if hi == lo {
                continue;
            }
            let rounds = (hi - lo) as f64;
            let t = lo + 1;
            for (i, total) in totals.iter_mut().enumerate() {
                let mean = self.schedule.replacement(t, i).map_or(clean[i], |r| r.mean());
                *total += rounds * mean;
            }
        }
        totals.iter().map(|s| s / horizon as f64).collect()
    }
}

/// Semi-bandit feedback: the first `a_i` slots of every played arm's row.
pub fn observe(table: &LossTable, a: &ActionVector, round: u64) -> Observation {
    let mut samples = Vec::with_capacity(a.total() as usize);
    for (arm, &count) in a.counts().iter().enumerate() {
        for (slot, &loss) in table.row(arm)[..count as usize].iter().enumerate() {
            samples.push(Sample { arm, slot, loss });
        }
    }
    Observation { round, samples }
}
