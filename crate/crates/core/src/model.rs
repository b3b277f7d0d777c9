//! Domain types shared by the learners, oracles and harness.
//!
//! An instance is a set of `d` base arms, each with a per-round cap `n_i`,
//! together with a combinatorial action set `A ⊂ Z_{≥0}^d`. Three kinds of
//! action set are supported:
//!
//! * transport plans between integer supplies and demands (arms are the edges,
//!   laid out row-major: edge `(x, y)` is arm `x * |demands| + y`),
//! * unbounded knapsack fillings under a weight capacity,
//! * an explicit list of actions (for brute-force testing).

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A base arm and its per-round cap `n_i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArmSpec {
    pub id: usize,
    pub cap: u32,
}

/// Nonnegative integer play counts per base arm.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ActionVector(pub Vec<u32>);

impl ActionVector {
    pub fn zeros(d: usize) -> Self {
        Self(vec![0; d])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn counts(&self) -> &[u32] {
        &self.0
    }

    /// `‖a‖₁`, the total number of plays.
    pub fn total(&self) -> u64 {
        self.0.iter().map(|&c| u64::from(c)).sum()
    }

    /// `Σ_i a_i ρ_i`, summed in arm order.
    pub fn dot(&self, weights: &[f64]) -> f64 {
        self.0
            .iter()
            .zip(weights)
            .map(|(&c, &w)| f64::from(c) * w)
            .sum()
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.0.iter().map(|&c| f64::from(c)).collect()
    }
}

impl From<Vec<u32>> for ActionVector {
    fn from(v: Vec<u32>) -> Self {
        Self(v)
    }
}

impl fmt::Display for ActionVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

/// Declarative description of an action set.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum InstanceKind {
    Transport { supplies: Vec<u32>, demands: Vec<u32> },
    Knapsack { weights: Vec<u32>, capacity: u32 },
    Explicit { actions: Vec<ActionVector> },
}

/// A validated instance: the action-set description plus derived arm caps.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceKind", into = "InstanceKind")]
pub struct InstanceSpec {
    kind: InstanceKind,
    arms: Vec<ArmSpec>,
}

impl TryFrom<InstanceKind> for InstanceSpec {
    type Error = Error;

    fn try_from(kind: InstanceKind) -> Result<Self> {
        InstanceSpec::new(kind)
    }
}

impl From<InstanceSpec> for InstanceKind {
    fn from(spec: InstanceSpec) -> Self {
        spec.kind
    }
}

impl InstanceSpec {
    pub fn new(kind: InstanceKind) -> Result<Self> {
        match kind {
            InstanceKind::Transport { supplies, demands } => Self::transport(supplies, demands),
            InstanceKind::Knapsack { weights, capacity } => Self::knapsack(weights, capacity),
            InstanceKind::Explicit { actions } => Self::explicit(actions),
        }
    }

    /// Balanced transport instance. Every supply and demand must be positive so
    /// that each edge can carry at least one unit.
    pub fn transport(supplies: Vec<u32>, demands: Vec<u32>) -> Result<Self> {
        if supplies.is_empty() || demands.is_empty() {
            return Err(Error::InvalidInstance(
                "transport needs at least one supplier and one demander".into(),
            ));
        }
        if supplies.iter().chain(&demands).any(|&m| m == 0) {
            return Err(Error::InvalidInstance(
                "transport marginals must be positive".into(),
            ));
        }
        let supply: u64 = supplies.iter().map(|&s| u64::from(s)).sum();
        let demand: u64 = demands.iter().map(|&s| u64::from(s)).sum();
        if supply != demand {
            return Err(Error::UnbalancedMarginals { supply, demand });
        }
        let mut arms = Vec::with_capacity(supplies.len() * demands.len());
        for &u in &supplies {
            for &v in &demands {
                arms.push(ArmSpec {
                    id: arms.len(),
                    cap: u.min(v),
                });
            }
        }
        Ok(Self {
            kind: InstanceKind::Transport { supplies, demands },
            arms,
        })
    }

    /// Unbounded knapsack instance; every item must fit at least once.
    pub fn knapsack(weights: Vec<u32>, capacity: u32) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidInstance("knapsack needs at least one item".into()));
        }
        if let Some(i) = weights.iter().position(|&w| w == 0 || w > capacity) {
            return Err(Error::InvalidInstance(format!(
                "item {i} has weight {} outside [1, {capacity}]",
                weights[i]
            )));
        }
        let arms = weights
            .iter()
            .enumerate()
            .map(|(id, &w)| ArmSpec {
                id,
                cap: capacity / w,
            })
            .collect();
        Ok(Self {
            kind: InstanceKind::Knapsack { weights, capacity },
            arms,
        })
    }

    /// Explicit action list. The list is stored sorted and deduplicated.
    pub fn explicit(actions: Vec<ActionVector>) -> Result<Self> {
        let d = match actions.first() {
            Some(a) if !a.is_empty() => a.len(),
            _ => {
                return Err(Error::InvalidInstance(
                    "explicit action set must be nonempty with d ≥ 1".into(),
                ))
            }
        };
        if let Some(a) = actions.iter().find(|a| a.len() != d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: a.len(),
            });
        }
        let actions: Vec<ActionVector> = actions
            .into_iter()
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let arms: Vec<ArmSpec> = (0..d)
            .map(|id| ArmSpec {
                id,
                cap: actions.iter().map(|a| a.0[id]).max().unwrap_or(0),
            })
            .collect();
        if let Some(arm) = arms.iter().find(|arm| arm.cap == 0) {
            return Err(Error::InvalidInstance(format!(
                "arm {} is never played by any action",
                arm.id
            )));
        }
        Ok(Self {
            kind: InstanceKind::Explicit { actions },
            arms,
        })
    }

    pub fn kind(&self) -> &InstanceKind {
        &self.kind
    }

    pub fn arms(&self) -> &[ArmSpec] {
        &self.arms
    }

    pub fn dim(&self) -> usize {
        self.arms.len()
    }

    pub fn caps(&self) -> Vec<u32> {
        self.arms.iter().map(|a| a.cap).collect()
    }

    /// Total number of loss slots per round, `Σ_i n_i`.
    pub fn total_slots(&self) -> usize {
        self.arms.iter().map(|a| a.cap as usize).sum()
    }
}

/// Checks membership `a ∈ A`.
pub fn validate_action(spec: &InstanceSpec, a: &ActionVector) -> Result<bool> {
    if a.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            actual: a.len(),
        });
    }
    if a.0.iter().zip(spec.arms()).any(|(&c, arm)| c > arm.cap) {
        return Ok(false);
    }
    let ok = match spec.kind() {
        InstanceKind::Transport { supplies, demands } => {
            let n = demands.len();
            let rows_ok = supplies.iter().enumerate().all(|(x, &u)| {
                a.0[x * n..(x + 1) * n].iter().map(|&c| u64::from(c)).sum::<u64>() == u64::from(u)
            });
            let cols_ok = demands.iter().enumerate().all(|(y, &v)| {
                (0..supplies.len())
                    .map(|x| u64::from(a.0[x * n + y]))
                    .sum::<u64>()
                    == u64::from(v)
            });
            rows_ok && cols_ok
        }
        InstanceKind::Knapsack { weights, capacity } => {
            let load: u64 = a
                .0
                .iter()
                .zip(weights)
                .map(|(&c, &w)| u64::from(c) * u64::from(w))
                .sum();
            load <= u64::from(*capacity)
        }
        InstanceKind::Explicit { actions } => actions.binary_search(a).is_ok(),
    };
    Ok(ok)
}

/// Arms with at least one play, `I_a`.
pub fn support(a: &ActionVector) -> BTreeSet<usize> {
    a.0.iter()
        .enumerate()
        .filter(|(_, &c)| c >= 1)
        .map(|(i, _)| i)
        .collect()
}

/// Losses `L_{i,j}(t)` for one round: row `i` has exactly `n_i` entries in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LossTable {
    rows: Vec<Vec<f64>>,
}

impl LossTable {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        for (arm, row) in rows.iter().enumerate() {
            if let Some(&value) = row.iter().find(|v| !(0.0..=1.0).contains(*v)) {
                return Err(Error::LossOutOfRange { arm, value });
            }
        }
        Ok(Self { rows })
    }

    /// Table for `spec` with every slot set to `value`.
    pub fn filled(spec: &InstanceSpec, value: f64) -> Result<Self> {
        Self::new(
            spec.arms()
                .iter()
                .map(|arm| vec![value; arm.cap as usize])
                .collect(),
        )
    }

    /// Checks that the row lengths match the instance caps.
    pub fn check_shape(&self, spec: &InstanceSpec) -> Result<()> {
        if self.rows.len() != spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: spec.dim(),
                actual: self.rows.len(),
            });
        }
        for (row, arm) in self.rows.iter().zip(spec.arms()) {
            if row.len() != arm.cap as usize {
                return Err(Error::DimensionMismatch {
                    expected: arm.cap as usize,
                    actual: row.len(),
                });
            }
        }
        Ok(())
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    pub fn row(&self, arm: usize) -> &[f64] {
        &self.rows[arm]
    }
}

/// The linear loss `Σ_i Σ_{j ≤ a_i} L_{i,j}`.
pub fn linear_loss(a: &ActionVector, losses: &LossTable) -> f64 {
    a.0.iter()
        .zip(losses.rows())
        .map(|(&c, row)| row[..c as usize].iter().sum::<f64>())
        .sum()
}

/// One observed loss. Slots are 0-based: slot `j` is the `(j+1)`-th play of the arm.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub arm: usize,
    pub slot: usize,
    pub loss: f64,
}

/// Semi-bandit feedback for one round.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub round: u64,
    pub samples: Vec<Sample>,
}

impl Observation {
    /// Per-arm sums of observed losses (zero for unplayed arms).
    pub fn arm_sums(&self, d: usize) -> Vec<f64> {
        let mut sums = vec![0.0; d];
        for s in &self.samples {
            sums[s.arm] += s.loss;
        }
        sums
    }

    /// Per-arm averages `k_i` of observed losses; `None` when the arm was not played.
    pub fn arm_means(&self, d: usize) -> Vec<Option<f64>> {
        let mut sums = vec![0.0; d];
        let mut counts = vec![0usize; d];
        for s in &self.samples {
            sums[s.arm] += s.loss;
            counts[s.arm] += 1;
        }
        sums.into_iter()
            .zip(counts)
            .map(|(s, c)| (c > 0).then(|| s / c as f64))
            .collect()
    }
}
