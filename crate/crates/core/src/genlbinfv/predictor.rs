use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{ActionVector, Observation};

/// How the optimistic prediction `q(t)` is formed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PredictorKind {
    /// `q_i = (½ + Σ_s a_i(s) k_i(s)) / (1 + Σ_s a_i(s))`.
    LeastSquares,
    /// `q_i ← (1 − η) q_i + η k_i` on played arms, `η ∈ (0, ½)`.
    GradientDescent { eta: f64 },
}

impl PredictorKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            Self::LeastSquares => Ok(()),
            Self::GradientDescent { eta } if eta > 0.0 && eta < 0.5 => Ok(()),
            Self::GradientDescent { eta } => {
                Err(Error::Config(format!("step size {eta} outside (0, 0.5)")))
            }
        }
    }
}

/// Optimistic prediction of next round's per-arm mean loss.
#[derive(Debug, Clone)]
pub struct Predictor {
    kind: PredictorKind,
    q: Vec<f64>,
    loss_sum: Vec<f64>,
    plays: Vec<f64>,
}

impl Predictor {
    pub fn new(kind: PredictorKind, d: usize) -> Result<Self> {
        kind.validate()?;
        Ok(Self {
            kind,
            q: vec![0.5; d],
            loss_sum: vec![0.0; d],
            plays: vec![0.0; d],
        })
    }

    pub fn kind(&self) -> PredictorKind {
        self.kind
    }

    pub fn q(&self) -> &[f64] {
        &self.q
    }

    pub fn update(&mut self, a: &ActionVector, obs: &Observation) {
        let d = self.q.len();
        match self.kind {
            PredictorKind::LeastSquares => {
                // Σ_j L_{i,j} = a_i k_i, so the sums can be kept directly.
                for (i, sum) in obs.arm_sums(d).into_iter().enumerate() {
                    self.loss_sum[i] += sum;
                    self.plays[i] += f64::from(a.0[i]);
                    self.q[i] = (0.5 + self.loss_sum[i]) / (1.0 + self.plays[i]);
                }
            }
            PredictorKind::GradientDescent { eta } => {
                for (i, k) in obs.arm_means(d).into_iter().enumerate() {
                    if let Some(k) = k {
                        self.q[i] = (1.0 - eta) * self.q[i] + eta * k;
                    }
                }
            }
        }
    }
}
