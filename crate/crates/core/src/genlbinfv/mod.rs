//! Optimistic FTRL with a hybrid regularizer and adaptive learning rates.
//!
//! Each round solves for `x(t) ∈ conv(A)`, decomposes it into a mixture of
//! actions, plays a sample `a(t)` with `E[a(t)] = x(t)` and feeds the importance-
//! weighted estimate `ℓ̂_i = q_i + (a_i/x_i)(k_i − q_i)` back into the
//! cumulative loss, where `k_i` is the mean of arm `i`'s observed losses.
//!
//! Supported instances are those whose hull is `{x : A x = b, 0 ≤ x ≤ n}`:
//! transport instances and suitable explicit lists (see [`Polytope`]).

mod decompose;
mod polytope;
mod predictor;
mod regularizer;
mod solver;

pub use decompose::{decompose, sample_action, Decomposition, RECONSTRUCTION_TOL};
pub use polytope::{Polytope, INTERIOR_FLOOR};
pub use predictor::{Predictor, PredictorKind};
pub use regularizer::{phi, phi_prime, phi_second, regularizer_value_grad, RegState};
pub use solver::{minimize, solve_oftrl, OftrlSolution, MAX_NEWTON_ITERATIONS, REDUCED_GRADIENT_TOL};

use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::environment::observe;
use crate::error::{Error, Result};
use crate::learner::{Learner, RoundDetail, RoundRecord};
use crate::model::{linear_loss, ActionVector, InstanceSpec, LossTable, Observation};
use crate::{stream_rng, STREAM_LEARNER};

/// `ℓ̂_i = q_i + (a_i / x_i)(k_i − q_i)`, with `k_i` ignored when `a_i = 0`.
pub fn estimate_loss(x: &[f64], a: &ActionVector, k: &[Option<f64>], q: &[f64]) -> Vec<f64> {
    (0..x.len())
        .map(|i| match k[i] {
            Some(k) if a.0[i] > 0 => q[i] + f64::from(a.0[i]) / x[i] * (k - q[i]),
            _ => q[i],
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GenLbinfvConfig {
    pub predictor: PredictorKind,
    /// `ε_i / n_i`, in `(0, ½]`.
    pub epsilon_fraction: f64,
}

impl Default for GenLbinfvConfig {
    fn default() -> Self {
        Self {
            predictor: PredictorKind::LeastSquares,
            epsilon_fraction: 0.5,
        }
    }
}

/// A sampled action together with the point and mixture it came from.
#[derive(Debug, Clone)]
pub struct Proposal {
    pub action: ActionVector,
    pub solution: OftrlSolution,
    pub decomposition: Decomposition,
}

impl Proposal {
    pub fn detail(&self) -> RoundDetail {
        RoundDetail::Oftrl {
            x: self.solution.x.clone(),
            iterations: self.solution.iterations,
            residual: self.solution.residual,
            atoms: self.decomposition.len(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenLbinfv {
    poly: Polytope,
    reg: RegState,
    predictor: Predictor,
    cumulative: Vec<f64>,
    last_x: Option<Vec<f64>>,
    last_estimate: Vec<f64>,
    last_decomposition: Option<Decomposition>,
    rng: ChaCha8Rng,
}

impl GenLbinfv {
    pub fn new(spec: &InstanceSpec, horizon: u64, config: GenLbinfvConfig, seed: u64) -> Result<Self> {
        Self::with_rng(spec, horizon, config, stream_rng(seed, STREAM_LEARNER))
    }

    pub fn with_rng(
        spec: &InstanceSpec,
        horizon: u64,
        config: GenLbinfvConfig,
        rng: ChaCha8Rng,
    ) -> Result<Self> {
        let poly = Polytope::new(spec)?;
        let d = spec.dim();
        Ok(Self {
            reg: RegState::new(&spec.caps(), config.epsilon_fraction, horizon)?,
            predictor: Predictor::new(config.predictor, d)?,
            cumulative: vec![0.0; d],
            last_x: None,
            last_estimate: vec![0.0; d],
            last_decomposition: None,
            poly,
            rng,
        })
    }

    pub fn polytope(&self) -> &Polytope {
        &self.poly
    }

    pub fn reg(&self) -> &RegState {
        &self.reg
    }

    pub fn predictor(&self) -> &Predictor {
        &self.predictor
    }

    /// `L̂(t) = Σ_{s<t} ℓ̂(s)`.
    pub fn cumulative(&self) -> &[f64] {
        &self.cumulative
    }

    pub fn last_estimate(&self) -> &[f64] {
        &self.last_estimate
    }

    pub fn last_decomposition(&self) -> Option<&Decomposition> {
        self.last_decomposition.as_ref()
    }

    /// Solves for `x(t)`, decomposes it and samples the round's action.
    pub fn propose(&mut self) -> Result<Proposal> {
        let solution = self.current_point()?;
        let decomposition = decompose(&self.poly, &solution.x)?;
        let action = sample_action(&decomposition, &mut self.rng);
        Ok(Proposal {
            action,
            solution,
            decomposition,
        })
    }

    /// Feeds the observation of a proposed action back into the state.
    pub fn absorb(&mut self, proposal: Proposal, obs: &Observation) -> Result<()> {
        let d = self.poly.dim();
        if let Some(s) = obs.samples.iter().find(|s| !(0.0..=1.0).contains(&s.loss)) {
            return Err(Error::LossOutOfRange {
                arm: s.arm,
                value: s.loss,
            });
        }
        if let Some(s) = obs.samples.iter().find(|s| s.arm >= d) {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: s.arm + 1,
            });
        }
        let Proposal {
            action,
            solution,
            decomposition,
        } = proposal;
        let k = obs.arm_means(d);
        let q = self.predictor.q().to_vec();
        let estimate = estimate_loss(&solution.x, &action, &k, &q);
        for (c, e) in self.cumulative.iter_mut().zip(&estimate) {
            *c += e;
        }
        self.reg.update(&action.0, &solution.x, &k, &q);
        self.predictor.update(&action, obs);
        self.last_estimate = estimate;
        self.last_decomposition = Some(decomposition);
        self.last_x = Some(solution.x);
        Ok(())
    }

    /// The point `x(t)` the next round would play around.
    pub fn current_point(&self) -> Result<OftrlSolution> {
        solve_oftrl(
            &self.poly,
            &self.cumulative,
            self.predictor.q(),
            &self.reg,
            self.last_x.as_deref(),
        )
    }
}

impl Learner for GenLbinfv {
    fn name(&self) -> &str {
        "genlbinfv"
    }

    fn instance(&self) -> &InstanceSpec {
        self.poly.spec()
    }

    fn play_round(&mut self, round: u64, table: &LossTable) -> Result<RoundRecord> {
        table.check_shape(self.poly.spec())?;
        let proposal = self.propose()?;
        let obs = observe(table, &proposal.action, round);
        let record = RoundRecord {
            round,
            loss: linear_loss(&proposal.action, table),
            action: proposal.action.clone(),
            detail: proposal.detail(),
        };
        self.absorb(proposal, &obs)?;
        Ok(record)
    }
}
