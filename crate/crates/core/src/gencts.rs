//! Generalized combinatorial Thompson sampling.
//!
//! Each arm keeps a `Beta(p_i, q_i)` posterior, starting from `Beta(1, 1)`.
//! A round samples `θ_i ~ Beta(p_i, q_i)` independently, plays
//! `argmin_{a ∈ A} aᵀθ` via the exact oracle, and then feeds every observed
//! loss through a Bernoulli coin `Y ~ Bernoulli(L)`: `p_i += Y`, `q_i += 1 − Y`.
//! Actions are never enumerated.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Gamma};

use crate::environment::{observe, Environment};
use crate::error::{Error, Result};
use crate::learner::{Learner, RoundDetail, RoundRecord};
use crate::model::{linear_loss, ActionVector, InstanceSpec, LossTable, Observation};
use crate::oracle::argmin_action;
use crate::{stream_rng, STREAM_LEARNER};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BetaPosterior {
    pub p: f64,
    pub q: f64,
}

impl Default for BetaPosterior {
    fn default() -> Self {
        Self { p: 1.0, q: 1.0 }
    }
}

impl BetaPosterior {
    /// Number of binarized observations absorbed so far, `N_i = p + q − 2`.
    pub fn observations(&self) -> f64 {
        self.p + self.q - 2.0
    }

    /// Empirical mean of the binarized observations; `None` before any data.
    pub fn empirical_mean(&self) -> Option<f64> {
        let n = self.observations();
        (n > 0.0).then(|| (self.p - 1.0) / n)
    }

    /// Draws from `Beta(p, q)` as `X / (X + Y)` with `X ~ Γ(p)`, `Y ~ Γ(q)`.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let x = Gamma::new(self.p, 1.0).expect("p ≥ 1").sample(rng);
        let y = Gamma::new(self.q, 1.0).expect("q ≥ 1").sample(rng);
        x / (x + y)
    }

    fn record(&mut self, success: bool) {
        if success {
            self.p += 1.0;
        } else {
            self.q += 1.0;
        }
    }
}

#[derive(Debug, Clone)]
pub struct GenCts {
    spec: InstanceSpec,
    posteriors: Vec<BetaPosterior>,
    rng: ChaCha8Rng,
}

impl GenCts {
    pub fn new(spec: InstanceSpec, seed: u64) -> Self {
        Self::with_rng(spec, stream_rng(seed, STREAM_LEARNER))
    }

    pub fn with_rng(spec: InstanceSpec, rng: ChaCha8Rng) -> Self {
        let posteriors = vec![BetaPosterior::default(); spec.dim()];
        Self {
            spec,
            posteriors,
            rng,
        }
    }

    pub fn posteriors(&self) -> &[BetaPosterior] {
        &self.posteriors
    }

    /// Overrides the posteriors (for tests and warm starts).
    pub fn set_posteriors(&mut self, posteriors: Vec<BetaPosterior>) -> Result<()> {
        if posteriors.len() != self.spec.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.spec.dim(),
                actual: posteriors.len(),
            });
        }
        self.posteriors = posteriors;
        Ok(())
    }

    /// Samples `θ` and returns `Oracle(θ)` along with the `θ` used.
    pub fn select_action(&mut self) -> Result<(ActionVector, Vec<f64>)> {
        let theta: Vec<f64> = self
            .posteriors
            .iter()
            .map(|post| post.sample(&mut self.rng))
            .collect();
        let action = argmin_action(&self.spec, &theta)?;
        Ok((action, theta))
    }

    /// Binarizes each observed loss and updates the arm's posterior.
    pub fn update(&mut self, obs: &Observation) -> Result<()> {
        if let Some(s) = obs
            .samples
            .iter()
            .find(|s| !(0.0..=1.0).contains(&s.loss))
        {
            return Err(Error::LossOutOfRange {
                arm: s.arm,
                value: s.loss,
            });
        }
        if let Some(s) = obs.samples.iter().find(|s| s.arm >= self.spec.dim()) {
            return Err(Error::DimensionMismatch {
                expected: self.spec.dim(),
                actual: s.arm + 1,
            });
        }
        for s in &obs.samples {
            let y = self.rng.random::<f64>() < s.loss;
            self.posteriors[s.arm].record(y);
        }
        Ok(())
    }

    /// Draws the round's losses from `env` and plays one round against the
    /// (possibly corrupted) table.
    pub fn run_round(&mut self, env: &mut Environment, t: u64) -> Result<RoundRecord> {
        let (_, table) = env.draw_round(t);
        self.play_round(t, &table)
    }
}

impl Learner for GenCts {
    fn name(&self) -> &str {
        "gencts"
    }

    fn instance(&self) -> &InstanceSpec {
        &self.spec
    }

    fn play_round(&mut self, round: u64, table: &LossTable) -> Result<RoundRecord> {
        let (action, theta) = self.select_action()?;
        let obs = observe(table, &action, round);
        self.update(&obs)?;
        Ok(RoundRecord {
            round,
            loss: linear_loss(&action, table),
            action,
            detail: RoundDetail::Thompson { theta },
        })
    }
}
