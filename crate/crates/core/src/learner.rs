use crate::error::Result;
use crate::model::{ActionVector, InstanceSpec, LossTable};

/// What a learner did in one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub round: u64,
    /// Action in the coordinates of the instance the harness regrets against.
    pub action: ActionVector,
    /// Realized linear loss of `action` on the round's table.
    pub loss: f64,
    pub detail: RoundDetail,
}

#[derive(Debug, Clone, PartialEq)]
pub enum RoundDetail {
    /// Posterior samples handed to the oracle.
    Thompson { theta: Vec<f64> },
    /// OFTRL point and solver diagnostics.
    Oftrl {
        x: Vec<f64>,
        iterations: usize,
        residual: f64,
        atoms: usize,
    },
}

/// A semi-bandit learner driven one round at a time by the harness.
///
/// The environment fixes the full loss table before the learner acts; the
/// learner chooses an action, observes the prefix slots it played and updates.
pub trait Learner: Send {
    fn name(&self) -> &str;

    /// Instance on which actions are reported.
    fn instance(&self) -> &InstanceSpec;

    fn play_round(&mut self, round: u64, table: &LossTable) -> Result<RoundRecord>;
}
