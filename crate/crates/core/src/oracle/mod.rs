//! Exact linear minimizers over the action set.
//!
//! All oracles are deterministic: when several actions attain the optimum the
//! lexicographically smallest [`ActionVector`] is returned.

mod enumerate;
mod knapsack;
mod transport;

pub use enumerate::enumerate_actions;
pub use knapsack::knapsack_oracle;
pub use transport::{ot_oracle, transport_vertex};
pub(crate) use transport::rounding_vertex;

use crate::error::{Error, Result};
use crate::model::{ActionVector, InstanceKind, InstanceSpec};

/// `argmin_{a ∈ A} Σ_i a_i ρ_i` with lexicographic tie-breaking.
pub fn argmin_action(spec: &InstanceSpec, rho: &[f64]) -> Result<ActionVector> {
    if rho.len() != spec.dim() {
        return Err(Error::DimensionMismatch {
            expected: spec.dim(),
            actual: rho.len(),
        });
    }
    match spec.kind() {
        InstanceKind::Transport { supplies, demands } => {
            ot_oracle(supplies, demands, rho).map(ActionVector)
        }
        InstanceKind::Knapsack { weights, capacity } => {
            let values: Vec<f64> = rho.iter().map(|r| -r).collect();
            knapsack_oracle(weights, *capacity, &values).map(ActionVector)
        }
        InstanceKind::Explicit { actions } => Ok(explicit_argmin(actions, rho).clone()),
    }
}

/// Some minimizer that is a vertex of `conv(A)`; cheaper than [`argmin_action`]
/// because it skips the tie-breaking pass.
pub(crate) fn vertex_minimizer(spec: &InstanceSpec, rho: &[f64]) -> Result<ActionVector> {
    match spec.kind() {
        InstanceKind::Transport { supplies, demands } => {
            transport_vertex(supplies, demands, rho).map(ActionVector)
        }
        _ => argmin_action(spec, rho),
    }
}

fn explicit_argmin<'a>(actions: &'a [ActionVector], rho: &[f64]) -> &'a ActionVector {
    // `actions` is sorted, so keeping the first strict minimum is the lexicographic rule.
    let mut best = &actions[0];
    let mut best_value = best.dot(rho);
    for a in &actions[1..] {
        let v = a.dot(rho);
        if v < best_value {
            best = a;
            best_value = v;
        }
    }
    best
}
