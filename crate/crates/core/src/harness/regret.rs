use serde::Serialize;

use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::model::{ActionVector, InstanceSpec};
use crate::oracle::{argmin_action, enumerate_actions};

/// Largest action set enumerated for gap diagnostics.
pub const DIAGNOSTIC_ENUMERATION_LIMIT: usize = 100_000;

/// `argmin_{a ∈ A} aᵀμ` with the oracle's lexicographic tie-breaking.
pub fn compute_optimal_action(spec: &InstanceSpec, means: &[f64]) -> Result<ActionVector> {
    argmin_action(spec, means)
}

/// `(a − a*)ᵀ μ`.
pub fn pseudo_regret_increment(means: &[f64], a: &ActionVector, a_star: &ActionVector) -> f64 {
    a.dot(means) - a_star.dot(means)
}

/// Cumulative regret per trial and its mean over trials.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegretCurve {
    pub trials: Vec<Vec<f64>>,
    pub mean: Vec<f64>,
}

impl RegretCurve {
    /// Averages the trial curves in trial order.
    pub fn from_trials(trials: Vec<Vec<f64>>) -> Result<Self> {
        let len = trials.first().map_or(0, Vec::len);
        if let Some(bad) = trials.iter().find(|c| c.len() != len) {
            return Err(Error::DimensionMismatch {
                expected: len,
                actual: bad.len(),
            });
        }
        let k = trials.len() as f64;
        let mean = (0..len)
            .map(|t| trials.iter().map(|c| c[t]).sum::<f64>() / k)
            .collect();
        Ok(Self { trials, mean })
    }

    pub fn horizon(&self) -> usize {
        self.mean.len()
    }

    pub fn final_values(&self) -> Vec<f64> {
        self.trials.iter().map(|c| c.last().copied().unwrap_or(0.0)).collect()
    }
}

/// Per-trial stationary diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Diagnostics {
    pub a_star: ActionVector,
    /// `Δ_i = min_{a: a_i ≥ 1} aᵀℓ − a*ᵀℓ`; `None` when unavailable (no
    /// stationary mean, or the action set is too large to enumerate).
    pub gaps: Option<Vec<Option<f64>>>,
    pub variances: Vec<f64>,
}

pub fn diagnostics(env: &Environment, a_star: &ActionVector) -> Diagnostics {
    let variances = env.clean_variances();
    let gaps = env.schedule().is_identity().then(|| arm_gaps(env.spec(), &env.clean_means(), a_star)).flatten();
    Diagnostics {
        a_star: a_star.clone(),
        gaps,
        variances,
    }
}

/// Gaps by enumeration; `None` if the action set exceeds the enumeration limit.
pub fn arm_gaps(spec: &InstanceSpec, means: &[f64], a_star: &ActionVector) -> Option<Vec<Option<f64>>> {
    let actions = enumerate_actions(spec, DIAGNOSTIC_ENUMERATION_LIMIT).ok()?;
    let best = a_star.dot(means);
    let gaps = (0..spec.dim())
        .map(|i| {
            actions
                .iter()
                .filter(|a| a.0[i] >= 1)
                .map(|a| (a.dot(means) - best).max(0.0))
                .min_by(f64::total_cmp)
        })
        .collect();
    Some(gaps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn increment_examples() {
        let a_star = ActionVector(vec![1, 0]);
        assert_eq!(pseudo_regret_increment(&[0.2, 0.3], &a_star, &a_star), 0.0);
        let a = ActionVector(vec![0, 1]);
        assert!((pseudo_regret_increment(&[0.2, 0.3], &a, &a_star) - 0.1).abs() < 1e-15);
    }

    #[test]
    fn mean_is_trial_average() {
        let c = RegretCurve::from_trials(vec![vec![1.0, 2.0], vec![3.0, 5.0]]).unwrap();
        assert_eq!(c.mean, vec![2.0, 3.5]);
        assert!(RegretCurve::from_trials(vec![vec![1.0], vec![]]).is_err());
    }

    #[test]
    fn gaps_on_two_by_two() {
        let spec = InstanceSpec::transport(vec![1, 1], vec![1, 1]).unwrap();
        let means = [0.1, 0.5, 0.5, 0.1];
        let a_star = compute_optimal_action(&spec, &means).unwrap();
        assert_eq!(a_star.0, vec![1, 0, 0, 1]);
        let gaps = arm_gaps(&spec, &means, &a_star).unwrap();
        assert_eq!(gaps[0], Some(0.0));
        assert!((gaps[1].unwrap() - 0.8).abs() < 1e-12);
    }
}
