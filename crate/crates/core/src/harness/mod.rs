//! Seeded multi-trial experiments.
//!
//! Trial `k` uses seed `base + k`. Its costs, losses and learner randomness
//! come from separate streams of that seed, so every algorithm run with the
//! same configuration faces the same loss tables. Regret is measured against
//! the fixed comparator `a* = argmin aᵀμ̄`, where `μ̄` is the per-arm mean loss
//! averaged over the horizon (the stationary mean when nothing is corrupted).

mod config;
mod emit;
mod regret;

pub use config::{
    AlgorithmConfig, AlgorithmKind, CorruptionConfig, EnvironmentConfig, ExperimentConfig,
    PredictorName,
};
pub use emit::{emit, read_curve_csv, write_curve_csv, REALIZED_FILE, REGRET_FILE, SUMMARY_FILE};
pub use regret::{
    arm_gaps, compute_optimal_action, diagnostics, pseudo_regret_increment, Diagnostics,
    RegretCurve, DIAGNOSTIC_ENUMERATION_LIMIT,
};

use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use crate::baselines::{duplicate_instance, Duplicated};
use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::gencts::GenCts;
use crate::genlbinfv::GenLbinfv;
use crate::learner::Learner;
use crate::model::{linear_loss, ActionVector};

/// Cumulative regret traces of one learner over one environment.
#[derive(Debug, Clone, PartialEq)]
pub struct LearnerRun {
    pub a_star: ActionVector,
    /// Cumulative pseudo-regret `Σ_s (a(s) − a*)ᵀ μ(s)`.
    pub pseudo: Vec<f64>,
    /// Cumulative realized regret `Σ_s (a(s) − a*)ᵀ L(s)` on the played tables.
    pub realized: Vec<f64>,
}

/// Plays `horizon` rounds. Failures are reported as [`Error::Trial`] with
/// the given trial index and the failing round.
pub fn run_learner(
    learner: &mut dyn Learner,
    env: &mut Environment,
    horizon: u64,
    trial: usize,
) -> Result<LearnerRun> {
    let a_star = compute_optimal_action(env.spec(), &env.horizon_means(horizon))
        .map_err(|e| trial_error(trial, 0, e))?;
    let mut pseudo = Vec::with_capacity(horizon as usize);
    let mut realized = Vec::with_capacity(horizon as usize);
    let (mut p, mut r) = (0.0, 0.0);
    let mut means = env.round_means(1);
    for t in 1..=horizon {
        if !env.schedule().is_identity() {
            means = env.round_means(t);
        }
        let (_, table) = env.draw_round(t);
        let rec = learner
            .play_round(t, &table)
            .map_err(|e| trial_error(trial, t, e))?;
        p += pseudo_regret_increment(&means, &rec.action, &a_star);
        r += rec.loss - linear_loss(&a_star, &table);
        pseudo.push(p);
        realized.push(r);
    }
    Ok(LearnerRun {
        a_star,
        pseudo,
        realized,
    })
}

fn trial_error(trial: usize, round: u64, source: Error) -> Error {
    Error::Trial {
        trial,
        round,
        source: Box::new(source),
    }
}

/// Builds the configured learner for one trial.
pub fn build_learner(cfg: &ExperimentConfig, trial_seed: u64) -> Result<Box<dyn Learner>> {
    let spec = &cfg.instance;
    Ok(match cfg.algorithm.kind {
        AlgorithmKind::Gencts => Box::new(GenCts::new(spec.clone(), trial_seed)),
        AlgorithmKind::Genlbinfv => Box::new(GenLbinfv::new(
            spec,
            cfg.horizon,
            cfg.algorithm.lbinfv(),
            trial_seed,
        )?),
        AlgorithmKind::DupCts => Box::new(Duplicated::cts(duplicate_instance(spec)?, trial_seed)),
        AlgorithmKind::DupLbinfv => Box::new(Duplicated::lbinfv(
            duplicate_instance(spec)?,
            cfg.horizon,
            cfg.algorithm.lbinfv(),
            trial_seed,
        )?),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub costs: Option<Vec<f64>>,
    #[serde(flatten)]
    pub diagnostics: Diagnostics,
    pub final_pseudo_regret: f64,
    pub final_realized_regret: f64,
    pub corruption_level: f64,
    pub runtime_secs: f64,
}

#[derive(Debug, Clone)]
pub struct TrialOutcome {
    pub summary: TrialSummary,
    pub run: LearnerRun,
}

pub fn run_trial(cfg: &ExperimentConfig, trial: usize) -> Result<TrialOutcome> {
    let start = Instant::now();
    let seed = cfg.trial_seed(trial);
    let mut env = cfg
        .build_environment(seed)
        .map_err(|e| trial_error(trial, 0, e))?;
    let mut learner = build_learner(cfg, seed).map_err(|e| trial_error(trial, 0, e))?;
    let run = run_learner(learner.as_mut(), &mut env, cfg.horizon, trial)?;
    let summary = TrialSummary {
        trial,
        seed,
        costs: cfg.trial_costs(seed),
        diagnostics: diagnostics(&env, &run.a_star),
        final_pseudo_regret: run.pseudo.last().copied().unwrap_or(0.0),
        final_realized_regret: run.realized.last().copied().unwrap_or(0.0),
        corruption_level: env.corruption_level(),
        runtime_secs: start.elapsed().as_secs_f64(),
    };
    Ok(TrialOutcome { summary, run })
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub config: ExperimentConfig,
    pub trials: Vec<TrialSummary>,
    pub pseudo: RegretCurve,
    pub realized: RegretCurve,
    pub runtime_secs: f64,
}

#[derive(Serialize)]
pub struct Summary<'a> {
    pub algorithm: &'static str,
    pub config: &'a ExperimentConfig,
    pub final_mean_pseudo_regret: f64,
    pub final_mean_realized_regret: f64,
    pub runtime_secs: f64,
    pub trials: &'a [TrialSummary],
}

impl ExperimentResult {
    pub fn summary(&self) -> Summary<'_> {
        Summary {
            algorithm: self.config.algorithm.kind.name(),
            config: &self.config,
            final_mean_pseudo_regret: self.pseudo.mean.last().copied().unwrap_or(0.0),
            final_mean_realized_regret: self.realized.mean.last().copied().unwrap_or(0.0),
            runtime_secs: self.runtime_secs,
            trials: &self.trials,
        }
    }
}

/// Runs all trials on the rayon pool and aggregates them in trial order.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResult> {
    cfg.validate()?;
    let start = Instant::now();
    let outcomes: Vec<Result<TrialOutcome>> = (0..cfg.trials)
        .into_par_iter()
        .map(|k| run_trial(cfg, k))
        .collect();
    let mut trials = Vec::with_capacity(cfg.trials);
    let mut pseudo = Vec::with_capacity(cfg.trials);
    let mut realized = Vec::with_capacity(cfg.trials);
    for outcome in outcomes {
        let TrialOutcome { summary, run } = outcome?;
        trials.push(summary);
        pseudo.push(run.pseudo);
        realized.push(run.realized);
    }
    Ok(ExperimentResult {
        config: cfg.clone(),
        trials,
        pseudo: RegretCurve::from_trials(pseudo)?,
        realized: RegretCurve::from_trials(realized)?,
        runtime_secs: start.elapsed().as_secs_f64(),
    })
}
