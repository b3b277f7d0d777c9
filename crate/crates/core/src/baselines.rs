//! Single-play baselines on a duplicated transport instance.
//!
//! Every truck becomes its own unit-supply supplier, so the expanded instance
//! has `(Σ_x u_x) · N_dem` arms, each played at most once. The wrapped learner
//! keeps separate statistics for every copy. Losses come from the original
//! round table: among the trucks of supplier `x` that pick demander `y`, the
//! one with the lowest index reads slot 0 of edge `(x, y)`, the next slot 1,
//! and so on. Actions are reported in original coordinates.

use crate::environment::Environment;
use crate::error::{Error, Result};
use crate::gencts::GenCts;
use crate::genlbinfv::{GenLbinfv, GenLbinfvConfig};
use crate::harness::{run_learner, LearnerRun};
use crate::learner::{Learner, RoundRecord};
use crate::model::{
    linear_loss, ActionVector, InstanceKind, InstanceSpec, LossTable, Observation, Sample,
};

#[derive(Debug, Clone, PartialEq)]
pub struct DuplicatedInstance {
    pub original: InstanceSpec,
    pub expanded: InstanceSpec,
    /// Original edge of each expanded arm.
    pub map: Vec<usize>,
}

impl DuplicatedInstance {
    pub fn expanded_dim(&self) -> usize {
        self.map.len()
    }

    /// Play counts in original coordinates.
    pub fn pull_back(&self, expanded: &ActionVector) -> ActionVector {
        let mut out = ActionVector::zeros(self.original.dim());
        for (e, &v) in expanded.0.iter().enumerate() {
            out.0[self.map[e]] += v;
        }
        out
    }

    /// One sample per played copy, taken from the original table by the
    /// truck-order slot rule.
    pub fn observe(&self, table: &LossTable, expanded: &ActionVector, round: u64) -> Observation {
        let mut next_slot = vec![0usize; self.original.dim()];
        let mut samples = Vec::new();
        // Expanded arms are ordered by truck, so iterating them in order
        // visits the trucks of each supplier in increasing index.
        for (e, &v) in expanded.0.iter().enumerate() {
            if v == 0 {
                continue;
            }
            let orig = self.map[e];
            let slot = next_slot[orig];
            next_slot[orig] += 1;
            samples.push(Sample {
                arm: e,
                slot: 0,
                loss: table.row(orig)[slot],
            });
        }
        Observation { round, samples }
    }
}

/// Splits every supplier of a transport instance into unit-supply trucks.
pub fn duplicate_instance(spec: &InstanceSpec) -> Result<DuplicatedInstance> {
    let InstanceKind::Transport { supplies, demands } = spec.kind() else {
        return Err(Error::Unsupported(
            "duplication is only defined for transport instances".into(),
        ));
    };
    let n = demands.len();
    let trucks: Vec<usize> = supplies
        .iter()
        .enumerate()
        .flat_map(|(x, &u)| std::iter::repeat_n(x, u as usize))
        .collect();
    let expanded = InstanceSpec::transport(vec![1; trucks.len()], demands.clone())?;
    let map = trucks
        .iter()
        .flat_map(|&x| (0..n).map(move |y| x * n + y))
        .collect();
    Ok(DuplicatedInstance {
        original: spec.clone(),
        expanded,
        map,
    })
}

#[derive(Debug, Clone)]
enum Inner {
    Cts(Box<GenCts>),
    Lbinfv(Box<GenLbinfv>),
}

/// A single-play learner on the expanded instance, driven by original tables.
#[derive(Debug, Clone)]
pub struct Duplicated {
    dup: DuplicatedInstance,
    inner: Inner,
    name: &'static str,
}

impl Duplicated {
    pub fn cts(dup: DuplicatedInstance, seed: u64) -> Self {
        let inner = Inner::Cts(Box::new(GenCts::new(dup.expanded.clone(), seed)));
        Self {
            dup,
            inner,
            name: "dup-cts",
        }
    }

    pub fn lbinfv(
        dup: DuplicatedInstance,
        horizon: u64,
        config: GenLbinfvConfig,
        seed: u64,
    ) -> Result<Self> {
        let inner = Inner::Lbinfv(Box::new(GenLbinfv::new(&dup.expanded, horizon, config, seed)?));
        Ok(Self {
            dup,
            inner,
            name: "dup-lbinfv",
        })
    }

    pub fn duplicated(&self) -> &DuplicatedInstance {
        &self.dup
    }

    /// The wrapped Thompson sampler, if any.
    pub fn as_cts(&self) -> Option<&GenCts> {
        match &self.inner {
            Inner::Cts(c) => Some(c),
            Inner::Lbinfv(_) => None,
        }
    }

    pub fn as_lbinfv(&self) -> Option<&GenLbinfv> {
        match &self.inner {
            Inner::Lbinfv(l) => Some(l),
            Inner::Cts(_) => None,
        }
    }
}

impl Learner for Duplicated {
    fn name(&self) -> &str {
        self.name
    }

    fn instance(&self) -> &InstanceSpec {
        &self.dup.original
    }

    fn play_round(&mut self, round: u64, table: &LossTable) -> Result<RoundRecord> {
        table.check_shape(&self.dup.original)?;
        let (expanded, detail) = match &mut self.inner {
            Inner::Cts(cts) => {
                let (a, theta) = cts.select_action()?;
                cts.update(&self.dup.observe(table, &a, round))?;
                (a, crate::learner::RoundDetail::Thompson { theta })
            }
            Inner::Lbinfv(alg) => {
                let proposal = alg.propose()?;
                let a = proposal.action.clone();
                let detail = proposal.detail();
                alg.absorb(proposal, &self.dup.observe(table, &a, round))?;
                (a, detail)
            }
        };
        let action = self.dup.pull_back(&expanded);
        Ok(RoundRecord {
            round,
            loss: linear_loss(&action, table),
            action,
            detail,
        })
    }
}

/// Runs duplicated CTS for `horizon` rounds against `env`.
pub fn run_duplicated_cts(
    dup: &DuplicatedInstance,
    env: &mut Environment,
    horizon: u64,
    seed: u64,
) -> Result<LearnerRun> {
    let mut learner = Duplicated::cts(dup.clone(), seed);
    run_learner(&mut learner, env, horizon, 0)
}

/// Runs duplicated LBINFV (GenLBINFV with every cap equal to 1).
pub fn run_duplicated_lbinfv(
    dup: &DuplicatedInstance,
    env: &mut Environment,
    horizon: u64,
    config: GenLbinfvConfig,
    seed: u64,
) -> Result<LearnerRun> {
    let mut learner = Duplicated::lbinfv(dup.clone(), horizon, config, seed)?;
    run_learner(&mut learner, env, horizon, 0)
}
