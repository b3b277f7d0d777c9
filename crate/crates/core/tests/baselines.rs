mod common;

use common::experiment_instance;
use mpcsb::baselines::{duplicate_instance, run_duplicated_cts, run_duplicated_lbinfv, Duplicated};
use mpcsb::environment::{ArmDistribution, Environment};
use mpcsb::gencts::GenCts;
use mpcsb::genlbinfv::{GenLbinfv, GenLbinfvConfig};
use mpcsb::harness::run_learner;
use mpcsb::oracle::argmin_action;
use mpcsb::{linear_loss, stream_rng, validate_action, InstanceSpec, Learner};
use proptest::prelude::*;
use rand::Rng;

fn uniform_env(spec: &InstanceSpec, seed: u64) -> Environment {
    let mut rng = stream_rng(seed, 2);
    let arms = (0..spec.dim())
        .map(|_| ArmDistribution::Uniform { lo: 0.0, hi: 2.0 * rng.random_range(0.1..0.5) })
        .collect();
    Environment::stochastic(spec.clone(), arms, seed).unwrap()
}

#[test]
fn expanded_dimensions() {
    let spec = InstanceSpec::transport(vec![1, 3, 4], vec![2, 2, 2, 2]).unwrap();
    assert_eq!(duplicate_instance(&spec).unwrap().expanded_dim(), 32);
    let spec = InstanceSpec::transport(vec![1], vec![1]).unwrap();
    let dup = duplicate_instance(&spec).unwrap();
    assert_eq!(dup.expanded_dim(), 1);
    assert_eq!(dup.map, vec![0]);
    assert_eq!(duplicate_instance(&experiment_instance()).unwrap().expanded_dim(), 20);
}

#[test]
fn non_transport_rejected() {
    let spec = InstanceSpec::knapsack(vec![2, 3], 5).unwrap();
    assert!(duplicate_instance(&spec).is_err());
}

#[test]
fn unit_instance_matches_gencts() {
    let spec = InstanceSpec::transport(vec![1], vec![1]).unwrap();
    let dup = duplicate_instance(&spec).unwrap();
    let mut a = uniform_env(&spec, 4);
    let mut b = uniform_env(&spec, 4);
    let ours = run_duplicated_cts(&dup, &mut a, 200, 4).unwrap();
    let theirs = run_learner(&mut GenCts::new(spec.clone(), 4), &mut b, 200, 0).unwrap();
    assert_eq!(ours, theirs);

    let mut a = uniform_env(&spec, 5);
    let mut b = uniform_env(&spec, 5);
    let cfg = GenLbinfvConfig::default();
    let ours = run_duplicated_lbinfv(&dup, &mut a, 50, cfg, 5).unwrap();
    let mut plain = GenLbinfv::new(&spec, 50, cfg, 5).unwrap();
    let theirs = run_learner(&mut plain, &mut b, 50, 0).unwrap();
    assert_eq!(ours, theirs);
}

#[test]
fn copies_keep_separate_statistics() {
    let spec = experiment_instance();
    let dup = duplicate_instance(&spec).unwrap();
    let mut env = uniform_env(&spec, 6);
    let mut learner = Duplicated::cts(dup.clone(), 6);
    let mut plays = vec![0u64; spec.dim()];
    for t in 1..=300 {
        let (table, _) = env.draw_round(t);
        let rec = learner.play_round(t, &table).unwrap();
        assert!(validate_action(&spec, &rec.action).unwrap());
        for (p, &a) in plays.iter_mut().zip(&rec.action.0) {
            *p += u64::from(a);
        }
    }
    let posts = learner.as_cts().unwrap().posteriors();
    assert_eq!(posts.len(), 20);
    let mut per_edge = vec![0.0; spec.dim()];
    for (e, post) in posts.iter().enumerate() {
        // Each copy has cap 1, so it never absorbs more than one sample per round.
        assert!(post.observations() <= 300.0);
        per_edge[dup.map[e]] += post.observations();
    }
    for (got, want) in per_edge.iter().zip(&plays) {
        assert_eq!(*got, *want as f64);
    }
    // Copies of one edge learn from different samples and disagree.
    let edge = (0..spec.dim()).max_by_key(|&i| plays[i]).unwrap();
    let counts: Vec<f64> = (0..20)
        .filter(|&e| dup.map[e] == edge)
        .map(|e| posts[e].observations())
        .collect();
    assert!(counts.windows(2).any(|w| w[0] != w[1]), "{counts:?}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pull_back_preserves_validity_and_loss(seed in any::<u64>()) {
        let spec = experiment_instance();
        let dup = duplicate_instance(&spec).unwrap();
        let mut rng = stream_rng(seed, 0);
        let rho: Vec<f64> = (0..dup.expanded_dim()).map(|_| rng.random::<f64>()).collect();
        let expanded = argmin_action(&dup.expanded, &rho).unwrap();
        let original = dup.pull_back(&expanded);
        prop_assert!(validate_action(&spec, &original).unwrap());
        let mut env = uniform_env(&spec, seed);
        let (table, _) = env.draw_round(1);
        let obs = dup.observe(&table, &expanded, 1);
        prop_assert_eq!(obs.samples.len() as u64, expanded.total());
        let seen: f64 = obs.samples.iter().map(|s| s.loss).sum();
        prop_assert!((seen - linear_loss(&original, &table)).abs() < 1e-12);
    }
}
