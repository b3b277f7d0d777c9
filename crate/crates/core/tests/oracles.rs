mod common;

use common::{av, brute_argmin, dyadic, experiment_instance, knapsack_packings, transport_plans};
use mpcsb::oracle::{argmin_action, enumerate_actions, knapsack_oracle, ot_oracle};
use mpcsb::{stream_rng, validate_action, Error, InstanceSpec};
use proptest::prelude::*;
use rand::Rng;

#[test]
fn single_cell_plan() {
    assert_eq!(ot_oracle(&[1], &[1], &[0.7]).unwrap(), vec![1]);
}

#[test]
fn two_by_two_plan() {
    let cost = [0.1, 0.2, 0.3, 0.1];
    let plan = ot_oracle(&[1, 1], &[1, 1], &cost).unwrap();
    assert_eq!(plan, vec![1, 0, 0, 1]);
    let (best, value) = brute_argmin(&transport_plans(&[1, 1], &[1, 1]), &cost);
    assert_eq!(plan, best);
    assert!((value - 0.2).abs() < 1e-15);
}

#[test]
fn unbalanced_marginals_rejected() {
    assert!(ot_oracle(&[2, 1], &[1, 1], &[0.0; 4]).is_err());
    assert!(InstanceSpec::transport(vec![2, 1], vec![1, 1]).is_err());
}

#[test]
fn knapsack_examples() {
    assert_eq!(knapsack_oracle(&[2, 3], 0, &[3.0, 4.0]).unwrap(), vec![0, 0]);
    assert_eq!(knapsack_oracle(&[2, 3], 5, &[3.0, 4.0]).unwrap(), vec![1, 1]);
    assert_eq!(knapsack_oracle(&[2, 3], 5, &[-1.0, -0.5]).unwrap(), vec![0, 0]);
    let (best, value) = brute_argmin(&knapsack_packings(&[2, 3], 5), &[-3.0, -4.0]);
    assert_eq!(best, vec![1, 1]);
    assert_eq!(value, -7.0);
}

#[test]
fn explicit_argmin_and_tie_break() {
    let spec = InstanceSpec::explicit(vec![av(&[1, 0]), av(&[0, 1])]).unwrap();
    assert_eq!(argmin_action(&spec, &[0.2, 0.7]).unwrap(), av(&[1, 0]));
    assert_eq!(argmin_action(&spec, &[0.5, 0.5]).unwrap(), av(&[0, 1]));
}

#[test]
fn wrong_cost_length_rejected() {
    let spec = experiment_instance();
    assert!(matches!(
        argmin_action(&spec, &[0.0; 5]),
        Err(Error::DimensionMismatch { .. })
    ));
}

#[test]
fn enumeration_examples() {
    let spec = InstanceSpec::transport(vec![1, 1], vec![1, 1]).unwrap();
    assert_eq!(enumerate_actions(&spec, 10).unwrap().len(), 2);

    let spec = InstanceSpec::knapsack(vec![2, 3], 5).unwrap();
    let mut got: Vec<Vec<u32>> = enumerate_actions(&spec, 10).unwrap().into_iter().map(|a| a.0).collect();
    got.sort();
    let mut want = vec![vec![0, 0], vec![1, 0], vec![2, 0], vec![0, 1], vec![1, 1]];
    want.sort();
    assert_eq!(got, want);
}

#[test]
fn experiment_instance_count_matches_independent_enumerator() {
    let spec = experiment_instance();
    let ours = enumerate_actions(&spec, 1_000).unwrap();
    let mut theirs = transport_plans(&[1, 4, 5], &[4, 6]);
    theirs.sort();
    let ours: Vec<Vec<u32>> = ours.into_iter().map(|a| a.0).collect();
    assert_eq!(ours, theirs);
    for a in &ours {
        assert!(validate_action(&spec, &av(a)).unwrap());
    }
}

#[test]
fn enumeration_limit_is_an_error() {
    let spec = experiment_instance();
    assert!(matches!(
        enumerate_actions(&spec, 3),
        Err(Error::EnumerationLimit { .. })
    ));
}

#[test]
fn experiment_instance_oracle_matches_enumeration() {
    let spec = experiment_instance();
    let plans = transport_plans(&[1, 4, 5], &[4, 6]);
    let mut rng = stream_rng(11, 0);
    for _ in 0..200 {
        let rho: Vec<f64> = (0..6).map(|_| rng.random_range(0.1..0.5)).collect();
        let a = argmin_action(&spec, &rho).unwrap();
        let (_, best) = brute_argmin(&plans, &rho);
        assert!((a.dot(&rho) - best).abs() <= 1e-12);
    }
}

fn transport_instance() -> impl Strategy<Value = (Vec<u32>, Vec<u32>)> {
    (1usize..=3, 1usize..=3, 2u32..=8).prop_flat_map(|(m, n, total)| {
        let total = total.max(m.max(n) as u32);
        (split(total, m), split(total, n))
    })
}

/// Positive integer vectors of length `parts` summing to `total`.
fn split(total: u32, parts: usize) -> impl Strategy<Value = Vec<u32>> {
    proptest::collection::vec(0u32..=total, parts - 1).prop_map(move |mut cuts| {
        // Turn arbitrary cut points into a composition, then shift so parts are ≥ 1.
        let spare = total - parts as u32;
        for c in cuts.iter_mut() {
            *c = (*c).min(spare);
        }
        cuts.sort_unstable();
        let mut out = Vec::with_capacity(parts);
        let mut prev = 0;
        for c in cuts {
            out.push(c - prev + 1);
            prev = c;
        }
        out.push(spare - prev + 1);
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn transport_oracle_is_exact((u, v) in transport_instance(), seed in any::<u64>()) {
        let spec = InstanceSpec::transport(u.clone(), v.clone()).unwrap();
        let plans = transport_plans(&u, &v);
        let mut rng = stream_rng(seed, 0);
        let rho = dyadic(&mut rng, spec.dim());
        let a = argmin_action(&spec, &rho).unwrap();
        let (best, value) = brute_argmin(&plans, &rho);
        prop_assert!(validate_action(&spec, &a).unwrap());
        prop_assert_eq!(a.dot(&rho), value);
        prop_assert_eq!(&a.0, &best);
        // Power-of-two scaling keeps every sum exact, so the tie-break is unchanged.
        let scaled: Vec<f64> = rho.iter().map(|r| r * 4.0).collect();
        prop_assert_eq!(argmin_action(&spec, &scaled).unwrap(), a);
    }

    #[test]
    fn transport_oracle_on_real_costs((u, v) in transport_instance(), seed in any::<u64>()) {
        let spec = InstanceSpec::transport(u.clone(), v.clone()).unwrap();
        let plans = transport_plans(&u, &v);
        let mut rng = stream_rng(seed, 0);
        let rho: Vec<f64> = (0..spec.dim()).map(|_| rng.random::<f64>()).collect();
        let a = argmin_action(&spec, &rho).unwrap();
        let (_, value) = brute_argmin(&plans, &rho);
        prop_assert!((a.dot(&rho) - value).abs() <= 1e-12);
        let scaled: Vec<f64> = rho.iter().map(|r| r * 3.7).collect();
        let b = argmin_action(&spec, &scaled).unwrap();
        prop_assert!((b.dot(&rho) - value).abs() <= 1e-12);
    }

    #[test]
    fn knapsack_oracle_is_exact(
        w in proptest::collection::vec(1u32..=6, 1..=4),
        cap in 0u32..=12,
        signed in any::<bool>(),
        seed in any::<u64>(),
    ) {
        // Every item must fit at least once.
        let cap = cap.max(*w.iter().max().unwrap());
        let spec = InstanceSpec::knapsack(w.clone(), cap).unwrap();
        let packings = knapsack_packings(&w, cap);
        let mut rng = stream_rng(seed, 0);
        let mut rho = dyadic(&mut rng, w.len());
        if signed {
            for r in rho.iter_mut() {
                *r -= 0.5;
            }
        }
        let a = argmin_action(&spec, &rho).unwrap();
        let (best, value) = brute_argmin(&packings, &rho);
        prop_assert!(validate_action(&spec, &a).unwrap());
        prop_assert_eq!(a.dot(&rho), value);
        prop_assert_eq!(&a.0, &best);
    }

    #[test]
    fn caps_equal_coordinate_maxima((u, v) in transport_instance()) {
        let spec = InstanceSpec::transport(u, v).unwrap();
        let actions = enumerate_actions(&spec, 1_000_000).unwrap();
        for (i, arm) in spec.arms().iter().enumerate() {
            let max = actions.iter().map(|a| a.0[i]).max().unwrap();
            prop_assert_eq!(max, arm.cap);
        }
        for a in &actions {
            prop_assert_eq!(a.total(), actions[0].total());
        }
    }
}

#[test]
fn zero_cost_returns_lexicographic_minimum() {
    let spec = experiment_instance();
    let first = enumerate_actions(&spec, 1_000).unwrap().remove(0);
    assert_eq!(argmin_action(&spec, &[0.0; 6]).unwrap(), first);
}
