mod common;

use common::{av, experiment_instance};
use mpcsb::environment::{ArmDistribution, Environment};
use mpcsb::gencts::{BetaPosterior, GenCts};
use mpcsb::oracle::argmin_action;
use mpcsb::{InstanceSpec, Observation, RoundDetail, Sample};

fn pair() -> InstanceSpec {
    InstanceSpec::explicit(vec![av(&[1, 0]), av(&[0, 1])]).unwrap()
}

fn single(loss: f64) -> Observation {
    Observation {
        round: 1,
        samples: vec![Sample { arm: 0, slot: 0, loss }],
    }
}

#[test]
fn uniform_prior_samples_average_one_half() {
    let mut cts = GenCts::new(pair(), 3);
    let n = 100_000;
    let mut sum = [0.0; 2];
    for _ in 0..n {
        let (_, theta) = cts.select_action().unwrap();
        sum[0] += theta[0];
        sum[1] += theta[1];
    }
    for s in sum {
        assert!((s / n as f64 - 0.5).abs() < 0.005);
    }
}

#[test]
fn concentrated_posterior_picks_low_mean_arm() {
    let mut cts = GenCts::new(pair(), 4);
    cts.set_posteriors(vec![
        BetaPosterior { p: 1.0, q: 1e6 },
        BetaPosterior { p: 1e6, q: 1.0 },
    ])
    .unwrap();
    let hits = (0..1000)
        .filter(|_| cts.select_action().unwrap().0 == av(&[1, 0]))
        .count();
    assert!(hits >= 999);
}

#[test]
fn action_is_oracle_of_reported_theta() {
    let spec = experiment_instance();
    let mut cts = GenCts::new(spec.clone(), 5);
    for _ in 0..100 {
        let (a, theta) = cts.select_action().unwrap();
        assert_eq!(a, argmin_action(&spec, &theta).unwrap());
    }
}

#[test]
fn certain_losses() {
    let mut cts = GenCts::new(pair(), 0);
    cts.update(&single(1.0)).unwrap();
    assert_eq!(cts.posteriors()[0], BetaPosterior { p: 2.0, q: 1.0 });
    cts.update(&single(0.0)).unwrap();
    assert_eq!(cts.posteriors()[0], BetaPosterior { p: 2.0, q: 2.0 });
    assert!(cts.update(&single(1.5)).is_err());
    assert_eq!(cts.posteriors()[0].observations(), 2.0);
}

#[test]
fn binarization_preserves_the_mean() {
    let mut cts = GenCts::new(pair(), 6);
    let n = 100_000;
    for _ in 0..n {
        cts.update(&single(0.3)).unwrap();
    }
    let mean = cts.posteriors()[0].empirical_mean().unwrap();
    let sigma = (0.3f64 * 0.7 / n as f64).sqrt();
    assert!((mean - 0.3).abs() <= 3.0 * sigma, "{mean}");
}

#[test]
fn posterior_counts_track_plays() {
    let spec = experiment_instance();
    let arms = vec![ArmDistribution::Uniform { lo: 0.0, hi: 0.6 }; 6];
    let mut env = Environment::stochastic(spec.clone(), arms, 7).unwrap();
    let mut cts = GenCts::new(spec, 7);
    let mut plays = [0u64; 6];
    for t in 1..=500 {
        let rec = cts.run_round(&mut env, t).unwrap();
        for (p, &a) in plays.iter_mut().zip(&rec.action.0) {
            *p += u64::from(a);
        }
        assert!(matches!(rec.detail, RoundDetail::Thompson { .. }));
        for (post, &p) in cts.posteriors().iter().zip(&plays) {
            assert_eq!(post.observations(), p as f64);
            assert!(post.p >= 1.0 && post.q >= 1.0);
        }
        assert_eq!(rec.action.total(), 10);
    }
}
