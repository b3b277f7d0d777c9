mod common;

use common::{av, experiment_instance, transport_plans};
use mpcsb::environment::{ArmDistribution, CorruptionSchedule};
use mpcsb::harness::{
    compute_optimal_action, emit, pseudo_regret_increment, read_curve_csv, run_experiment,
    AlgorithmConfig, AlgorithmKind, CorruptionConfig, EnvironmentConfig, ExperimentConfig,
    RegretCurve, REALIZED_FILE, REGRET_FILE, SUMMARY_FILE,
};
use mpcsb::{stream_rng, InstanceSpec};
use rand::Rng;

fn config(kind: AlgorithmKind, horizon: u64, trials: usize, corrupted: bool) -> ExperimentConfig {
    ExperimentConfig {
        horizon,
        trials,
        seed: 17,
        output: None,
        instance: experiment_instance(),
        environment: EnvironmentConfig::RandomCosts {
            cost_range: [0.1, 0.5],
            corruption: corrupted.then_some(CorruptionConfig::Flip { after: horizon / 2 }),
        },
        algorithm: AlgorithmConfig::new(kind),
    }
}

#[test]
fn optimal_action_examples() {
    let spec = InstanceSpec::explicit(vec![av(&[2, 0]), av(&[1, 1]), av(&[0, 1])]).unwrap();
    assert_eq!(compute_optimal_action(&spec, &[0.3, 0.4]).unwrap(), av(&[0, 1]));
    let spec = InstanceSpec::transport(vec![1, 1], vec![1, 1]).unwrap();
    assert_eq!(
        compute_optimal_action(&spec, &[0.1, 0.2, 0.3, 0.1]).unwrap(),
        av(&[1, 0, 0, 1])
    );
}

#[test]
fn optimal_action_matches_enumeration_on_experiment_instance() {
    let spec = experiment_instance();
    let plans = transport_plans(&[1, 4, 5], &[4, 6]);
    let mut rng = stream_rng(3, 2);
    for _ in 0..50 {
        let means: Vec<f64> = (0..6).map(|_| rng.random_range(0.1..0.5)).collect();
        let a = compute_optimal_action(&spec, &means).unwrap();
        let (_, best) = common::brute_argmin(&plans, &means);
        assert!((a.dot(&means) - best).abs() < 1e-12);
    }
}

#[test]
fn increments() {
    let a_star = av(&[1, 0]);
    assert_eq!(pseudo_regret_increment(&[0.2, 0.3], &a_star, &a_star), 0.0);
    let a = av(&[1, 1]);
    let inc = pseudo_regret_increment(&[0.2, 0.1], &a, &a_star);
    assert!((inc - 0.1).abs() < 1e-15);
}

#[test]
fn single_round_at_optimum_has_zero_regret() {
    let spec = InstanceSpec::explicit(vec![av(&[1, 0]), av(&[0, 1])]).unwrap();
    let cfg = ExperimentConfig {
        horizon: 1,
        trials: 1,
        seed: 0,
        output: None,
        instance: spec,
        environment: EnvironmentConfig::Fixed {
            arms: vec![ArmDistribution::Constant { value: 0.5 }; 2],
            schedule: CorruptionSchedule::identity(),
        },
        algorithm: AlgorithmConfig::new(AlgorithmKind::Gencts),
    };
    let result = run_experiment(&cfg).unwrap();
    assert_eq!(result.pseudo.mean, vec![0.0]);
}

#[test]
fn emitted_files_round_trip_and_are_deterministic() {
    let cfg = config(AlgorithmKind::Genlbinfv, 3, 2, false);
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    let first = run_experiment(&cfg).unwrap();
    emit(&first, &a).unwrap();
    emit(&run_experiment(&cfg).unwrap(), &b).unwrap();
    for file in [REGRET_FILE, REALIZED_FILE] {
        let text = std::fs::read_to_string(a.join(file)).unwrap();
        assert_eq!(text, std::fs::read_to_string(b.join(file)).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "round,trial_0,trial_1,mean");
        assert_eq!(lines.len(), 4);
        assert!(lines[1..].iter().all(|l| l.split(',').count() == 4));
    }
    assert_eq!(read_curve_csv(&a.join(REGRET_FILE)).unwrap(), first.pseudo);
    assert_eq!(read_curve_csv(&a.join(REALIZED_FILE)).unwrap(), first.realized);

    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(a.join(SUMMARY_FILE)).unwrap()).unwrap();
    assert_eq!(summary["algorithm"], "genlbinfv");
    assert_eq!(summary["trials"].as_array().unwrap().len(), 2);
    assert!(summary["trials"][0]["gaps"].is_array());
    assert!(summary["trials"][0]["a_star"].is_array());
}

#[test]
fn corrupted_summary_marks_gaps_unavailable() {
    let cfg = config(AlgorithmKind::Gencts, 10, 1, true);
    let result = run_experiment(&cfg).unwrap();
    let summary = serde_json::to_value(result.summary()).unwrap();
    assert!(summary["trials"][0]["gaps"].is_null());
    assert!(summary["trials"][0]["corruption_level"].as_f64().unwrap() > 0.0);
}

#[test]
fn stochastic_curves_are_nondecreasing_and_mean_is_exact() {
    for kind in [AlgorithmKind::Gencts, AlgorithmKind::DupCts] {
        let result = run_experiment(&config(kind, 200, 3, false)).unwrap();
        for c in &result.pseudo.trials {
            assert!(c.windows(2).all(|w| w[1] >= w[0] - 1e-12));
            assert_eq!(c.len(), 200);
        }
        let again = RegretCurve::from_trials(result.pseudo.trials.clone()).unwrap();
        for (t, m) in result.pseudo.mean.iter().enumerate() {
            let direct = result.pseudo.trials.iter().map(|c| c[t]).sum::<f64>() / 3.0;
            assert!((m - direct).abs() <= 1e-12);
            assert_eq!(*m, again.mean[t]);
        }
    }
}

#[test]
fn paired_algorithms_share_loss_tables() {
    let a = run_experiment(&config(AlgorithmKind::Gencts, 50, 2, false)).unwrap();
    let b = run_experiment(&config(AlgorithmKind::DupCts, 50, 2, false)).unwrap();
    for (x, y) in a.trials.iter().zip(&b.trials) {
        assert_eq!(x.costs, y.costs);
        assert_eq!(x.diagnostics.a_star, y.diagnostics.a_star);
    }
}

#[test]
fn toml_round_trip_and_validation() {
    let cfg = config(AlgorithmKind::DupLbinfv, 100, 4, true);
    let text = cfg.to_toml_string().unwrap();
    assert_eq!(ExperimentConfig::from_toml_str(&text).unwrap(), cfg);
    let bad = text.replace("horizon = 100", "horizon = 0");
    assert!(ExperimentConfig::from_toml_str(&bad).is_err());
    let unknown = format!("{text}\nbogus = 1\n");
    assert!(ExperimentConfig::from_toml_str(&unknown).is_err());
}

#[test]
fn trial_failure_reports_trial_and_round() {
    let spec = InstanceSpec::knapsack(vec![2, 3], 5).unwrap();
    let mut cfg = config(AlgorithmKind::Genlbinfv, 5, 1, false);
    cfg.instance = spec;
    let err = run_experiment(&cfg).unwrap_err().to_string();
    assert!(err.contains("trial 0"), "{err}");
}
