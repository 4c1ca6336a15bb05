use sideobs::environment::NoiseModel;
use sideobs::graph::{effective_independence_number, q_upper_bound, GridWeightRule};
use sideobs::harness::output::write_aggregate_csv;
use sideobs::harness::{mean_std, theoretical_bound, Experiment, GraphSpec, LossSpec, RunConfig};
use sideobs::policies::{Algorithm, PolicySpec, RateMode};

fn config(algorithm: Algorithm, horizon: usize) -> RunConfig {
    RunConfig {
        n_arms: 16,
        horizon,
        policy: PolicySpec::new(algorithm, RateMode::Adaptive { r: 1.0 }),
        graph: GraphSpec::Grid {
            side: 4,
            rule: GridWeightRule::Min3OverD2,
            spacing: None,
        },
        losses: LossSpec::RandomWalk {
            n_walks: 6,
            step_sigma: 0.05,
            assignment: Default::default(),
        },
        noise: NoiseModel::default(),
        seed: 3,
        repetitions: 4,
    }
}

fn wix() -> Algorithm {
    Algorithm::Wix { delta: 1.0 }
}

fn trace_bytes(exp: &Experiment, rep: u64) -> Vec<u8> {
    let mut buf = Vec::new();
    exp.run_episode(rep).unwrap().write_csv(&mut buf).unwrap();
    buf
}

#[test]
fn traces_are_identical_across_thread_counts() {
    let exp = Experiment::new(config(wix(), 400)).unwrap();
    let pool = |k| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .unwrap()
    };
    let spec = exp.config().policy;
    let one = pool(1).install(|| exp.run_traces(&spec, 6).unwrap());
    let four = pool(4).install(|| exp.run_traces(&spec, 6).unwrap());
    assert_eq!(one, four);
    assert_eq!(trace_bytes(&exp, 2), trace_bytes(&exp, 2));
    let again = Experiment::new(config(wix(), 400)).unwrap();
    assert_eq!(trace_bytes(&exp, 0), trace_bytes(&again, 0));
}

#[test]
fn regret_is_recomputable_from_the_trace() {
    let exp = Experiment::new(config(Algorithm::Ixt { epsilon: 0.5 }, 500)).unwrap();
    let trace = exp.run_episode(1).unwrap();
    let losses = exp.losses();
    let mut arm_totals = [0.0; 16];
    let mut learner = 0.0;
    for t in 0..trace.horizon() {
        let row = losses.round(t);
        assert_eq!(trace.losses[t], row[trace.arms[t]]);
        learner += row[trace.arms[t]];
        for (a, l) in arm_totals.iter_mut().zip(row) {
            *a += l;
        }
        let best = arm_totals.iter().copied().fold(f64::INFINITY, f64::min);
        assert!((trace.cumulative_regret[t] - (learner - best)).abs() < 1e-9);
    }
    assert!((trace.final_regret - (trace.learner_total() - trace.best_arm_total())).abs() < 1e-12);
}

#[test]
fn aggregates_are_recomputable_from_the_csv() {
    let exp = Experiment::new(config(wix(), 300)).unwrap();
    let agg = exp.run_batch(&exp.config().policy, 5).unwrap();
    let mut buf = Vec::new();
    write_aggregate_csv(&mut buf, [&agg]).unwrap();
    let mut reader = csv::Reader::from_reader(&buf[..]);
    let finals: Vec<f64> = reader
        .records()
        .map(|r| r.unwrap()[2].parse().unwrap())
        .collect();
    let (mean, std) = mean_std(&finals);
    assert_eq!(mean, agg.mean);
    assert_eq!(std, agg.std);
    let lo = finals.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = finals.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    assert!(agg.std >= 0.0 && lo <= agg.mean && agg.mean <= hi);
    assert_eq!(agg.mean_curve.len(), 300);
    assert!((agg.mean_curve[299] - agg.mean).abs() < 1e-9);
}

#[test]
fn adaptive_wix_stays_within_its_q_bounds() {
    let exp = Experiment::new(config(wix(), 1000)).unwrap();
    let alpha = effective_independence_number(exp.graph())
        .unwrap()
        .alpha_star;
    for rep in 0..3 {
        let trace = exp.run_episode(rep).unwrap();
        let total: f64 = trace.q.iter().sum();
        assert!(total <= 1000.0 * 16.0);
        for (&q, &gamma) in trace.q.iter().zip(&trace.gamma) {
            assert!(q <= 16.0);
            assert!(q <= q_upper_bound(alpha, 16, gamma).unwrap());
        }
        let b1 = theoretical_bound(&trace, 16, 1.0).unwrap();
        let mut shorter = trace.clone();
        shorter.q.truncate(500);
        shorter.arms.truncate(500);
        assert!(theoretical_bound(&shorter, 16, 1.0).unwrap() <= b1);
    }
}

#[test]
fn sweep_rows_follow_their_policies() {
    let cfg = config(wix(), 300);
    let exp = Experiment::new(cfg.clone()).unwrap();
    let rows = exp.sweep_epsilon(&[0.0, 0.5, 1.0], 2).unwrap();
    assert_eq!(rows.len(), 2 + 2 * 3);
    assert_eq!(rows[0].epsilon, None);
    assert_eq!(rows[0].result, exp.run_batch(&cfg.policy, 2).unwrap());
    let basic = PolicySpec::new(Algorithm::Basic, cfg.policy.rates);
    let ixt0 = rows
        .iter()
        .find(|r| r.algorithm == Algorithm::Ixt { epsilon: 0.0 })
        .unwrap();
    assert_eq!(
        ixt0.result.final_regrets,
        exp.run_batch(&basic, 2).unwrap().final_regrets
    );
    let mut keys: Vec<_> = rows.iter().map(|r| r.result.key.clone()).collect();
    keys.sort();
    keys.dedup();
    assert_eq!(keys.len(), rows.len());
    assert!(exp.sweep_epsilon(&[1.5], 1).is_err());
}

#[test]
fn invalid_configs_fail_before_any_round() {
    let mut cfg = config(wix(), 10);
    cfg.n_arms = 15;
    assert!(matches!(
        Experiment::new(cfg),
        Err(sideobs::Error::Validation(_))
    ));
    let mut cfg = config(wix(), 10);
    cfg.horizon = 0;
    assert!(Experiment::new(cfg).is_err());
    let mut cfg = config(wix(), 10);
    cfg.policy = PolicySpec::new(
        wix(),
        RateMode::Static {
            eta: -1.0,
            gamma: 0.0,
        },
    );
    assert!(Experiment::new(cfg).is_err());
}
