mod common;

use rgg_faultnet::analytics::rayleigh_eta2_beta;
use rgg_faultnet::connmodel::ConnectionModel;
use rgg_faultnet::geometry::sample_uniform;
use rgg_faultnet::rng::{Purpose, Substreams};
use rgg_faultnet::stats::wilson_interval;
use rgg_faultnet::{DeltaRule, Execution, FaultModel, Metric, PointProcess, Simulation};

/// Two-sided 99.9% normal quantile.
const Z999: f64 = 3.290_526_731_491_926;

#[test]
fn frozen_points_match_exact_enumeration() {
    let trials = 40_000;
    for (k, metric) in [
        (0u64, Metric::PlanarSquare),
        (1, Metric::Torus),
        (2, Metric::PlanarSquare),
    ] {
        let mut rng = Substreams::new(31).stream(Purpose::Points, k);
        let set = sample_uniform(10, metric, &mut rng).unwrap();
        let xy = common::coords(set.points());
        let range = 0.35;
        let model = ConnectionModel::hard_disk(range).unwrap();
        for eps in [0.05, 0.2, 0.6] {
            let exact =
                common::exact_breakdown_hard_disk(&xy, range, common::is_torus(metric), eps);
            let est = Simulation::new(metric)
                .estimate_on_points(&set, &model, FaultModel::new(eps).unwrap(), trials, 100 + k)
                .unwrap();
            let (lo, hi) = wilson_interval(est.disconnected_count, trials, Z999);
            assert!(
                lo <= exact && exact <= hi,
                "set {k} eps {eps}: exact {exact} vs [{lo}, {hi}]"
            );
        }
    }
}

#[test]
fn two_nodes_on_torus_disconnect_with_probability_one_minus_disk_area() {
    let range = 0.2;
    let trials = 100_000;
    let est = Simulation::new(Metric::Torus)
        .estimate_conditional(2, &ConnectionModel::hard_disk(range).unwrap(), trials, 32)
        .unwrap();
    let exact = 1.0 - std::f64::consts::PI * range * range;
    let (lo, hi) = wilson_interval(est.disconnected_count, trials, Z999);
    assert!(lo <= exact && exact <= hi, "{exact} vs [{lo}, {hi}]");
}

#[test]
fn no_faults_equals_conditional_on_all_nodes() {
    let n = 300;
    let model = ConnectionModel::rayleigh(rayleigh_eta2_beta(n as f64), 2.0).unwrap();
    let sim = Simulation::new(Metric::Torus);
    let full = sim
        .estimate_breakdown(n, &model, FaultModel::new(0.0).unwrap(), 500, 33)
        .unwrap();
    let conditional = sim.estimate_conditional(n, &model, 500, 33).unwrap();
    assert_eq!(full.disconnected_count, conditional.disconnected_count);
}

#[test]
fn sandwich_bounds_contain_the_fault_estimate() {
    let n = 1024;
    let eps = 0.25;
    let model = ConnectionModel::rayleigh(rayleigh_eta2_beta(n as f64), 2.0).unwrap();
    let fault = FaultModel::new(eps).unwrap();
    let sim = Simulation::new(Metric::Torus);
    let bounds = sim
        .lemma1_bounds(n, &model, fault, 1000, 34, DeltaRule::default())
        .unwrap();
    let est = sim.estimate_breakdown(n, &model, fault, 4000, 35).unwrap();
    let margin = 3.0 * (bounds.per_count[0].1.half_width() + est.half_width());
    assert!(bounds.lower <= bounds.upper);
    assert!(bounds.s_minus < bounds.s_plus && bounds.per_count.len() == 16);
    assert!(
        bounds.lower - margin <= est.p_hat && est.p_hat <= bounds.upper + margin,
        "{} not in [{}, {}] +- {margin}",
        est.p_hat,
        bounds.lower,
        bounds.upper
    );
}

#[test]
fn poisson_and_uniform_processes_agree() {
    let n = 256;
    let model = ConnectionModel::rayleigh(rayleigh_eta2_beta(n as f64), 2.0).unwrap();
    let fault = FaultModel::new(0.3).unwrap();
    let trials = 4000;
    let uniform = Simulation::new(Metric::Torus)
        .estimate_breakdown(n, &model, fault, trials, 36)
        .unwrap();
    let poisson = Simulation::new(Metric::Torus)
        .with_process(PointProcess::Poisson)
        .estimate_breakdown(n, &model, fault, trials, 37)
        .unwrap();
    let pooled = 0.5 * (uniform.p_hat + poisson.p_hat);
    let se = (2.0 * pooled * (1.0 - pooled) / trials as f64).sqrt();
    assert!(
        (uniform.p_hat - poisson.p_hat).abs() < 4.0 * se,
        "{} vs {}",
        uniform.p_hat,
        poisson.p_hat
    );
}

#[test]
fn counts_do_not_depend_on_worker_count() {
    let n = 400;
    let model = ConnectionModel::rayleigh(rayleigh_eta2_beta(n as f64), 2.0).unwrap();
    let fault = FaultModel::new(0.4).unwrap();
    let counts: Vec<u64> = [
        Execution::Sequential,
        Execution::Workers(1),
        Execution::Workers(3),
        Execution::Workers(8),
        Execution::Parallel,
    ]
    .into_iter()
    .map(|e| {
        Simulation::new(Metric::Torus)
            .with_execution(e)
            .estimate_breakdown(n, &model, fault, 300, 38)
            .unwrap()
            .disconnected_count
    })
    .collect();
    assert!(counts.windows(2).all(|w| w[0] == w[1]), "{counts:?}");
}

#[test]
fn survivor_count_has_binomial_mean() {
    let fault = FaultModel::new(0.3).unwrap();
    let streams = Substreams::new(39);
    let draws = 2000;
    let n = 500;
    let total: usize = (0..draws)
        .map(|t| {
            fault
                .survivors(n, &mut streams.stream(Purpose::Faults, t))
                .len()
        })
        .sum();
    let mean = total as f64 / draws as f64;
    let se = (n as f64 * 0.3 * 0.7 / draws as f64).sqrt();
    assert!((mean - 350.0).abs() < 4.0 * se, "{mean}");
}
