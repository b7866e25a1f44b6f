//! Node faults and Monte Carlo estimation of the network breakdown
//! probability: the chance that the graph induced on surviving nodes is
//! disconnected, averaged over all randomness of the model.

use rand::Rng;

use crate::connmodel::ConnectionModel;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::geometry::{sample_poisson, sample_uniform, Metric, Point, PointSet};
use crate::graphcore::{sample_connectivity, Truncation};
use crate::rng::{Purpose, Substreams};
use crate::stats::{wilson_interval, Z95};

/// Each node fails independently with probability `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FaultModel {
    epsilon: f64,
}

impl FaultModel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&epsilon) {
            return Err(Error::invalid(
                "epsilon",
                format!("must lie in [0, 1), got {epsilon}"),
            ));
        }
        Ok(FaultModel { epsilon })
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    /// Survival probability `1 - epsilon`.
    pub fn kappa(&self) -> f64 {
        1.0 - self.epsilon
    }

    /// Indices of nodes that survive, in increasing order.
    pub fn survivors<R: Rng + ?Sized>(&self, n: usize, rng: &mut R) -> Vec<usize> {
        if self.epsilon == 0.0 {
            return (0..n).collect();
        }
        (0..n)
            .filter(|_| rng.random::<f64>() >= self.epsilon)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum PointProcess {
    /// Exactly `n` uniform nodes.
    #[default]
    Uniform,
    /// Poisson number of nodes with mean `n`.
    Poisson,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BreakdownEstimate {
    pub p_hat: f64,
    pub trials: u64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub master_seed: u64,
    pub disconnected_count: u64,
}

impl BreakdownEstimate {
    pub fn from_counts(disconnected_count: u64, trials: u64, master_seed: u64) -> Self {
        let (ci_low, ci_high) = wilson_interval(disconnected_count, trials, Z95);
        BreakdownEstimate {
            p_hat: disconnected_count as f64 / trials as f64,
            trials,
            ci_low,
            ci_high,
            master_seed,
            disconnected_count,
        }
    }

    /// Half the width of the 95% interval.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.ci_high - self.ci_low)
    }
}

/// How `delta_n` is chosen for the survivor-count sandwich.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DeltaRule {
    /// `delta_n = n^(-exponent)`.
    Power(f64),
    Fixed(f64),
}

impl Default for DeltaRule {
    fn default() -> Self {
        DeltaRule::Power(1.0 / 3.0)
    }
}

impl DeltaRule {
    pub fn delta(&self, n: usize) -> f64 {
        match *self {
            DeltaRule::Power(exponent) => (n as f64).powf(-exponent),
            DeltaRule::Fixed(d) => d,
        }
    }
}

/// Bounds on the breakdown probability from the conditional probabilities
/// at survivor counts `s` in `[s_minus, s_plus]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Lemma1Bounds {
    pub lower: f64,
    pub upper: f64,
    pub s_minus: usize,
    pub s_plus: usize,
    pub delta_n: f64,
    /// Additive slack `1 / (2 n delta_n)`.
    pub slack: f64,
    /// Conditional estimates at each evaluated survivor count.
    pub per_count: Vec<(usize, BreakdownEstimate)>,
}

/// Simulation settings shared by the estimators.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Simulation {
    pub metric: Metric,
    pub truncation: Truncation,
    pub process: PointProcess,
    pub execution: Execution,
}

impl Simulation {
    pub fn new(metric: Metric) -> Self {
        Simulation {
            metric,
            ..Default::default()
        }
    }

    pub fn with_truncation(mut self, truncation: Truncation) -> Self {
        self.truncation = truncation;
        self
    }

    pub fn with_process(mut self, process: PointProcess) -> Self {
        self.process = process;
        self
    }

    pub fn with_execution(mut self, execution: Execution) -> Self {
        self.execution = execution;
        self
    }

    fn sample_points(&self, n: usize, streams: &Substreams, trial: u64) -> Vec<Point> {
        let mut rng = streams.stream(Purpose::Points, trial);
        let set = match self.process {
            PointProcess::Uniform if n == 0 => PointSet::new(Vec::new(), self.metric),
            PointProcess::Uniform => sample_uniform(n, self.metric, &mut rng).expect("n >= 1"),
            PointProcess::Poisson => {
                sample_poisson(n as f64, self.metric, &mut rng).expect("density > 0")
            }
        };
        set.into_points()
    }

    /// Breakdown probability over the full ensemble: every trial redraws
    /// positions and faults, then samples edges among survivors.
    pub fn estimate_breakdown(
        &self,
        n: usize,
        model: &ConnectionModel,
        fault: FaultModel,
        trials: u64,
        master_seed: u64,
    ) -> Result<BreakdownEstimate> {
        check_trials(trials)?;
        if n == 0 {
            return Err(Error::invalid("n", "need at least one node"));
        }
        let streams = Substreams::new(master_seed);
        let disconnected = self.execution.count(trials, |t| {
            let points = self.sample_points(n, &streams, t);
            let alive = fault.survivors(points.len(), &mut streams.stream(Purpose::Faults, t));
            let survivors: Vec<Point> = if alive.len() == points.len() {
                points
            } else {
                alive.iter().map(|&i| points[i]).collect()
            };
            let mut edges = streams.stream(Purpose::Edges, t);
            !sample_connectivity(&survivors, self.metric, model, self.truncation, &mut edges)
                .connected
        });
        Ok(BreakdownEstimate::from_counts(
            disconnected,
            trials,
            master_seed,
        ))
    }

    /// Breakdown probability conditioned on exactly `s` survivors, which is
    /// the disconnection probability of a fault-free graph on `s` uniform
    /// nodes. Uses the same point and edge streams as
    /// [`estimate_breakdown`](Self::estimate_breakdown).
    pub fn estimate_conditional(
        &self,
        s: usize,
        model: &ConnectionModel,
        trials: u64,
        master_seed: u64,
    ) -> Result<BreakdownEstimate> {
        check_trials(trials)?;
        let streams = Substreams::new(master_seed);
        let uniform = Simulation {
            process: PointProcess::Uniform,
            ..*self
        };
        let disconnected = self.execution.count(trials, |t| {
            if s <= 1 {
                return false;
            }
            let points = uniform.sample_points(s, &streams, t);
            let mut edges = streams.stream(Purpose::Edges, t);
            !sample_connectivity(&points, self.metric, model, self.truncation, &mut edges).connected
        });
        Ok(BreakdownEstimate::from_counts(
            disconnected,
            trials,
            master_seed,
        ))
    }

    /// Breakdown probability of one fixed node placement: faults and edges
    /// are redrawn every trial, positions are not.
    pub fn estimate_on_points(
        &self,
        points: &PointSet,
        model: &ConnectionModel,
        fault: FaultModel,
        trials: u64,
        master_seed: u64,
    ) -> Result<BreakdownEstimate> {
        check_trials(trials)?;
        let streams = Substreams::new(master_seed);
        let all = points.points();
        let metric = points.metric();
        let disconnected = self.execution.count(trials, |t| {
            let alive = fault.survivors(all.len(), &mut streams.stream(Purpose::Faults, t));
            let survivors: Vec<Point> = alive.iter().map(|&i| all[i]).collect();
            let mut edges = streams.stream(Purpose::Edges, t);
            !sample_connectivity(&survivors, metric, model, self.truncation, &mut edges).connected
        });
        Ok(BreakdownEstimate::from_counts(
            disconnected,
            trials,
            master_seed,
        ))
    }

    /// Sandwich bounds on the breakdown probability from conditional
    /// estimates over the typical survivor counts `(kappa ± delta_n) n`.
    pub fn lemma1_bounds(
        &self,
        n: usize,
        model: &ConnectionModel,
        fault: FaultModel,
        trials_per_s: u64,
        master_seed: u64,
        rule: DeltaRule,
    ) -> Result<Lemma1Bounds> {
        check_trials(trials_per_s)?;
        let kappa = fault.kappa();
        let delta_n = rule.delta(n);
        if !(delta_n > 0.0 && delta_n < kappa) {
            return Err(Error::invalid(
                "delta_n",
                format!("need 0 < delta_n < kappa = {kappa}, got {delta_n}"),
            ));
        }
        let slack = 1.0 / (2.0 * n as f64 * delta_n);
        if slack >= 1.0 {
            return Err(Error::VacuousBounds { slack });
        }
        let (s_minus, s_plus) = survivor_range(n, kappa, delta_n);
        let per_count = survivor_grid(s_minus, s_plus)
            .into_iter()
            .map(|s| {
                Ok((
                    s,
                    self.estimate_conditional(s, model, trials_per_s, master_seed)?,
                ))
            })
            .collect::<Result<Vec<_>>>()?;
        let min = per_count
            .iter()
            .map(|(_, e)| e.p_hat)
            .fold(f64::INFINITY, f64::min);
        let max = per_count
            .iter()
            .map(|(_, e)| e.p_hat)
            .fold(f64::NEG_INFINITY, f64::max);
        Ok(Lemma1Bounds {
            lower: (1.0 - slack) * min,
            upper: slack + max,
            s_minus,
            s_plus,
            delta_n,
            slack,
            per_count,
        })
    }
}

fn check_trials(trials: u64) -> Result<()> {
    if trials == 0 {
        Err(Error::invalid("trials", "need at least one trial"))
    } else {
        Ok(())
    }
}

/// `(ceil((kappa - delta) n), floor((kappa + delta) n))`, the upper end
/// capped at `n`.
pub fn survivor_range(n: usize, kappa: f64, delta_n: f64) -> (usize, usize) {
    let nf = n as f64;
    let lo = ((kappa - delta_n) * nf).ceil().max(0.0) as usize;
    let hi = (((kappa + delta_n) * nf).floor() as usize).min(n);
    (lo, hi.max(lo))
}

/// Every count when the range holds at most 32 values, otherwise 16 evenly
/// spaced counts including both ends.
pub fn survivor_grid(lo: usize, hi: usize) -> Vec<usize> {
    if hi - lo < 32 {
        return (lo..=hi).collect();
    }
    let span = (hi - lo) as f64;
    let mut grid: Vec<usize> = (0..16)
        .map(|k| lo + (span * k as f64 / 15.0).round() as usize)
        .collect();
    grid.dedup();
    grid
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fault_model_range() {
        assert!(FaultModel::new(0.0).is_ok());
        assert!(FaultModel::new(0.999).is_ok());
        assert!(FaultModel::new(1.0).is_err());
        assert!(FaultModel::new(-0.1).is_err());
        assert!(FaultModel::new(f64::NAN).is_err());
        assert_eq!(FaultModel::new(0.25).unwrap().kappa(), 0.75);
    }

    #[test]
    fn survivor_range_arithmetic() {
        let delta = DeltaRule::default().delta(1000);
        assert!((delta - 0.1).abs() < 1e-12);
        let (lo, hi) = survivor_range(1000, 0.75, delta);
        assert_eq!((lo, hi), (650, 850));
        assert!((1.0 / (2.0 * 1000.0 * delta) - 0.005).abs() < 1e-12);
    }

    #[test]
    fn survivor_grid_shapes() {
        assert_eq!(survivor_grid(5, 9), vec![5, 6, 7, 8, 9]);
        assert_eq!(survivor_grid(10, 41).len(), 32);
        let g = survivor_grid(650, 850);
        assert_eq!(g.len(), 16);
        assert_eq!((g[0], g[15]), (650, 850));
        assert!(g.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn rejects_zero_trials() {
        let sim = Simulation::new(Metric::Torus);
        let hd = ConnectionModel::hard_disk(0.3).unwrap();
        let f = FaultModel::new(0.1).unwrap();
        assert!(sim.estimate_breakdown(10, &hd, f, 0, 1).is_err());
        assert!(sim.estimate_conditional(10, &hd, 0, 1).is_err());
    }

    #[test]
    fn complete_graph_never_breaks() {
        let sim = Simulation::new(Metric::Torus);
        let hd = ConnectionModel::hard_disk(2.0).unwrap();
        let est = sim
            .estimate_breakdown(50, &hd, FaultModel::new(0.0).unwrap(), 200, 3)
            .unwrap();
        assert_eq!(est.disconnected_count, 0);
        assert_eq!(est.p_hat, 0.0);
    }

    #[test]
    fn tiny_conditional_counts_are_connected() {
        let sim = Simulation::new(Metric::Torus);
        let ray = ConnectionModel::rayleigh(1e6, 2.0).unwrap();
        for s in [0, 1] {
            assert_eq!(
                sim.estimate_conditional(s, &ray, 100, 1).unwrap().p_hat,
                0.0
            );
        }
    }

    #[test]
    fn vacuous_bounds_are_reported() {
        let sim = Simulation::new(Metric::Torus);
        let hd = ConnectionModel::hard_disk(0.3).unwrap();
        let f = FaultModel::new(0.1).unwrap();
        // slack 1/(2 * 2 * 0.2) = 1.25
        let err = sim
            .lemma1_bounds(2, &hd, f, 10, 1, DeltaRule::Fixed(0.2))
            .unwrap_err();
        assert!(matches!(err, Error::VacuousBounds { .. }));
        assert!(sim
            .lemma1_bounds(100, &hd, f, 10, 1, DeltaRule::Fixed(0.95))
            .is_err());
    }
}
