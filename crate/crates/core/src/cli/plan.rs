//! Experiment plans: parameter sweeps over the fault rate, the power scale
//! `delta` or the path-loss exponent, evaluated by simulation and/or the
//! analytic formulas.

use std::path::PathBuf;

use super::csvio::ResultRow;
use crate::analytics::{
    approx_breakdown, approx_breakdown_rayleigh_delta, approx_breakdown_rayleigh_eta2,
    critical_beta, rayleigh_eta2_beta, threshold_curve, threshold_curve_beta, ApproxInputs,
    BoundaryMode,
};
use crate::connmodel::{ConnectionModel, TabulatedProfile};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::faultsim::{FaultModel, Simulation};
use crate::geometry::Metric;
use crate::graphcore::Truncation;

/// Missed-edge budget used by [`TruncationSetting::Auto`].
pub const AUTO_TAU: f64 = 1e-4;
/// Node count from which [`TruncationSetting::Auto`] truncates.
pub const AUTO_MIN_NODES: usize = 1024;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelKind {
    HardDisk,
    Rayleigh,
    Table(PathBuf),
}

/// How the Rayleigh `beta` follows from the sweep point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Coupling {
    /// Fixed `beta` (Rayleigh) or fixed range/scale (hard disk, table).
    Fixed,
    /// `beta = delta * beta_c*(n, eta)`.
    Delta,
    /// `beta = pi n / (2 ln n)`.
    Eta2Threshold,
    /// `beta = pi (n / ln n)^(eta/2)`.
    ThresholdCurve,
}

/// Which formula fills the `p_approx` column.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ApproxFormula {
    /// Three-term formula from the model moments; bulk term only on the
    /// torus.
    General,
    /// `1 - exp(-kappa n^(1-2 kappa))`.
    Eta2,
    /// `1 - exp(-kappa n^(1 - kappa/sqrt(delta)))`.
    Delta,
    None,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TruncationSetting {
    /// `tau = 1e-4` for unbounded soft connection functions with at least
    /// 1024 nodes, exact otherwise.
    Auto,
    Exact,
    Tau(f64),
}

impl TruncationSetting {
    pub fn resolve(self, n: usize, model: &ConnectionModel) -> Truncation {
        match self {
            TruncationSetting::Exact => Truncation::Exact,
            TruncationSetting::Tau(tau) => Truncation::MissedEdges(tau),
            TruncationSetting::Auto => {
                if n >= AUTO_MIN_NODES
                    && !model.is_deterministic()
                    && model.support_radius().is_none()
                {
                    Truncation::MissedEdges(AUTO_TAU)
                } else {
                    Truncation::Exact
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Preset {
    Fig1,
    Fig2,
    Fig3,
}

impl std::str::FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "fig1" => Ok(Preset::Fig1),
            "fig2" => Ok(Preset::Fig2),
            "fig3" => Ok(Preset::Fig3),
            other => Err(Error::plan("preset", format!("unknown preset `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentPlan {
    pub preset: Option<Preset>,
    /// Simulate each sweep point; when false only analytic columns are
    /// filled.
    pub simulate: bool,
    pub model: ModelKind,
    pub coupling: Coupling,
    pub beta: Option<f64>,
    /// Hard-disk range or table scale.
    pub range: Option<f64>,
    pub n_list: Vec<usize>,
    pub eta_list: Vec<f64>,
    pub epsilon_list: Vec<f64>,
    pub delta_list: Vec<f64>,
    pub trials: u64,
    pub seed: u64,
    pub metric: Metric,
    pub truncation: TruncationSetting,
    pub approx: ApproxFormula,
    pub execution: Execution,
}

impl Default for ExperimentPlan {
    fn default() -> Self {
        ExperimentPlan {
            preset: None,
            simulate: true,
            model: ModelKind::Rayleigh,
            coupling: Coupling::Fixed,
            beta: None,
            range: None,
            n_list: vec![1024],
            eta_list: vec![2.0],
            epsilon_list: vec![0.0],
            delta_list: Vec::new(),
            trials: 1000,
            seed: 1,
            metric: Metric::Torus,
            truncation: TruncationSetting::Auto,
            approx: ApproxFormula::General,
            execution: Execution::Parallel,
        }
    }
}

/// One point of the sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub n: usize,
    pub eta: f64,
    pub delta: Option<f64>,
    pub epsilon: f64,
}

impl ExperimentPlan {
    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::plan("trials", "must be at least 1"));
        }
        if self.n_list.is_empty() {
            return Err(Error::plan("n", "no node counts given"));
        }
        if let Some(&n) = self.n_list.iter().find(|&&n| n < 2) {
            return Err(Error::plan(
                "n",
                format!("node counts must be at least 2, got {n}"),
            ));
        }
        if self.eta_list.is_empty() {
            return Err(Error::plan("eta", "no path-loss exponent given"));
        }
        if let Some(&eta) = self.eta_list.iter().find(|&&e| !(e >= 1.0)) {
            return Err(Error::plan("eta", format!("must be >= 1, got {eta}")));
        }
        if let Some(&eps) = self
            .epsilon_list
            .iter()
            .find(|&&e| !(0.0..1.0).contains(&e))
        {
            return Err(Error::plan(
                "epsilon",
                format!("must lie in [0, 1), got {eps}"),
            ));
        }
        if self.epsilon_list.is_empty() && self.coupling != Coupling::ThresholdCurve {
            return Err(Error::plan("epsilon", "no fault rate given"));
        }
        if let Some(&d) = self.delta_list.iter().find(|&&d| !(d > 0.0)) {
            return Err(Error::plan("delta", format!("must be positive, got {d}")));
        }
        let swept = [
            ("epsilon", self.epsilon_list.len()),
            ("delta", self.delta_list.len()),
            ("eta", self.eta_list.len()),
        ];
        let multi: Vec<&str> = swept
            .iter()
            .filter(|(_, len)| *len > 1)
            .map(|(k, _)| *k)
            .collect();
        if multi.len() > 1 {
            return Err(Error::plan(
                multi[1],
                format!(
                    "only one sweep axis per run, but {} all have several values",
                    multi.join(", ")
                ),
            ));
        }
        match (&self.model, self.coupling) {
            (ModelKind::Rayleigh, Coupling::Fixed) if self.beta.is_none() => {
                return Err(Error::plan(
                    "beta",
                    "Rayleigh model needs `beta` or `delta`",
                ))
            }
            (ModelKind::Rayleigh, Coupling::Delta) if self.delta_list.is_empty() => {
                return Err(Error::plan("delta", "no scale factor given"))
            }
            (ModelKind::HardDisk | ModelKind::Table(_), _) if self.range.is_none() => {
                return Err(Error::plan(
                    "range",
                    "hard-disk and table models need `range`",
                ))
            }
            (ModelKind::HardDisk | ModelKind::Table(_), c) if c != Coupling::Fixed => {
                return Err(Error::plan(
                    "model",
                    "beta couplings only apply to the Rayleigh model",
                ))
            }
            _ => {}
        }
        if let Some(beta) = self.beta {
            if !(beta > 0.0) {
                return Err(Error::plan("beta", format!("must be positive, got {beta}")));
            }
        }
        if let TruncationSetting::Tau(tau) = self.truncation {
            if !(tau >= 0.0) {
                return Err(Error::plan(
                    "truncation",
                    format!("must be nonnegative, got {tau}"),
                ));
            }
        }
        if self.approx == ApproxFormula::Delta && self.coupling != Coupling::Delta {
            return Err(Error::plan(
                "delta",
                "the delta approximation needs a delta sweep",
            ));
        }
        Ok(())
    }

    /// Sweep points in output order.
    pub fn points(&self) -> Vec<SweepPoint> {
        let deltas: Vec<Option<f64>> = if self.coupling == Coupling::Delta {
            self.delta_list.iter().copied().map(Some).collect()
        } else {
            vec![None]
        };
        let epsilons = if self.coupling == Coupling::ThresholdCurve && self.epsilon_list.is_empty()
        {
            vec![0.0]
        } else {
            self.epsilon_list.clone()
        };
        let mut out = Vec::new();
        for &n in &self.n_list {
            for &eta in &self.eta_list {
                for &delta in &deltas {
                    for &epsilon in &epsilons {
                        out.push(SweepPoint {
                            n,
                            eta,
                            delta,
                            epsilon,
                        });
                    }
                }
            }
        }
        out
    }

    pub fn beta_at(&self, point: &SweepPoint) -> Option<f64> {
        let n = point.n as f64;
        match (&self.model, self.coupling) {
            (ModelKind::Rayleigh, Coupling::Fixed) => self.beta,
            (ModelKind::Rayleigh, Coupling::Delta) => {
                point.delta.map(|d| d * critical_beta(n, point.eta))
            }
            (ModelKind::Rayleigh, Coupling::Eta2Threshold) => Some(rayleigh_eta2_beta(n)),
            (ModelKind::Rayleigh, Coupling::ThresholdCurve) => {
                Some(threshold_curve_beta(n, point.eta))
            }
            _ => None,
        }
    }

    /// Connection model at one sweep point.
    pub fn model_at(&self, point: &SweepPoint) -> Result<ConnectionModel> {
        match &self.model {
            ModelKind::Rayleigh => {
                let beta = self
                    .beta_at(point)
                    .ok_or_else(|| Error::plan("beta", "missing"))?;
                ConnectionModel::rayleigh(beta, point.eta)
            }
            ModelKind::HardDisk => ConnectionModel::hard_disk(self.range.unwrap_or_default()),
            ModelKind::Table(path) => ConnectionModel::rescaled(
                TabulatedProfile::from_file(path)?,
                self.range.unwrap_or_default(),
            ),
        }
    }

    /// Analytic approximation for one sweep point; `None` when the plan has
    /// no formula.
    pub fn approximation(
        &self,
        n: usize,
        eta: f64,
        delta: Option<f64>,
        epsilon: f64,
    ) -> Result<Option<f64>> {
        let point = SweepPoint {
            n,
            eta,
            delta,
            epsilon,
        };
        let nf = n as f64;
        Ok(match self.approx {
            ApproxFormula::None => None,
            ApproxFormula::Eta2 => Some(approx_breakdown_rayleigh_eta2(nf, epsilon)),
            ApproxFormula::Delta => {
                let delta = delta.ok_or_else(|| Error::plan("delta", "missing"))?;
                Some(approx_breakdown_rayleigh_delta(nf, epsilon, delta)?)
            }
            ApproxFormula::General => {
                let model = self.model_at(&point)?;
                let boundary = match self.metric {
                    Metric::Torus => BoundaryMode::TorusBulkOnly,
                    Metric::PlanarSquare => BoundaryMode::SquareFull,
                };
                Some(approx_breakdown(&ApproxInputs::from_model(
                    nf, epsilon, &model, boundary,
                )?)?)
            }
        })
    }
}

/// Runs every sweep point in order and returns the rows.
pub fn run_plan(plan: &ExperimentPlan) -> Result<Vec<ResultRow>> {
    let mut rows = Vec::new();
    run_plan_with(plan, |row| {
        rows.push(row);
        Ok(())
    })?;
    Ok(rows)
}

/// Runs the plan, handing each row to `emit` as soon as it is ready and in
/// sweep order.
pub fn run_plan_with<F>(plan: &ExperimentPlan, mut emit: F) -> Result<()>
where
    F: FnMut(ResultRow) -> Result<()>,
{
    plan.validate()?;
    for point in plan.points() {
        let beta = plan.beta_at(&point);
        let eta = match plan.model {
            ModelKind::Rayleigh => Some(point.eta),
            _ => None,
        };
        if plan.coupling == Coupling::ThresholdCurve && !plan.simulate {
            emit(ResultRow {
                n: point.n,
                eta: Some(point.eta),
                beta,
                epsilon: Some(threshold_curve(point.eta)),
                ..Default::default()
            })?;
            continue;
        }
        let mut row = ResultRow {
            n: point.n,
            eta,
            beta,
            delta: point.delta,
            epsilon: Some(point.epsilon),
            metric: Some(plan.metric),
            p_approx: plan.approximation(point.n, point.eta, point.delta, point.epsilon)?,
            ..Default::default()
        };
        if plan.simulate {
            let model = plan.model_at(&point)?;
            let sim = Simulation::new(plan.metric)
                .with_truncation(plan.truncation.resolve(point.n, &model))
                .with_execution(plan.execution);
            let est = sim.estimate_breakdown(
                point.n,
                &model,
                FaultModel::new(point.epsilon)?,
                plan.trials,
                plan.seed,
            )?;
            row.trials = Some(est.trials);
            row.disconnected = Some(est.disconnected_count);
            row.p_hat = Some(est.p_hat);
            row.ci_low = Some(est.ci_low);
            row.ci_high = Some(est.ci_high);
        }
        emit(row)?;
    }
    Ok(())
}

/// Inclusive grid `start, start + step, ..., end`, with values rounded to
/// 12 decimals so that e.g. `0:0.6:0.05` yields exact-looking entries.
pub fn grid(start: f64, end: f64, step: f64) -> Vec<f64> {
    if !(step > 0.0) || end < start {
        return vec![start];
    }
    let count = ((end - start) / step + 1e-9).floor() as usize + 1;
    (0..count)
        .map(|k| ((start + k as f64 * step) * 1e12).round() / 1e12)
        .collect()
}

/// The plans a preset expands to, one per trial-count or fault-rate group.
pub fn preset_plans(preset: Preset) -> Vec<ExperimentPlan> {
    match preset {
        Preset::Fig1 => vec![ExperimentPlan {
            preset: Some(preset),
            simulate: false,
            coupling: Coupling::ThresholdCurve,
            n_list: vec![1024],
            eta_list: grid(2.0, 10.0, 0.1),
            epsilon_list: Vec::new(),
            approx: ApproxFormula::None,
            ..Default::default()
        }],
        Preset::Fig2 => [(256, 10_000), (1024, 10_000), (4096, 1000)]
            .into_iter()
            .map(|(n, trials)| ExperimentPlan {
                preset: Some(preset),
                coupling: Coupling::Eta2Threshold,
                n_list: vec![n],
                eta_list: vec![2.0],
                epsilon_list: grid(0.0, 0.6, 0.05),
                trials,
                metric: Metric::Torus,
                approx: ApproxFormula::Eta2,
                ..Default::default()
            })
            .collect(),
        Preset::Fig3 => [0.0, 0.1, 0.25]
            .into_iter()
            .map(|eps| ExperimentPlan {
                preset: Some(preset),
                coupling: Coupling::Delta,
                n_list: vec![4096],
                eta_list: vec![4.0],
                epsilon_list: vec![eps],
                delta_list: grid(0.5, 2.0, 0.1),
                trials: 1000,
                metric: Metric::Torus,
                truncation: TruncationSetting::Tau(AUTO_TAU),
                approx: ApproxFormula::Delta,
                ..Default::default()
            })
            .collect(),
    }
}
