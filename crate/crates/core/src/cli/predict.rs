//! Analytic predictions for each point of a sweep.

use std::fmt;

use super::csvio::{format_sig10, ResultRow};
use super::plan::{ExperimentPlan, ModelKind};
use crate::analytics::{
    beta_threshold, critical_radius, epsilon_threshold_cor1, epsilon_threshold_scaled,
};
use crate::connmodel::ConnectionModel;
use crate::error::Result;

/// Thresholds and the approximate breakdown probability at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct Prediction {
    pub model: String,
    pub c: f64,
    pub h0: f64,
    pub h1: f64,
    /// Critical length scale at `b = 0`.
    pub r_star: f64,
    /// Rayleigh only: `beta*` at the point's fault rate and at zero faults.
    pub beta_star: Option<f64>,
    pub beta_c_star: Option<f64>,
    /// Fault-rate threshold for the point's connection function.
    pub epsilon_star: f64,
    /// `1/d` threshold, when `d` is given.
    pub epsilon_star_d: Option<f64>,
    pub row: ResultRow,
}

impl fmt::Display for Prediction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let r = &self.row;
        write!(f, "n={} model={}", r.n, self.model)?;
        if let Some(e) = r.epsilon {
            write!(f, " epsilon={}", format_sig10(e))?;
        }
        if let Some(d) = r.delta {
            write!(f, " delta={}", format_sig10(d))?;
        }
        write!(
            f,
            " C={} H0={} H1={} r_star={}",
            format_sig10(self.c),
            format_sig10(self.h0),
            format_sig10(self.h1),
            format_sig10(self.r_star)
        )?;
        if let Some(b) = self.beta_star {
            write!(f, " beta_star={}", format_sig10(b))?;
        }
        if let Some(b) = self.beta_c_star {
            write!(f, " beta_c_star={}", format_sig10(b))?;
        }
        write!(f, " epsilon_star={}", format_sig10(self.epsilon_star))?;
        if let Some(e) = self.epsilon_star_d {
            write!(f, " epsilon_star_d={}", format_sig10(e))?;
        }
        if let Some(p) = r.p_approx {
            write!(f, " p_approx={}", format_sig10(p))?;
        }
        Ok(())
    }
}

/// Predictions for every sweep point of `plan`, in sweep order.
pub fn predict_plan(plan: &ExperimentPlan, d: Option<f64>) -> Result<Vec<Prediction>> {
    plan.validate()?;
    let epsilon_star_d = d.map(epsilon_threshold_cor1).transpose()?;
    let mut out = Vec::new();
    for point in plan.points() {
        let model = plan.model_at(&point)?;
        let moments = model.moments()?;
        let nf = point.n as f64;
        let rayleigh = matches!(plan.model, ModelKind::Rayleigh);
        let beta = plan.beta_at(&point);
        let row = ResultRow {
            n: point.n,
            eta: rayleigh.then_some(point.eta),
            beta,
            delta: point.delta,
            epsilon: Some(point.epsilon),
            metric: Some(plan.metric),
            p_approx: plan.approximation(point.n, point.eta, point.delta, point.epsilon)?,
            ..Default::default()
        };
        out.push(Prediction {
            model: model_name(&model),
            c: moments.c,
            h0: moments.h0,
            h1: moments.h1,
            r_star: critical_radius(nf, model.constant_c()?, 0.0, point.epsilon)?,
            beta_star: rayleigh.then(|| beta_threshold(nf, point.eta, point.epsilon)),
            beta_c_star: rayleigh.then(|| beta_threshold(nf, point.eta, 0.0)),
            epsilon_star: epsilon_threshold_scaled(nf, model.constant_c()?, model.length_scale()),
            epsilon_star_d,
            row,
        });
    }
    Ok(out)
}

fn model_name(model: &ConnectionModel) -> String {
    match model {
        ConnectionModel::HardDisk { .. } => "hard-disk".into(),
        ConnectionModel::RayleighSiso { .. } => "rayleigh".into(),
        ConnectionModel::Rescaled { .. } => "table".into(),
    }
}
