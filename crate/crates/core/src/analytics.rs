//! Closed-form thresholds, limiting breakdown probabilities and the
//! finite-size approximation of the breakdown probability.
//!
//! Node counts are taken as `f64` so that a Poisson intensity can be passed
//! in place of `n`.

use std::f64::consts::PI;

use crate::connmodel::{rayleigh_c, ConnectionModel};
use crate::error::{Error, Result};

fn kappa(epsilon: f64) -> f64 {
    1.0 - epsilon
}

/// Connection length scale at which the fault-model breakdown probability
/// tends to `1 - exp(-kappa e^-b)`: `sqrt((ln n + b) / (C kappa n))`.
pub fn critical_radius(n: f64, c: f64, b: f64, epsilon: f64) -> Result<f64> {
    let log_term = n.ln() + b;
    if !(log_term > 0.0) {
        return Err(Error::invalid(
            "b",
            format!("ln n + b must be positive, got {log_term}"),
        ));
    }
    Ok((log_term / (c * kappa(epsilon) * n)).sqrt())
}

/// Limiting breakdown probability `1 - exp(-kappa e^-b)`.
pub fn asymptotic_breakdown(b: f64, epsilon: f64) -> f64 {
    -(-kappa(epsilon) * (-b).exp()).exp_m1()
}

/// Rayleigh threshold `beta* = (C_eta kappa n / ln n)^(eta/2)`: larger
/// `beta` (lower transmit power) disconnects the surviving network.
pub fn beta_threshold(n: f64, eta: f64, epsilon: f64) -> f64 {
    (rayleigh_c(eta) * kappa(epsilon) * n / n.ln()).powf(0.5 * eta)
}

/// Fault-rate threshold `1 - (ln n / (C_eta n)) beta^(2/eta)`. Negative
/// values mean the network is below threshold even without faults.
pub fn epsilon_threshold(n: f64, eta: f64, beta: f64) -> f64 {
    1.0 - n.ln() / (rayleigh_c(eta) * n) * beta.powf(2.0 / eta)
}

/// Fault-rate threshold for any connection function at length scale
/// `r_n`: `1 - ln n / (C n r_n^2)`. Reduces to [`epsilon_threshold`] for
/// the Rayleigh model, where `r_n = beta^(-1/eta)`.
pub fn epsilon_threshold_scaled(n: f64, c: f64, length_scale: f64) -> f64 {
    1.0 - n.ln() / (c * n * length_scale * length_scale)
}

/// Fault-rate threshold `1/d` for the scaling `r_n = sqrt(d ln n / (C n))`.
pub fn epsilon_threshold_cor1(d: f64) -> Result<f64> {
    if !(d >= 1.0) {
        return Err(Error::invalid("d", format!("must be >= 1, got {d}")));
    }
    Ok(1.0 / d)
}

/// `beta = pi (n / ln n)^(eta/2)`, the coupling used for the threshold
/// curve over the path-loss exponent.
pub fn threshold_curve_beta(n: f64, eta: f64) -> f64 {
    PI * (n / n.ln()).powf(0.5 * eta)
}

/// Threshold curve `1 - pi^(2/eta) / C_eta`, which is
/// [`epsilon_threshold`] at [`threshold_curve_beta`] for every `n`.
pub fn threshold_curve(eta: f64) -> f64 {
    1.0 - PI.powf(2.0 / eta) / rayleigh_c(eta)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryMode {
    /// Unit square with its boundary terms.
    SquareFull,
    /// Torus, or a square with boundary effects neglected: bulk term only.
    TorusBulkOnly,
}

/// Inputs of the approximation; `h0`, `h1` are moments of the scaled
/// connection function.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApproxInputs {
    pub n: f64,
    pub epsilon: f64,
    pub h0: f64,
    pub h1: f64,
    pub boundary: BoundaryMode,
}

impl ApproxInputs {
    pub fn from_model(
        n: f64,
        epsilon: f64,
        model: &ConnectionModel,
        boundary: BoundaryMode,
    ) -> Result<Self> {
        Ok(ApproxInputs {
            n,
            epsilon,
            h0: model.moment(0)?,
            h1: model.moment(1)?,
            boundary,
        })
    }
}

/// Contributions to the exponent. Each is an expected number of isolated
/// nodes in one region of the square.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExponentTerms {
    pub bulk: f64,
    pub edge: f64,
    pub corner: f64,
}

/// Exponent terms evaluated in log space so that `n` up to 1e8 and beyond
/// does not overflow intermediate products.
pub fn exponent_terms(inputs: &ApproxInputs) -> ExponentTerms {
    let k = kappa(inputs.epsilon);
    let kn_h1 = k * inputs.n * inputs.h1;
    let bulk = if k == 0.0 {
        0.0
    } else {
        (k.ln() + inputs.n.ln() - 2.0 * PI * kn_h1).exp()
    };
    let ln_h0 = inputs.h0.ln();
    let edge = (2f64.ln() - ln_h0 - PI * kn_h1).exp();
    let corner = (4f64.ln() - k.ln() - inputs.n.ln() - 2.0 * ln_h0 - 0.5 * PI * kn_h1).exp();
    ExponentTerms { bulk, edge, corner }
}

/// Approximate breakdown probability
/// `1 - exp(-[kappa n e^{-2 pi kappa n H1} + (2/H0) e^{-pi kappa n H1} + 4/(kappa n H0²) e^{-pi kappa n H1 / 2}])`,
/// keeping only the first term for [`BoundaryMode::TorusBulkOnly`].
pub fn approx_breakdown(inputs: &ApproxInputs) -> Result<f64> {
    if !(inputs.n > 0.0) {
        return Err(Error::invalid("n", "must be positive"));
    }
    if !(0.0..1.0).contains(&inputs.epsilon) {
        return Err(Error::invalid(
            "epsilon",
            format!("must lie in [0, 1), got {}", inputs.epsilon),
        ));
    }
    if !(inputs.h1 >= 0.0) {
        return Err(Error::invalid("h1", "must be nonnegative"));
    }
    let terms = exponent_terms(inputs);
    let exponent = match inputs.boundary {
        BoundaryMode::TorusBulkOnly => terms.bulk,
        BoundaryMode::SquareFull => {
            if !(inputs.h0 > 0.0 && inputs.h1 > 0.0) {
                return Err(Error::invalid(
                    "h0",
                    "moments must be positive when boundary terms are kept",
                ));
            }
            terms.bulk + terms.edge + terms.corner
        }
    };
    Ok(-(-exponent).exp_m1())
}

/// Bulk approximation for the Rayleigh model with `eta = 2` and
/// `beta = pi n / (2 ln n)`: `1 - exp(-kappa n^(1 - 2 kappa))`.
pub fn approx_breakdown_rayleigh_eta2(n: f64, epsilon: f64) -> f64 {
    let k = kappa(epsilon);
    -(-(k.ln() + (1.0 - 2.0 * k) * n.ln()).exp()).exp_m1()
}

/// The `eta = 2` coupling `beta = pi n / (2 ln n)`.
pub fn rayleigh_eta2_beta(n: f64) -> f64 {
    PI * n / (2.0 * n.ln())
}

/// Fault-free Rayleigh threshold `beta_c* = beta*(n, eta, 0)`; for `eta = 4`
/// this is `pi^3 n^2 / (4 ln^2 n)`.
pub fn critical_beta(n: f64, eta: f64) -> f64 {
    beta_threshold(n, eta, 0.0)
}

/// Bulk approximation for `eta = 4` at `beta = delta * beta_c*`:
/// `1 - exp(-kappa n^(1 - kappa / sqrt(delta)))`.
pub fn approx_breakdown_rayleigh_delta(n: f64, epsilon: f64, delta: f64) -> Result<f64> {
    if !(delta > 0.0) {
        return Err(Error::invalid(
            "delta",
            format!("must be positive, got {delta}"),
        ));
    }
    if !(n >= 2.0) {
        return Err(Error::invalid("n", "must be at least 2"));
    }
    let k = kappa(epsilon);
    Ok(-(-(k.ln() + (1.0 - k / delta.sqrt()) * n.ln()).exp()).exp_m1())
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyRow {
    pub n: f64,
    pub approx: f64,
    pub limit: f64,
    pub gap: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConsistencyReport {
    pub rows: Vec<ConsistencyRow>,
}

impl ConsistencyReport {
    /// Gaps strictly decrease along the given `n` schedule.
    pub fn strictly_decreasing(&self) -> bool {
        self.rows.windows(2).all(|w| w[1].gap < w[0].gap)
    }

    pub fn last_gap(&self) -> Option<f64> {
        self.rows.last().map(|r| r.gap)
    }
}

/// Evaluates the approximation at `r_n = sqrt((ln n + b)/(C kappa n))` for
/// the profile of `model` and compares it with the limit
/// `1 - exp(-kappa e^-b)`.
pub fn asymptotic_consistency_check(
    n_list: &[f64],
    model: &ConnectionModel,
    b: f64,
    epsilon: f64,
    boundary: BoundaryMode,
) -> Result<ConsistencyReport> {
    let unit = model.unscaled();
    let c = unit.constant_c()?;
    let (h0_unit, h1_unit) = (unit.moment(0)?, unit.moment(1)?);
    let limit = asymptotic_breakdown(b, epsilon);
    let rows = n_list
        .iter()
        .map(|&n| {
            if !(n >= 2.0) {
                return Err(Error::invalid("n", format!("must be at least 2, got {n}")));
            }
            let r = critical_radius(n, c, b, epsilon)?;
            let approx = approx_breakdown(&ApproxInputs {
                n,
                epsilon,
                h0: r * h0_unit,
                h1: r * r * h1_unit,
                boundary,
            })?;
            Ok(ConsistencyRow {
                n,
                approx,
                limit,
                gap: (approx - limit).abs(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ConsistencyReport { rows })
}
