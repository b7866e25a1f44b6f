//! Connectivity of random geometric graphs with general connection
//! functions under independent node faults.
//!
//! * [`geometry`]: point processes on the unit square with planar or
//!   toroidal distance.
//! * [`connmodel`]: connection functions with their moments `H_m` and the
//!   constant `C`.
//! * [`graphcore`]: edge sampling and union-find connectivity.
//! * [`faultsim`]: Monte Carlo estimates of the network breakdown
//!   probability.
//! * [`analytics`]: thresholds and approximation formulas.
//! * [`cli`]: experiment plans and CSV output.

// `!(x > 0.0)` style checks are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analytics;
pub mod cli;
pub mod connmodel;
pub mod error;
pub mod exec;
pub mod faultsim;
pub mod geometry;
pub mod graphcore;
pub mod quadrature;
pub mod rng;
pub mod stats;

pub use connmodel::{ConnectionModel, MomentTable, TabulatedProfile};
pub use error::{Error, Result};
pub use exec::Execution;
pub use faultsim::{
    BreakdownEstimate, DeltaRule, FaultModel, Lemma1Bounds, PointProcess, Simulation,
};
pub use geometry::{Metric, Point, PointSet};
pub use graphcore::{ConnectivityVerdict, GraphInstance, Truncation};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
