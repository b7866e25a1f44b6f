//! Connection functions, their moments and the integral constant `C`.
//!
//! Every model is a rotationally invariant profile `g` evaluated at
//! `r / r_n`. For the Rayleigh model the scale is folded into `beta`, i.e.
//! `g(r) = exp(-beta * r^eta)`, and the unscaled profile is `beta = 1`.

use std::f64::consts::PI;
use std::fmt;
use std::fs;
use std::path::Path;

use statrs::function::gamma::gamma;

use crate::error::{Error, Result};
use crate::quadrature::{integrate, integrate_half_line, Tolerance};

/// Tabulated base profile `g(x)` on knots `0 = x_0 < x_1 < ... < x_k`,
/// linearly interpolated and zero beyond `x_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedProfile {
    xs: Vec<f64>,
    gs: Vec<f64>,
}

impl TabulatedProfile {
    /// Builds a profile from knots. Only the shape of the table is checked
    /// here; monotonicity and range violations are left for
    /// [`ConnectionModel::validate_conditions`] to report.
    pub fn new(xs: Vec<f64>, gs: Vec<f64>) -> Result<Self> {
        if xs.len() != gs.len() {
            return Err(Error::invalid(
                "profile",
                "abscissae and values differ in length",
            ));
        }
        if xs.len() < 2 {
            return Err(Error::invalid("profile", "need at least two knots"));
        }
        if xs[0] != 0.0 {
            return Err(Error::invalid("profile", "first abscissa must be 0"));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) || xs.iter().any(|x| !x.is_finite()) {
            return Err(Error::invalid(
                "profile",
                "abscissae must be finite and strictly increasing",
            ));
        }
        if gs.iter().any(|g| !g.is_finite()) {
            return Err(Error::invalid("profile", "values must be finite"));
        }
        Ok(TabulatedProfile { xs, gs })
    }

    /// Reads the two-column `r g(r)` text format; `#` starts a comment.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path)?;
        Self::parse(&text).map_err(|(line, message)| Error::Parse {
            path: path.to_path_buf(),
            line,
            message,
        })
    }

    fn parse(text: &str) -> std::result::Result<Self, (usize, String)> {
        let mut xs = Vec::new();
        let mut gs = Vec::new();
        let mut last_line = 0;
        for (idx, raw) in text.lines().enumerate() {
            last_line = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err((
                    idx + 1,
                    format!("expected two columns, found {}", fields.len()),
                ));
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|e| (idx + 1, format!("`{s}`: {e}")))
            };
            xs.push(parse(fields[0])?);
            gs.push(parse(fields[1])?);
        }
        TabulatedProfile::new(xs, gs).map_err(|e| (last_line, e.to_string()))
    }

    pub fn knots(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.gs.iter().copied())
    }

    /// Last abscissa; the profile vanishes beyond it.
    pub fn extent(&self) -> f64 {
        *self.xs.last().expect("non-empty table")
    }

    pub fn eval(&self, x: f64) -> f64 {
        let last = self.xs.len() - 1;
        if x > self.xs[last] {
            return 0.0;
        }
        if x >= self.xs[last] {
            return self.gs[last].clamp(0.0, 1.0);
        }
        // First knot strictly greater than x.
        let hi = self.xs.partition_point(|&k| k <= x);
        let lo = hi - 1;
        let t = (x - self.xs[lo]) / (self.xs[hi] - self.xs[lo]);
        (self.gs[lo] + t * (self.gs[hi] - self.gs[lo])).clamp(0.0, 1.0)
    }

    /// `∫_0^∞ g(x) x^m dx`, integrated segment by segment.
    fn moment(&self, m: u32) -> f64 {
        self.xs
            .windows(2)
            .map(|w| {
                integrate(
                    |x| self.eval(x) * x.powi(m as i32),
                    w[0],
                    w[1],
                    Tolerance::default(),
                )
                .value
            })
            .sum()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConnectionModel {
    /// Connect iff `r <= range`.
    HardDisk { range: f64 },
    /// Rayleigh-fading SISO link: `g(r) = exp(-beta r^eta)`.
    RayleighSiso {
        beta: f64,
        eta: f64,
        /// `(snr_threshold, beta0)` when the model was built from link
        /// parameters, with `beta = snr_threshold * beta0`.
        link: Option<(f64, f64)>,
    },
    /// Tabulated profile rescaled to `g(r / scale)`.
    Rescaled {
        profile: TabulatedProfile,
        scale: f64,
    },
}

fn positive(name: &'static str, v: f64) -> Result<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(Error::invalid(
            name,
            format!("must be positive and finite, got {v}"),
        ))
    }
}

impl ConnectionModel {
    pub fn hard_disk(range: f64) -> Result<Self> {
        Ok(ConnectionModel::HardDisk {
            range: positive("range", range)?,
        })
    }

    pub fn rayleigh(beta: f64, eta: f64) -> Result<Self> {
        if !(eta >= 1.0 && eta.is_finite()) {
            return Err(Error::invalid(
                "eta",
                format!("path-loss exponent must be >= 1, got {eta}"),
            ));
        }
        Ok(ConnectionModel::RayleighSiso {
            beta: positive("beta", beta)?,
            eta,
            link: None,
        })
    }

    /// Rayleigh model from an SNR threshold and the transmit-power
    /// parameter `beta0`.
    pub fn rayleigh_from_link(snr_threshold: f64, beta0: f64, eta: f64) -> Result<Self> {
        let theta = positive("snr_threshold", snr_threshold)?;
        let beta0 = positive("beta0", beta0)?;
        match Self::rayleigh(theta * beta0, eta)? {
            ConnectionModel::RayleighSiso { beta, eta, .. } => Ok(ConnectionModel::RayleighSiso {
                beta,
                eta,
                link: Some((theta, beta0)),
            }),
            _ => unreachable!(),
        }
    }

    pub fn rescaled(profile: TabulatedProfile, scale: f64) -> Result<Self> {
        Ok(ConnectionModel::Rescaled {
            profile,
            scale: positive("scale", scale)?,
        })
    }

    /// Same profile at unit scale (`range = 1`, `beta = 1`, `scale = 1`).
    pub fn unscaled(&self) -> ConnectionModel {
        match self {
            ConnectionModel::HardDisk { .. } => ConnectionModel::HardDisk { range: 1.0 },
            ConnectionModel::RayleighSiso { eta, .. } => ConnectionModel::RayleighSiso {
                beta: 1.0,
                eta: *eta,
                link: None,
            },
            ConnectionModel::Rescaled { profile, .. } => ConnectionModel::Rescaled {
                profile: profile.clone(),
                scale: 1.0,
            },
        }
    }

    /// Connection probability at distance `r`.
    pub fn connect_probability(&self, r: f64) -> Result<f64> {
        if !(r >= 0.0) {
            return Err(Error::invalid(
                "r",
                format!("distance must be nonnegative, got {r}"),
            ));
        }
        Ok(self.g(r))
    }

    /// Unchecked evaluation at a nonnegative distance.
    #[inline]
    pub fn g(&self, r: f64) -> f64 {
        match self {
            ConnectionModel::HardDisk { range } => {
                if r <= *range {
                    1.0
                } else {
                    0.0
                }
            }
            ConnectionModel::RayleighSiso { beta, eta, .. } => (-beta * r.powf(*eta)).exp(),
            ConnectionModel::Rescaled { profile, scale } => profile.eval(r / scale),
        }
    }

    /// Evaluation from a squared distance, avoiding the square root where
    /// the profile allows it.
    #[inline]
    pub fn g_from_sq(&self, d2: f64) -> f64 {
        match self {
            ConnectionModel::HardDisk { range } => {
                if d2 <= range * range {
                    1.0
                } else {
                    0.0
                }
            }
            ConnectionModel::RayleighSiso { beta, eta, .. } => {
                let pow = if *eta == 2.0 {
                    d2
                } else if *eta == 4.0 {
                    d2 * d2
                } else {
                    d2.powf(0.5 * eta)
                };
                (-beta * pow).exp()
            }
            ConnectionModel::Rescaled { .. } => self.g(d2.sqrt()),
        }
    }

    /// Length scale `r_n` of the model, so that `g(r) = g_unit(r / r_n)`.
    pub fn length_scale(&self) -> f64 {
        match self {
            ConnectionModel::HardDisk { range } => *range,
            ConnectionModel::RayleighSiso { beta, eta, .. } => beta.powf(-1.0 / eta),
            ConnectionModel::Rescaled { scale, .. } => *scale,
        }
    }

    /// Whether `g` only takes the values 0 and 1.
    pub fn is_deterministic(&self) -> bool {
        matches!(self, ConnectionModel::HardDisk { .. })
    }

    /// Radius beyond which `g` vanishes identically, if any.
    pub fn support_radius(&self) -> Option<f64> {
        match self {
            ConnectionModel::HardDisk { range } => Some(*range),
            ConnectionModel::RayleighSiso { .. } => None,
            ConnectionModel::Rescaled { profile, scale } => Some(profile.extent() * scale),
        }
    }

    /// Smallest radius `r` with `g(r) <= level`, for `level` in `(0, 1)`.
    pub fn radius_at_level(&self, level: f64) -> f64 {
        debug_assert!(level > 0.0 && level < 1.0);
        match self {
            ConnectionModel::HardDisk { range } => *range,
            ConnectionModel::RayleighSiso { beta, eta, .. } => {
                ((1.0 / level).ln() / beta).powf(1.0 / eta)
            }
            ConnectionModel::Rescaled { profile, scale } => {
                // Non-increasing profiles cross the level once; for others the
                // last crossing keeps every point with g > level inside.
                let mut last_above = 0.0;
                let xs: Vec<(f64, f64)> = profile.knots().collect();
                for w in xs.windows(2) {
                    let ((x0, g0), (x1, g1)) = (w[0], w[1]);
                    let (g0, g1) = (g0.clamp(0.0, 1.0), g1.clamp(0.0, 1.0));
                    if g0 > level || g1 > level {
                        last_above = if g1 > level {
                            x1
                        } else {
                            x0 + (g0 - level) / (g0 - g1) * (x1 - x0)
                        };
                    }
                }
                last_above * scale
            }
        }
    }

    /// `H_m = ∫_0^∞ g(r) r^m dr` of this (scaled) model.
    pub fn moment(&self, m: u32) -> Result<f64> {
        match self {
            ConnectionModel::HardDisk { range } => Ok(range.powi(m as i32 + 1) / f64::from(m + 1)),
            ConnectionModel::RayleighSiso { beta, eta, .. } => {
                let a = f64::from(m + 1) / eta;
                Ok(gamma(a) / (eta * beta.powf(a)))
            }
            ConnectionModel::Rescaled { profile, scale } => {
                Ok(scale.powi(m as i32 + 1) * profile.moment(m))
            }
        }
    }

    /// `H_m` by adaptive quadrature of the profile, independent of the
    /// closed forms used by [`moment`](Self::moment).
    pub fn moment_by_quadrature(&self, m: u32) -> Result<f64> {
        let tol = Tolerance::default();
        let integrand = |r: f64| self.g(r) * r.powi(m as i32);
        match self {
            ConnectionModel::HardDisk { range } => Ok(integrate(integrand, 0.0, *range, tol).value),
            ConnectionModel::RayleighSiso { beta, eta, .. } => {
                let scale = beta.powf(-1.0 / eta);
                Ok(integrate_half_line(integrand, scale, tol)?.value)
            }
            ConnectionModel::Rescaled { profile, scale } => {
                let knots: Vec<f64> = profile.knots().map(|(x, _)| x * scale).collect();
                Ok(knots
                    .windows(2)
                    .map(|w| integrate(integrand, w[0], w[1], tol).value)
                    .sum())
            }
        }
    }

    pub fn moments(&self) -> Result<MomentTable> {
        Ok(MomentTable {
            h0: self.moment(0)?,
            h1: self.moment(1)?,
            c: self.constant_c()?,
        })
    }

    /// `C = ∫_{R²} g(‖x‖) dx` of the unscaled profile.
    pub fn constant_c(&self) -> Result<f64> {
        match self {
            ConnectionModel::HardDisk { .. } => Ok(PI),
            ConnectionModel::RayleighSiso { eta, .. } => Ok(rayleigh_c(*eta)),
            ConnectionModel::Rescaled { .. } => {
                let c = 2.0 * PI * self.unscaled().moment(1)?;
                if c > 0.0 && c.is_finite() {
                    Ok(c)
                } else {
                    Err(Error::DivergentIntegral(format!(
                        "C = {c} is not a positive finite number"
                    )))
                }
            }
        }
    }

    /// Checks the standing assumptions on `g`. Values must lie in `[0,1]`
    /// and not increase; `C` must be finite and positive; the tail must
    /// satisfy `g(x) = o(1/(x² ln² x))`.
    pub fn validate_conditions(&self) -> ConditionReport {
        let mut checks = Vec::new();

        let (grid_end, raw_knots): (f64, Vec<(f64, f64)>) = match self {
            ConnectionModel::HardDisk { range } => (2.0 * range, Vec::new()),
            ConnectionModel::RayleighSiso { .. } => (self.radius_at_level(1e-12), Vec::new()),
            ConnectionModel::Rescaled { profile, scale } => (
                1.5 * profile.extent() * scale,
                profile.knots().map(|(x, g)| (x * scale, g)).collect(),
            ),
        };
        let grid: Vec<(f64, f64)> = (0..=GRID_POINTS)
            .map(|i| {
                let r = grid_end * i as f64 / GRID_POINTS as f64;
                (r, self.g(r))
            })
            .collect();

        let out_of_range = raw_knots
            .iter()
            .chain(grid.iter())
            .find(|(_, g)| !(0.0..=1.0).contains(g));
        checks.push(Check {
            name: "range",
            status: match out_of_range {
                None => Status::Pass,
                Some((r, g)) => Status::Fail(format!("g({r}) = {g} outside [0,1]")),
            },
        });

        let increase = raw_knots
            .windows(2)
            .chain(grid.windows(2))
            .find(|w| w[1].1 > w[0].1);
        checks.push(Check {
            name: "monotone",
            status: match increase {
                None => Status::Pass,
                Some(w) => Status::Fail(format!(
                    "g({}) = {} < g({}) = {}",
                    w[0].0, w[0].1, w[1].0, w[1].1
                )),
            },
        });

        checks.push(Check {
            name: "integrable",
            status: match self.constant_c() {
                Ok(c) if c > 0.0 && c.is_finite() => Status::Pass,
                Ok(c) => Status::Fail(format!("C = {c}")),
                Err(e) => Status::Fail(e.to_string()),
            },
        });

        checks.push(Check {
            name: "decay",
            status: match self {
                ConnectionModel::HardDisk { .. } | ConnectionModel::RayleighSiso { .. } => Status::Pass,
                ConnectionModel::Rescaled { .. } => Status::Unverified(
                    "tabulated profile is taken as zero beyond its last knot; the true tail is unknown".into(),
                ),
            },
        });

        ConditionReport { checks }
    }
}

const GRID_POINTS: usize = 2000;

/// `C_η = (2π/η) Γ(2/η)`.
pub fn rayleigh_c(eta: f64) -> f64 {
    2.0 * PI / eta * gamma(2.0 / eta)
}

impl fmt::Display for ConnectionModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnectionModel::HardDisk { range } => write!(f, "hard-disk(range={range})"),
            ConnectionModel::RayleighSiso { beta, eta, .. } => {
                write!(f, "rayleigh(beta={beta}, eta={eta})")
            }
            ConnectionModel::Rescaled { profile, scale } => {
                write!(f, "table({} knots, scale={scale})", profile.xs.len())
            }
        }
    }
}

/// `H0`, `H1` of the scaled model and `C` of the unscaled profile.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentTable {
    pub h0: f64,
    pub h1: f64,
    pub c: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Status {
    Pass,
    Fail(String),
    Unverified(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub status: Status,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConditionReport {
    pub checks: Vec<Check>,
}

impl ConditionReport {
    /// No check failed (unverified checks do not count as failures).
    pub fn passed(&self) -> bool {
        !self
            .checks
            .iter()
            .any(|c| matches!(c.status, Status::Fail(_)))
    }

    pub fn get(&self, name: &str) -> Option<&Status> {
        self.checks
            .iter()
            .find(|c| c.name == name)
            .map(|c| &c.status)
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for check in &self.checks {
            match &check.status {
                Status::Pass => writeln!(f, "{:<11} pass", check.name)?,
                Status::Fail(why) => writeln!(f, "{:<11} FAIL  {why}", check.name)?,
                Status::Unverified(why) => writeln!(f, "{:<11} unverified  {why}", check.name)?,
            }
        }
        Ok(())
    }
}
