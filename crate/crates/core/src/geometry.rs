//! Point processes on the unit square and planar/toroidal distances.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rand_distr::{Distribution, Poisson};

use crate::error::{Error, Result};

/// A location in the half-open unit square `[0,1)²`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point {
    x: f64,
    y: f64,
}

impl Point {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        let inside = |v: f64| (0.0..1.0).contains(&v);
        if !inside(x) || !inside(y) {
            return Err(Error::invalid(
                "point",
                format!("({x}, {y}) lies outside [0,1)^2"),
            ));
        }
        Ok(Point { x, y })
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        // `random::<f64>()` is uniform on [0,1).
        Point {
            x: rng.random(),
            y: rng.random(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Metric {
    /// Euclidean distance inside the unit square.
    #[default]
    PlanarSquare,
    /// Unit square with opposite edges identified.
    Torus,
}

impl Metric {
    /// Squared distance; the hot loops compare against squared radii.
    #[inline]
    pub fn distance_sq(self, a: &Point, b: &Point) -> f64 {
        let mut dx = (a.x - b.x).abs();
        let mut dy = (a.y - b.y).abs();
        if self == Metric::Torus {
            dx = dx.min(1.0 - dx);
            dy = dy.min(1.0 - dy);
        }
        dx * dx + dy * dy
    }

    #[inline]
    pub fn distance(self, a: &Point, b: &Point) -> f64 {
        self.distance_sq(a, b).sqrt()
    }

    /// Largest distance realisable between two points.
    pub fn diameter(self) -> f64 {
        match self {
            Metric::PlanarSquare => std::f64::consts::SQRT_2,
            Metric::Torus => std::f64::consts::FRAC_1_SQRT_2,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Metric::PlanarSquare => "square",
            Metric::Torus => "torus",
        }
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Metric {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "square" | "planar" => Ok(Metric::PlanarSquare),
            "torus" => Ok(Metric::Torus),
            other => Err(Error::invalid(
                "metric",
                format!("expected `square` or `torus`, got `{other}`"),
            )),
        }
    }
}

pub fn distance(a: &Point, b: &Point, metric: Metric) -> f64 {
    metric.distance(a, b)
}

/// Immutable node positions together with the metric used to measure them.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    metric: Metric,
}

impl PointSet {
    pub fn new(points: Vec<Point>, metric: Metric) -> Self {
        PointSet { points, metric }
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn metric(&self) -> Metric {
        self.metric
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// Subset of the points selected by `keep`, in original order.
    pub fn retain_indices(&self, keep: &[usize]) -> PointSet {
        PointSet {
            points: keep.iter().map(|&i| self.points[i]).collect(),
            metric: self.metric,
        }
    }

    pub fn into_points(self) -> Vec<Point> {
        self.points
    }
}

/// `n` independent uniform points.
pub fn sample_uniform<R: Rng + ?Sized>(n: usize, metric: Metric, rng: &mut R) -> Result<PointSet> {
    if n == 0 {
        return Err(Error::invalid(
            "n",
            "the uniform process needs at least one node",
        ));
    }
    Ok(PointSet::new(uniform_points(n, rng), metric))
}

/// Poisson point process of intensity `density` on the unit square: the
/// count is drawn first, then the positions.
pub fn sample_poisson<R: Rng + ?Sized>(
    density: f64,
    metric: Metric,
    rng: &mut R,
) -> Result<PointSet> {
    if !(density > 0.0 && density.is_finite()) {
        return Err(Error::invalid(
            "density",
            format!("must be a positive finite number, got {density}"),
        ));
    }
    let count = Poisson::new(density)
        .map_err(|e| Error::invalid("density", e.to_string()))?
        .sample(rng) as usize;
    Ok(PointSet::new(uniform_points(count, rng), metric))
}

fn uniform_points<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<Point> {
    (0..n).map(|_| Point::sample(rng)).collect()
}
