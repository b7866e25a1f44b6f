//! Edge sampling. Each unordered pair at distance `d` carries an edge
//! independently with probability `g(d)`.
//!
//! The connectivity path streams pair decisions into a union-find and never
//! materialises edges. A pair whose endpoints already share a component
//! cannot change the partition, so it is skipped without drawing; the
//! remaining draws are still independent Bernoulli variables with the right
//! probabilities. Pairs are visited short-range first so components form
//! early and most long-range pairs are skipped.

use rand::Rng;

use super::grid::CellGrid;
use super::{ConnectivityVerdict, GraphInstance, GraphMeta, UnionFind};
use crate::connmodel::ConnectionModel;
use crate::geometry::{Metric, Point};

/// Pair-candidate truncation for connection functions with unbounded
/// support.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum Truncation {
    /// Every pair is considered.
    #[default]
    Exact,
    /// Skip pairs beyond the smallest radius `r` with `(s²/2) g(r) <= tau`,
    /// so the expected number of missed edges is at most `tau`.
    MissedEdges(f64),
}

// Pairs with g above this level are decided in the first, short-range pass.
const CORE_LEVEL: f64 = 0.2;

/// Radius beyond which pairs are never considered for `s` nodes;
/// `f64::INFINITY` means all pairs.
pub fn candidate_radius(
    model: &ConnectionModel,
    metric: Metric,
    s: usize,
    truncation: Truncation,
) -> f64 {
    let radius = match (model.support_radius(), truncation) {
        (Some(support), _) => support,
        (None, Truncation::Exact) => f64::INFINITY,
        (None, Truncation::MissedEdges(tau)) if tau <= 0.0 => f64::INFINITY,
        (None, Truncation::MissedEdges(tau)) => {
            let half_pairs = 0.5 * (s as f64) * (s as f64);
            let level = tau / half_pairs;
            if level >= 1.0 {
                0.0
            } else {
                model.radius_at_level(level)
            }
        }
    };
    if radius >= metric.diameter() {
        f64::INFINITY
    } else {
        radius
    }
}

#[inline]
fn edge_present<R: Rng + ?Sized>(g: f64, rng: &mut R) -> bool {
    if g >= 1.0 {
        true
    } else if g <= 0.0 {
        false
    } else {
        rng.random::<f64>() < g
    }
}

/// Samples the graph on `points` and reports its connectivity without
/// storing edges.
pub fn sample_connectivity<R: Rng + ?Sized>(
    points: &[Point],
    metric: Metric,
    model: &ConnectionModel,
    truncation: Truncation,
    rng: &mut R,
) -> ConnectivityVerdict {
    let n = points.len();
    let mut uf = UnionFind::new(n);
    if n <= 1 {
        return ConnectivityVerdict::from_forest(&mut uf);
    }
    let cut = candidate_radius(model, metric, n, truncation);
    let core = if model.is_deterministic() {
        cut
    } else {
        cut.min(model.radius_at_level(CORE_LEVEL))
    };
    let core_sq = core * core;

    // Short-range pass.
    let grid = CellGrid::new(points, metric, core);
    grid.for_each_near_pair(|i, j| {
        let d2 = metric.distance_sq(&points[i], &points[j]);
        if d2 <= core_sq {
            let (ri, rj) = (uf.find(i), uf.find(j));
            if ri != rj && edge_present(model.g_from_sq(d2), rng) {
                uf.link_roots(ri, rj);
            }
        }
        uf.components() > 1
    });

    if uf.components() > 1 && cut > core {
        long_range_pass(points, metric, model, core_sq, cut, &mut uf, rng);
    }
    ConnectivityVerdict::from_forest(&mut uf)
}

/// Decides the pairs with `core < d <= cut`. Only pairs touching a node
/// outside the largest component can join different components, so those
/// are the only ones visited.
fn long_range_pass<R: Rng + ?Sized>(
    points: &[Point],
    metric: Metric,
    model: &ConnectionModel,
    core_sq: f64,
    cut: f64,
    uf: &mut UnionFind,
    rng: &mut R,
) {
    let n = points.len();
    let giant = uf.largest_root().expect("non-empty");
    let outside: Vec<bool> = (0..n).map(|i| uf.find(i) != giant).collect();
    let stragglers: Vec<usize> = (0..n).filter(|&i| outside[i]).collect();
    let cut_sq = cut * cut;

    let mut consider = |i: usize, j: usize, uf: &mut UnionFind| {
        // Pairs with both ends outside the giant are visited from the
        // smaller index only.
        if j == i || (outside[j] && j < i) {
            return;
        }
        let (ri, rj) = (uf.find(i), uf.find(j));
        if ri == rj {
            return;
        }
        let d2 = metric.distance_sq(&points[i], &points[j]);
        if d2 > core_sq && d2 <= cut_sq && edge_present(model.g_from_sq(d2), rng) {
            uf.link_roots(ri, rj);
        }
    };

    if cut.is_finite() {
        let grid = CellGrid::new(points, metric, cut);
        for &i in &stragglers {
            grid.for_each_neighbour_candidate(i, |j| consider(i, j, uf));
            if uf.components() == 1 {
                return;
            }
        }
    } else {
        for &i in &stragglers {
            for j in 0..n {
                consider(i, j, uf);
            }
            if uf.components() == 1 {
                return;
            }
        }
    }
}

/// Samples and stores every edge among `points`.
pub fn sample_graph<R: Rng + ?Sized>(
    points: &[Point],
    metric: Metric,
    model: &ConnectionModel,
    truncation: Truncation,
    rng: &mut R,
) -> GraphInstance {
    let n = points.len();
    let cut = candidate_radius(model, metric, n, truncation);
    let cut_sq = cut * cut;
    let mut edges = Vec::new();
    CellGrid::new(points, metric, cut).for_each_near_pair(|i, j| {
        let d2 = metric.distance_sq(&points[i], &points[j]);
        if d2 <= cut_sq && edge_present(model.g_from_sq(d2), rng) {
            edges.push((i.min(j) as u32, i.max(j) as u32));
        }
        true
    });
    edges.sort_unstable();
    GraphInstance {
        node_count: n,
        edges,
        meta: GraphMeta {
            model: model.to_string(),
            seed: None,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graphcore::is_connected;
    use crate::rng::{Purpose, Substreams};

    fn pts(coords: &[(f64, f64)]) -> Vec<Point> {
        coords
            .iter()
            .map(|&(x, y)| Point::new(x, y).unwrap())
            .collect()
    }

    #[test]
    fn hard_disk_collinear_triangle() {
        let p = pts(&[(0.1, 0.5), (0.2, 0.5), (0.15, 0.5 + 0.1 * 0.75f64.sqrt())]);
        let hd = ConnectionModel::hard_disk(0.2).unwrap();
        let mut rng = Substreams::new(0).stream(Purpose::Edges, 0);
        let g = sample_graph(&p, Metric::PlanarSquare, &hd, Truncation::Exact, &mut rng);
        assert_eq!(g.edges, vec![(0, 1), (0, 2), (1, 2)]);
    }

    #[test]
    fn hard_disk_far_pair() {
        let p = pts(&[(0.05, 0.5), (0.95, 0.5)]);
        let hd = ConnectionModel::hard_disk(0.2).unwrap();
        let mut rng = Substreams::new(0).stream(Purpose::Edges, 0);
        let g = sample_graph(&p, Metric::PlanarSquare, &hd, Truncation::Exact, &mut rng);
        assert!(g.edges.is_empty());
        let g = sample_graph(&p, Metric::Torus, &hd, Truncation::Exact, &mut rng);
        assert_eq!(g.edges, vec![(0, 1)]);
    }

    #[test]
    fn hard_disk_ignores_rng() {
        let s = Substreams::new(4);
        let p =
            crate::geometry::sample_uniform(200, Metric::Torus, &mut s.stream(Purpose::Points, 0))
                .unwrap()
                .into_points();
        let hd = ConnectionModel::hard_disk(0.1).unwrap();
        let a = sample_graph(
            &p,
            Metric::Torus,
            &hd,
            Truncation::Exact,
            &mut s.stream(Purpose::Edges, 1),
        );
        let b = sample_graph(
            &p,
            Metric::Torus,
            &hd,
            Truncation::Exact,
            &mut s.stream(Purpose::Edges, 2),
        );
        assert_eq!(a, b);
        let va = sample_connectivity(
            &p,
            Metric::Torus,
            &hd,
            Truncation::Exact,
            &mut s.stream(Purpose::Edges, 1),
        );
        assert_eq!(va, is_connected(&a));
    }

    #[test]
    fn truncation_radius_rule() {
        let ray = ConnectionModel::rayleigh(100.0, 2.0).unwrap();
        let r = candidate_radius(&ray, Metric::Torus, 1000, Truncation::MissedEdges(1e-4));
        let missed = 0.5 * 1000.0 * 1000.0 * ray.g(r);
        assert!((missed - 1e-4).abs() < 1e-12);
        assert_eq!(
            candidate_radius(&ray, Metric::Torus, 1000, Truncation::Exact),
            f64::INFINITY
        );
        let hd = ConnectionModel::hard_disk(0.3).unwrap();
        assert_eq!(
            candidate_radius(&hd, Metric::Torus, 10, Truncation::Exact),
            0.3
        );
        let wide = ConnectionModel::hard_disk(2.0).unwrap();
        assert_eq!(
            candidate_radius(&wide, Metric::Torus, 10, Truncation::Exact),
            f64::INFINITY
        );
    }

    #[test]
    fn single_and_empty_sets_are_connected() {
        let ray = ConnectionModel::rayleigh(100.0, 2.0).unwrap();
        let mut rng = Substreams::new(0).stream(Purpose::Edges, 0);
        assert!(
            sample_connectivity(&[], Metric::Torus, &ray, Truncation::Exact, &mut rng).connected
        );
        let one = pts(&[(0.3, 0.3)]);
        assert!(
            sample_connectivity(&one, Metric::Torus, &ray, Truncation::Exact, &mut rng).connected
        );
    }
}
