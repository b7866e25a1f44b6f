//! Uniform cell list over the unit square.

use crate::geometry::{Metric, Point};

/// Points bucketed into `k × k` square cells of side `1/k ≥ radius`, so every
/// pair within `radius` lies in the same or adjacent cells.
#[derive(Debug)]
pub(crate) struct CellGrid {
    k: usize,
    metric: Metric,
    start: Vec<u32>,
    members: Vec<u32>,
    cell_of: Vec<u32>,
}

const FORWARD: [(isize, isize); 4] = [(1, 0), (-1, 1), (0, 1), (1, 1)];

impl CellGrid {
    pub(crate) fn new(points: &[Point], metric: Metric, radius: f64) -> Self {
        let n = points.len();
        // Keep the number of cells within a small multiple of the point count.
        let cap = ((2 * n.max(1)) as f64).sqrt().floor().max(1.0) as usize;
        let mut k = if radius > 0.0 && radius.is_finite() {
            ((1.0 / radius).floor() as usize).clamp(1, cap)
        } else if radius == 0.0 {
            cap
        } else {
            1
        };
        // Forward-neighbour enumeration on the torus needs three distinct
        // cells per axis; fall back to a single cell instead.
        if metric == Metric::Torus && k < 3 {
            k = 1;
        }
        let mut count = vec![0u32; k * k + 1];
        let cell_of: Vec<u32> = points
            .iter()
            .map(|p| {
                let cx = ((p.x() * k as f64) as usize).min(k - 1);
                let cy = ((p.y() * k as f64) as usize).min(k - 1);
                (cy * k + cx) as u32
            })
            .collect();
        for &c in &cell_of {
            count[c as usize + 1] += 1;
        }
        for c in 0..k * k {
            count[c + 1] += count[c];
        }
        let start = count.clone();
        let mut fill = count;
        let mut members = vec![0u32; n];
        for (i, &c) in cell_of.iter().enumerate() {
            members[fill[c as usize] as usize] = i as u32;
            fill[c as usize] += 1;
        }
        CellGrid {
            k,
            metric,
            start,
            members,
            cell_of,
        }
    }

    #[inline]
    fn cell(&self, c: usize) -> &[u32] {
        &self.members[self.start[c] as usize..self.start[c + 1] as usize]
    }

    fn shifted(&self, c: usize, (dx, dy): (isize, isize)) -> Option<usize> {
        let k = self.k as isize;
        let (cx, cy) = ((c % self.k) as isize, (c / self.k) as isize);
        let (mut x, mut y) = (cx + dx, cy + dy);
        match self.metric {
            Metric::Torus => {
                x = x.rem_euclid(k);
                y = y.rem_euclid(k);
            }
            Metric::PlanarSquare => {
                if x < 0 || y < 0 || x >= k || y >= k {
                    return None;
                }
            }
        }
        Some((y * k + x) as usize)
    }

    /// Calls `visit(i, j)` once for every unordered pair of points in the
    /// same or adjacent cells. Stops early when `visit` returns `false`.
    pub(crate) fn for_each_near_pair<F: FnMut(usize, usize) -> bool>(&self, mut visit: F) {
        for c in 0..self.k * self.k {
            let here = self.cell(c);
            for (a, &i) in here.iter().enumerate() {
                for &j in &here[a + 1..] {
                    if !visit(i as usize, j as usize) {
                        return;
                    }
                }
            }
            if self.k == 1 {
                continue;
            }
            for off in FORWARD {
                let Some(d) = self.shifted(c, off) else {
                    continue;
                };
                let there = self.cell(d);
                for &i in here {
                    for &j in there {
                        if !visit(i as usize, j as usize) {
                            return;
                        }
                    }
                }
            }
        }
    }

    /// Every point in the cell of `i` and its neighbours (including `i`).
    pub(crate) fn for_each_neighbour_candidate<F: FnMut(usize)>(&self, i: usize, mut visit: F) {
        let c = self.cell_of[i] as usize;
        if self.k == 1 {
            self.cell(c).iter().for_each(|&j| visit(j as usize));
            return;
        }
        for dy in -1..=1 {
            for dx in -1..=1 {
                if let Some(d) = self.shifted(c, (dx, dy)) {
                    self.cell(d).iter().for_each(|&j| visit(j as usize));
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::sample_uniform;
    use crate::rng::{Purpose, Substreams};
    use std::collections::BTreeSet;

    fn brute(points: &[Point], metric: Metric, r: f64) -> BTreeSet<(usize, usize)> {
        let mut out = BTreeSet::new();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if metric.distance(&points[i], &points[j]) <= r {
                    out.insert((i, j));
                }
            }
        }
        out
    }

    #[test]
    fn near_pairs_cover_every_close_pair_once() {
        for (seed, n, r) in [
            (1, 300, 0.05),
            (2, 300, 0.2),
            (3, 50, 0.4),
            (4, 500, 0.01),
            (5, 40, 0.0),
        ] {
            for metric in [Metric::Torus, Metric::PlanarSquare] {
                let mut rng = Substreams::new(seed).stream(Purpose::Custom(0), 0);
                let pts = sample_uniform(n, metric, &mut rng).unwrap().into_points();
                let grid = CellGrid::new(&pts, metric, r);
                let mut seen = BTreeSet::new();
                let mut close = BTreeSet::new();
                grid.for_each_near_pair(|i, j| {
                    let key = (i.min(j), i.max(j));
                    assert!(seen.insert(key), "pair {key:?} visited twice");
                    if metric.distance(&pts[i], &pts[j]) <= r {
                        close.insert(key);
                    }
                    true
                });
                assert_eq!(close, brute(&pts, metric, r), "n={n} r={r} {metric}");
            }
        }
    }

    #[test]
    fn neighbour_candidates_include_close_points() {
        let mut rng = Substreams::new(9).stream(Purpose::Custom(0), 0);
        let pts = sample_uniform(400, Metric::Torus, &mut rng)
            .unwrap()
            .into_points();
        let grid = CellGrid::new(&pts, Metric::Torus, 0.08);
        for i in 0..pts.len() {
            let mut cand = BTreeSet::new();
            grid.for_each_neighbour_candidate(i, |j| {
                assert!(cand.insert(j), "candidate {j} repeated");
            });
            for j in 0..pts.len() {
                if Metric::Torus.distance(&pts[i], &pts[j]) <= 0.08 {
                    assert!(cand.contains(&j));
                }
            }
        }
    }
}
