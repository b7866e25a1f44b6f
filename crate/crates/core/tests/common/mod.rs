//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

use rgg_faultnet::{Metric, Point};

/// Component count by iterative depth-first search over an adjacency list.
pub fn dfs_components(n: usize, edges: &[(u32, u32)]) -> usize {
    let mut adj = vec![Vec::new(); n];
    for &(i, j) in edges {
        adj[i as usize].push(j as usize);
        adj[j as usize].push(i as usize);
    }
    let mut seen = vec![false; n];
    let mut components = 0;
    let mut stack = Vec::new();
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        stack.push(start);
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    components
}

/// Planar or wrap-around distance written out from coordinates.
pub fn plain_distance(a: (f64, f64), b: (f64, f64), torus: bool) -> f64 {
    let mut dx = (a.0 - b.0).abs();
    let mut dy = (a.1 - b.1).abs();
    if torus {
        dx = dx.min(1.0 - dx);
        dy = dy.min(1.0 - dy);
    }
    (dx * dx + dy * dy).sqrt()
}

pub fn coords(points: &[Point]) -> Vec<(f64, f64)> {
    points.iter().map(|p| (p.x(), p.y())).collect()
}

/// All pairs at distance at most `range`.
pub fn brute_hard_disk_edges(xy: &[(f64, f64)], range: f64, torus: bool) -> Vec<(u32, u32)> {
    let mut edges = Vec::new();
    for i in 0..xy.len() {
        for j in i + 1..xy.len() {
            if plain_distance(xy[i], xy[j], torus) <= range {
                edges.push((i as u32, j as u32));
            }
        }
    }
    edges
}

/// Exact breakdown probability of a hard-disk graph on fixed points by
/// enumerating every fault pattern. Survival graphs with at most one node
/// count as connected.
pub fn exact_breakdown_hard_disk(xy: &[(f64, f64)], range: f64, torus: bool, epsilon: f64) -> f64 {
    let n = xy.len();
    assert!(n <= 20);
    let all = brute_hard_disk_edges(xy, range, torus);
    let mut p = 0.0;
    for mask in 0u32..(1 << n) {
        let alive: Vec<usize> = (0..n).filter(|&i| mask & (1 << i) != 0).collect();
        let k = alive.len();
        if k <= 1 {
            continue;
        }
        let mut index = vec![usize::MAX; n];
        for (new, &old) in alive.iter().enumerate() {
            index[old] = new;
        }
        let edges: Vec<(u32, u32)> = all
            .iter()
            .filter(|&&(i, j)| index[i as usize] != usize::MAX && index[j as usize] != usize::MAX)
            .map(|&(i, j)| (index[i as usize] as u32, index[j as usize] as u32))
            .collect();
        if dfs_components(k, &edges) > 1 {
            p += (1.0 - epsilon).powi(k as i32) * epsilon.powi((n - k) as i32);
        }
    }
    p
}

pub fn is_torus(metric: Metric) -> bool {
    metric == Metric::Torus
}
