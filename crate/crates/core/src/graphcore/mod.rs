//! Graph instances sampled from a point set and a connection function, and
//! connectivity decisions on them.

mod grid;
mod sampler;
mod unionfind;

use std::io::{self, Write};

pub use sampler::{candidate_radius, sample_connectivity, sample_graph, Truncation};
pub use unionfind::UnionFind;

/// Materialised graph with edges `(i, j)`, `i < j`.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphInstance {
    pub node_count: usize,
    pub edges: Vec<(u32, u32)>,
    pub meta: GraphMeta,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct GraphMeta {
    pub model: String,
    pub seed: Option<u64>,
}

impl GraphInstance {
    /// Writes the plain-text edge list: a `n <node_count>` header, then one
    /// `i j` line per edge.
    pub fn write_edge_list<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "n {}", self.node_count)?;
        for (i, j) in &self.edges {
            writeln!(out, "{i} {j}")?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ConnectivityVerdict {
    pub connected: bool,
    pub component_count: usize,
    pub isolated_count: usize,
}

impl ConnectivityVerdict {
    pub(crate) fn from_forest(uf: &mut UnionFind) -> Self {
        let component_count = uf.components();
        let connected = component_count <= 1;
        let isolated_count = match (connected, uf.len()) {
            (true, 1) => 1,
            (true, _) => 0,
            (false, _) => uf.singletons(),
        };
        ConnectivityVerdict {
            connected,
            component_count,
            isolated_count,
        }
    }
}

/// Connectivity of a materialised graph. Graphs with at most one node are
/// connected.
pub fn is_connected(graph: &GraphInstance) -> ConnectivityVerdict {
    let mut uf = UnionFind::new(graph.node_count);
    for &(i, j) in &graph.edges {
        uf.union(i as usize, j as usize);
    }
    ConnectivityVerdict::from_forest(&mut uf)
}
