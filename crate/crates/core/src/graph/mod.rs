//! Network topologies and their Laplacian spectra.
//!
//! Networks are unweighted simple graphs, directed or undirected. Undirected
//! graphs store both orientations of every edge, so the ordered edge set is
//! symmetric and one assembly path `L = D_in − A` serves both cases.

mod gen;
mod io;
mod laplacian;

use std::collections::HashSet;

pub use gen::{gen_ba, gen_directed_ring, gen_er, gen_regular, RegularKind};
pub use io::{read_edge_list, write_edge_list};
pub use laplacian::{laplacian_matrix, laplacian_spectrum, rho_l_lanczos, LaplacianSpectrum};

use crate::error::{Error, Result};

/// An unweighted simple graph.
///
/// `edges` holds ordered (source, target) pairs with zero-based node indices.
/// For undirected networks every edge appears in both orientations. Randomly
/// generated networks record the seed they were built from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Network {
    n: usize,
    edges: Vec<(usize, usize)>,
    directed: bool,
    seed: Option<u64>,
}

impl Network {
    /// Validate and wrap an edge list.
    ///
    /// Rejects self-loops, duplicate edges, out-of-range endpoints, n < 2,
    /// and undirected edge sets that are not symmetric under reversal.
    pub fn new(
        n: usize,
        edges: Vec<(usize, usize)>,
        directed: bool,
        seed: Option<u64>,
    ) -> Result<Self> {
        if n < 2 {
            return Err(Error::invalid(format!("network needs n >= 2, got {n}")));
        }
        let mut seen = HashSet::with_capacity(edges.len());
        for &(s, t) in &edges {
            if s >= n || t >= n {
                return Err(Error::invalid(format!(
                    "edge ({s}, {t}) references a node outside 0..{n}"
                )));
            }
            if s == t {
                return Err(Error::invalid(format!("self-loop at node {s}")));
            }
            if !seen.insert((s, t)) {
                return Err(Error::invalid(format!("duplicate edge ({s}, {t})")));
            }
        }
        if !directed {
            for &(s, t) in &edges {
                if !seen.contains(&(t, s)) {
                    return Err(Error::invalid(format!(
                        "undirected network is missing the reverse of edge ({s}, {t})"
                    )));
                }
            }
        }
        Ok(Self {
            n,
            edges,
            directed,
            seed,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Ordered (source, target) pairs; both orientations for undirected graphs.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn directed(&self) -> bool {
        self.directed
    }

    pub fn seed(&self) -> Option<u64> {
        self.seed
    }

    /// In-degree of every node. For undirected networks this is the plain
    /// degree, since both orientations are stored.
    pub fn in_degrees(&self) -> Vec<usize> {
        let mut deg = vec![0usize; self.n];
        for &(_, t) in &self.edges {
            deg[t] += 1;
        }
        deg
    }

    /// Largest (in-)degree.
    pub fn g_max(&self) -> usize {
        self.in_degrees().into_iter().max().unwrap_or(0)
    }

    /// Neighbor lists ignoring direction, used for connectivity traversal.
    fn undirected_adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(s, t) in &self.edges {
            adj[s].push(t);
            adj[t].push(s);
        }
        adj
    }
}

/// True iff a traversal from node 0 reaches every node, ignoring edge
/// direction (weak connectivity for directed graphs).
pub fn is_connected(net: &Network) -> bool {
    let adj = net.undirected_adjacency();
    let mut seen = vec![false; net.n()];
    let mut stack = vec![0usize];
    seen[0] = true;
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &v in &adj[u] {
            if !seen[v] {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == net.n()
}
