use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::Network;
use crate::error::{Error, Result};

/// The deterministic undirected families with closed-form Laplacian spectra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularKind {
    Complete,
    UndirectedRing,
    Star,
    Path,
}

/// Build one of the named undirected graphs on n nodes.
///
/// Requires n >= 2 (star: n >= 3). The two-node ring degenerates to a single
/// edge rather than a doubled one, since multigraphs are out of scope.
pub fn gen_regular(kind: RegularKind, n: usize) -> Result<Network> {
    let min = if kind == RegularKind::Star { 3 } else { 2 };
    if n < min {
        return Err(Error::invalid(format!(
            "{kind:?} graph needs n >= {min}, got {n}"
        )));
    }
    let pairs: Vec<(usize, usize)> = match kind {
        RegularKind::Complete => (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .collect(),
        RegularKind::UndirectedRing => {
            if n == 2 {
                vec![(0, 1)]
            } else {
                (0..n).map(|i| (i, (i + 1) % n)).collect()
            }
        }
        RegularKind::Star => (1..n).map(|i| (0, i)).collect(),
        RegularKind::Path => (0..n - 1).map(|i| (i, i + 1)).collect(),
    };
    undirected_from_pairs(n, pairs, None)
}

/// Single directed cycle 0 -> 1 -> ... -> n-1 -> 0.
pub fn gen_directed_ring(n: usize) -> Result<Network> {
    if n < 2 {
        return Err(Error::invalid(format!(
            "directed ring needs n >= 2, got {n}"
        )));
    }
    let edges: Vec<(usize, usize)> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    Network::new(n, edges, true, None)
}

/// Erdős–Rényi G(n, p): each unordered pair joined independently with
/// probability p. Identical (n, p, seed) reproduce identical edge sets. The
/// draw is returned as-is; connectivity is the caller's concern.
pub fn gen_er(n: usize, p: f64, seed: u64) -> Result<Network> {
    if n < 2 {
        return Err(Error::invalid(format!("ER graph needs n >= 2, got {n}")));
    }
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::invalid(format!(
            "ER edge probability must lie strictly in (0, 1), got {p}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if rng.random::<f64>() < p {
                pairs.push((i, j));
            }
        }
    }
    undirected_from_pairs(n, pairs, Some(seed))
}

/// Preferential-attachment tree: start from a single edge, then attach each
/// new node to an existing one drawn with probability proportional to its
/// current degree. Always a tree with n−1 edges.
pub fn gen_ba(n: usize, seed: u64) -> Result<Network> {
    if n < 2 {
        return Err(Error::invalid(format!("BA tree needs n >= 2, got {n}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = Vec::with_capacity(n - 1);
    pairs.push((0usize, 1usize));
    // One stub per edge endpoint: uniform choice over stubs is degree-weighted
    // choice over nodes.
    let mut stubs = vec![0usize, 1usize];
    for new in 2..n {
        let target = stubs[rng.random_range(0..stubs.len())];
        pairs.push((new, target));
        stubs.push(new);
        stubs.push(target);
    }
    undirected_from_pairs(n, pairs, Some(seed))
}

/// Expand unordered pairs into both orientations and validate.
fn undirected_from_pairs(
    n: usize,
    pairs: Vec<(usize, usize)>,
    seed: Option<u64>,
) -> Result<Network> {
    let mut edges = Vec::with_capacity(2 * pairs.len());
    for (a, b) in pairs {
        edges.push((a, b));
        edges.push((b, a));
    }
    Network::new(n, edges, false, seed)
}
