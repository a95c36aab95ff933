//! Deterministic footprint generators for the scenario families.
//!
//! All families assign ports in ascending neighbor order, so regenerating a
//! family with the same parameters (and seed, where applicable) is
//! byte-identical under the canonical text form.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::graph::{Footprint, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GenerateError {
    #[error("bad parameters for family {family}: {reason}")]
    BadParams { family: &'static str, reason: String },
}

fn bad(family: &'static str, reason: impl Into<String>) -> GenerateError {
    GenerateError::BadParams {
        family,
        reason: reason.into(),
    }
}

/// Builds a footprint from bare node pairs, assigning ports at each node by
/// ascending neighbor id.
pub fn footprint_from_pairs(
    node_count: usize,
    pairs: &[(NodeId, NodeId)],
) -> Result<Footprint, crate::graph::GraphError> {
    let mut neighbors: Vec<Vec<NodeId>> = vec![Vec::new(); node_count];
    for &(a, b) in pairs {
        if a < node_count && b < node_count && a != b {
            neighbors[a].push(b);
            neighbors[b].push(a);
        }
    }
    for row in &mut neighbors {
        row.sort_unstable();
    }
    let port_of = |v: NodeId, w: NodeId| neighbors[v].binary_search(&w).unwrap_or(usize::MAX);
    let edges: Vec<(NodeId, NodeId, usize, usize)> = pairs
        .iter()
        .map(|&(a, b)| (a, b, port_of(a, b), port_of(b, a)))
        .collect();
    Footprint::from_edges(node_count, &edges)
}

/// Path on `n` nodes, 0 through n-1 in a line.
pub fn path(n: usize) -> Result<Footprint, GenerateError> {
    if n == 0 {
        return Err(bad("path", "n must be at least 1"));
    }
    let pairs: Vec<_> = (0..n.saturating_sub(1)).map(|i| (i, i + 1)).collect();
    footprint_from_pairs(n, &pairs).map_err(|e| bad("path", e.to_string()))
}

/// Cycle on `n >= 3` nodes.
pub fn cycle(n: usize) -> Result<Footprint, GenerateError> {
    if n < 3 {
        return Err(bad("cycle", "n must be at least 3"));
    }
    let mut pairs: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
    pairs.push((n - 1, 0));
    footprint_from_pairs(n, &pairs).map_err(|e| bad("cycle", e.to_string()))
}

/// Complete binary tree of the given depth, nodes numbered in BFS order with
/// the root at 0. Depth 0 is a single node.
pub fn complete_binary_tree(depth: u32) -> Result<Footprint, GenerateError> {
    let n = (1usize << (depth + 1)) - 1;
    let pairs: Vec<_> = (1..n).map(|i| ((i - 1) / 2, i)).collect();
    footprint_from_pairs(n, &pairs).map_err(|e| bad("tree", e.to_string()))
}

/// Wheel on `n > 4` vertices: hub 0 joined to every rim node, rim nodes
/// 1..n-1 forming a cycle.
pub fn wheel(n: usize) -> Result<Footprint, GenerateError> {
    if n <= 4 {
        return Err(bad("wheel", "n must exceed 4"));
    }
    let mut pairs: Vec<_> = (1..n).map(|i| (0, i)).collect();
    for i in 1..n - 1 {
        pairs.push((i, i + 1));
    }
    pairs.push((n - 1, 1));
    footprint_from_pairs(n, &pairs).map_err(|e| bad("wheel", e.to_string()))
}

/// Indices of the wheel's spoke edges (incident to the hub).
pub fn wheel_spokes(fp: &Footprint) -> Vec<usize> {
    fp.edges()
        .iter()
        .enumerate()
        .filter(|(_, e)| e.u == 0)
        .map(|(i, _)| i)
        .collect()
}

/// Complete bipartite graph K_{n/2,n/2} for even `n > 4`. Partition A is
/// nodes 0..n/2, partition B the rest.
pub fn complete_bipartite(n: usize) -> Result<Footprint, GenerateError> {
    if !n.is_multiple_of(2) || n <= 4 {
        return Err(bad("complete_bipartite", "n must be even and exceed 4"));
    }
    let half = n / 2;
    let mut pairs = Vec::with_capacity(half * half);
    for a in 0..half {
        for b in half..n {
            pairs.push((a, b));
        }
    }
    footprint_from_pairs(n, &pairs).map_err(|e| bad("complete_bipartite", e.to_string()))
}

/// Spine-and-pendant family: a spine path from the home end, a leaf branch
/// off the first interior spine node, and a cycle of `k` nodes each joined to
/// the spine's far end. Diameter `d` and cyclomatic number `k` by
/// construction; both are verified before returning.
pub fn figure4(d: usize, k: usize) -> Result<Footprint, GenerateError> {
    if d < 3 {
        return Err(bad("figure4", "d must be at least 3"));
    }
    if k < 3 {
        return Err(bad("figure4", "k must be at least 3"));
    }
    // Nodes: spine 0..=d-1 (home at 0, attachment point t = d-1), branch leaf
    // d, cycle nodes d+1..=d+k.
    let t = d - 1;
    let branch = d;
    let n = d + k + 1;
    let mut pairs: Vec<(usize, usize)> = (0..d - 1).map(|i| (i, i + 1)).collect();
    pairs.push((1, branch));
    for c in 0..k {
        pairs.push((t, d + 1 + c));
    }
    for c in 0..k {
        pairs.push((d + 1 + c, d + 1 + (c + 1) % k));
    }
    let fp = footprint_from_pairs(n, &pairs).map_err(|e| bad("figure4", e.to_string()))?;
    if fp.diameter() != d {
        return Err(bad("figure4", format!("constructed diameter {} != {d}", fp.diameter())));
    }
    if fp.cyclomatic_number() != k {
        return Err(bad(
            "figure4",
            format!("constructed cyclomatic number {} != {k}", fp.cyclomatic_number()),
        ));
    }
    Ok(fp)
}

/// Random connected footprint: a seeded random spanning tree on `n` nodes
/// plus exactly `extra_edges` random non-tree edges, so the cyclomatic number
/// equals `extra_edges`.
pub fn random_connected(n: usize, extra_edges: usize, seed: u64) -> Result<Footprint, GenerateError> {
    if n == 0 {
        return Err(bad("random_connected", "n must be at least 1"));
    }
    let max_extra = n * (n - 1) / 2 - (n - 1);
    if extra_edges > max_extra {
        return Err(bad(
            "random_connected",
            format!("extra_edges {extra_edges} exceeds maximum {max_extra} for n={n}"),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for v in 1..n {
        let parent = rng.random_range(0..v);
        pairs.push((parent, v));
    }
    let mut complement: Vec<(usize, usize)> = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if !pairs.iter().any(|&(a, b)| (a, b) == (u, v) || (b, a) == (u, v)) {
                complement.push((u, v));
            }
        }
    }
    complement.shuffle(&mut rng);
    pairs.extend(complement.into_iter().take(extra_edges));
    footprint_from_pairs(n, &pairs).map_err(|e| bad("random_connected", e.to_string()))
}

/// Family selector used by the CLI and scenario files.
pub fn generate(
    family: &str,
    n: usize,
    d: usize,
    k: usize,
    depth: u32,
    seed: u64,
) -> Result<Footprint, GenerateError> {
    match family {
        "path" => path(n),
        "cycle" => cycle(n),
        "tree" => complete_binary_tree(depth),
        "wheel" => wheel(n),
        "complete_bipartite" => complete_bipartite(n),
        "figure4" => figure4(d, k),
        "random_connected" => random_connected(n, k, seed),
        other => Err(bad("generate", format!("unknown family {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn figure4_canonical_parameters() {
        let fp = figure4(3, 3).unwrap();
        assert_eq!(fp.diameter(), 3);
        assert_eq!(fp.cyclomatic_number(), 3);
    }

    #[test]
    fn complete_bipartite_examples() {
        let fp = complete_bipartite(8).unwrap();
        assert_eq!(fp.edge_count(), 16);
        assert_eq!(fp.diameter(), 2);
        let fp = complete_bipartite(6).unwrap();
        assert_eq!(fp.edge_count(), 9);
        assert!(complete_bipartite(5).is_err());
        assert!(complete_bipartite(4).is_err());
    }

    #[test]
    fn random_connected_controls_cyclomatic_number() {
        for k in [0, 1, 4] {
            let fp = random_connected(10, k, 7).unwrap();
            assert_eq!(fp.cyclomatic_number(), k);
            assert_eq!(fp.node_count(), 10);
        }
    }

    #[test]
    fn random_connected_is_deterministic_per_seed() {
        let a = random_connected(12, 5, 99).unwrap().to_text();
        let b = random_connected(12, 5, 99).unwrap().to_text();
        let c = random_connected(12, 5, 100).unwrap().to_text();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn binary_tree_shapes() {
        let t1 = complete_binary_tree(1).unwrap();
        assert_eq!(t1.node_count(), 3);
        let t2 = complete_binary_tree(2).unwrap();
        assert_eq!(t2.node_count(), 7);
        assert_eq!(t2.diameter(), 4);
    }
}
