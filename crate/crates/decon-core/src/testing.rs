//! Independent brute-force oracles and corpus helpers used by the test and
//! acceptance suites. Everything here is deliberately naive: recompute from
//! scratch, no shared code paths with the operational implementations.

use std::collections::VecDeque;

use crate::contamination::ContaminationState;
use crate::generate;
use crate::graph::{EdgeSet, Footprint, NodeId};

/// All-pairs BFS diameter, written independently of `Footprint::diameter`.
pub fn diameter_oracle(fp: &Footprint) -> usize {
    let n = fp.node_count();
    let mut best = 0;
    for s in 0..n {
        let mut dist = vec![usize::MAX; n];
        dist[s] = 0;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            for (_, _, w) in fp.incident(v) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        for &d in &dist {
            if d != usize::MAX && d > best {
                best = d;
            }
        }
    }
    best
}

/// Brute-force recontamination closure: repeatedly rescan every node and edge
/// until nothing changes.
///
/// Flip rules, applied to a full rescan each pass:
/// - a clean node not in `guarded` becomes contaminated if some present
///   incident edge is contaminated, or some neighbor across a present edge is
///   contaminated;
/// - a clean edge becomes contaminated if either endpoint node is
///   contaminated (presence does not matter for this rule).
pub fn spread_closure_oracle(
    state: &ContaminationState,
    fp: &Footprint,
    present: &EdgeSet,
    guarded: &[bool],
) -> ContaminationState {
    let mut node_clean: Vec<bool> = (0..fp.node_count()).map(|v| state.node_clean(v)).collect();
    let mut edge_clean: Vec<bool> = (0..fp.edge_count()).map(|e| state.edge_clean(e)).collect();
    loop {
        let mut changed = false;
        for v in 0..fp.node_count() {
            if !node_clean[v] || guarded[v] {
                continue;
            }
            let mut hit = false;
            for (_, e, w) in fp.incident(v) {
                if present.contains(e) && (!edge_clean[e] || !node_clean[w]) {
                    hit = true;
                    break;
                }
            }
            if hit {
                node_clean[v] = false;
                changed = true;
            }
        }
        for (i, e) in fp.edges().iter().enumerate() {
            if edge_clean[i] && (!node_clean[e.u] || !node_clean[e.v]) {
                edge_clean[i] = false;
                changed = true;
            }
        }
        if !changed {
            break;
        }
    }
    let mut out = ContaminationState::all_contaminated(fp);
    for (v, &c) in node_clean.iter().enumerate() {
        if c {
            out.clean_node(v);
        }
    }
    for (e, &c) in edge_clean.iter().enumerate() {
        if c {
            out.clean_edge(e);
        }
    }
    out
}

/// Reference recursive DFS visit order over the footprint (lowest port
/// first), for checking traversal completeness of the navigation toolkit.
pub fn reference_dfs_order(fp: &Footprint, root: NodeId) -> Vec<NodeId> {
    fn go(fp: &Footprint, v: NodeId, seen: &mut Vec<bool>, order: &mut Vec<NodeId>) {
        seen[v] = true;
        order.push(v);
        for (_, _, w) in fp.incident(v) {
            if !seen[w] {
                go(fp, w, seen, order);
            }
        }
    }
    let mut seen = vec![false; fp.node_count()];
    let mut order = Vec::new();
    go(fp, root, &mut seen, &mut order);
    order
}

/// Deterministic catalog of small connected footprints covering n <= 8:
/// every structured family instance in range plus a seeded sweep of random
/// connected graphs for each (n, cyclomatic number) pair.
pub fn connected_catalog_n_le_8() -> Vec<Footprint> {
    let mut out = Vec::new();
    for n in 1..=8 {
        out.push(generate::path(n).unwrap());
    }
    for n in 3..=8 {
        out.push(generate::cycle(n).unwrap());
    }
    for depth in 1..=2 {
        out.push(generate::complete_binary_tree(depth).unwrap());
    }
    for n in [5, 6, 7, 8] {
        out.push(generate::wheel(n).unwrap());
    }
    for n in [6, 8] {
        out.push(generate::complete_bipartite(n).unwrap());
    }
    out.push(generate::figure4(3, 3).unwrap());
    for n in 2..=8usize {
        let max_extra = n * (n - 1) / 2 - (n - 1);
        for extra in 0..=max_extra {
            for seed in 0..3 {
                out.push(generate::random_connected(n, extra, 1000 + seed).unwrap());
            }
        }
    }
    out
}

/// Seeded pseudo-random contamination state and guard set for fuzzing spread.
pub fn random_state_and_guards(
    fp: &Footprint,
    seed: u64,
) -> (ContaminationState, EdgeSet, Vec<bool>) {
    // Small xorshift generator; self-contained so the oracle inputs do not
    // depend on any simulator code path.
    let mut x = seed.wrapping_mul(0x9E37_79B9_7F4A_7C15) | 1;
    let mut next = move || {
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        x
    };
    let mut state = ContaminationState::all_contaminated(fp);
    for v in 0..fp.node_count() {
        if next() % 2 == 0 {
            state.clean_node(v);
        }
    }
    for e in 0..fp.edge_count() {
        if next() % 2 == 0 {
            state.clean_edge(e);
        }
    }
    let mut present = EdgeSet::full(fp.edge_count());
    for e in 0..fp.edge_count() {
        if next() % 4 == 0 {
            let mut trial = present.clone();
            trial.remove(e);
            if fp.is_connected(&trial) {
                present = trial;
            }
        }
    }
    let guarded: Vec<bool> = (0..fp.node_count()).map(|_| next() % 4 == 0).collect();
    (state, present, guarded)
}
