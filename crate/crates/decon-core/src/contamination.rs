//! Clean/contaminated bookkeeping for nodes and edges, the recontamination
//! spread rule, and the derived quantities the strategies branch on
//! (contamination degree, separator set, full decontamination).

use thiserror::Error;

use crate::graph::{EdgeIdx, EdgeSet, Footprint, NodeId, Port};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ContaminationError {
    #[error("traversal of absent edge {0}")]
    EdgeAbsent(EdgeIdx),
}

/// Per-node and per-edge clean flags. Everything starts contaminated; agent
/// visits and traversals clean. Status is a property of the footprint element,
/// so a contaminated edge keeps its status while absent.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContaminationState {
    node_clean: Vec<bool>,
    edge_clean: Vec<bool>,
}

impl ContaminationState {
    pub fn all_contaminated(fp: &Footprint) -> Self {
        ContaminationState {
            node_clean: vec![false; fp.node_count()],
            edge_clean: vec![false; fp.edge_count()],
        }
    }

    pub fn node_clean(&self, v: NodeId) -> bool {
        self.node_clean[v]
    }

    pub fn edge_clean(&self, e: EdgeIdx) -> bool {
        self.edge_clean[e]
    }

    pub fn clean_node(&mut self, v: NodeId) {
        self.node_clean[v] = true;
    }

    pub fn clean_edge(&mut self, e: EdgeIdx) {
        self.edge_clean[e] = true;
    }

    pub fn contaminate_node(&mut self, v: NodeId) {
        self.node_clean[v] = false;
    }

    pub fn contaminate_edge(&mut self, e: EdgeIdx) {
        self.edge_clean[e] = false;
    }

    pub fn clean_node_count(&self) -> usize {
        self.node_clean.iter().filter(|&&c| c).count()
    }

    pub fn clean_edge_count(&self) -> usize {
        self.edge_clean.iter().filter(|&&c| c).count()
    }

    pub fn all_nodes_clean(&self) -> bool {
        self.node_clean.iter().all(|&c| c)
    }

    pub fn all_clean(&self) -> bool {
        self.all_nodes_clean() && self.edge_clean.iter().all(|&c| c)
    }

    /// Node flags packed LSB-first into hex, for trace records.
    pub fn node_bits_hex(&self) -> String {
        bits_to_hex(&self.node_clean)
    }

    pub fn edge_bits_hex(&self) -> String {
        bits_to_hex(&self.edge_clean)
    }

    pub fn from_hex(
        fp: &Footprint,
        node_hex: &str,
        edge_hex: &str,
    ) -> Option<ContaminationState> {
        Some(ContaminationState {
            node_clean: hex_to_bits(node_hex, fp.node_count())?,
            edge_clean: hex_to_bits(edge_hex, fp.edge_count())?,
        })
    }
}

fn bits_to_hex(bits: &[bool]) -> String {
    let mut bytes = vec![0u8; bits.len().div_ceil(8)];
    for (i, &b) in bits.iter().enumerate() {
        if b {
            bytes[i / 8] |= 1 << (i % 8);
        }
    }
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

fn hex_to_bits(hex: &str, len: usize) -> Option<Vec<bool>> {
    if hex.len() != len.div_ceil(8) * 2 {
        return None;
    }
    let mut bits = vec![false; len];
    for i in 0..len {
        let byte = u8::from_str_radix(&hex[i / 8 * 2..i / 8 * 2 + 2], 16).ok()?;
        bits[i] = byte & (1 << (i % 8)) != 0;
    }
    Some(bits)
}

/// Clean-to-contaminated flips produced by one spread step. Nonempty reports
/// mean the run lost monotonicity at that round.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ViolationReport {
    pub recontaminated_nodes: Vec<NodeId>,
    pub recontaminated_edges: Vec<EdgeIdx>,
}

impl ViolationReport {
    pub fn is_empty(&self) -> bool {
        self.recontaminated_nodes.is_empty() && self.recontaminated_edges.is_empty()
    }
}

/// Marks traversed edges and occupied nodes clean. Every traversal must use a
/// present edge; a violation here is an engine bug, not an adversary move.
pub fn apply_agent_actions(
    state: &ContaminationState,
    present: &EdgeSet,
    traversed_edges: &[EdgeIdx],
    occupied_nodes: &[NodeId],
) -> Result<ContaminationState, ContaminationError> {
    let mut next = state.clone();
    for &e in traversed_edges {
        if !present.contains(e) {
            return Err(ContaminationError::EdgeAbsent(e));
        }
        next.clean_edge(e);
    }
    for &v in occupied_nodes {
        next.clean_node(v);
    }
    Ok(next)
}

/// Least fixpoint of the recontamination rules:
/// (a) a clean unguarded node flips if a present incident edge is contaminated
///     or a neighbor across a present edge is contaminated;
/// (b) a clean edge flips if either endpoint node is contaminated, whether or
///     not the edge is present.
///
/// Returns the settled state and every flip relative to the input.
pub fn spread(
    state: &ContaminationState,
    fp: &Footprint,
    present: &EdgeSet,
    guarded: &[bool],
) -> (ContaminationState, ViolationReport) {
    let mut next = state.clone();
    let mut changed = true;
    while changed {
        changed = false;
        for (v, &is_guarded) in guarded.iter().enumerate() {
            if !next.node_clean(v) || is_guarded {
                continue;
            }
            let threatened = fp
                .incident(v)
                .any(|(_, e, w)| present.contains(e) && (!next.edge_clean(e) || !next.node_clean(w)));
            if threatened {
                next.contaminate_node(v);
                changed = true;
            }
        }
        for (i, e) in fp.edges().iter().enumerate() {
            if next.edge_clean(i) && (!next.node_clean(e.u) || !next.node_clean(e.v)) {
                next.contaminate_edge(i);
                changed = true;
            }
        }
    }
    let mut report = ViolationReport::default();
    for v in 0..fp.node_count() {
        if state.node_clean(v) && !next.node_clean(v) {
            report.recontaminated_nodes.push(v);
        }
    }
    for e in 0..fp.edge_count() {
        if state.edge_clean(e) && !next.edge_clean(e) {
            report.recontaminated_edges.push(e);
        }
    }
    (next, report)
}

/// Ports at `v` whose footprint edges are contaminated, absent edges included.
/// The cardinality is the node's contamination degree.
pub fn contamination_degree(state: &ContaminationState, fp: &Footprint, v: NodeId) -> Vec<Port> {
    fp.incident(v)
        .filter(|&(_, e, _)| !state.edge_clean(e))
        .map(|(p, _, _)| p)
        .collect()
}

/// All nodes with positive contamination degree.
pub fn separator_set(state: &ContaminationState, fp: &Footprint) -> Vec<NodeId> {
    (0..fp.node_count())
        .filter(|&v| !contamination_degree(state, fp, v).is_empty())
        .collect()
}

/// True iff `v` and every footprint edge incident to `v` are clean.
pub fn is_fully_decontaminated(state: &ContaminationState, fp: &Footprint, v: NodeId) -> bool {
    state.node_clean(v) && fp.incident(v).all(|(_, e, _)| state.edge_clean(e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generate;
    use crate::testing;

    fn triangle() -> Footprint {
        generate::cycle(3).unwrap()
    }

    fn edge_between(fp: &Footprint, a: NodeId, b: NodeId) -> EdgeIdx {
        fp.edges()
            .iter()
            .position(|e| (e.u, e.v) == (a.min(b), a.max(b)))
            .unwrap()
    }

    #[test]
    fn agent_actions_clean_what_they_touch() {
        let fp = triangle();
        let present = EdgeSet::full(fp.edge_count());
        let state = ContaminationState::all_contaminated(&fp);
        let e01 = edge_between(&fp, 0, 1);
        // agent moves v1 -> v2 (nodes 0 -> 1 here)
        let next = apply_agent_actions(&state, &present, &[e01], &[1]).unwrap();
        assert!(next.edge_clean(e01));
        assert!(next.node_clean(1));
        assert!(!next.node_clean(2));

        // no moves: unchanged
        let same = apply_agent_actions(&state, &present, &[], &[]).unwrap();
        assert_eq!(same, state);

        // two agents crossing the same edge in opposite directions
        let both = apply_agent_actions(&state, &present, &[e01, e01], &[0, 1]).unwrap();
        assert!(both.edge_clean(e01));
        assert!(both.node_clean(0) && both.node_clean(1));

        let mut absent = present.clone();
        absent.remove(e01);
        assert_eq!(
            apply_agent_actions(&state, &absent, &[e01], &[]).unwrap_err(),
            ContaminationError::EdgeAbsent(e01)
        );
    }

    #[test]
    fn spread_matches_the_c3_example() {
        // Agent walked v1 -> v2 and sits on v2; v3 still contaminated.
        // v1 and edge (v1,v2) get recontaminated, v2 stays clean.
        let fp = triangle();
        let present = EdgeSet::full(fp.edge_count());
        let mut state = ContaminationState::all_contaminated(&fp);
        let e01 = edge_between(&fp, 0, 1);
        state.clean_node(0);
        state.clean_node(1);
        state.clean_edge(e01);
        let mut guarded = vec![false; 3];
        guarded[1] = true;
        let (next, report) = spread(&state, &fp, &present, &guarded);
        assert!(!next.node_clean(0));
        assert!(!next.edge_clean(e01));
        assert!(next.node_clean(1));
        assert_eq!(report.recontaminated_nodes, vec![0]);
        assert_eq!(report.recontaminated_edges, vec![e01]);
    }

    #[test]
    fn spread_on_all_clean_is_identity() {
        let fp = generate::wheel(5).unwrap();
        let mut state = ContaminationState::all_contaminated(&fp);
        for v in 0..fp.node_count() {
            state.clean_node(v);
        }
        for e in 0..fp.edge_count() {
            state.clean_edge(e);
        }
        let present = EdgeSet::full(fp.edge_count());
        let (next, report) = spread(&state, &fp, &present, &[false; 5]);
        assert_eq!(next, state);
        assert!(report.is_empty());
    }

    #[test]
    fn spread_equals_brute_force_closure_on_small_random_graphs() {
        for n in 2..=12 {
            for seed in 0..20u64 {
                let max_extra = n * (n - 1) / 2 - (n - 1);
                let fp =
                    generate::random_connected(n, (seed as usize) % (1 + n / 2).min(1 + max_extra), seed)
                        .unwrap();
                let (state, present, guarded) = testing::random_state_and_guards(&fp, seed * 31 + n as u64);
                let (fast, _) = spread(&state, &fp, &present, &guarded);
                let oracle = testing::spread_closure_oracle(&state, &fp, &present, &guarded);
                assert_eq!(fast, oracle, "n={n} seed={seed}");
            }
        }
    }

    #[test]
    fn contamination_degree_examples() {
        let fp = triangle();
        let state = ContaminationState::all_contaminated(&fp);
        for v in 0..3 {
            assert_eq!(contamination_degree(&state, &fp, v).len(), 2);
        }

        // After the v1 -> v2 traversal (nodes 0 -> 1): at node 1 only the
        // port toward node 2 stays contaminated. Hand-enumerated, then
        // cross-checked against the spread oracle below.
        let mut state = ContaminationState::all_contaminated(&fp);
        state.clean_node(0);
        state.clean_node(1);
        state.clean_edge(edge_between(&fp, 0, 1));
        let ports = contamination_degree(&state, &fp, 1);
        assert_eq!(ports.len(), 1);
        let (_, _, neighbor) = fp.incident(1).find(|&(p, _, _)| p == ports[0]).unwrap();
        assert_eq!(neighbor, 2);

        let mut clean = state.clone();
        for v in 0..3 {
            clean.clean_node(v);
        }
        for e in 0..3 {
            clean.clean_edge(e);
        }
        assert!(contamination_degree(&clean, &fp, 0).is_empty());

        // Separator sets: fully contaminated -> V, fully clean -> empty,
        // post-traversal C3 (after spread with the guard on node 1) -> all
        // three nodes, matching the hand enumeration.
        assert_eq!(separator_set(&ContaminationState::all_contaminated(&fp), &fp), vec![0, 1, 2]);
        assert!(separator_set(&clean, &fp).is_empty());
        let mut guarded = vec![false; 3];
        guarded[1] = true;
        let present = EdgeSet::full(3);
        let (spread_state, _) = spread(&state, &fp, &present, &guarded);
        assert_eq!(separator_set(&spread_state, &fp), vec![0, 1, 2]);
    }

    #[test]
    fn fully_decontaminated_checks_incident_edges() {
        let fp = generate::path(3).unwrap();
        let mut state = ContaminationState::all_contaminated(&fp);
        state.clean_node(1);
        state.clean_edge(0);
        assert!(!is_fully_decontaminated(&state, &fp, 1)); // edge (1,2) dirty
        assert!(!is_fully_decontaminated(&state, &fp, 0)); // node clean? no
        state.clean_edge(1);
        assert!(is_fully_decontaminated(&state, &fp, 1));
    }

    #[test]
    fn bitset_hex_round_trip() {
        let fp = generate::wheel(9).unwrap();
        let (state, _, _) = testing::random_state_and_guards(&fp, 7);
        let back =
            ContaminationState::from_hex(&fp, &state.node_bits_hex(), &state.edge_bits_hex())
                .unwrap();
        assert_eq!(back, state);
    }
}
