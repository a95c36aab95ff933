//! Independent trace re-validation.
//!
//! Replays a trace from its embedded footprint without the engine: checks
//! per-round connectivity, the FTEA reappearance bound, that every movement
//! used a present edge, recomputes the contamination evolution (including
//! spread) from scratch, and confirms the recorded states, recontamination
//! lists and final outcome all agree with the recomputation.

use crate::contamination::{self, ContaminationState};
use crate::dynamics::{validate_decision, AbsenceLedger};
use crate::graph::{EdgeSet, NodeId};
use crate::trace::{Action, OutcomeKind, Trace, TraceError};

/// Result of a verification pass. `divergence` carries the first mismatch.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerifyReport {
    pub rounds_checked: u64,
    pub divergence: Option<String>,
}

impl VerifyReport {
    pub fn ok(&self) -> bool {
        self.divergence.is_none()
    }
}

macro_rules! diverge {
    ($rounds:expr, $($arg:tt)*) => {
        return Ok(VerifyReport {
            rounds_checked: $rounds,
            divergence: Some(format!($($arg)*)),
        })
    };
}

pub fn verify_trace(trace: &Trace) -> Result<VerifyReport, TraceError> {
    let fp = trace.header.footprint()?;
    let model = trace.header.model()?;
    let home = trace.header.home;
    if home >= fp.node_count() {
        return Err(TraceError::Corrupt(format!("home {home} out of range")));
    }
    let count = trace.header.agents as usize;

    let mut positions: Vec<NodeId> = vec![home; count];
    let mut state = ContaminationState::all_contaminated(&fp);
    state.clean_node(home);
    let mut ledger = AbsenceLedger::new(fp.edge_count());
    let mut checked = 0u64;

    for record in &trace.rounds {
        if record.round != checked {
            diverge!(checked, "round {} out of sequence (expected {})", record.round, checked);
        }
        let mut present = EdgeSet::full(fp.edge_count());
        for &e in &record.absent {
            if e >= fp.edge_count() {
                return Err(TraceError::Corrupt(format!("absent edge {e} out of range")));
            }
            present.remove(e);
        }
        if let Err(v) = validate_decision(&fp, model, &ledger, &present, record.round) {
            diverge!(checked, "round {}: {v}", record.round);
        }

        if record.agents.len() != count {
            diverge!(
                checked,
                "round {}: {} agent records, expected {count}",
                record.round,
                record.agents.len()
            );
        }
        let mut traversed = Vec::new();
        for (i, agent) in record.agents.iter().enumerate() {
            if agent.id != i as u32 + 1 {
                diverge!(checked, "round {}: agent ids out of order", record.round);
            }
            let action = Action::decode(&agent.action)?;
            match action {
                Action::Stay | Action::Settle => {
                    if agent.node != positions[i] {
                        diverge!(
                            checked,
                            "round {}: agent {} stayed but moved {} -> {}",
                            record.round,
                            agent.id,
                            positions[i],
                            agent.node
                        );
                    }
                }
                Action::Move(p) => {
                    if p >= fp.degree(positions[i]) {
                        diverge!(
                            checked,
                            "round {}: agent {} used port {p} beyond degree {}",
                            record.round,
                            agent.id,
                            fp.degree(positions[i])
                        );
                    }
                    let (e, w) = fp.through_port(positions[i], p);
                    if !present.contains(e) {
                        diverge!(
                            checked,
                            "round {}: agent {} moved over absent edge {e}",
                            record.round,
                            agent.id
                        );
                    }
                    if w != agent.node {
                        diverge!(
                            checked,
                            "round {}: agent {} recorded node {} but port {p} leads to {w}",
                            record.round,
                            agent.id,
                            agent.node
                        );
                    }
                    traversed.push(e);
                    positions[i] = w;
                }
            }
        }

        // Recompute decontamination and spread from scratch.
        state = contamination::apply_agent_actions(&state, &present, &traversed, &positions)
            .map_err(|e| TraceError::Corrupt(e.to_string()))?;
        let mut guarded = vec![false; fp.node_count()];
        for &p in &positions {
            guarded[p] = true;
        }
        let (next, report) = contamination::spread(&state, &fp, &present, &guarded);
        state = next;

        let expected = ContaminationState::from_hex(&fp, &record.node_clean, &record.edge_clean)
            .ok_or_else(|| TraceError::Corrupt("bad contamination bitsets".into()))?;
        if expected != state {
            diverge!(
                checked,
                "round {}: recorded contamination disagrees with recomputed spread",
                record.round
            );
        }
        if report.recontaminated_nodes != record.recontaminated_nodes
            || report.recontaminated_edges != record.recontaminated_edges
        {
            diverge!(
                checked,
                "round {}: recontamination lists disagree with recomputed spread",
                record.round
            );
        }

        ledger.record(&present);
        checked += 1;
    }

    // Outcome consistency against the recomputed final state.
    let kind = trace.outcome.kind;
    match kind {
        OutcomeKind::FullSuccess => {
            if !state.all_clean() {
                diverge!(checked, "outcome says full success but contamination remains");
            }
        }
        OutcomeKind::NodeSuccess => {
            if !state.all_nodes_clean() || state.all_clean() {
                diverge!(checked, "outcome says node success but state disagrees");
            }
        }
        OutcomeKind::MonotonicityViolation => {
            let last_has = trace
                .rounds
                .last()
                .map(|r| !r.recontaminated_nodes.is_empty() || !r.recontaminated_edges.is_empty())
                .unwrap_or(false);
            if !last_has {
                diverge!(checked, "outcome says monotonicity violation but no flip is recorded");
            }
        }
        OutcomeKind::Stall | OutcomeKind::RoundLimit | OutcomeKind::ModelViolation => {
            if state.all_clean() {
                diverge!(checked, "outcome {kind:?} but the graph is fully clean");
            }
        }
    }
    // In every recorded round before the last, nothing may flip back in a
    // monotone run; flips are only admissible in the final round of a
    // violation trace, which was checked above.
    for record in trace.rounds.iter().rev().skip(1) {
        if !record.recontaminated_nodes.is_empty() || !record.recontaminated_edges.is_empty() {
            diverge!(
                checked,
                "round {}: recontamination recorded mid-run without a violation outcome",
                record.round
            );
        }
    }

    Ok(VerifyReport {
        rounds_checked: checked,
        divergence: None,
    })
}
