//! Per-run metrics rows, reproducible per (scenario, seed).

use crate::contamination::ContaminationState;
use crate::graph::Footprint;
use crate::trace::{Outcome, OutcomeKind, Trace};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MetricsRow {
    pub scenario_id: String,
    pub strategy: String,
    pub adversary: String,
    pub model: String,
    pub n: usize,
    pub d: usize,
    pub k: usize,
    pub agents: u32,
    pub seed: u64,
    pub outcome: OutcomeKind,
    pub rounds: u64,
    pub violations: usize,
    pub nodes_clean: usize,
    pub edges_clean: usize,
    /// First round at which every node was clean, if any.
    pub all_nodes_clean_round: Option<u64>,
}

impl MetricsRow {
    #[allow(clippy::too_many_arguments)]
    pub fn from_trace(
        scenario_id: String,
        fp: &Footprint,
        n: usize,
        d: usize,
        k: usize,
        agents: u32,
        seed: u64,
        trace: &Trace,
        outcome: &Outcome,
    ) -> MetricsRow {
        let mut violations = 0;
        let mut all_nodes_clean_round = None;
        let mut nodes_clean = 0;
        let mut edges_clean = 0;
        for record in &trace.rounds {
            violations += record.recontaminated_nodes.len() + record.recontaminated_edges.len();
            if let Some(state) =
                ContaminationState::from_hex(fp, &record.node_clean, &record.edge_clean)
            {
                if all_nodes_clean_round.is_none() && state.all_nodes_clean() {
                    all_nodes_clean_round = Some(record.round);
                }
                nodes_clean = state.clean_node_count();
                edges_clean = state.clean_edge_count();
            }
        }
        MetricsRow {
            scenario_id,
            strategy: trace.header.strategy.clone(),
            adversary: trace.header.adversary.clone(),
            model: trace.header.model.clone(),
            n,
            d,
            k,
            agents,
            seed,
            outcome: outcome.kind,
            rounds: trace.rounds.len() as u64,
            violations,
            nodes_clean,
            edges_clean,
            all_nodes_clean_round,
        }
    }

    pub fn header_line() -> &'static str {
        "scenario strategy adversary model n d k agents seed outcome rounds violations nodes_clean edges_clean nodes_clean_round"
    }

    pub fn to_line(&self) -> String {
        format!(
            "{} {} {} {} {} {} {} {} {} {:?} {} {} {} {} {}",
            self.scenario_id,
            self.strategy,
            self.adversary,
            self.model,
            self.n,
            self.d,
            self.k,
            self.agents,
            self.seed,
            self.outcome,
            self.rounds,
            self.violations,
            self.nodes_clean,
            self.edges_clean,
            self.all_nodes_clean_round
                .map(|r| r.to_string())
                .unwrap_or_else(|| "-".into()),
        )
    }
}
