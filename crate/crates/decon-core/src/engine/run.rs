//! The round loop. Fixed order within every round:
//! adversary decision -> decision validation -> face-to-face exchange ->
//! local views -> one action per agent -> simultaneous movement ->
//! decontamination -> spread -> monitoring (violation, success, stall).

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::contamination::{self, ContaminationState};
use crate::dynamics::{validate_decision, AbsenceLedger, Adversary, DynamicityModel, Observation};
use crate::graph::{Footprint, NodeId, Port};
use crate::trace::{
    fnv1a64, Action, AgentRecord, Outcome, OutcomeKind, OutcomeRecord, RoundRecord, Trace,
    TraceHeader,
};

use super::view::{AgentId, LocalView, NodeHandle, PortView, StepContext, Strategy};

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("agent {agent} made an illegal move at round {round}: {reason}")]
    IllegalMove {
        agent: AgentId,
        round: u64,
        reason: String,
    },
    #[error("internal contamination error at round {round}: {source}")]
    Contamination {
        round: u64,
        source: contamination::ContaminationError,
    },
}

/// Identifies the run in the trace header.
#[derive(Debug, Clone, Default)]
pub struct RunMeta {
    pub scenario_hash: String,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub home: NodeId,
    pub agent_count: u32,
    pub max_rounds: u64,
    /// Rounds of total quiescence before a stall is declared; `None` picks
    /// the model default (4nT+4n under FTEA, 4n^2 under IDED).
    pub stall_window: Option<u64>,
    /// Restrict visibility to present edges, as in the base agent model.
    /// Extended visibility (the default) also exposes the contamination
    /// status of absent incident edges.
    pub strict_visibility: bool,
    /// Hand strategies a stable opaque node identity.
    pub node_oracle: bool,
    /// Test flag: shuffle the presentation order of exchange partners with
    /// this seed to check merge order-independence.
    pub shuffle_exchange: Option<u64>,
    pub meta: RunMeta,
}

impl RunConfig {
    pub fn new(home: NodeId, agent_count: u32, max_rounds: u64) -> Self {
        RunConfig {
            home,
            agent_count,
            max_rounds,
            stall_window: None,
            strict_visibility: false,
            node_oracle: true,
            shuffle_exchange: None,
            meta: RunMeta::default(),
        }
    }
}

pub(crate) fn default_stall_window(model: DynamicityModel, n: usize) -> u64 {
    match model {
        DynamicityModel::Ftea { t } => 4 * n as u64 * (t as u64 + 1),
        DynamicityModel::Ided => 4 * (n as u64) * (n as u64),
    }
}

/// Executes one scenario run to completion. Deterministic for a given
/// footprint, model, adversary state, strategy and configuration.
pub fn run<S: Strategy>(
    fp: &Footprint,
    model: DynamicityModel,
    adversary: &mut dyn Adversary,
    strategy: &S,
    cfg: &RunConfig,
) -> Result<(Trace, Outcome), EngineError> {
    assert!(cfg.agent_count >= 1, "at least one agent");
    assert!(cfg.home < fp.node_count(), "home in range");
    assert!(cfg.max_rounds >= 1, "at least one round");

    let n = fp.node_count();
    let count = cfg.agent_count as usize;
    let stall_window = cfg
        .stall_window
        .unwrap_or_else(|| default_stall_window(model, n))
        .max(1);

    let mut positions: Vec<NodeId> = vec![cfg.home; count];
    let mut memories: Vec<S::Memory> = (0..count)
        .map(|i| strategy.init_memory(i as AgentId + 1))
        .collect();
    let mut arrival_ports: Vec<Option<Port>> = vec![None; count];

    let mut contamination = ContaminationState::all_contaminated(fp);
    contamination.clean_node(cfg.home); // home is cleaned and guarded at the start
    let mut ledger = AbsenceLedger::new(fp.edge_count());

    let mut shuffle_rng = cfg.shuffle_exchange.map(ChaCha8Rng::seed_from_u64);

    let (model_name, t) = match model {
        DynamicityModel::Ftea { t } => ("ftea", t),
        DynamicityModel::Ided => ("ided", 0),
    };
    let header = TraceHeader {
        version: 1,
        scenario: cfg.meta.scenario_hash.clone(),
        seed: cfg.meta.seed,
        strategy: strategy.name().to_string(),
        adversary: adversary.name().to_string(),
        model: model_name.to_string(),
        t,
        home: cfg.home,
        agents: cfg.agent_count,
        n,
        edges: fp
            .edges()
            .iter()
            .map(|e| (e.u, e.v, e.port_u, e.port_v))
            .collect(),
    };
    let mut rounds: Vec<RoundRecord> = Vec::new();

    let mut prev_fingerprint: Option<u64> = None;
    let mut quiet_streak: u64 = 0;

    let finish = |rounds: Vec<RoundRecord>, kind: OutcomeKind, round: u64, detail: String| {
        let outcome = Outcome {
            kind,
            round,
            detail: detail.clone(),
        };
        let trace = Trace {
            header: header.clone(),
            rounds,
            outcome: OutcomeRecord {
                kind,
                round,
                detail,
            },
        };
        (trace, outcome)
    };

    for round in 0..cfg.max_rounds {
        // (1) adversary decides the round's edge set, then the decision is
        // checked against connectivity and the model's timing constraint.
        let present = {
            let obs = Observation {
                round,
                footprint: fp,
                agent_positions: &positions,
                contamination: &contamination,
                ledger: &ledger,
            };
            adversary.decide(&obs)
        };
        if let Err(violation) = validate_decision(fp, model, &ledger, &present, round) {
            return Ok(finish(
                rounds,
                OutcomeKind::ModelViolation,
                round,
                violation.to_string(),
            ));
        }

        // (2) face-to-face exchange among co-located agents.
        let mut by_node: Vec<Vec<usize>> = vec![Vec::new(); n];
        for (i, &p) in positions.iter().enumerate() {
            by_node[p].push(i);
        }
        for group in by_node.iter().filter(|g| g.len() > 1) {
            let snapshot: Vec<(AgentId, S::Memory)> = group
                .iter()
                .map(|&i| (i as AgentId + 1, memories[i].clone()))
                .collect();
            for &i in group {
                let own_id = i as AgentId + 1;
                let mut others: Vec<(AgentId, S::Memory)> = snapshot
                    .iter()
                    .filter(|(id, _)| *id != own_id)
                    .cloned()
                    .collect();
                if let Some(rng) = shuffle_rng.as_mut() {
                    others.shuffle(rng);
                }
                strategy.merge(&mut memories[i], &others);
            }
        }

        // (3) local views per occupied node, from post-exchange snapshots.
        let mut views: Vec<Option<LocalView<S::Memory>>> = (0..n).map(|_| None).collect();
        for (v, group) in by_node.iter().enumerate() {
            if group.is_empty() {
                continue;
            }
            let ports = fp
                .incident(v)
                .map(|(_, e, _)| {
                    let is_present = present.contains(e);
                    let status = !contamination.edge_clean(e);
                    PortView {
                        present: is_present,
                        contaminated: if is_present || !cfg.strict_visibility {
                            Some(status)
                        } else {
                            None
                        },
                    }
                })
                .collect();
            views[v] = Some(LocalView {
                degree: fp.degree(v),
                ports,
                node_contaminated: !contamination.node_clean(v),
                node_handle: cfg.node_oracle.then_some(NodeHandle(v)),
                co_located: group
                    .iter()
                    .map(|&i| (i as AgentId + 1, memories[i].clone()))
                    .collect(),
            });
        }

        // (4) one action per agent, then simultaneous movement.
        let mut actions: Vec<Action> = Vec::with_capacity(count);
        for i in 0..count {
            let view = views[positions[i]].as_ref().expect("own node is occupied");
            let ctx = StepContext {
                view,
                self_id: i as AgentId + 1,
                arrival_port: arrival_ports[i],
            };
            let action = strategy.decide(&ctx, &mut memories[i]);
            if let Action::Move(p) = action {
                if p >= fp.degree(positions[i]) {
                    return Err(EngineError::IllegalMove {
                        agent: i as AgentId + 1,
                        round,
                        reason: format!("port {p} out of range at node {}", positions[i]),
                    });
                }
                let (e, _) = fp.through_port(positions[i], p);
                if !present.contains(e) {
                    return Err(EngineError::IllegalMove {
                        agent: i as AgentId + 1,
                        round,
                        reason: format!("port {p} is absent this round"),
                    });
                }
            }
            actions.push(action);
        }

        let mut traversed = Vec::new();
        for i in 0..count {
            if let Action::Move(p) = actions[i] {
                let (e, w) = fp.through_port(positions[i], p);
                traversed.push(e);
                arrival_ports[i] = Some(fp.edge(e).port_at(w));
                positions[i] = w;
            }
        }

        // (5) decontamination by visits and traversals, then spread.
        contamination = contamination::apply_agent_actions(
            &contamination,
            &present,
            &traversed,
            &positions,
        )
        .map_err(|source| EngineError::Contamination { round, source })?;
        let mut guarded = vec![false; n];
        for &p in &positions {
            guarded[p] = true;
        }
        let (next, report) = contamination::spread(&contamination, fp, &present, &guarded);
        contamination = next;

        // (6) record, then monitor: monotonicity, termination, stall.
        let absent: Vec<usize> = present.iter_absent().collect();
        rounds.push(RoundRecord {
            round,
            absent: absent.clone(),
            agents: (0..count)
                .map(|i| AgentRecord {
                    id: i as AgentId + 1,
                    node: positions[i],
                    action: actions[i].encode(),
                })
                .collect(),
            node_clean: contamination.node_bits_hex(),
            edge_clean: contamination.edge_bits_hex(),
            recontaminated_nodes: report.recontaminated_nodes.clone(),
            recontaminated_edges: report.recontaminated_edges.clone(),
        });

        if !report.is_empty() {
            return Ok(finish(
                rounds,
                OutcomeKind::MonotonicityViolation,
                round,
                format!(
                    "recontaminated {} node(s), {} edge(s)",
                    report.recontaminated_nodes.len(),
                    report.recontaminated_edges.len()
                ),
            ));
        }
        if contamination.all_clean() {
            return Ok(finish(rounds, OutcomeKind::FullSuccess, round, String::new()));
        }

        let fingerprint = round_fingerprint(&positions, &actions, &absent, &contamination);
        if prev_fingerprint == Some(fingerprint) {
            quiet_streak += 1;
        } else {
            prev_fingerprint = Some(fingerprint);
            quiet_streak = 1;
        }
        if quiet_streak >= stall_window && adversary.quiescent() {
            let (kind, detail) = if contamination.all_nodes_clean() {
                (
                    OutcomeKind::NodeSuccess,
                    format!(
                        "all nodes clean, {} edge(s) still contaminated at quiescence",
                        fp.edge_count() - contamination.clean_edge_count()
                    ),
                )
            } else {
                (
                    OutcomeKind::Stall,
                    format!("no change for {stall_window} rounds under a quiescent adversary"),
                )
            };
            return Ok(finish(rounds, kind, round, detail));
        }

        ledger.record(&present);
    }

    let kind = if contamination.all_nodes_clean() {
        OutcomeKind::NodeSuccess
    } else {
        OutcomeKind::RoundLimit
    };
    let last = cfg.max_rounds - 1;
    Ok(finish(
        rounds,
        kind,
        last,
        format!("round limit {} reached", cfg.max_rounds),
    ))
}

/// Trace-window stall test: true when the last `window` records show
/// identical agent positions, action outputs, absent sets and contamination.
/// The engine applies the same test incrementally during a run and
/// additionally requires the adversary to be in a quiescent phase.
pub fn detect_stall(rounds: &[RoundRecord], window: u64) -> bool {
    if window == 0 || (rounds.len() as u64) < window {
        return false;
    }
    let tail = &rounds[rounds.len() - window as usize..];
    let first = record_fingerprint(&tail[0]);
    tail.iter().all(|r| record_fingerprint(r) == first)
}

fn record_fingerprint(record: &RoundRecord) -> u64 {
    let mut bytes = Vec::new();
    for agent in &record.agents {
        bytes.extend_from_slice(&(agent.node as u64).to_le_bytes());
        bytes.extend_from_slice(agent.action.as_bytes());
        bytes.push(b';');
    }
    for &e in &record.absent {
        bytes.extend_from_slice(&(e as u64).to_le_bytes());
    }
    bytes.extend_from_slice(record.node_clean.as_bytes());
    bytes.extend_from_slice(record.edge_clean.as_bytes());
    fnv1a64(&bytes)
}

fn round_fingerprint(
    positions: &[NodeId],
    actions: &[Action],
    absent: &[usize],
    contamination: &ContaminationState,
) -> u64 {
    let mut bytes = Vec::new();
    for &p in positions {
        bytes.extend_from_slice(&(p as u64).to_le_bytes());
    }
    for a in actions {
        bytes.extend_from_slice(a.encode().as_bytes());
        bytes.push(b';');
    }
    for &e in absent {
        bytes.extend_from_slice(&(e as u64).to_le_bytes());
    }
    bytes.extend_from_slice(contamination.node_bits_hex().as_bytes());
    bytes.extend_from_slice(contamination.edge_bits_hex().as_bytes());
    fnv1a64(&bytes)
}
