//! Run traces: newline-delimited JSON records with a canonical field order,
//! one header, one record per round, one outcome. Traces embed the footprint
//! so they can be re-validated without the originating scenario.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::DynamicityModel;
use crate::graph::{Footprint, GraphError, Port};

#[derive(Debug, Error)]
pub enum TraceError {
    #[error("corrupt trace: {0}")]
    Corrupt(String),
    #[error("corrupt trace footprint: {0}")]
    Footprint(#[from] GraphError),
}

/// What an agent did in a round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Action {
    Stay,
    Move(Port),
    /// Stay and mark self stationary; movement-wise identical to `Stay`.
    Settle,
}

impl Action {
    pub fn encode(&self) -> String {
        match self {
            Action::Stay => "stay".to_string(),
            Action::Settle => "settle".to_string(),
            Action::Move(p) => format!("move:{p}"),
        }
    }

    pub fn decode(s: &str) -> Result<Action, TraceError> {
        match s {
            "stay" => Ok(Action::Stay),
            "settle" => Ok(Action::Settle),
            other => other
                .strip_prefix("move:")
                .and_then(|p| p.parse::<Port>().ok())
                .map(Action::Move)
                .ok_or_else(|| TraceError::Corrupt(format!("bad action {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutcomeKind {
    FullSuccess,
    NodeSuccess,
    Stall,
    MonotonicityViolation,
    ModelViolation,
    RoundLimit,
}

impl OutcomeKind {
    /// Scriptable process exit status for each outcome.
    pub fn exit_code(&self) -> i32 {
        match self {
            OutcomeKind::FullSuccess => 0,
            OutcomeKind::NodeSuccess => 2,
            OutcomeKind::Stall => 3,
            OutcomeKind::MonotonicityViolation => 4,
            OutcomeKind::ModelViolation => 5,
            OutcomeKind::RoundLimit => 6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub kind: OutcomeKind,
    pub round: u64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct TraceHeader {
    pub version: u32,
    pub scenario: String,
    pub seed: u64,
    pub strategy: String,
    pub adversary: String,
    pub model: String,
    pub t: u32,
    pub home: usize,
    pub agents: u32,
    pub n: usize,
    pub edges: Vec<(usize, usize, usize, usize)>,
}

impl TraceHeader {
    pub fn model(&self) -> Result<DynamicityModel, TraceError> {
        match self.model.as_str() {
            "ftea" => Ok(DynamicityModel::Ftea { t: self.t }),
            "ided" => Ok(DynamicityModel::Ided),
            other => Err(TraceError::Corrupt(format!("bad model {other:?}"))),
        }
    }

    pub fn footprint(&self) -> Result<Footprint, TraceError> {
        Ok(Footprint::from_edges(self.n, &self.edges)?)
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct AgentRecord {
    pub id: u32,
    pub node: usize,
    pub action: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct RoundRecord {
    pub round: u64,
    pub absent: Vec<usize>,
    pub agents: Vec<AgentRecord>,
    pub node_clean: String,
    pub edge_clean: String,
    pub recontaminated_nodes: Vec<usize>,
    pub recontaminated_edges: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct OutcomeRecord {
    pub kind: OutcomeKind,
    pub round: u64,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TraceRecord {
    Header(TraceHeader),
    Round(RoundRecord),
    Outcome(OutcomeRecord),
}

/// A complete run trace.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub header: TraceHeader,
    pub rounds: Vec<RoundRecord>,
    pub outcome: OutcomeRecord,
}

impl Trace {
    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        let mut push = |r: &TraceRecord| {
            out.push_str(&serde_json::to_string(r).expect("trace records serialize"));
            out.push('\n');
        };
        push(&TraceRecord::Header(self.header.clone()));
        for round in &self.rounds {
            push(&TraceRecord::Round(round.clone()));
        }
        push(&TraceRecord::Outcome(self.outcome.clone()));
        out
    }

    pub fn from_jsonl(text: &str) -> Result<Trace, TraceError> {
        let mut header = None;
        let mut rounds = Vec::new();
        let mut outcome = None;
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let record: TraceRecord = serde_json::from_str(line)
                .map_err(|e| TraceError::Corrupt(format!("line {}: {e}", lineno + 1)))?;
            match record {
                TraceRecord::Header(h) => {
                    if header.replace(h).is_some() {
                        return Err(TraceError::Corrupt("duplicate header".into()));
                    }
                }
                TraceRecord::Round(r) => rounds.push(r),
                TraceRecord::Outcome(o) => {
                    if outcome.replace(o).is_some() {
                        return Err(TraceError::Corrupt("duplicate outcome".into()));
                    }
                }
            }
        }
        let header = header.ok_or_else(|| TraceError::Corrupt("missing header".into()))?;
        let outcome = outcome.ok_or_else(|| TraceError::Corrupt("missing outcome".into()))?;
        Ok(Trace {
            header,
            rounds,
            outcome,
        })
    }
}

/// Stable 64-bit FNV-1a, used for scenario hashes and stall fingerprints.
pub fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut hash: u64 = 0xcbf2_9ce4_8422_2325;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn action_encoding_round_trips() {
        for a in [Action::Stay, Action::Settle, Action::Move(3)] {
            assert_eq!(Action::decode(&a.encode()).unwrap(), a);
        }
        assert!(Action::decode("fly:2").is_err());
    }

    #[test]
    fn jsonl_round_trip() {
        let trace = Trace {
            header: TraceHeader {
                version: 1,
                scenario: "abcd".into(),
                seed: 7,
                strategy: "uni".into(),
                adversary: "static".into(),
                model: "ftea".into(),
                t: 2,
                home: 0,
                agents: 3,
                n: 3,
                edges: vec![(0, 1, 0, 0), (0, 2, 1, 0), (1, 2, 1, 1)],
            },
            rounds: vec![RoundRecord {
                round: 0,
                absent: vec![],
                agents: vec![AgentRecord {
                    id: 1,
                    node: 0,
                    action: "stay".into(),
                }],
                node_clean: "01".into(),
                edge_clean: "00".into(),
                recontaminated_nodes: vec![],
                recontaminated_edges: vec![],
            }],
            outcome: OutcomeRecord {
                kind: OutcomeKind::RoundLimit,
                round: 0,
                detail: String::new(),
            },
        };
        let text = trace.to_jsonl();
        assert_eq!(text.lines().count(), 3);
        let back = Trace::from_jsonl(&text).unwrap();
        assert_eq!(back, trace);
        assert_eq!(back.to_jsonl(), text);
    }

    #[test]
    fn exit_codes_are_pinned() {
        assert_eq!(OutcomeKind::FullSuccess.exit_code(), 0);
        assert_eq!(OutcomeKind::NodeSuccess.exit_code(), 2);
        assert_eq!(OutcomeKind::Stall.exit_code(), 3);
        assert_eq!(OutcomeKind::MonotonicityViolation.exit_code(), 4);
        assert_eq!(OutcomeKind::ModelViolation.exit_code(), 5);
        assert_eq!(OutcomeKind::RoundLimit.exit_code(), 6);
    }
}
