//! Dynamicity models and per-round legality checking.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{EdgeIdx, EdgeSet, Footprint};

/// The two edge-dynamics regimes. Under FTEA an edge may stay absent for at
/// most `T` consecutive rounds and must be present in the (T+1)-th; under
/// IDED absence is unbounded. Both require the present subgraph to stay
/// connected every round.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum DynamicityModel {
    Ftea { t: u32 },
    Ided,
}

impl DynamicityModel {
    pub fn ftea(t: u32) -> Self {
        assert!(t >= 1, "FTEA requires T >= 1");
        DynamicityModel::Ftea { t }
    }

    pub fn reappearance_bound(&self) -> Option<u32> {
        match self {
            DynamicityModel::Ftea { t } => Some(*t),
            DynamicityModel::Ided => None,
        }
    }
}

/// Per-edge count of consecutive rounds absent, ending at the previous round.
/// Entries are zero for every edge present in the previous round.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AbsenceLedger {
    absent_run: Vec<u32>,
}

impl AbsenceLedger {
    pub fn new(edge_count: usize) -> Self {
        AbsenceLedger {
            absent_run: vec![0; edge_count],
        }
    }

    pub fn run_length(&self, e: EdgeIdx) -> u32 {
        self.absent_run[e]
    }

    /// Folds one round's decision into the ledger.
    pub fn record(&mut self, present: &EdgeSet) {
        for e in 0..self.absent_run.len() {
            if present.contains(e) {
                self.absent_run[e] = 0;
            } else {
                self.absent_run[e] += 1;
            }
        }
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum Violation {
    #[error("present edge set disconnects the graph at round {round}")]
    DisconnectedRound { round: u64 },
    #[error("edge {edge} exceeded the T={t} absence bound at round {round}")]
    TBoundExceeded { round: u64, edge: EdgeIdx, t: u32 },
}

/// Checks one decision against 1-interval connectivity and, under FTEA, the
/// reappearance bound: any edge already absent for T consecutive rounds must
/// be present now.
pub fn validate_decision(
    fp: &Footprint,
    model: DynamicityModel,
    ledger: &AbsenceLedger,
    present: &EdgeSet,
    round: u64,
) -> Result<(), Violation> {
    if !fp.is_connected(present) {
        return Err(Violation::DisconnectedRound { round });
    }
    if let DynamicityModel::Ftea { t } = model {
        for e in 0..fp.edge_count() {
            if ledger.run_length(e) >= t && !present.contains(e) {
                return Err(Violation::TBoundExceeded { round, edge: e, t });
            }
        }
    }
    Ok(())
}
