//! Lower-bound scenario constructions: footprint, adversary, home node and
//! the dynamicity model each argument is stated in.

use thiserror::Error;

use crate::dynamics::adversary::{Adversary, StaticAdversary, WheelRimAdversary};
use crate::dynamics::model::DynamicityModel;
use crate::generate;
use crate::graph::{Footprint, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ScenarioError {
    #[error("bad n: {0}")]
    BadN(String),
    #[error("bad depth: {0}")]
    BadDepth(String),
}

/// A packaged lower-bound construction.
pub struct LowerBoundScenario {
    pub footprint: Footprint,
    pub adversary: Box<dyn Adversary>,
    pub home: NodeId,
    pub model: DynamicityModel,
}

/// K_{n/2,n/2} with a static adversary; the argument needs no edge removal.
/// Home is the first node of partition A. Stated in the FTEA model (any T).
pub fn bipartite_scenario(n: usize) -> Result<LowerBoundScenario, ScenarioError> {
    if !n.is_multiple_of(2) || n <= 4 {
        return Err(ScenarioError::BadN(format!("need even n > 4, got {n}")));
    }
    let footprint = generate::complete_bipartite(n)
        .map_err(|e| ScenarioError::BadN(e.to_string()))?;
    Ok(LowerBoundScenario {
        footprint,
        adversary: Box::new(StaticAdversary),
        home: 0,
        model: DynamicityModel::ftea(1),
    })
}

/// Wheel on `n` vertices under IDED: rim absent from round 0, restored
/// permanently once every outer vertex is occupied. Home is the hub.
pub fn wheel_scenario(n: usize) -> Result<LowerBoundScenario, ScenarioError> {
    if n <= 4 {
        return Err(ScenarioError::BadN(format!("need n > 4, got {n}")));
    }
    let footprint = generate::wheel(n).map_err(|e| ScenarioError::BadN(e.to_string()))?;
    Ok(LowerBoundScenario {
        footprint,
        adversary: Box::new(WheelRimAdversary::new()),
        home: 0,
        model: DynamicityModel::Ided,
    })
}

/// Complete binary tree of the given depth with a static adversary; on a tree
/// no edge may ever disappear, so the static adversary is the only legal one.
/// Home is the root. Stated in the FTEA model.
pub fn diameter_tree_scenario(depth: u32) -> Result<LowerBoundScenario, ScenarioError> {
    if depth < 1 {
        return Err(ScenarioError::BadDepth(format!("need depth >= 1, got {depth}")));
    }
    let footprint = generate::complete_binary_tree(depth)
        .map_err(|e| ScenarioError::BadDepth(e.to_string()))?;
    Ok(LowerBoundScenario {
        footprint,
        adversary: Box::new(StaticAdversary),
        home: 0,
        model: DynamicityModel::ftea(1),
    })
}
