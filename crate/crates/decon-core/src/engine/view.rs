//! What an agent can observe at its node, and the per-agent strategy
//! contract.

use crate::graph::Port;
use crate::trace::Action;

/// Distinct agent identifier, positive and unique within a run.
pub type AgentId = u32;

/// Opaque stable node identity, available only when the node-identity oracle
/// is enabled. Strategies may compare and store handles but learn nothing
/// else from them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeHandle(pub(crate) usize);

/// One incident port as seen this round.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PortView {
    pub present: bool,
    /// Contamination status of the footprint edge behind this port. `None`
    /// when the edge is absent and strict visibility is on; with extended
    /// visibility (the default) the status of absent edges is readable too.
    pub contaminated: Option<bool>,
}

/// Everything visible from a node in one round. The port list always covers
/// the full footprint degree; missing ports are the ones with `present ==
/// false`.
#[derive(Debug, Clone)]
pub struct LocalView<M> {
    /// Footprint degree of the node.
    pub degree: usize,
    /// Indexed by port label.
    pub ports: Vec<PortView>,
    pub node_contaminated: bool,
    /// Stable node identity, `Some` only under the node-identity oracle.
    pub node_handle: Option<NodeHandle>,
    /// All agents at this node this round (self included), ascending by id,
    /// with their post-exchange memory snapshots.
    pub co_located: Vec<(AgentId, M)>,
}

impl<M> LocalView<M> {
    /// Number of agents at the node, `A_t(v)`.
    pub fn agent_count(&self) -> usize {
        self.co_located.len()
    }

    /// Ports of absent edges, `{M_t(v)}`, ascending.
    pub fn missing_ports(&self) -> Vec<Port> {
        (0..self.degree).filter(|&p| !self.ports[p].present).collect()
    }

    /// Ports whose edges are contaminated (absent included), ascending.
    /// Under strict visibility absent edges of unknown status are excluded.
    pub fn contaminated_ports(&self) -> Vec<Port> {
        (0..self.degree)
            .filter(|&p| self.ports[p].contaminated == Some(true))
            .collect()
    }

    /// Contaminated ports whose edges are present this round, ascending.
    pub fn visible_contaminated_ports(&self) -> Vec<Port> {
        (0..self.degree)
            .filter(|&p| self.ports[p].present && self.ports[p].contaminated == Some(true))
            .collect()
    }

    /// Absent ports whose status is unreadable (strict visibility only).
    pub fn unknown_ports(&self) -> Vec<Port> {
        (0..self.degree)
            .filter(|&p| self.ports[p].contaminated.is_none())
            .collect()
    }

    /// Lowest agent id present at the node.
    pub fn lowest_id(&self) -> AgentId {
        self.co_located.first().map(|&(id, _)| id).expect("node is occupied")
    }
}

/// Per-round, per-agent context handed to a strategy.
pub struct StepContext<'a, M> {
    pub view: &'a LocalView<M>,
    pub self_id: AgentId,
    /// Port at the current node through which this agent last arrived;
    /// `None` until it first moves. Persists while the agent stays put.
    pub arrival_port: Option<Port>,
}

/// A deterministic per-agent policy over local views and private memory.
///
/// Strategies never see node ids (beyond the opaque handle), global graph
/// parameters, or the round number; the harness alone sizes the team.
pub trait Strategy {
    type Memory: Clone + std::fmt::Debug;

    fn name(&self) -> &'static str;

    /// Memory of agent `id` before round 0, co-located with the whole team
    /// at the home node.
    fn init_memory(&self, id: AgentId) -> Self::Memory;

    /// Face-to-face exchange: fold the co-located agents' memories into this
    /// agent's own. Runs before action selection each round. Must be
    /// commutative and order-independent; the engine can shuffle `others`
    /// under a test flag to enforce that.
    fn merge(&self, _own: &mut Self::Memory, _others: &[(AgentId, Self::Memory)]) {}

    /// One action for this round. `Move` is only legal through a present
    /// port.
    fn decide(&self, ctx: &StepContext<'_, Self::Memory>, mem: &mut Self::Memory) -> Action;
}
