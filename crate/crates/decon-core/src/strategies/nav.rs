//! Depth-first sweep toolkit for strategies with the node-identity oracle.
//!
//! A sweep walks the graph lowest-port-first, bounces off nodes it has
//! already seen, backtracks through recorded entry ports, and starts over
//! from scratch when it exhausts its root. A sweep that completes without
//! encountering any actionable work parks the agent until local conditions
//! change.

use std::collections::{BTreeMap, BTreeSet};

use crate::engine::{LocalView, NodeHandle};
use crate::graph::Port;

/// What the walker knows about one node.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeNav {
    /// Port back toward the node this agent first arrived from. `None` for
    /// the sweep root and for entries adopted from exchange partners until
    /// the agent walks there itself.
    pub parent_port: Option<Port>,
    /// Ports already probed from this node (by this agent or a partner).
    pub tried: BTreeSet<Port>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum NavPhase {
    /// Ordinary movement; no pending probe to resolve.
    #[default]
    Roam,
    /// The previous action probed an untried port; the arrival node must be
    /// classified (new: keep exploring, known: bounce straight back).
    Probe,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NavMemory {
    pub nodes: BTreeMap<NodeHandle, NodeNav>,
    pub root: Option<NodeHandle>,
    pub phase: NavPhase,
    /// Set when the agent does strategy work (guarding, advancing on
    /// contamination, binding a missing edge); cleared at each sweep reset.
    pub acted: bool,
    /// Set when a whole sweep passed without any work; cleared by work.
    pub idle: bool,
    /// True if the node the walker is on was already known when it arrived
    /// (drives the probe bounce).
    arrived_at_known: bool,
    last_node: Option<NodeHandle>,
    last_arrival: Option<Port>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NavStep {
    Move(Port),
    /// Stay put this round (waiting on an absent edge).
    Wait,
    /// Nothing left to do anywhere this sweep; park.
    Idle,
}

/// Whether the sweep waits for absent untried or parent edges, or skips past
/// them. Waiting suits the finite-reappearance model; under unbounded
/// disappearance the sweep routes around instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AbsentPolicy {
    Wait,
    Skip,
}

impl NavMemory {
    /// Records this round's position. Must be called once per round before
    /// [`step`]. `arrival_port` is the port the agent last arrived through.
    pub fn arrive(&mut self, here: NodeHandle, arrival_port: Option<Port>) {
        if self.root.is_none() {
            self.root = Some(here);
        }
        if self.last_node != Some(here) {
            self.arrived_at_known = self.nodes.contains_key(&here);
            self.last_node = Some(here);
        }
        self.last_arrival = arrival_port;
        let entry = self.nodes.entry(here).or_default();
        if entry.parent_port.is_none() && self.root != Some(here) {
            entry.parent_port = arrival_port;
        }
    }

    /// Marks work done at the current position; keeps the sweep alive.
    pub fn note_work(&mut self) {
        self.acted = true;
        self.idle = false;
    }

    /// Records that a port is being crossed so the sweep does not re-probe it.
    pub fn note_departure(&mut self, here: NodeHandle, port: Port) {
        self.nodes.entry(here).or_default().tried.insert(port);
        self.phase = NavPhase::Roam;
    }

    /// Folds a partner's map into this one: tried ports union, node set
    /// union. Parent ports are never adopted; each agent backtracks only
    /// along its own walk. Commutative and idempotent.
    pub fn absorb(&mut self, other: &NavMemory) {
        for (handle, nav) in &other.nodes {
            let entry = self.nodes.entry(*handle).or_default();
            entry.tried.extend(nav.tried.iter().copied());
        }
    }

    /// One sweep step from `here`. The caller resolves `Move` into an engine
    /// action and must have called [`arrive`] this round.
    pub fn step<M>(
        &mut self,
        view: &LocalView<M>,
        here: NodeHandle,
        policy: AbsentPolicy,
    ) -> NavStep {
        if self.idle {
            return NavStep::Idle;
        }
        if self.phase == NavPhase::Probe {
            if self.arrived_at_known {
                // Known node reached through a probe: bounce straight back.
                let back = self.last_arrival.expect("a probe is a move");
                if view.ports[back].present {
                    self.phase = NavPhase::Roam;
                    return NavStep::Move(back);
                }
                if policy == AbsentPolicy::Wait {
                    return NavStep::Wait; // keep the probe pending
                }
                // Route around the vanished return edge instead of pinning.
                self.phase = NavPhase::Roam;
            } else {
                self.phase = NavPhase::Roam;
            }
        }
        loop {
            let nav = self.nodes.entry(here).or_default();
            let parent = nav.parent_port;
            let mut waiting = false;
            let mut probe = None;
            for p in 0..view.degree {
                if Some(p) == parent || nav.tried.contains(&p) {
                    continue;
                }
                if view.ports[p].present {
                    probe = Some(p);
                    break;
                }
                waiting = true;
            }
            if let Some(p) = probe {
                nav.tried.insert(p);
                self.phase = NavPhase::Probe;
                return NavStep::Move(p);
            }
            if waiting && policy == AbsentPolicy::Wait {
                return NavStep::Wait;
            }
            match parent {
                Some(back) => {
                    if view.ports[back].present {
                        return NavStep::Move(back);
                    }
                    return NavStep::Wait;
                }
                None => {
                    // Sweep root exhausted: start over, or park if the whole
                    // sweep found nothing to act on.
                    if !self.acted {
                        self.idle = true;
                        return NavStep::Idle;
                    }
                    self.acted = false;
                    self.nodes.clear();
                    self.root = Some(here);
                    self.nodes.insert(here, NodeNav::default());
                    // Retry immediately with the cleared map.
                    continue;
                }
            }
        }
    }
}
