//! Separator-guard strategy for the finite-reappearance model.
//!
//! The team sweeps depth-first over separator vertices. At a node with more
//! than one contaminated incident edge (absent ones included) the lowest-id
//! agent present stays as the separator guard while the rest advance through
//! the lowest contaminated port; once a single contaminated edge remains,
//! everyone at the node, the guard included, advances through it; at a fully
//! decontaminated node the agents backtrack. Absent target edges are waited
//! on, which the finite-reappearance bound keeps short.

use crate::engine::{StepContext, Strategy};
use crate::graph::Port;
use crate::trace::Action;

use super::nav::{AbsentPolicy, NavMemory, NavStep};

pub struct ModifiedStrategy;

#[derive(Debug, Clone, Default)]
pub struct ModifiedMemory {
    pub nav: NavMemory,
}

/// Contaminated ports including absent ones; under strict visibility the
/// unreadable absent ports are treated as contaminated, which only makes the
/// strategy more cautious.
fn threat_ports<M>(view: &crate::engine::LocalView<M>) -> Vec<Port> {
    let mut ports = view.contaminated_ports();
    ports.extend(view.unknown_ports());
    ports.sort_unstable();
    ports.dedup();
    ports
}

impl Strategy for ModifiedStrategy {
    type Memory = ModifiedMemory;

    fn name(&self) -> &'static str {
        "modified"
    }

    fn init_memory(&self, _id: u32) -> ModifiedMemory {
        ModifiedMemory::default()
    }

    fn merge(&self, own: &mut ModifiedMemory, others: &[(u32, ModifiedMemory)]) {
        for (_, other) in others {
            own.nav.absorb(&other.nav);
        }
    }

    fn decide(&self, ctx: &StepContext<'_, ModifiedMemory>, mem: &mut ModifiedMemory) -> Action {
        let view = ctx.view;
        let here = view
            .node_handle
            .expect("modified strategy requires the node-identity oracle");
        mem.nav.arrive(here, ctx.arrival_port);

        let threats = threat_ports(view);
        match threats.len() {
            0 => match mem.nav.step(view, here, AbsentPolicy::Wait) {
                NavStep::Move(p) => Action::Move(p),
                NavStep::Wait | NavStep::Idle => Action::Stay,
            },
            1 => {
                // Single contaminated edge: the stationary agent and anyone
                // with it advance through it, waiting while it is absent.
                mem.nav.note_work();
                let target = threats[0];
                if view.ports[target].present {
                    mem.nav.note_departure(here, target);
                    Action::Move(target)
                } else {
                    Action::Stay
                }
            }
            _ => {
                mem.nav.note_work();
                if ctx.self_id == view.lowest_id() {
                    // Separator guard: hold the node until one contaminated
                    // edge remains.
                    return Action::Stay;
                }
                let target = threats[0];
                if view.ports[target].present {
                    mem.nav.note_departure(here, target);
                    Action::Move(target)
                } else {
                    Action::Stay
                }
            }
        }
    }
}
