//! Missing-edge-guard strategy for the indefinite-disappearance model.
//!
//! On top of the depth-first separator sweep, agents bind one-per-missing-port
//! as guards wherever edges are absent (lowest ids to lowest ports) and hold
//! the node until those edges reappear; reappeared edges leave the missing set
//! and are handled by the visible-contamination rules, so a guard on a
//! reappeared contaminated edge advances through it exactly when the node
//! keeps a stationary cover or the edge is the last contaminated one.
//! Mobile agents branch on the visible contaminated ports: more than one
//! binds an extra stationary agent, exactly one pulls everyone through it,
//! none sends the group looking for a new route through present clean edges.

use crate::engine::{StepContext, Strategy};
use crate::trace::Action;

use super::nav::{AbsentPolicy, NavMemory, NavStep};

pub struct InfiniteStrategy;

#[derive(Debug, Clone, Default)]
pub struct InfiniteMemory {
    pub nav: NavMemory,
}

impl Strategy for InfiniteStrategy {
    type Memory = InfiniteMemory;

    fn name(&self) -> &'static str {
        "infinite"
    }

    fn init_memory(&self, _id: u32) -> InfiniteMemory {
        InfiniteMemory::default()
    }

    fn merge(&self, own: &mut InfiniteMemory, others: &[(u32, InfiniteMemory)]) {
        for (_, other) in others {
            own.nav.absorb(&other.nav);
        }
    }

    fn decide(&self, ctx: &StepContext<'_, InfiniteMemory>, mem: &mut InfiniteMemory) -> Action {
        let view = ctx.view;
        let here = view
            .node_handle
            .expect("infinite strategy requires the node-identity oracle");
        mem.nav.arrive(here, ctx.arrival_port);

        // Missing-port guard binding: lowest ids take lowest absent ports,
        // one per port, recomputed every round so a reappeared edge releases
        // its guard and a vanished one captures a new guard on the spot.
        let missing = view.missing_ports();
        let ids: Vec<u32> = view.co_located.iter().map(|&(id, _)| id).collect();
        let bound = missing.len().min(ids.len());
        if ids[..bound].contains(&ctx.self_id) {
            mem.nav.note_work();
            return Action::Stay;
        }

        let visible = view.visible_contaminated_ports();
        match visible.len() {
            0 => {
                // Nothing visible to clean here; absent contaminated edges
                // are covered by the bound guards. Search for a new route.
                match mem.nav.step(view, here, AbsentPolicy::Skip) {
                    NavStep::Move(p) => Action::Move(p),
                    NavStep::Wait | NavStep::Idle => Action::Stay,
                }
            }
            1 => {
                mem.nav.note_work();
                mem.nav.note_departure(here, visible[0]);
                Action::Move(visible[0])
            }
            _ => {
                mem.nav.note_work();
                let unbound_lowest = ids[bound..].first().copied();
                if unbound_lowest == Some(ctx.self_id) {
                    // One extra stationary agent shields the other visible
                    // contaminated edges while the rest advance.
                    return Action::Stay;
                }
                mem.nav.note_departure(here, visible[0]);
                Action::Move(visible[0])
            }
        }
    }
}
