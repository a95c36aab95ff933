//! Universal n-agent strategy: disperse guards everywhere, then sweep the
//! edges clean.
//!
//! Works on anonymous port-labeled views with no node-identity oracle.
//! Occupancy stands in for node identity: a settled agent marks its node as
//! visited, and settled ids double as node labels for the cleaner's
//! depth-first tour.
//!
//! Phase 1 (dispersal): the lowest-id agent guards the home node while the
//! rest first sweep every home port out-and-back, settling the lowest-id
//! arrival on each unvisited neighbor, then run a group depth-first search
//! through each home port in turn, settling one agent at every newly reached
//! node that still has a contaminated incident edge. Any required edge that
//! is absent is waited on.
//!
//! Phase 2 (cleaning): once every home port has been seen clean, the home
//! guard turns cleaner and tours the graph depth-first, crossing ports in
//! increasing order and waiting for absent ones, which decontaminates every
//! remaining edge. At a contaminated node that has no settled guard yet the
//! cleaner parks until the dispersal settles it, so nothing clean is ever
//! abandoned next to contamination.

use std::collections::BTreeSet;

use crate::engine::{LocalView, StepContext, Strategy};
use crate::graph::Port;
use crate::trace::Action;

pub struct UniStrategy;

#[derive(Debug, Clone)]
pub enum UniMemory {
    HomeGuard { seen_clean: BTreeSet<Port> },
    Disperser(Disperser),
    Settled,
    Cleaner(Cleaner),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
struct Frame {
    entry: Port,
    cursor: Port,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum DispStage {
    StarHome,
    StarOut { home_port: Port },
    DfsHome,
    DfsProbe { from_home: bool },
    DfsAt,
    Done,
}

#[derive(Debug, Clone)]
pub struct Disperser {
    stage: DispStage,
    home_cursor: Port,
    stack: Vec<Frame>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CleanStage {
    AtHome,
    Probe,
    At,
    Done,
}

#[derive(Debug, Clone)]
pub struct Cleaner {
    stage: CleanStage,
    home_cursor: Port,
    stack: Vec<Frame>,
    visited: BTreeSet<u32>,
}

/// A settled agent (or the home guard) marks its node as visited.
fn marker_id(view: &LocalView<UniMemory>) -> Option<u32> {
    view.co_located
        .iter()
        .find(|(_, m)| matches!(m, UniMemory::Settled | UniMemory::HomeGuard { .. }))
        .map(|&(id, _)| id)
}

/// A node still needs a guard while any incident edge is contaminated (or of
/// unknown status under strict visibility).
fn needs_guard(view: &LocalView<UniMemory>) -> bool {
    view.ports
        .iter()
        .any(|p| p.contaminated != Some(false))
}

fn lowest_disperser(view: &LocalView<UniMemory>) -> Option<u32> {
    view.co_located
        .iter()
        .find(|(_, m)| matches!(m, UniMemory::Disperser(_)))
        .map(|&(id, _)| id)
}

impl Strategy for UniStrategy {
    type Memory = UniMemory;

    fn name(&self) -> &'static str {
        "uni"
    }

    fn init_memory(&self, id: u32) -> UniMemory {
        if id == 1 {
            UniMemory::HomeGuard {
                seen_clean: BTreeSet::new(),
            }
        } else {
            UniMemory::Disperser(Disperser {
                stage: DispStage::StarHome,
                home_cursor: 0,
                stack: Vec::new(),
            })
        }
    }

    fn decide(&self, ctx: &StepContext<'_, UniMemory>, mem: &mut UniMemory) -> Action {
        let view = ctx.view;
        match mem {
            UniMemory::Settled => Action::Stay,
            UniMemory::HomeGuard { seen_clean } => {
                for (p, port) in view.ports.iter().enumerate() {
                    if port.contaminated == Some(false) {
                        seen_clean.insert(p);
                    }
                }
                if seen_clean.len() == view.degree {
                    // Home is fully decontaminated: become the cleaner.
                    let mut cleaner = Cleaner {
                        stage: CleanStage::AtHome,
                        home_cursor: 0,
                        stack: Vec::new(),
                        visited: BTreeSet::new(),
                    };
                    let action = cleaner_step(&mut cleaner, view, ctx.arrival_port);
                    *mem = UniMemory::Cleaner(cleaner);
                    action
                } else {
                    Action::Stay
                }
            }
            UniMemory::Disperser(d) => {
                let (action, settled) = disperser_step(d, view, ctx.arrival_port, ctx.self_id);
                if settled {
                    *mem = UniMemory::Settled;
                }
                action
            }
            UniMemory::Cleaner(c) => cleaner_step(c, view, ctx.arrival_port),
        }
    }
}

fn disperser_step(
    d: &mut Disperser,
    view: &LocalView<UniMemory>,
    arrival: Option<Port>,
    self_id: u32,
) -> (Action, bool) {
    loop {
        match d.stage {
            DispStage::StarHome => {
                if d.home_cursor >= view.degree {
                    d.stage = DispStage::DfsHome;
                    d.home_cursor = 0;
                    continue;
                }
                let p = d.home_cursor;
                if !view.ports[p].present {
                    return (Action::Stay, false);
                }
                d.stage = DispStage::StarOut { home_port: p };
                return (Action::Move(p), false);
            }
            DispStage::StarOut { home_port } => {
                if marker_id(view).is_none()
                    && needs_guard(view)
                    && lowest_disperser(view) == Some(self_id)
                {
                    return (Action::Settle, true);
                }
                let back = arrival.expect("star step implies a prior move");
                if !view.ports[back].present {
                    return (Action::Stay, false);
                }
                d.home_cursor = home_port + 1;
                d.stage = DispStage::StarHome;
                return (Action::Move(back), false);
            }
            DispStage::DfsHome => {
                if d.home_cursor >= view.degree {
                    d.stage = DispStage::Done;
                    return (Action::Stay, false);
                }
                let p = d.home_cursor;
                if !view.ports[p].present {
                    return (Action::Stay, false);
                }
                d.home_cursor += 1;
                d.stage = DispStage::DfsProbe { from_home: true };
                return (Action::Move(p), false);
            }
            DispStage::DfsProbe { from_home } => {
                let back = arrival.expect("probe implies a prior move");
                let marked = marker_id(view).is_some();
                if !marked && needs_guard(view) {
                    // Newly reached node with contamination at its edges.
                    if lowest_disperser(view) == Some(self_id) {
                        return (Action::Settle, true);
                    }
                    d.stack.push(Frame {
                        entry: back,
                        cursor: 0,
                    });
                    d.stage = DispStage::DfsAt;
                    continue;
                }
                if from_home && marked {
                    // Descend through the already-settled home neighbor to
                    // reach its unexplored subtree.
                    d.stack.push(Frame {
                        entry: back,
                        cursor: 0,
                    });
                    d.stage = DispStage::DfsAt;
                    continue;
                }
                // Already marked, or clean with nothing behind it: bounce.
                if !view.ports[back].present {
                    return (Action::Stay, false);
                }
                d.stage = if from_home {
                    DispStage::DfsHome
                } else {
                    DispStage::DfsAt
                };
                return (Action::Move(back), false);
            }
            DispStage::DfsAt => {
                let frame = d.stack.last_mut().expect("DfsAt requires a frame");
                while frame.cursor < view.degree {
                    let p = frame.cursor;
                    if p == frame.entry {
                        frame.cursor += 1;
                        continue;
                    }
                    if !view.ports[p].present {
                        return (Action::Stay, false); // wait, lowest port first
                    }
                    frame.cursor += 1;
                    d.stage = DispStage::DfsProbe { from_home: false };
                    return (Action::Move(p), false);
                }
                let entry = frame.entry;
                if !view.ports[entry].present {
                    return (Action::Stay, false);
                }
                d.stack.pop();
                d.stage = if d.stack.is_empty() {
                    DispStage::DfsHome
                } else {
                    DispStage::DfsAt
                };
                return (Action::Move(entry), false);
            }
            DispStage::Done => return (Action::Stay, false),
        }
    }
}

fn cleaner_step(c: &mut Cleaner, view: &LocalView<UniMemory>, arrival: Option<Port>) -> Action {
    loop {
        match c.stage {
            CleanStage::AtHome => {
                if c.home_cursor >= view.degree {
                    c.stage = CleanStage::Done;
                    return Action::Stay;
                }
                let p = c.home_cursor;
                if !view.ports[p].present {
                    return Action::Stay;
                }
                c.home_cursor += 1;
                c.stage = CleanStage::Probe;
                return Action::Move(p);
            }
            CleanStage::Probe => {
                let back = arrival.expect("probe implies a prior move");
                match marker_id(view) {
                    Some(settled) => {
                        if c.visited.insert(settled) {
                            // First visit: explore this node's ports.
                            c.stack.push(Frame {
                                entry: back,
                                cursor: 0,
                            });
                            c.stage = CleanStage::At;
                            continue;
                        }
                        if !view.ports[back].present {
                            return Action::Stay;
                        }
                        c.stage = if c.stack.is_empty() {
                            CleanStage::AtHome
                        } else {
                            CleanStage::At
                        };
                        return Action::Move(back);
                    }
                    None => {
                        if needs_guard(view) {
                            // Unguarded node next to contamination: hold it
                            // until the dispersal settles a guard here.
                            return Action::Stay;
                        }
                        if !view.ports[back].present {
                            return Action::Stay;
                        }
                        c.stage = if c.stack.is_empty() {
                            CleanStage::AtHome
                        } else {
                            CleanStage::At
                        };
                        return Action::Move(back);
                    }
                }
            }
            CleanStage::At => {
                let frame = c.stack.last_mut().expect("At requires a frame");
                while frame.cursor < view.degree {
                    let p = frame.cursor;
                    if p == frame.entry {
                        frame.cursor += 1;
                        continue;
                    }
                    if !view.ports[p].present {
                        return Action::Stay; // wait for the absent edge, lowest port first
                    }
                    frame.cursor += 1;
                    c.stage = CleanStage::Probe;
                    return Action::Move(p);
                }
                let entry = frame.entry;
                if !view.ports[entry].present {
                    return Action::Stay;
                }
                c.stack.pop();
                c.stage = if c.stack.is_empty() {
                    CleanStage::AtHome
                } else {
                    CleanStage::At
                };
                return Action::Move(entry);
            }
            CleanStage::Done => return Action::Stay,
        }
    }
}
