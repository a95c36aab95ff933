//! Round-synchronous simulator for monotone decontamination of dynamic
//! graphs by mobile agents.
//!
//! A static port-labeled footprint carries a presence function realized by an
//! adversary under one of two dynamicity regimes (bounded or unbounded edge
//! absence, connectivity every round). Teams of agents run deterministic
//! per-agent policies to decontaminate every node and edge without ever
//! letting anything clean get recontaminated. The crate provides the graph
//! and contamination state machinery, the round engine, three decontamination
//! strategies, scenario generators with their lower-bound adversaries, and a
//! trace format with an independent verifier.

pub mod contamination;
pub mod dynamics;
pub mod engine;
pub mod experiment;
pub mod generate;
pub mod graph;
pub mod metrics;
pub mod scenario;
pub mod strategies;
pub mod testing;
pub mod trace;
pub mod verify;
