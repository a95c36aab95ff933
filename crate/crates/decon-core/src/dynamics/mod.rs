//! Edge dynamics: the two dynamicity models, legality checking of per-round
//! edge sets, the built-in adversaries, and the lower-bound scenario
//! constructions.

mod adversary;
mod model;
mod scenarios;

pub use adversary::{
    Adversary, FixedAbsenceAdversary, Observation, RandomFteaAdversary, ScheduleAdversary,
    StaticAdversary, WheelRimAdversary,
};
pub use model::{validate_decision, AbsenceLedger, DynamicityModel, Violation};
pub use scenarios::{bipartite_scenario, diameter_tree_scenario, wheel_scenario, ScenarioError};
