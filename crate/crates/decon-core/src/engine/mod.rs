//! The synchronous round loop and the agent-facing interfaces: local views,
//! per-agent strategy contract, face-to-face exchange, stall detection.

mod run;
mod view;

pub use run::{detect_stall, run, EngineError, RunConfig, RunMeta};
pub use view::{LocalView, NodeHandle, PortView, StepContext, Strategy};
