//! The three decontamination policies as deterministic per-agent strategies,
//! plus the shared traversal toolkit they navigate with.

mod infinite;
mod modified;
pub mod nav;
mod uni;

pub use infinite::{InfiniteMemory, InfiniteStrategy};
pub use modified::{ModifiedMemory, ModifiedStrategy};
pub use uni::{UniMemory, UniStrategy};
