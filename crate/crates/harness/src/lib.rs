//! Storage-cluster simulator, fragment files, operation-count benchmarks
//! and self-checks for the codes in `regen_core`.

pub mod bench;
pub mod codec;
pub mod error;
pub mod format;
pub mod range;
pub mod selftest;
pub mod sim;

pub use codec::{parse_field, Codec, CodecKind, Retrieval};
pub use error::{HarnessError, Result};
pub use format::FragmentFile;
pub use sim::{sim_run, ClusterState, CostReport, Simulator};
