//! Cycle-set Hamiltonicity pipeline.
//!
//! The crate decides Hamiltonicity of small simple graphs through a chain of
//! structural steps (degree-forcing reduction, full cycle-sets, removable
//! cycles, spanning cycle-sets, and the connectivity of an R-label-filtered
//! subgraph), and checks every verdict against two exact oracles over
//! exhaustively enumerated graphs.

pub mod cycles;
pub mod error;
pub mod graph;
pub mod harness;
pub mod oracle;
pub mod reduction;
pub mod verdict;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use graph::{EdgeId, Graph, Vertex};
pub use verdict::{decide, PipelineConfig, Verdict, VerdictReport};
