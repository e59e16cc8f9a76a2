//! Cycles, cycle-sets and the operations on their R labels.

mod cx;
mod cycle;
mod search;
mod set;

pub use cx::{detect_cx, CxMode};
pub use cycle::{enumerate_cycles, Cycle, MAX_CYCLE_EDGES};
pub use search::{find_full_cycle_sets, spanning_cycle_set, Budget, EXHAUSTIVE_MAX_VERTICES};
pub use set::{
    edge_labels, induce_free_subgraph, recombine_fs_cx, remove_cycle, removable_cycles,
    vertex_roles, BoundaryRule, CxStatus, CycleSet, CycleSetTrace, FreeSubgraph, RemovableInfo,
    Role, SetKind, VertexRole,
};

pub(crate) use cx::flags_as_cx;
pub(crate) use search::{full_sets_from_cycles, spanning_from_cycles};
