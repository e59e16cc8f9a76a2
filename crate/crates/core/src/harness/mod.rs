//! Evaluation against the exact oracles: exhaustive enumeration, sweeps,
//! counterexample records and shrinking, cycle-set consistency, DOT output.

mod consistency;
mod dot;
mod enumerate;
mod minimize;
mod sweep;

pub use consistency::{cycle_set_consistency, ConsistencyResult};
pub use dot::{export_dot, Annotations};
pub use enumerate::{
    canonical_code, connected_graphs_from_corpus, enumerate_connected_graphs, graph_from_code,
    ENUMERATION_MAX_ORDER, INTERNAL_ENUMERATION_MAX,
};
pub use minimize::{is_discrepancy, minimize_counterexample};
pub use sweep::{
    full_set_trace_valid, graphs_of_order, outcome_class, read_records, sweep, Checks,
    ConsistencyCounts, DiscrepancyRecord, OrderCounts, RecordCounts, RecordKind, SweepOutcome,
    SweepReport, SweepSettings, Tally,
};
