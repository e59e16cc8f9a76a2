//! Fixtures shared by unit tests.

use crate::cycles::Cycle;
use crate::graph::{Graph, Vertex};

/// Hubs u = 0, v = 1; paths 0-2-1 and 0-3-1; chord 0-1.
pub(crate) fn theta4() -> Graph {
    Graph::new(4, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 1)]).unwrap()
}

pub(crate) fn cyc(g: &Graph, seq: &[Vertex]) -> Cycle {
    Cycle::new(g, seq).unwrap()
}
