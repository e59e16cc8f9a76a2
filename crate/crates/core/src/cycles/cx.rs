use serde::{Deserialize, Serialize};

use super::set::{removable_cycles, CxStatus, CycleSet, RemovableInfo};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::is_hamiltonian;
use crate::reduction::{classify_vertex, NClass};

/// How a removable cycle is judged to be a Cx.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CxMode {
    /// The union left after removal is non-Hamiltonian, by the exact oracle.
    #[default]
    Oracle,
    /// Heuristic: removal creates an N3 vertex or a vertex of degree <= 1,
    /// or disconnects the union.
    Procedural,
}

impl CxMode {
    pub(crate) fn status(self) -> CxStatus {
        match self {
            CxMode::Oracle => CxStatus::CxByOracle,
            CxMode::Procedural => CxStatus::CxByProcedure,
        }
    }
}

/// True when going from `before` to `after` produced a new N3 vertex, a new
/// vertex of degree <= 1, or split a connected union.
pub(crate) fn procedural_flags(before: &Graph, after: &Graph) -> bool {
    let n3 = |g: &Graph, v| classify_vertex(g, v).map(|c| c.class == NClass::N3).unwrap_or(false);
    (0..after.n()).any(|v| {
        (after.deg(v) <= 1 && before.deg(v) > 1) || (n3(after, v) && !n3(before, v))
    }) || (before.is_connected() && !after.is_connected())
}

/// Whether deleting member `index` (assumed removable) makes it a Cx.
pub(crate) fn flags_as_cx(cs: &CycleSet, index: usize, mode: CxMode) -> bool {
    let after = cs.without_member(index).union_graph();
    match mode {
        CxMode::Oracle => !is_hamiltonian(&after),
        CxMode::Procedural => procedural_flags(&cs.union_graph(), &after),
    }
}

/// The first removable member (canonical order) that `mode` flags as a Cx.
pub fn detect_cx(cs: &CycleSet, mode: CxMode) -> Result<Option<RemovableInfo>> {
    let removable = removable_cycles(cs);
    if removable.is_empty() {
        return Err(Error::Contract("detect_cx needs a set with a removable cycle".into()));
    }
    Ok(removable
        .into_iter()
        .find(|r| flags_as_cx(cs, r.index, mode))
        .map(|r| RemovableInfo {
            cx_status: mode.status(),
            ..r
        }))
}
