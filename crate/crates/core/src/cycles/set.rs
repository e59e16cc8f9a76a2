use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::cycle::Cycle;
use crate::error::{Error, Result};
use crate::graph::{all_vertices, bit, Graph, Vertex};
use crate::reduction::{eliminate_to_fixpoint, Edge, Rejection};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SetKind {
    /// E - V + 1 cycles covering every vertex and edge.
    Full,
    /// Minimum number of cycles covering every vertex.
    Spanning,
    /// A spanning set with one extra cycle merged back in.
    Recombined,
}

/// How a boundary vertex is recognised.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryRule {
    /// Exactly two incident edges have R = 1; other incident edges may have any R.
    #[default]
    Relaxed,
    /// The vertex has exactly two incident edges and both have R = 1.
    Strict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Role {
    Boundary,
    Interior,
    Other,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexRole {
    pub role: Role,
    /// R value -> number of incident union edges carrying it.
    pub histogram: BTreeMap<u32, usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CxStatus {
    NotCx,
    CxByOracle,
    CxByProcedure,
    Unknown,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemovableInfo {
    /// Position in [`CycleSet::cycles`].
    pub index: usize,
    pub cycle: Cycle,
    /// The member's unique R = 1 edge.
    pub edge: Edge,
    pub endpoints_boundary: bool,
    pub cx_status: CxStatus,
}

/// A collection of distinct cycles of one parent graph with per-edge
/// multiplicities R.
///
/// Members are kept in canonical cycle order, so every derived quantity is
/// independent of the order the cycles were supplied in.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleSet {
    parent: Graph,
    cycles: Vec<Cycle>,
    kind: SetKind,
    labels: Vec<u32>,
    boundary: BoundaryRule,
}

fn count_labels(parent: &Graph, cycles: &[Cycle]) -> Vec<u32> {
    let mut labels = vec![0u32; parent.edge_count()];
    for c in cycles {
        let mut mask = c.edge_mask();
        while mask != 0 {
            labels[mask.trailing_zeros() as usize] += 1;
            mask &= mask - 1;
        }
    }
    labels
}

impl CycleSet {
    /// Builds a set of the given kind. Members must be distinct cycles of
    /// `parent`; `Full` sets are checked against their defining invariants.
    pub fn new(parent: Graph, mut cycles: Vec<Cycle>, kind: SetKind) -> Result<CycleSet> {
        if let Some(c) = cycles.iter().find(|c| !c.is_cycle_of(&parent)) {
            return Err(Error::Contract(format!("{c:?} is not a cycle of the parent graph")));
        }
        cycles.sort();
        if cycles.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Contract("cycle-set members must be distinct".into()));
        }
        let labels = count_labels(&parent, &cycles);
        let set = CycleSet {
            parent,
            cycles,
            kind,
            labels,
            boundary: BoundaryRule::Relaxed,
        };
        if kind == SetKind::Full {
            set.check_full()?;
        }
        Ok(set)
    }

    pub fn with_boundary_rule(mut self, rule: BoundaryRule) -> CycleSet {
        self.boundary = rule;
        self
    }

    pub fn parent(&self) -> &Graph {
        &self.parent
    }

    pub fn cycles(&self) -> &[Cycle] {
        &self.cycles
    }

    pub fn kind(&self) -> SetKind {
        self.kind
    }

    pub fn boundary_rule(&self) -> BoundaryRule {
        self.boundary
    }

    pub fn len(&self) -> usize {
        self.cycles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycles.is_empty()
    }

    /// R per parent edge id (0 for edges outside the union).
    pub fn labels(&self) -> &[u32] {
        &self.labels
    }

    pub fn covered_vertices(&self) -> u64 {
        self.cycles.iter().fold(0, |m, c| m | c.vertex_mask())
    }

    /// Parent vertices lying on no member cycle.
    pub fn uncovered_vertices(&self) -> Vec<Vertex> {
        let covered = self.covered_vertices();
        (0..self.parent.n()).filter(|&v| covered & bit(v) == 0).collect()
    }

    /// The union of the members, on all parent vertices.
    pub fn union_graph(&self) -> Graph {
        let edges = self
            .parent
            .edges()
            .iter()
            .zip(&self.labels)
            .filter(|(_, &r)| r > 0)
            .map(|(&e, _)| e);
        Graph::new(self.parent.n(), edges).expect("subgraph of a valid graph")
    }

    /// Checks the full cycle-set invariants: E - V + 1 members, every vertex
    /// and edge covered, and total member length equal to total R.
    pub fn check_full(&self) -> Result<()> {
        let g = &self.parent;
        let expected = (g.edge_count() + 1).checked_sub(g.n());
        if expected != Some(self.cycles.len()) {
            return Err(Error::Contract(format!(
                "full cycle-set has {} cycles, expected E - V + 1 = {:?}",
                self.cycles.len(),
                expected
            )));
        }
        if self.covered_vertices() != all_vertices(g.n()) {
            return Err(Error::Contract("full cycle-set leaves a vertex uncovered".into()));
        }
        if self.labels.contains(&0) {
            return Err(Error::Contract("full cycle-set leaves an edge uncovered".into()));
        }
        let lengths: usize = self.cycles.iter().map(Cycle::len).sum();
        let total: u32 = self.labels.iter().sum();
        if lengths != total as usize {
            return Err(Error::Contract("cycle lengths and labels disagree".into()));
        }
        Ok(())
    }

    fn incident_labels(&self, v: Vertex) -> impl Iterator<Item = u32> + '_ {
        let g = &self.parent;
        crate::graph::mask_iter(g.adjacency(v))
            .map(move |w| self.labels[g.edge_id(v, w).expect("adjacent").0])
            .filter(|&r| r > 0)
    }

    fn role_of(&self, v: Vertex) -> VertexRole {
        let mut histogram = BTreeMap::new();
        for r in self.incident_labels(v) {
            *histogram.entry(r).or_insert(0) += 1;
        }
        let ones = histogram.get(&1).copied().unwrap_or(0);
        let degree: usize = histogram.values().sum();
        let boundary = match self.boundary {
            BoundaryRule::Relaxed => ones == 2,
            BoundaryRule::Strict => ones == 2 && degree == 2,
        };
        let role = if boundary {
            Role::Boundary
        } else if degree > 0 && histogram.keys().all(|&r| r == 2) {
            Role::Interior
        } else {
            Role::Other
        };
        VertexRole { role, histogram }
    }

    fn removable_at(&self, index: usize) -> Option<RemovableInfo> {
        let cycle = &self.cycles[index];
        let mut ones = cycle.edge_pairs().filter(|&(a, b)| {
            self.labels[self.parent.edge_id(a, b).expect("member edge").0] == 1
        });
        let edge = ones.next()?;
        if ones.next().is_some() {
            return None;
        }
        let boundary = |v| self.role_of(v).role == Role::Boundary;
        (boundary(edge.0) && boundary(edge.1)).then(|| RemovableInfo {
            index,
            cycle: cycle.clone(),
            edge,
            endpoints_boundary: true,
            cx_status: CxStatus::Unknown,
        })
    }

    /// Identity check: cached labels equal a from-scratch recount.
    pub fn labels_consistent(&self) -> bool {
        self.labels == count_labels(&self.parent, &self.cycles)
    }
}

/// R for every edge in the union, keyed by `(u, v)` with `u < v`.
pub fn edge_labels(cs: &CycleSet) -> BTreeMap<Edge, u32> {
    cs.parent
        .edges()
        .iter()
        .zip(&cs.labels)
        .filter(|(_, &r)| r > 0)
        .map(|(&e, &r)| (e, r))
        .collect()
}

/// Role of every parent vertex, indexed by vertex.
pub fn vertex_roles(cs: &CycleSet) -> Vec<VertexRole> {
    (0..cs.parent.n()).map(|v| cs.role_of(v)).collect()
}

/// Members with a unique R = 1 edge whose endpoints are both boundary vertices.
pub fn removable_cycles(cs: &CycleSet) -> Vec<RemovableInfo> {
    (0..cs.cycles.len()).filter_map(|i| cs.removable_at(i)).collect()
}

/// Drops a removable member. Edges reaching R = 0 leave the union.
pub fn remove_cycle(cs: &CycleSet, index: usize) -> Result<CycleSet> {
    if index >= cs.cycles.len() {
        return Err(Error::Contract(format!(
            "cycle index {index} out of range for a set of {}",
            cs.cycles.len()
        )));
    }
    if cs.removable_at(index).is_none() {
        return Err(Error::Contract(format!(
            "{:?} is not removable",
            cs.cycles[index]
        )));
    }
    Ok(cs.without_member(index))
}

impl CycleSet {
    pub(crate) fn without_member(&self, index: usize) -> CycleSet {
        let mut next = self.clone();
        let gone = next.cycles.remove(index);
        let mut mask = gone.edge_mask();
        while mask != 0 {
            next.labels[mask.trailing_zeros() as usize] -= 1;
            mask &= mask - 1;
        }
        next
    }
}

/// Merges `cx` into a spanning set, then deletes removable members other
/// than `cx` one at a time (first in canonical order) until none is left.
pub fn recombine_fs_cx(fs: &CycleSet, cx: &Cycle) -> Result<CycleSet> {
    if fs.kind != SetKind::Spanning {
        return Err(Error::Contract(format!(
            "recombination expects a spanning set, got {:?}",
            fs.kind
        )));
    }
    if !cx.is_cycle_of(&fs.parent) {
        return Err(Error::Contract(format!("{cx:?} is not a cycle of the parent graph")));
    }
    let mut cycles = fs.cycles.clone();
    if !cycles.contains(cx) {
        cycles.push(cx.clone());
    }
    let mut set = CycleSet::new(fs.parent.clone(), cycles, SetKind::Recombined)?
        .with_boundary_rule(fs.boundary);
    while let Some(info) = removable_cycles(&set).into_iter().find(|r| &r.cycle != cx) {
        set = set.without_member(info.index);
    }
    if set.is_empty() {
        return Err(Error::Degenerate("recombination removed every cycle".into()));
    }
    Ok(set)
}

/// The subgraph F: the union with every R = 2 edge deleted, then reduced to
/// the elimination fixpoint.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeSubgraph {
    pub graph: Graph,
    pub deleted_r2: Vec<Edge>,
    pub eliminated: Vec<Edge>,
    /// Set when the reduction rejected; F then counts as disconnected.
    pub rejected: Option<Rejection>,
}

impl FreeSubgraph {
    /// Connected over every parent vertex and not rejected.
    pub fn is_connected(&self) -> bool {
        self.rejected.is_none() && self.graph.is_connected()
    }

    /// A single cycle through every vertex.
    pub fn is_spanning_cycle(&self) -> bool {
        let g = &self.graph;
        g.n() >= 3
            && g.edge_count() == g.n()
            && (0..g.n()).all(|v| g.deg(v) == 2)
            && g.is_connected()
    }
}

pub fn induce_free_subgraph(cs: &CycleSet) -> FreeSubgraph {
    let union = cs.union_graph();
    let r2: Vec<_> = cs
        .parent
        .edges()
        .iter()
        .zip(&cs.labels)
        .filter(|(_, &r)| r == 2)
        .map(|(&e, _)| e)
        .collect();
    let ids: Vec<_> = r2
        .iter()
        .map(|&(a, b)| union.edge_id(a, b).expect("union edge"))
        .collect();
    let stripped = union.without_edges(&ids);
    let reduction = eliminate_to_fixpoint(&stripped);
    FreeSubgraph {
        graph: reduction.reduced,
        deleted_r2: r2,
        eliminated: reduction.eliminated,
        rejected: reduction.rejected,
    }
}

/// One cycle-set as a trace entry: member vertex sequences and R labels.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycleSetTrace {
    pub kind: SetKind,
    pub cycles: Vec<Vec<Vertex>>,
    pub labels: Vec<(Vertex, Vertex, u32)>,
}

impl From<&CycleSet> for CycleSetTrace {
    fn from(cs: &CycleSet) -> Self {
        CycleSetTrace {
            kind: cs.kind,
            cycles: cs.cycles.iter().map(|c| c.vertices().to_vec()).collect(),
            labels: edge_labels(cs).into_iter().map(|((a, b), r)| (a, b, r)).collect(),
        }
    }
}
