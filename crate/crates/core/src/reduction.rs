//! Degree-forcing screen: N1/N2/N3 vertex classes, edge elimination at N2
//! vertices, and rejection at N3 vertices, iterated to a fixpoint.
//!
//! A vertex of degree 2 forces both of its edges onto any Hamilton cycle. If
//! `v` has exactly two neighbours of degree <= 2, a Hamilton cycle enters and
//! leaves `v` through them, so every other edge at `v` can be dropped. Three
//! such neighbours make the graph non-Hamiltonian outright.

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, mask_iter, Graph, Vertex};

pub type Edge = (Vertex, Vertex);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NClass {
    None,
    N1,
    N2,
    N3,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexClass {
    pub class: NClass,
    /// Neighbours of degree 1 for `N1`, of degree <= 2 otherwise.
    pub witnesses: Vec<Vertex>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RejectReason {
    #[serde(rename = "N3-found")]
    N3Found,
    #[serde(rename = "degree<=1-found")]
    DegreeAtMostOne,
    #[serde(rename = "bridge-found")]
    BridgeFound,
    #[serde(rename = "disconnected")]
    Disconnected,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RejectReason::N3Found => "N3-found",
            RejectReason::DegreeAtMostOne => "degree<=1-found",
            RejectReason::BridgeFound => "bridge-found",
            RejectReason::Disconnected => "disconnected",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub vertex: Option<Vertex>,
    pub reason: RejectReason,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReductionResult {
    /// The graph after elimination, or the state at the moment of rejection.
    pub reduced: Graph,
    /// Eliminated edges in elimination order.
    pub eliminated: Vec<Edge>,
    /// Edges incident to a degree-2 vertex at any stage, sorted.
    pub forced: Vec<Edge>,
    pub rejected: Option<Rejection>,
}

fn classify_masks(adj: &[u64], v: Vertex) -> VertexClass {
    let degree = |w: Vertex| adj[w].count_ones();
    let leaves: Vec<Vertex> = mask_iter(adj[v]).filter(|&w| degree(w) == 1).collect();
    if !leaves.is_empty() {
        return VertexClass {
            class: NClass::N1,
            witnesses: leaves,
        };
    }
    let low: Vec<Vertex> = mask_iter(adj[v]).filter(|&w| degree(w) <= 2).collect();
    let class = match low.len() {
        0 | 1 => NClass::None,
        2 => NClass::N2,
        _ => NClass::N3,
    };
    VertexClass {
        class,
        witnesses: if class == NClass::None { Vec::new() } else { low },
    }
}

/// Class of `v` from the degrees of its neighbours; N1 wins over N3, N3 over N2.
pub fn classify_vertex(g: &Graph, v: Vertex) -> Result<VertexClass> {
    g.check_vertex(v)?;
    Ok(classify_masks(g.adjacency_masks(), v))
}

/// Edges with at least one endpoint of degree exactly 2, sorted.
pub fn forced_edges(g: &Graph) -> Vec<Edge> {
    g.edges()
        .iter()
        .copied()
        .filter(|&(u, v)| g.deg(u) == 2 || g.deg(v) == 2)
        .collect()
}

/// True iff some vertex of `g` is classified N3.
pub fn has_n3(g: &Graph) -> bool {
    (0..g.n()).any(|v| classify_masks(g.adjacency_masks(), v).class == NClass::N3)
}

fn screen(adj: &[u64]) -> Option<Rejection> {
    let n = adj.len();
    if let Some(v) = (0..n).find(|&v| adj[v].count_ones() <= 1) {
        return Some(Rejection {
            vertex: Some(v),
            reason: RejectReason::DegreeAtMostOne,
        });
    }
    if let Some(v) = (0..n).find(|&v| classify_masks(adj, v).class == NClass::N3) {
        return Some(Rejection {
            vertex: Some(v),
            reason: RejectReason::N3Found,
        });
    }
    let g = Graph::from_adjacency(adj.to_vec());
    if !g.is_connected() {
        return Some(Rejection {
            vertex: None,
            reason: RejectReason::Disconnected,
        });
    }
    None
}

/// Runs elimination rounds until nothing changes or a rejection fires.
///
/// `order(round)` yields the vertex visiting order of each round. The input
/// may be disconnected; that is reported as a rejection.
pub(crate) fn eliminate_with_order(
    g: &Graph,
    mut order: impl FnMut(usize) -> Vec<Vertex>,
) -> ReductionResult {
    let mut adj = g.adjacency_masks().to_vec();
    let mut eliminated = Vec::new();
    let mut forced = BTreeSet::new();
    let mut round = 0;
    loop {
        for (u, v) in g.edges().iter().copied() {
            if adj[u] & bit(v) != 0 && (adj[u].count_ones() == 2 || adj[v].count_ones() == 2) {
                forced.insert((u, v));
            }
        }
        let rejected = screen(&adj);
        if rejected.is_some() || !eliminate_round(&mut adj, &order(round), &mut eliminated) {
            return ReductionResult {
                reduced: Graph::from_adjacency(adj),
                eliminated,
                forced: forced.into_iter().collect(),
                rejected,
            };
        }
        round += 1;
    }
}

fn eliminate_round(adj: &mut [u64], order: &[Vertex], eliminated: &mut Vec<Edge>) -> bool {
    let mut changed = false;
    for &v in order {
        let class = classify_masks(adj, v);
        if class.class != NClass::N2 {
            continue;
        }
        let keep = class.witnesses.iter().fold(0u64, |m, &w| m | bit(w));
        for w in mask_iter(adj[v] & !keep) {
            adj[v] &= !bit(w);
            adj[w] &= !bit(v);
            eliminated.push((v.min(w), v.max(w)));
            changed = true;
        }
    }
    changed
}

/// Fixpoint of N2 edge elimination with N3 / low-degree / disconnection
/// rejection. Vertices are visited in ascending order each round.
pub fn eliminate_unusable_edges(g: &Graph) -> Result<ReductionResult> {
    if g.n() < 3 {
        return Err(Error::Precondition(format!(
            "reduction needs at least 3 vertices, got {}",
            g.n()
        )));
    }
    if !g.is_connected() {
        return Err(Error::Precondition("reduction needs a connected graph".into()));
    }
    Ok(eliminate_to_fixpoint(g))
}

/// Like [`eliminate_unusable_edges`] but reports a disconnected input as a rejection.
pub(crate) fn eliminate_to_fixpoint(g: &Graph) -> ReductionResult {
    let order: Vec<Vertex> = (0..g.n()).collect();
    eliminate_with_order(g, |_| order.clone())
}
