use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::graph::{bit, mask_iter, Graph, Vertex};

/// Cycle-structure operations index edges with a `u128` mask.
pub const MAX_CYCLE_EDGES: usize = 128;

pub(crate) type EdgeMask = u128;

/// A simple cycle of some parent graph.
///
/// The vertex sequence is stored in its lexicographically smallest
/// rotation/reflection. `edge_mask` is indexed by the parent's edge ids, so
/// a `Cycle` is only meaningful next to the graph it was built from.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Cycle {
    vertices: Vec<Vertex>,
    vertex_mask: u64,
    edge_mask: EdgeMask,
}

pub(crate) fn check_edge_capacity(g: &Graph) -> Result<()> {
    if g.edge_count() > MAX_CYCLE_EDGES {
        return Err(Error::UnsupportedSize {
            n: g.edge_count(),
            max: MAX_CYCLE_EDGES,
        });
    }
    Ok(())
}

fn canonical(mut seq: Vec<Vertex>) -> Vec<Vertex> {
    let start = (0..seq.len()).min_by_key(|&i| seq[i]).unwrap_or(0);
    seq.rotate_left(start);
    let k = seq.len();
    if k > 2 && seq[1] > seq[k - 1] {
        seq[1..].reverse();
    }
    seq
}

impl Cycle {
    /// Validates `seq` as a simple cycle of `g` and normalises it.
    pub fn new(g: &Graph, seq: &[Vertex]) -> Result<Cycle> {
        check_edge_capacity(g)?;
        if seq.len() < 3 {
            return Err(Error::input("a cycle needs at least 3 vertices"));
        }
        let mut vertex_mask = 0u64;
        for &v in seq {
            g.check_vertex(v)?;
            if vertex_mask & bit(v) != 0 {
                return Err(Error::input(format!("vertex {v} repeats in cycle")));
            }
            vertex_mask |= bit(v);
        }
        let mut edge_mask = 0;
        for i in 0..seq.len() {
            let (a, b) = (seq[i], seq[(i + 1) % seq.len()]);
            let id = g
                .edge_id(a, b)
                .ok_or_else(|| Error::input(format!("({a}, {b}) is not an edge")))?;
            edge_mask |= 1u128 << id.0;
        }
        Ok(Cycle {
            vertices: canonical(seq.to_vec()),
            vertex_mask,
            edge_mask,
        })
    }

    /// Builds from a path already known to close in `g`.
    pub(crate) fn from_closed_path(g: &Graph, seq: &[Vertex]) -> Cycle {
        let mut vertex_mask = 0;
        let mut edge_mask = 0;
        for i in 0..seq.len() {
            let (a, b) = (seq[i], seq[(i + 1) % seq.len()]);
            vertex_mask |= bit(a);
            edge_mask |= 1u128 << g.edge_id(a, b).expect("closed path").0;
        }
        Cycle {
            vertices: canonical(seq.to_vec()),
            vertex_mask,
            edge_mask,
        }
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub(crate) fn vertex_mask(&self) -> u64 {
        self.vertex_mask
    }

    pub(crate) fn edge_mask(&self) -> EdgeMask {
        self.edge_mask
    }

    pub fn contains_vertex(&self, v: Vertex) -> bool {
        v < 64 && self.vertex_mask & bit(v) != 0
    }

    /// Consecutive pairs `(min, max)` including the closing pair.
    pub fn edge_pairs(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.vertices.len();
        (0..k).map(move |i| {
            let (a, b) = (self.vertices[i], self.vertices[(i + 1) % k]);
            (a.min(b), a.max(b))
        })
    }

    /// True iff this value was built against a graph with `g`'s edge ids.
    pub fn is_cycle_of(&self, g: &Graph) -> bool {
        g.edge_count() <= MAX_CYCLE_EDGES
            && self.edge_pairs().all(|(a, b)| {
                g.edge_id(a, b)
                    .is_some_and(|id| self.edge_mask & (1u128 << id.0) != 0)
            })
            && self.edge_mask.count_ones() as usize == self.len()
    }
}

/// Shorter cycles first, then lexicographic by canonical vertex sequence.
impl Ord for Cycle {
    fn cmp(&self, other: &Self) -> Ordering {
        self.vertices
            .len()
            .cmp(&other.vertices.len())
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl PartialOrd for Cycle {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cycle{:?}", self.vertices)
    }
}

/// All simple cycles of `g` in canonical order.
///
/// Each cycle is found once: from its smallest vertex, through larger
/// vertices only, in the direction where the second vertex is smaller than
/// the last.
pub fn enumerate_cycles(g: &Graph, cap: usize) -> Result<Vec<Cycle>> {
    if !g.is_connected() {
        return Err(Error::Precondition("cycle enumeration needs a connected graph".into()));
    }
    check_edge_capacity(g)?;
    let mut out = Vec::new();
    let mut path = Vec::with_capacity(g.n());
    for start in 0..g.n() {
        let allowed = if start >= 63 { 0 } else { u64::MAX << (start + 1) };
        path.push(start);
        let ok = extend(g, start, start, bit(start), allowed, &mut path, &mut out, cap);
        path.pop();
        if !ok {
            return Err(Error::Budget {
                stage: "enumerate_cycles",
                limit: cap,
                partial: out.len(),
            });
        }
    }
    out.sort();
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn extend(
    g: &Graph,
    start: Vertex,
    cur: Vertex,
    used: u64,
    allowed: u64,
    path: &mut Vec<Vertex>,
    out: &mut Vec<Cycle>,
    cap: usize,
) -> bool {
    let adj = g.adjacency(cur);
    if path.len() >= 3 && adj & bit(start) != 0 && path[1] < cur {
        if out.len() == cap {
            return false;
        }
        out.push(Cycle::from_closed_path(g, path));
    }
    for next in mask_iter(adj & allowed & !used) {
        path.push(next);
        let ok = extend(g, start, next, used | bit(next), allowed, path, out, cap);
        path.pop();
        if !ok {
            return false;
        }
    }
    true
}
