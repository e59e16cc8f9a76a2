//! Simple undirected graphs on dense vertex labels `0..n`.
//!
//! Adjacency is kept as one `u64` bitmask per vertex, so a [`Graph`] holds
//! at most [`MAX_VERTICES`] vertices. Every value is immutable; edits return
//! new graphs.

mod edge_list;
mod graph6;

pub use edge_list::parse_edge_list;
pub use graph6::{emit_graph6, parse_graph6, GRAPH6_MAX_VERTICES};

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAX_VERTICES: usize = 64;

pub type Vertex = usize;

/// Index into the sorted edge list of one particular [`Graph`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeId(pub usize);

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    adj: Vec<u64>,
}

#[inline]
pub(crate) fn bit(v: Vertex) -> u64 {
    1u64 << v
}

#[inline]
pub(crate) fn all_vertices(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// Iterates the set bits of a vertex mask in ascending order.
pub(crate) fn mask_iter(mut mask: u64) -> impl Iterator<Item = Vertex> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

impl Graph {
    /// Builds a graph, collapsing duplicate and reversed pairs.
    pub fn new<I>(n: usize, edges: I) -> Result<Graph>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n > MAX_VERTICES {
            return Err(Error::UnsupportedSize {
                n,
                max: MAX_VERTICES,
            });
        }
        let mut adj = vec![0u64; n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::input(format!(
                    "edge ({u}, {v}) has an endpoint outside 0..{n}"
                )));
            }
            if u == v {
                return Err(Error::input(format!("self-loop at vertex {u}")));
            }
            adj[u] |= bit(v);
            adj[v] |= bit(u);
        }
        Ok(Graph::from_adjacency(adj))
    }

    pub fn empty(n: usize) -> Result<Graph> {
        Graph::new(n, std::iter::empty())
    }

    pub fn complete(n: usize) -> Result<Graph> {
        Graph::new(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))))
    }

    pub fn cycle(n: usize) -> Result<Graph> {
        if n < 3 {
            return Err(Error::input("a cycle needs at least 3 vertices"));
        }
        Graph::new(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn path(n: usize) -> Result<Graph> {
        Graph::new(n, (1..n).map(|i| (i - 1, i)))
    }

    pub fn complete_bipartite(a: usize, b: usize) -> Result<Graph> {
        Graph::new(a + b, (0..a).flat_map(|u| (a..a + b).map(move |v| (u, v))))
    }

    /// The Petersen graph: outer 5-cycle 0..5, inner pentagram 5..10, spokes i -- i+5.
    pub fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        Graph::new(10, outer.chain(inner).chain(spokes)).expect("static graph")
    }

    /// Internal constructor from symmetric, loop-free adjacency masks.
    pub(crate) fn from_adjacency(adj: Vec<u64>) -> Graph {
        let n = adj.len();
        debug_assert!(n <= MAX_VERTICES);
        let mut edges = Vec::new();
        for (u, &mask) in adj.iter().enumerate() {
            debug_assert_eq!(mask & bit(u), 0);
            for v in mask_iter(mask >> u >> 1) {
                edges.push((u, u + 1 + v));
            }
        }
        Graph { n, edges, adj }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (Vertex, Vertex) {
        self.edges[id.0]
    }

    pub fn edge_id(&self, u: Vertex, v: Vertex) -> Option<EdgeId> {
        let key = if u < v { (u, v) } else { (v, u) };
        self.edges.binary_search(&key).ok().map(EdgeId)
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        u < self.n && v < self.n && self.adj[u] & bit(v) != 0
    }

    /// Neighbourhood of `v` as a bitmask. Panics when `v >= n`.
    pub fn adjacency(&self, v: Vertex) -> u64 {
        self.adj[v]
    }

    pub(crate) fn adjacency_masks(&self) -> &[u64] {
        &self.adj
    }

    pub(crate) fn deg(&self, v: Vertex) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degree(&self, v: Vertex) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.deg(v))
    }

    pub fn neighbors(&self, v: Vertex) -> Result<Vec<Vertex>> {
        self.check_vertex(v)?;
        Ok(mask_iter(self.adj[v]).collect())
    }

    pub(crate) fn check_vertex(&self, v: Vertex) -> Result<()> {
        if v >= self.n {
            Err(Error::input(format!(
                "vertex {v} out of range for a graph on {} vertices",
                self.n
            )))
        } else {
            Ok(())
        }
    }

    /// The vertices reachable from `start` as a bitmask.
    pub(crate) fn reach(&self, start: Vertex, allowed: u64) -> u64 {
        let mut seen = bit(start);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in mask_iter(frontier) {
                next |= self.adj[v] & allowed;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen
    }

    /// True iff every vertex is reachable from vertex 0 (vacuously for n <= 1).
    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.reach(0, all_vertices(self.n)) == all_vertices(self.n)
    }

    /// Edges lying on no cycle, in ascending id order.
    pub fn bridges(&self) -> Vec<EdgeId> {
        let mut state = BridgeSearch {
            graph: self,
            order: vec![usize::MAX; self.n],
            low: vec![0; self.n],
            clock: 0,
            found: Vec::new(),
        };
        for root in 0..self.n {
            if state.order[root] == usize::MAX {
                state.visit(root, None);
            }
        }
        let mut found = state.found;
        found.sort();
        found
    }

    /// A copy of this graph without the listed edges.
    pub fn without_edges(&self, removed: &[EdgeId]) -> Graph {
        let mut adj = self.adj.clone();
        for &id in removed {
            let (u, v) = self.edges[id.0];
            adj[u] &= !bit(v);
            adj[v] &= !bit(u);
        }
        Graph::from_adjacency(adj)
    }

    /// A copy of this graph with vertex `v` deleted and higher labels shifted down.
    pub fn without_vertex(&self, v: Vertex) -> Result<Graph> {
        self.check_vertex(v)?;
        let relabel = |w: Vertex| if w > v { w - 1 } else { w };
        Graph::new(
            self.n - 1,
            self.edges
                .iter()
                .filter(|&&(a, b)| a != v && b != v)
                .map(|&(a, b)| (relabel(a), relabel(b))),
        )
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn permuted(&self, perm: &[Vertex]) -> Result<Graph> {
        if perm.len() != self.n {
            return Err(Error::input("permutation length differs from vertex count"));
        }
        let mut seen = 0u64;
        for &p in perm {
            if p >= self.n || seen & bit(p) != 0 {
                return Err(Error::input("not a permutation of the vertex set"));
            }
            seen |= bit(p);
        }
        Graph::new(self.n, self.edges.iter().map(|&(u, v)| (perm[u], perm[v])))
    }
}

struct BridgeSearch<'g> {
    graph: &'g Graph,
    order: Vec<usize>,
    low: Vec<usize>,
    clock: usize,
    found: Vec<EdgeId>,
}

impl BridgeSearch<'_> {
    // Recursion depth is bounded by MAX_VERTICES.
    fn visit(&mut self, v: Vertex, parent: Option<Vertex>) {
        self.order[v] = self.clock;
        self.low[v] = self.clock;
        self.clock += 1;
        for w in mask_iter(self.graph.adj[v]) {
            if Some(w) == parent {
                continue;
            }
            if self.order[w] == usize::MAX {
                self.visit(w, Some(v));
                self.low[v] = self.low[v].min(self.low[w]);
                if self.low[w] > self.order[v] {
                    self.found.push(self.graph.edge_id(v, w).expect("tree edge"));
                }
            } else {
                self.low[v] = self.low[v].min(self.order[w]);
            }
        }
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges)
    }
}
