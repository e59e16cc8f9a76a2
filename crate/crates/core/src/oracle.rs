//! Exact Hamiltonicity: a pruned backtracking search and, independently, a
//! subset dynamic program over vertex bitmasks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{all_vertices, bit, mask_iter, Graph, Vertex};

pub const DP_MAX_VERTICES: usize = 24;
pub const ENUMERATION_MAX_VERTICES: usize = 14;

/// A Hamilton cycle as a vertex permutation, normalised so that it starts at
/// vertex 0 and `order[1] < order[n - 1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct HamCycle(Vec<Vertex>);

impl HamCycle {
    /// Normalises any rotation or reflection of a cycle through all vertices.
    pub fn from_sequence(mut order: Vec<Vertex>) -> HamCycle {
        if let Some(start) = order.iter().position(|&v| v == 0) {
            order.rotate_left(start);
        }
        if order.len() > 2 && order[1] > order[order.len() - 1] {
            order[1..].reverse();
        }
        HamCycle(order)
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.0
    }

    /// Consecutive vertex pairs, including the closing pair.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        let k = self.0.len();
        (0..k).map(move |i| {
            let (a, b) = (self.0[i], self.0[(i + 1) % k]);
            (a.min(b), a.max(b))
        })
    }

    /// Checks that this is a Hamilton cycle of `g` in normal form.
    pub fn is_valid_for(&self, g: &Graph) -> bool {
        let n = g.n();
        if n < 3 || self.0.len() != n || self.0[0] != 0 || self.0[1] > self.0[n - 1] {
            return false;
        }
        let mut seen = 0u64;
        for &v in &self.0 {
            if v >= n || seen & bit(v) != 0 {
                return false;
            }
            seen |= bit(v);
        }
        self.edges().all(|(u, v)| g.has_edge(u, v))
    }
}

struct Search<'g> {
    adj: &'g [u64],
    n: usize,
    path: Vec<Vertex>,
}

impl Search<'_> {
    fn new(g: &Graph) -> Search<'_> {
        Search {
            adj: g.adjacency_masks(),
            n: g.n(),
            path: Vec::with_capacity(g.n()),
        }
    }

    /// Dead-end test for a partial path ending at `cur` with `unvisited` left.
    ///
    /// Every unvisited vertex needs two usable neighbours, and the unvisited
    /// vertices plus vertex 0 must all be reachable from `cur` through
    /// unvisited vertices.
    fn viable(&self, cur: Vertex, unvisited: u64) -> bool {
        let usable = unvisited | bit(cur) | bit(0);
        for w in mask_iter(unvisited) {
            if (self.adj[w] & usable).count_ones() < 2 {
                return false;
            }
        }
        let target = unvisited | bit(0);
        let mut seen = bit(cur);
        let mut frontier = seen;
        while frontier != 0 {
            let mut next = 0;
            for v in mask_iter(frontier) {
                next |= self.adj[v] & target;
            }
            frontier = next & !seen;
            seen |= next;
        }
        seen & target == target
    }

    /// Extends the path depth-first in ascending neighbour order; `visit`
    /// returns `false` to stop the search.
    fn extend(&mut self, cur: Vertex, unvisited: u64, visit: &mut dyn FnMut(&[Vertex]) -> bool) -> bool {
        if unvisited == 0 {
            if self.adj[cur] & bit(0) != 0 {
                return visit(&self.path);
            }
            return true;
        }
        if !self.viable(cur, unvisited) {
            return true;
        }
        for next in mask_iter(self.adj[cur] & unvisited) {
            self.path.push(next);
            let go_on = self.extend(next, unvisited & !bit(next), visit);
            self.path.pop();
            if !go_on {
                return false;
            }
        }
        true
    }

    fn run(&mut self, visit: &mut dyn FnMut(&[Vertex]) -> bool) {
        if self.n < 3 {
            return;
        }
        self.path.push(0);
        let unvisited = all_vertices(self.n) & !bit(0);
        self.extend(0, unvisited, visit);
    }
}

/// The lexicographically first Hamilton cycle in normal form, if any.
///
/// The first complete path found in ascending-neighbour order is the
/// lexicographic minimum, and the minimum of a cycle and its reversal always
/// satisfies `order[1] < order[n - 1]`.
pub fn hamiltonian_backtrack(g: &Graph) -> Option<HamCycle> {
    let mut found = None;
    Search::new(g).run(&mut |path| {
        found = Some(HamCycle(path.to_vec()));
        false
    });
    found
}

/// Held-Karp style reachability over subsets of `1..n`.
pub fn hamiltonian_dp(g: &Graph) -> Result<bool> {
    let n = g.n();
    if n > DP_MAX_VERTICES {
        return Err(Error::Budget {
            stage: "hamiltonian_dp",
            limit: DP_MAX_VERTICES,
            partial: n,
        });
    }
    if n < 3 {
        return Ok(false);
    }
    let adj: Vec<u32> = g.adjacency_masks().iter().map(|&m| (m >> 1) as u32).collect();
    // Bit i of a subset (and of an endpoint set) stands for vertex i + 1.
    let rest = n - 1;
    let full = (1u32 << rest) - 1;
    let mut ends = vec![0u32; 1 << rest];
    for v in 0..rest {
        if adj[0] & (1 << v) != 0 {
            ends[1 << v] = 1 << v;
        }
    }
    for subset in 1..=full {
        let mut here = ends[subset as usize];
        while here != 0 {
            let e = here.trailing_zeros() as usize;
            here &= here - 1;
            let mut step = adj[e + 1] & !subset & full;
            while step != 0 {
                let w = step & step.wrapping_neg();
                step &= step - 1;
                ends[(subset | w) as usize] |= w;
            }
        }
    }
    Ok(ends[full as usize] & adj[0] != 0)
}

/// All Hamilton cycles up to rotation and reflection, in lexicographic order.
pub fn enumerate_hamilton_cycles(g: &Graph, cap: usize) -> Result<Vec<HamCycle>> {
    if g.n() > ENUMERATION_MAX_VERTICES {
        return Err(Error::Budget {
            stage: "enumerate_hamilton_cycles",
            limit: ENUMERATION_MAX_VERTICES,
            partial: g.n(),
        });
    }
    let mut cycles = Vec::new();
    let mut overflow = false;
    Search::new(g).run(&mut |path| {
        if path[1] < path[path.len() - 1] {
            if cycles.len() == cap {
                overflow = true;
                return false;
            }
            cycles.push(HamCycle(path.to_vec()));
        }
        true
    });
    if overflow {
        return Err(Error::Budget {
            stage: "enumerate_hamilton_cycles",
            limit: cap,
            partial: cycles.len(),
        });
    }
    Ok(cycles)
}

/// Hamiltonicity by whichever exact method suits the size.
pub fn is_hamiltonian(g: &Graph) -> bool {
    if g.n() <= 12 {
        hamiltonian_dp(g).expect("within dp range")
    } else {
        hamiltonian_backtrack(g).is_some()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::tests::arb_graph;
    use proptest::prelude::*;

    #[test]
    fn named_graphs() {
        let c6 = Graph::cycle(6).unwrap();
        assert_eq!(
            hamiltonian_backtrack(&c6).unwrap().vertices(),
            &[0, 1, 2, 3, 4, 5]
        );
        assert!(hamiltonian_backtrack(&Graph::petersen()).is_none());
        assert!(hamiltonian_backtrack(&Graph::complete_bipartite(2, 3).unwrap()).is_none());

        assert!(hamiltonian_dp(&Graph::complete(4).unwrap()).unwrap());
        assert!(!hamiltonian_dp(&Graph::petersen()).unwrap());
        assert!(!hamiltonian_dp(&Graph::complete_bipartite(1, 4).unwrap()).unwrap());
    }

    #[test]
    fn small_and_oversized_inputs() {
        assert!(hamiltonian_backtrack(&Graph::complete(2).unwrap()).is_none());
        assert!(!hamiltonian_dp(&Graph::complete(2).unwrap()).unwrap());
        assert!(hamiltonian_dp(&Graph::cycle(25).unwrap()).unwrap_err().is_budget());
        assert!(hamiltonian_backtrack(&Graph::cycle(40).unwrap()).is_some());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_hamilton_cycles(&Graph::cycle(5).unwrap(), 10).unwrap().len(), 1);
        assert_eq!(enumerate_hamilton_cycles(&Graph::complete(4).unwrap(), 10).unwrap().len(), 3);
        assert_eq!(enumerate_hamilton_cycles(&Graph::complete(5).unwrap(), 100).unwrap().len(), 12);
        let factorial = |k: usize| (1..=k).product::<usize>();
        for n in 3..=7 {
            let k = Graph::complete(n).unwrap();
            let all = enumerate_hamilton_cycles(&k, 10_000).unwrap();
            assert_eq!(all.len(), factorial(n - 1) / 2, "K{n}");
            assert!(all.iter().all(|c| c.is_valid_for(&k)));
            assert!(all.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn enumeration_cap() {
        let err = enumerate_hamilton_cycles(&Graph::complete(5).unwrap(), 5).unwrap_err();
        assert!(matches!(err, Error::Budget { partial: 5, .. }));
    }

    #[test]
    fn normal_form() {
        assert_eq!(HamCycle::from_sequence(vec![2, 1, 0, 3]).vertices(), &[0, 1, 2, 3]);
        assert_eq!(HamCycle::from_sequence(vec![3, 0, 1, 2]).vertices(), &[0, 1, 2, 3]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(400))]
        #[test]
        fn methods_agree(g in arb_graph(11)) {
            let witness = hamiltonian_backtrack(&g);
            prop_assert_eq!(witness.is_some(), hamiltonian_dp(&g).unwrap());
            if let Some(w) = witness {
                prop_assert!(w.is_valid_for(&g));
                let all = enumerate_hamilton_cycles(&g, 1 << 20).unwrap();
                prop_assert_eq!(all.first(), Some(&w));
            }
        }
    }
}
