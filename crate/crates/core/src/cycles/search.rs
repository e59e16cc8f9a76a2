//! Budgeted searches for full and spanning cycle-sets.

use std::collections::HashSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::cycle::{check_edge_capacity, enumerate_cycles, Cycle, EdgeMask};
use super::set::{CycleSet, SetKind};
use crate::error::{Error, Result};
use crate::graph::{all_vertices, bit, mask_iter, Graph, Vertex};

/// Graphs up to this order get an exhaustive full cycle-set search; larger
/// ones are sampled from fundamental cycle bases.
pub const EXHAUSTIVE_MAX_VERTICES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Budget {
    /// Cap on the number of enumerated simple cycles.
    pub cycles: usize,
    /// How many distinct full cycle-sets to collect.
    pub sets: usize,
    /// Node limit for each combinatorial search.
    pub search: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            cycles: 100_000,
            sets: 8,
            search: 2_000_000,
        }
    }
}

fn check_search_input(g: &Graph) -> Result<()> {
    if g.n() < 3 {
        return Err(Error::Precondition(format!(
            "cycle-sets need at least 3 vertices, got {}",
            g.n()
        )));
    }
    if !g.is_connected() {
        return Err(Error::Precondition("cycle-sets need a connected graph".into()));
    }
    check_edge_capacity(g)
}

fn edge_bits(g: &Graph) -> EdgeMask {
    if g.edge_count() == 128 {
        u128::MAX
    } else {
        (1u128 << g.edge_count()) - 1
    }
}

/// Distinct full cycle-sets of a connected bridgeless graph, in search order.
///
/// Up to [`EXHAUSTIVE_MAX_VERTICES`] vertices the search branches on the
/// lowest uncovered edge over the cycles through it (canonical order), and
/// pads each cover with the smallest unused cycles up to E - V + 1 members.
/// Beyond that, sets are fundamental cycle bases of a BFS tree and then of
/// `seed`-driven random spanning trees; in a bridgeless graph every tree
/// edge lies on some fundamental cycle, so each basis already covers the
/// graph.
pub fn find_full_cycle_sets(g: &Graph, budget: &Budget, seed: u64) -> Result<Vec<CycleSet>> {
    check_search_input(g)?;
    if let Some(&id) = g.bridges().first() {
        let (u, v) = g.edge(id);
        return Err(Error::Structural(format!(
            "bridge ({u}, {v}) lies on no cycle, so no cycle-set covers it"
        )));
    }
    let sets = if g.n() <= EXHAUSTIVE_MAX_VERTICES {
        let cycles = enumerate_cycles(g, budget.cycles)?;
        exhaustive_full_sets(g, &cycles, budget)
    } else {
        sampled_full_sets(g, budget, seed)
    };
    into_full_sets(g, sets, budget)
}

/// As [`find_full_cycle_sets`] for a graph already checked to be connected
/// and bridgeless, reusing its enumerated cycles.
pub(crate) fn full_sets_from_cycles(
    g: &Graph,
    cycles: &[Cycle],
    budget: &Budget,
    seed: u64,
) -> Result<Vec<CycleSet>> {
    let sets = if g.n() <= EXHAUSTIVE_MAX_VERTICES {
        exhaustive_full_sets(g, cycles, budget)
    } else {
        sampled_full_sets(g, budget, seed)
    };
    into_full_sets(g, sets, budget)
}

fn into_full_sets(g: &Graph, sets: Vec<Vec<Cycle>>, budget: &Budget) -> Result<Vec<CycleSet>> {
    if sets.is_empty() {
        return Err(Error::Budget {
            stage: "find_full_cycle_sets",
            limit: budget.search,
            partial: 0,
        });
    }
    sets.into_iter()
        .map(|cycles| CycleSet::new(g.clone(), cycles, SetKind::Full))
        .collect()
}

struct CoverSearch<'a> {
    cycles: &'a [Cycle],
    through_edge: Vec<Vec<usize>>,
    target: EdgeMask,
    size: usize,
    max_len: u32,
    nodes: usize,
    node_limit: usize,
    wanted: usize,
    chosen: Vec<usize>,
    seen: HashSet<Vec<usize>>,
    found: Vec<Vec<usize>>,
}

impl CoverSearch<'_> {
    fn done(&self) -> bool {
        self.found.len() >= self.wanted || self.nodes >= self.node_limit
    }

    fn run(&mut self, covered: EdgeMask) {
        self.nodes += 1;
        if covered == self.target {
            self.record();
            return;
        }
        let slots = self.size - self.chosen.len();
        if slots == 0 || (self.target & !covered).count_ones() > slots as u32 * self.max_len {
            return;
        }
        let lowest = (self.target & !covered).trailing_zeros() as usize;
        for i in 0..self.through_edge[lowest].len() {
            if self.done() {
                return;
            }
            let c = self.through_edge[lowest][i];
            if self.chosen.contains(&c) {
                continue;
            }
            self.chosen.push(c);
            self.run(covered | self.cycles[c].edge_mask());
            self.chosen.pop();
        }
    }

    fn record(&mut self) {
        let mut members = self.chosen.clone();
        for c in 0..self.cycles.len() {
            if members.len() == self.size {
                break;
            }
            if !self.chosen.contains(&c) {
                members.push(c);
            }
        }
        members.sort_unstable();
        if members.len() == self.size && self.seen.insert(members.clone()) {
            self.found.push(members);
        }
    }
}

fn exhaustive_full_sets(g: &Graph, cycles: &[Cycle], budget: &Budget) -> Vec<Vec<Cycle>> {
    let size = g.edge_count() + 1 - g.n();
    let mut through_edge = vec![Vec::new(); g.edge_count()];
    for (i, c) in cycles.iter().enumerate() {
        let mut mask = c.edge_mask();
        while mask != 0 {
            through_edge[mask.trailing_zeros() as usize].push(i);
            mask &= mask - 1;
        }
    }
    let mut search = CoverSearch {
        cycles,
        through_edge,
        target: edge_bits(g),
        size,
        max_len: g.n() as u32,
        nodes: 0,
        node_limit: budget.search,
        wanted: budget.sets.max(1),
        chosen: Vec::with_capacity(size),
        seen: HashSet::new(),
        found: Vec::new(),
    };
    search.run(0);
    search
        .found
        .into_iter()
        .map(|members| members.into_iter().map(|i| cycles[i].clone()).collect())
        .collect()
}

/// Parent pointers of a spanning tree rooted at 0, built from `tree_edges`.
fn rooted(g: &Graph, tree_adj: &[u64]) -> (Vec<usize>, Vec<usize>) {
    let n = g.n();
    let mut parent = vec![usize::MAX; n];
    let mut depth = vec![0; n];
    let mut queue = std::collections::VecDeque::from([0]);
    parent[0] = 0;
    while let Some(v) = queue.pop_front() {
        for w in mask_iter(tree_adj[v]) {
            if parent[w] == usize::MAX {
                parent[w] = v;
                depth[w] = depth[v] + 1;
                queue.push_back(w);
            }
        }
    }
    (parent, depth)
}

fn fundamental_basis(g: &Graph, tree_adj: &[u64]) -> Vec<Cycle> {
    let (parent, depth) = rooted(g, tree_adj);
    let mut basis = Vec::new();
    for &(u, v) in g.edges() {
        if tree_adj[u] & bit(v) != 0 {
            continue;
        }
        let (mut a, mut b) = (u, v);
        let (mut left, mut right) = (vec![a], vec![b]);
        while a != b {
            if depth[a] >= depth[b] {
                a = parent[a];
                left.push(a);
            } else {
                b = parent[b];
                right.push(b);
            }
        }
        right.pop();
        left.extend(right.into_iter().rev());
        basis.push(Cycle::from_closed_path(g, &left));
    }
    basis.sort();
    basis
}

fn bfs_tree(g: &Graph) -> Vec<u64> {
    let mut tree = vec![0u64; g.n()];
    let mut seen = bit(0);
    let mut queue = std::collections::VecDeque::from([0]);
    while let Some(v) = queue.pop_front() {
        for w in mask_iter(g.adjacency(v) & !seen) {
            seen |= bit(w);
            tree[v] |= bit(w);
            tree[w] |= bit(v);
            queue.push_back(w);
        }
    }
    tree
}

fn random_tree(g: &Graph, rng: &mut ChaCha8Rng) -> Vec<u64> {
    let mut order: Vec<(Vertex, Vertex)> = g.edges().to_vec();
    order.shuffle(rng);
    let mut root: Vec<usize> = (0..g.n()).collect();
    fn find(root: &mut [usize], mut v: usize) -> usize {
        while root[v] != v {
            root[v] = root[root[v]];
            v = root[v];
        }
        v
    }
    let mut tree = vec![0u64; g.n()];
    for (u, v) in order {
        let (ru, rv) = (find(&mut root, u), find(&mut root, v));
        if ru != rv {
            root[ru] = rv;
            tree[u] |= bit(v);
            tree[v] |= bit(u);
        }
    }
    tree
}

fn sampled_full_sets(g: &Graph, budget: &Budget, seed: u64) -> Vec<Vec<Cycle>> {
    let wanted = budget.sets.max(1);
    let mut seen = HashSet::new();
    let mut found = Vec::new();
    let first = fundamental_basis(g, &bfs_tree(g));
    seen.insert(first.clone());
    found.push(first);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let attempts = (wanted * 8).min(budget.search);
    for _ in 0..attempts {
        if found.len() >= wanted {
            break;
        }
        let basis = fundamental_basis(g, &random_tree(g, &mut rng));
        if seen.insert(basis.clone()) {
            found.push(basis);
        }
    }
    found
}

/// A minimum-cardinality set of simple cycles covering every vertex.
///
/// Iterative deepening on the size; at each level the search branches on the
/// lowest uncovered vertex over the cycles through it, in canonical order, so
/// the first cover found is deterministic.
pub fn spanning_cycle_set(g: &Graph, budget: &Budget) -> Result<CycleSet> {
    check_search_input(g)?;
    let cycles = enumerate_cycles(g, budget.cycles)?;
    spanning_from_cycles(g, &cycles, budget)
}

pub(crate) fn spanning_from_cycles(g: &Graph, cycles: &[Cycle], budget: &Budget) -> Result<CycleSet> {
    let all = all_vertices(g.n());
    let covered = cycles.iter().fold(0, |m, c| m | c.vertex_mask());
    if covered != all {
        let v = (!covered & all).trailing_zeros();
        return Err(Error::Structural(format!("vertex {v} lies on no cycle")));
    }
    let mut through_vertex = vec![Vec::new(); g.n()];
    for (i, c) in cycles.iter().enumerate() {
        for v in mask_iter(c.vertex_mask()) {
            through_vertex[v].push(i);
        }
    }
    let max_len = cycles.iter().map(Cycle::len).max().unwrap_or(0) as u32;
    let mut nodes = 0usize;
    for size in 1..=g.n() {
        let mut chosen = Vec::with_capacity(size);
        let hit = cover_vertices(
            all,
            size,
            max_len,
            cycles,
            &through_vertex,
            &mut chosen,
            &mut nodes,
            budget.search,
        );
        if hit {
            let members = chosen.iter().map(|&i| cycles[i].clone()).collect();
            return CycleSet::new(g.clone(), members, SetKind::Spanning);
        }
        if nodes >= budget.search {
            return Err(Error::Budget {
                stage: "spanning_cycle_set",
                limit: budget.search,
                partial: nodes,
            });
        }
    }
    unreachable!("the covering cycles found above bound the minimum size")
}

#[allow(clippy::too_many_arguments)]
fn cover_vertices(
    uncovered: u64,
    size: usize,
    max_len: u32,
    cycles: &[Cycle],
    through_vertex: &[Vec<usize>],
    chosen: &mut Vec<usize>,
    nodes: &mut usize,
    limit: usize,
) -> bool {
    if uncovered == 0 {
        return true;
    }
    *nodes += 1;
    let slots = (size - chosen.len()) as u32;
    if slots == 0 || *nodes >= limit || uncovered.count_ones() > slots * max_len {
        return false;
    }
    let lowest = uncovered.trailing_zeros() as usize;
    for &c in &through_vertex[lowest] {
        chosen.push(c);
        if cover_vertices(
            uncovered & !cycles[c].vertex_mask(),
            size,
            max_len,
            cycles,
            through_vertex,
            chosen,
            nodes,
            limit,
        ) {
            return true;
        }
        chosen.pop();
        if *nodes >= limit {
            return false;
        }
    }
    false
}
