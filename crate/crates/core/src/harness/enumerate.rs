//! Connected graphs up to isomorphism, by vertex extension and canonical codes.

use std::collections::BTreeSet;
use std::sync::{Mutex, OnceLock};

use crate::error::{Error, Result};
use crate::graph::{bit, mask_iter, parse_graph6, Graph};

/// Largest order accepted by [`enumerate_connected_graphs`].
pub const ENUMERATION_MAX_ORDER: usize = 9;
/// Largest order generated internally; beyond it a graph6 corpus is needed.
pub const INTERNAL_ENUMERATION_MAX: usize = 8;

/// Codes are `n(n-1)/2` bits in graph6 pair order, first pair most significant.
const CODE_MAX_ORDER: usize = 11;

fn pair_bits(n: usize) -> u32 {
    (n * n.saturating_sub(1) / 2) as u32
}

/// Colour refinement to a stable partition. Colours are ranks of sorted
/// signatures, so they do not depend on the labelling.
fn refined_colours(adj: &[u64]) -> Vec<usize> {
    let n = adj.len();
    let mut colour = vec![0usize; n];
    let mut classes = 1;
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut around: Vec<usize> = mask_iter(adj[v]).map(|u| colour[u]).collect();
                around.sort_unstable();
                (colour[v], around)
            })
            .collect();
        let mut distinct = sigs.clone();
        distinct.sort();
        distinct.dedup();
        colour = sigs
            .iter()
            .map(|s| distinct.binary_search(s).expect("present"))
            .collect();
        if distinct.len() == classes {
            return colour;
        }
        classes = distinct.len();
    }
}

struct Canon<'a> {
    adj: &'a [u64],
    /// Colour of each position in the ordering.
    slot_colour: Vec<usize>,
    colour: Vec<usize>,
    order: Vec<usize>,
    used: u64,
    best: u64,
    bits: u32,
}

impl Canon<'_> {
    /// Places a vertex at position `order.len()`; `code` holds the bits of
    /// all pairs among earlier positions.
    fn place(&mut self, code: u64, done: u32) {
        let pos = self.order.len();
        if pos == self.adj.len() {
            self.best = self.best.min(code);
            return;
        }
        let shift_after = self.bits - done - pos as u32;
        for v in 0..self.adj.len() {
            if self.used & bit(v) != 0 || self.colour[v] != self.slot_colour[pos] {
                continue;
            }
            let mut next = code;
            for &u in &self.order {
                next = next << 1 | u64::from(self.adj[u] & bit(v) != 0);
            }
            if next > self.best >> shift_after {
                continue;
            }
            self.order.push(v);
            self.used |= bit(v);
            self.place(next, done + pos as u32);
            self.used &= !bit(v);
            self.order.pop();
        }
    }
}

/// Minimal adjacency code over all orderings that list colour classes in
/// rank order. Equal codes iff the graphs are isomorphic.
pub fn canonical_code(g: &Graph) -> Result<u64> {
    if g.n() > CODE_MAX_ORDER {
        return Err(Error::UnsupportedSize {
            n: g.n(),
            max: CODE_MAX_ORDER,
        });
    }
    let adj = g.adjacency_masks();
    let colour = refined_colours(adj);
    let mut slot_colour = colour.clone();
    slot_colour.sort_unstable();
    let mut canon = Canon {
        adj,
        slot_colour,
        colour,
        order: Vec::with_capacity(g.n()),
        used: 0,
        best: u64::MAX,
        bits: pair_bits(g.n()),
    };
    canon.place(0, 0);
    Ok(canon.best)
}

/// Inverse of [`canonical_code`]'s bit layout.
pub fn graph_from_code(n: usize, code: u64) -> Graph {
    let total = pair_bits(n);
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            k += 1;
            if code >> (total - k) & 1 == 1 {
                edges.push((i, j));
            }
        }
    }
    Graph::new(n, edges).expect("code within order")
}

fn sorted_graphs(n: usize, codes: BTreeSet<(usize, u64)>) -> Vec<Graph> {
    codes.into_iter().map(|(_, c)| graph_from_code(n, c)).collect()
}

fn next_level(prev: &[Graph], n: usize) -> Vec<Graph> {
    let mut codes = BTreeSet::new();
    for g in prev {
        let mut adj = g.adjacency_masks().to_vec();
        adj.push(0);
        for attach in 1u64..(1 << (n - 1)) {
            let mut ext = adj.clone();
            ext[n - 1] = attach;
            for u in mask_iter(attach) {
                ext[u] |= bit(n - 1);
            }
            let h = Graph::from_adjacency(ext);
            let code = canonical_code(&h).expect("order checked");
            codes.insert((h.edge_count(), code));
        }
    }
    sorted_graphs(n, codes)
}

static LEVELS: OnceLock<Mutex<Vec<Vec<Graph>>>> = OnceLock::new();

/// One representative per isomorphism class of connected graphs on `n`
/// vertices, ordered by edge count and then canonical code.
///
/// Every connected graph has a vertex whose removal leaves it connected, so
/// attaching a new vertex to each connected graph on `n - 1` vertices in
/// every possible way reaches all classes.
pub fn enumerate_connected_graphs(n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > ENUMERATION_MAX_ORDER {
        return Err(Error::input(format!(
            "enumeration covers 1..={ENUMERATION_MAX_ORDER} vertices, got {n}"
        )));
    }
    if n > INTERNAL_ENUMERATION_MAX {
        return Err(Error::input(format!(
            "n = {n} needs a graph6 corpus; internal enumeration stops at {INTERNAL_ENUMERATION_MAX}"
        )));
    }
    let levels = LEVELS.get_or_init(|| Mutex::new(vec![vec![Graph::empty(1).expect("K1")]]));
    let mut levels = levels.lock().unwrap_or_else(|e| e.into_inner());
    while levels.len() < n {
        let k = levels.len() + 1;
        let next = next_level(&levels[k - 2], k);
        levels.push(next);
    }
    Ok(levels[n - 1].clone())
}

/// Connected graphs of order `n` from graph6 lines, one per isomorphism
/// class, in the same order as [`enumerate_connected_graphs`].
pub fn connected_graphs_from_corpus(text: &str, n: usize) -> Result<Vec<Graph>> {
    if n == 0 || n > CODE_MAX_ORDER {
        return Err(Error::input(format!("corpus order {n} unsupported")));
    }
    let mut codes = BTreeSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with(">>") && line.len() == ">>graph6<<".len() {
            continue;
        }
        let g = parse_graph6(line).map_err(|e| Error::input_at(i + 1, e.to_string()))?;
        if g.n() == n && g.is_connected() {
            codes.insert((g.edge_count(), canonical_code(&g)?));
        }
    }
    Ok(sorted_graphs(n, codes))
}
