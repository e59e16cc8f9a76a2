//! Greedy shrinking of counterexamples.

use crate::error::{Error, Result};
use crate::graph::{EdgeId, Graph};
use crate::oracle::is_hamiltonian;
use crate::verdict::{decide, PipelineConfig, Verdict};

/// The pipeline reaches a verdict on `g` and it differs from the oracle.
/// Graphs outside the pipeline's domain are never discrepancies.
pub fn is_discrepancy(g: &Graph, cfg: &PipelineConfig) -> bool {
    if g.n() < 3 || !g.is_connected() {
        return false;
    }
    match decide(g, cfg) {
        Ok(report) if report.verdict != Verdict::Undecided => {
            (report.verdict == Verdict::Hamiltonian) != is_hamiltonian(g)
        }
        _ => false,
    }
}

/// Deletes single edges, then single vertices, restarting after each
/// accepted deletion, until no single deletion keeps `keep` true.
pub(crate) fn minimize_while(g: &Graph, keep: impl Fn(&Graph) -> bool) -> Graph {
    let mut current = g.clone();
    'outer: loop {
        for id in 0..current.edge_count() {
            let smaller = current.without_edges(&[EdgeId(id)]);
            if keep(&smaller) {
                current = smaller;
                continue 'outer;
            }
        }
        for v in 0..current.n() {
            let smaller = current.without_vertex(v).expect("vertex in range");
            if keep(&smaller) {
                current = smaller;
                continue 'outer;
            }
        }
        return current;
    }
}

/// A locally minimal discrepancy reachable from `g` by deletions.
pub fn minimize_counterexample(g: &Graph, cfg: &PipelineConfig) -> Result<Graph> {
    if !is_discrepancy(g, cfg) {
        return Err(Error::Contract(
            "minimisation needs a graph the pipeline gets wrong".into(),
        ));
    }
    Ok(minimize_while(g, |h| is_discrepancy(h, cfg)))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Stand-in defect: "contains a triangle".
    fn has_triangle(g: &Graph) -> bool {
        g.edges().iter().any(|&(a, b)| (0..g.n()).any(|c| g.has_edge(a, c) && g.has_edge(b, c)))
    }

    #[test]
    fn shrinks_to_a_triangle() {
        let small = minimize_while(&Graph::complete(5).unwrap(), has_triangle);
        assert_eq!((small.n(), small.edge_count()), (3, 3));
    }

    #[test]
    fn minimal_input_is_unchanged() {
        let k3 = Graph::complete(3).unwrap();
        assert_eq!(minimize_while(&k3, has_triangle), k3);
    }

    #[test]
    fn result_is_locally_minimal() {
        let g = Graph::new(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (5, 3), (0, 5)]).unwrap();
        let small = minimize_while(&g, has_triangle);
        assert!(has_triangle(&small));
        assert!(small.edge_count() < g.edge_count());
        for id in 0..small.edge_count() {
            assert!(!has_triangle(&small.without_edges(&[EdgeId(id)])));
        }
        for v in 0..small.n() {
            assert!(!has_triangle(&small.without_vertex(v).unwrap()));
        }
    }

    #[test]
    fn non_discrepancy_is_a_contract_error() {
        let c5 = Graph::cycle(5).unwrap();
        assert!(matches!(
            minimize_counterexample(&c5, &PipelineConfig::default()),
            Err(Error::Contract(_))
        ));
    }
}
