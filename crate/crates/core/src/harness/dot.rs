//! Graphviz DOT rendering with optional R labels and vertex roles.

use std::collections::BTreeMap;
use std::fmt::Write;

use crate::cycles::{edge_labels, vertex_roles, CycleSet, Role};
use crate::graph::{Graph, Vertex};
use crate::reduction::Edge;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Annotations {
    /// Edge -> R. Unlisted edges are drawn unlabelled.
    pub labels: BTreeMap<Edge, u32>,
    /// Vertex -> role. Unlisted vertices are drawn plain.
    pub roles: BTreeMap<Vertex, Role>,
}

impl Annotations {
    pub fn from_cycle_set(cs: &CycleSet) -> Self {
        Annotations {
            labels: edge_labels(cs),
            roles: vertex_roles(cs).into_iter().enumerate().map(|(v, r)| (v, r.role)).collect(),
        }
    }
}

fn colour(role: Role) -> &'static str {
    match role {
        Role::Boundary => "lightblue",
        Role::Interior => "orange",
        Role::Other => "white",
    }
}

pub fn export_dot(g: &Graph, annotations: Option<&Annotations>) -> String {
    let empty = Annotations::default();
    let ann = annotations.unwrap_or(&empty);
    let mut out = String::from("graph G {\n");
    for v in 0..g.n() {
        match ann.roles.get(&v) {
            Some(&role) => {
                let _ = writeln!(out, "  {v} [style=filled, fillcolor={}];", colour(role));
            }
            None => {
                let _ = writeln!(out, "  {v};");
            }
        }
    }
    for &(a, b) in g.edges() {
        match ann.labels.get(&(a, b)) {
            Some(r) => {
                let _ = writeln!(out, "  {a} -- {b} [label=\"R={r}\"];");
            }
            None => {
                let _ = writeln!(out, "  {a} -- {b};");
            }
        }
    }
    out.push_str("}\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::SetKind;
    use crate::testing::{cyc, theta4};

    #[test]
    fn plain_triangle() {
        let dot = export_dot(&Graph::complete(3).unwrap(), None);
        assert_eq!(dot, "graph G {\n  0;\n  1;\n  2;\n  0 -- 1;\n  0 -- 2;\n  1 -- 2;\n}\n");
        assert_eq!(export_dot(&Graph::complete(3).unwrap(), Some(&Annotations::default())), dot);
    }

    #[test]
    fn theta_labels() {
        let g = theta4();
        let set = CycleSet::new(g.clone(), vec![cyc(&g, &[0, 2, 1]), cyc(&g, &[0, 3, 1])], SetKind::Full).unwrap();
        let dot = export_dot(&g, Some(&Annotations::from_cycle_set(&set)));
        assert!(dot.contains("0 -- 1 [label=\"R=2\"];"));
        assert!(dot.contains("0 -- 2 [label=\"R=1\"];"));
        assert!(dot.contains("fillcolor=lightblue"));
    }
}
