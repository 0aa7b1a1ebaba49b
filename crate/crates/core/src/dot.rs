//! Graphviz DOT export.

use std::fmt::Write as _;

use crate::counterexample::CounterexampleLayout;
use crate::digraph::Digraph;

/// Renders `d` as a DOT digraph. With a layout, vertices are grouped into
/// one cluster per role block: `U-`, each path layer, the path ends, the
/// three `Y` tiers and `X`.
pub fn export_dot(d: &Digraph, layout: Option<&CounterexampleLayout>) -> String {
    let mut s = String::from("digraph G {\n");
    match layout {
        Some(lay) if lay.n == d.n() => {
            let mut cluster = |name: &str, label: &str, vs: &[usize]| {
                let _ = writeln!(s, "  subgraph cluster_{name} {{\n    label=\"{label}\";");
                for v in vs {
                    let _ = writeln!(s, "    {v};");
                }
                s.push_str("  }\n");
            };
            cluster("u_minus", "U-", &lay.u_minus);
            for t in 1..=lay.l {
                let layer: Vec<usize> = lay.grid.iter().map(|p| p[t]).collect();
                cluster(&format!("h{t}"), &format!("H{t}"), &layer);
            }
            cluster("ter", "Ter", &lay.ter());
            cluster("y_minus", "Y-", &lay.y_minus);
            cluster("y", "Y", &lay.y);
            cluster("y_plus", "Y+", &lay.y_plus);
            cluster("x", "X", &lay.x);
            let _ = writeln!(s, "  {} [label=\"z+\"];", lay.z_plus);
        }
        _ => {
            for v in 0..d.n() {
                let _ = writeln!(s, "  {v};");
            }
        }
    }
    for (u, v) in d.arcs() {
        let _ = writeln!(s, "  {u} -> {v};");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::counterexample::{build_unchecked, CounterexampleParams};

    #[test]
    fn small_exports() {
        let c3 = Digraph::from_arcs(3, [(0, 1), (1, 2), (2, 0)]).unwrap();
        let t = export_dot(&c3, None);
        assert_eq!(t.matches("->").count(), 3);
        assert_eq!(t.lines().filter(|l| l.trim_end().ends_with(';') && !l.contains("->")).count(), 3);
        let one = export_dot(&Digraph::new(1), None);
        assert_eq!(one, "digraph G {\n  0;\n}\n");
    }

    #[test]
    fn clusters_cover_every_vertex_once() {
        let (t, lay) = build_unchecked(&CounterexampleParams { k: 13, n: 164, seed: None }).unwrap();
        let dot = export_dot(&t, Some(&lay));
        assert_eq!(dot.matches("subgraph cluster_").count(), 6 + lay.l);
        let nodes: Vec<usize> = dot
            .lines()
            .filter(|l| !l.contains("->") && !l.contains('{') && !l.contains('}') && !l.contains("label="))
            .map(|l| l.trim().trim_end_matches(';').parse().unwrap())
            .collect();
        let mut sorted = nodes.clone();
        sorted.sort_unstable();
        sorted.dedup();
        assert_eq!(sorted.len(), nodes.len());
        assert_eq!(nodes.len() + 1, t.n());
    }
}
