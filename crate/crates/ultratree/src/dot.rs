//! Graphviz output. Every node shows its id and label; members of a
//! highlighted set are filled, comb roots are drawn with a double border.

use std::collections::BTreeSet;
use std::fmt::Write;

use ultratree_core::LabeledTree;

#[derive(Debug, Clone, Default)]
pub struct Highlight {
    /// Drawn filled, e.g. the generating set of a hull.
    pub set: BTreeSet<String>,
    /// Drawn with a double border, e.g. attachment roots.
    pub roots: BTreeSet<String>,
    /// Edges drawn bold, e.g. the path from a root to its tooth.
    pub path: Vec<String>,
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' | '\\' => {
                out.push('\\');
                out.push(c);
            }
            '\n' => out.push_str("\\n"),
            _ => out.push(c),
        }
    }
    out.push('"');
    out
}

pub fn to_dot(t: &LabeledTree, hl: &Highlight) -> String {
    let bold: BTreeSet<(&str, &str)> = hl
        .path
        .windows(2)
        .flat_map(|w| [(w[0].as_str(), w[1].as_str()), (w[1].as_str(), w[0].as_str())])
        .collect();
    let mut out = String::from("graph T {\n  node [shape=circle, fontname=\"Helvetica\"];\n");
    for v in t.ids() {
        let mut attrs = format!("label={}", quote(&format!("{v}\nl={}", t.label_of(v).unwrap())));
        if hl.set.contains(v) {
            attrs.push_str(", style=filled, fillcolor=\"lightblue\"");
        }
        if hl.roots.contains(v) {
            attrs.push_str(", shape=doublecircle, color=\"red\"");
        }
        writeln!(out, "  {} [{attrs}];", quote(v)).unwrap();
    }
    for (u, v) in t.edge_ids() {
        let style = if bold.contains(&(u.as_str(), v.as_str())) { " [penwidth=3, color=\"red\"]" } else { "" };
        writeln!(out, "  {} -- {}{style};", quote(&u), quote(&v)).unwrap();
    }
    out.push_str("}\n");
    out
}
