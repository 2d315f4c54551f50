//! Indented-text and DOT renderings of expanded trees.

use std::fmt::Write;

use crate::families::ObjectNode;
use crate::succession::LabelNode;

/// A tree node reduced to what the renderers need.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RenderNode {
    pub id: usize,
    pub parent: Option<usize>,
    pub text: String,
    pub delay: u32,
}

impl From<&LabelNode> for RenderNode {
    fn from(n: &LabelNode) -> Self {
        RenderNode { id: n.id, parent: n.parent, text: n.label.to_string(), delay: n.delay }
    }
}

impl From<&ObjectNode> for RenderNode {
    fn from(n: &ObjectNode) -> Self {
        RenderNode { id: n.id, parent: n.parent, text: format!("{} {}", n.object, n.label), delay: n.delay }
    }
}

fn children_lists(nodes: &[RenderNode]) -> Vec<Vec<usize>> {
    let mut kids = vec![Vec::new(); nodes.len()];
    for n in nodes {
        if let Some(p) = n.parent {
            kids[p].push(n.id);
        }
    }
    kids
}

/// Depth-first listing, two spaces per tree edge; delayed edges end in `@d`.
pub fn text_tree(nodes: &[RenderNode]) -> String {
    let kids = children_lists(nodes);
    let mut out = String::new();
    let mut stack: Vec<(usize, usize)> = nodes.iter().filter(|n| n.parent.is_none()).map(|n| (n.id, 0)).rev().collect();
    while let Some((id, indent)) = stack.pop() {
        let n = &nodes[id];
        out.push_str(&"  ".repeat(indent));
        out.push_str(&n.text);
        if n.delay > 1 {
            let _ = write!(out, " @{}", n.delay);
        }
        out.push('\n');
        for &c in kids[id].iter().rev() {
            stack.push((c, indent + 1));
        }
    }
    out
}

fn escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn dot_tree(name: &str, nodes: &[RenderNode]) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph \"{}\" {{", escape(name));
    out.push_str("  node [shape=box, fontname=\"monospace\"];\n");
    for n in nodes {
        let _ = writeln!(out, "  n{} [label=\"{}\"];", n.id, escape(&n.text));
    }
    for n in nodes {
        if let Some(p) = n.parent {
            if n.delay > 1 {
                let _ = writeln!(out, "  n{p} -> n{} [label=\"@{}\", style=dashed];", n.id, n.delay);
            } else {
                let _ = writeln!(out, "  n{p} -> n{};", n.id);
            }
        }
    }
    out.push_str("}\n");
    out
}
