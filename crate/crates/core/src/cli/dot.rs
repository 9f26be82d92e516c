//! Graphviz renderings of trees of spheres and covers between them.
//!
//! Node identifiers are derived from a hash of the vertex data, so the
//! same vertex gets the same identifier in every rendering; output order
//! follows the deterministic vertex order of the tree.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::berkline::TypeIIPoint;
use crate::exact::rat_to_string;
use crate::trees::{TreeCover, TreeOfSpheres};

/// Stable node identifier: a prefix plus the first 8 hex digits of the
/// hash of `center|rv`.
fn node_id(prefix: &str, p: &TypeIIPoint) -> String {
    let mut hasher = Sha256::new();
    hasher.update(format!("{}|{}", p.center(), rat_to_string(p.rv())).as_bytes());
    let digest = hasher.finalize();
    let mut id = String::from(prefix);
    for byte in digest.iter().take(4) {
        write!(id, "{byte:02x}").expect("writing to a string");
    }
    id
}

fn vertex_label(tree: &TreeOfSpheres, i: usize) -> String {
    let v = &tree.vertices[i];
    let marks: Vec<String> = tree
        .labels
        .iter()
        .zip(&v.marking)
        .map(|(l, d)| format!("{l}:{d}"))
        .collect();
    format!("{}\\n{}", v.point, marks.join(" "))
}

fn emit_tree(out: &mut String, tree: &TreeOfSpheres, prefix: &str, indent: &str) {
    for (i, v) in tree.vertices.iter().enumerate() {
        let _ = writeln!(
            out,
            "{indent}{} [label=\"{}\"];",
            node_id(prefix, &v.point),
            vertex_label(tree, i)
        );
    }
    for (a, b) in &tree.edges {
        let _ = writeln!(
            out,
            "{indent}{} -> {} [dir=none];",
            node_id(prefix, &tree.vertices[*a].point),
            node_id(prefix, &tree.vertices[*b].point)
        );
    }
}

/// Graphviz source for a single tree of spheres.
pub fn tree_dot(tree: &TreeOfSpheres) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph tree {{");
    let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
    emit_tree(&mut out, tree, "v_", "  ");
    let _ = writeln!(out, "}}");
    out
}

/// Graphviz source for a cover: both trees side by side, with dashed
/// arrows for the vertex map labelled by the sphere maps.
pub fn cover_dot(cover: &TreeCover) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "digraph cover {{");
    let _ = writeln!(out, "  node [shape=box, fontname=\"monospace\"];");
    let _ = writeln!(out, "  subgraph cluster_source {{");
    let _ = writeln!(out, "    label=\"source\";");
    emit_tree(&mut out, &cover.source, "s_", "    ");
    let _ = writeln!(out, "  }}");
    let _ = writeln!(out, "  subgraph cluster_target {{");
    let _ = writeln!(out, "    label=\"target\";");
    emit_tree(&mut out, &cover.target, "t_", "    ");
    let _ = writeln!(out, "  }}");
    for (i, &j) in cover.vertex_map.iter().enumerate() {
        let _ = writeln!(
            out,
            "  {} -> {} [style=dashed, label=\"{}\"];",
            node_id("s_", &cover.source.vertices[i].point),
            node_id("t_", &cover.target.vertices[j].point),
            cover.sphere_maps[i]
        );
    }
    let _ = writeln!(out, "}}");
    out
}
