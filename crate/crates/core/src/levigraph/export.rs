use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{EdgeColor, StructuredLeviGraph, Vertex};
use crate::harmony::HarmonicSystem;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: u32,
    pub system: HarmonicSystem,
    pub vertices: Vec<VertexJson>,
    pub edges: Vec<EdgeJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub id: String,
    pub quality: crate::harmony::Quality,
    pub root: u32,
    pub pitches: [u32; 3],
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeJson {
    pub from: String,
    pub to: String,
    pub color: EdgeColor,
}

pub fn to_json(g: &StructuredLeviGraph) -> GraphJson {
    let n = g.n();
    GraphJson {
        n,
        system: g.system(),
        vertices: g
            .vertices()
            .map(|v| VertexJson {
                id: v.to_string(),
                quality: v.quality,
                root: v.root,
                pitches: g.mu(v),
            })
            .collect(),
        edges: g
            .edges()
            .iter()
            .map(|e| EdgeJson {
                from: Vertex::major(e.point).to_string(),
                to: Vertex::minor(e.line).to_string(),
                color: e.color,
            })
            .collect(),
    }
}

/// Undirected DOT with points and lines on separate ranks.
pub fn to_dot(g: &StructuredLeviGraph) -> String {
    let sys = g.system();
    let n = g.n();
    let mut out = String::new();
    let _ = writeln!(out, "graph \"levi_{}_{}_n{}\" {{", sys.t(), sys.s(), n);
    let _ = writeln!(out, "  label=\"({},{}) in Z_{}, q = {}\";", sys.t(), sys.s(), n, sys.q());
    out.push_str("  node [shape=circle, fontsize=10];\n");
    for (side, shape) in [(0, "circle"), (1, "box")] {
        out.push_str("  { rank=same;");
        for r in 0..n {
            let v = if side == 0 { Vertex::major(r) } else { Vertex::minor(r) };
            let _ = write!(out, " {v};");
        }
        out.push_str(" }\n");
        for r in 0..n {
            let v = if side == 0 { Vertex::major(r) } else { Vertex::minor(r) };
            let [a, b, c] = g.mu(v);
            let _ = writeln!(out, "  {v} [shape={shape}, label=\"{v}\\n{{{a},{b},{c}}}\"];");
        }
    }
    for e in g.edges() {
        let _ = writeln!(
            out,
            "  {} -- {} [color={}, label=\"{:?}\"];",
            Vertex::major(e.point),
            Vertex::minor(e.line),
            e.color.dot_color(),
            e.color
        );
    }
    out.push_str("}\n");
    out
}
