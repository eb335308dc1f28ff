//! Forest exporters: structured JSON, Graphviz DOT and OBJ polylines.
//!
//! Coordinates are rounded to 9 significant digits before formatting, so a
//! JSON export read back and exported again gives the same bytes.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::geom::Vec3;
use crate::graph::NodeSource;
use crate::tree::{RootedTree, TreeNode};

pub const SIGNIFICANT_DIGITS: usize = 9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExportFormat {
    Json,
    Dot,
    Obj,
}

impl ExportFormat {
    pub const ALL: [ExportFormat; 3] = [ExportFormat::Json, ExportFormat::Dot, ExportFormat::Obj];

    /// Fixed output name under the output directory.
    pub fn file_name(self) -> &'static str {
        match self {
            ExportFormat::Json => "structure.json",
            ExportFormat::Dot => "structure.dot",
            ExportFormat::Obj => "overlay.obj",
        }
    }
}

impl fmt::Display for ExportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ExportFormat::Json => "json",
            ExportFormat::Dot => "dot",
            ExportFormat::Obj => "obj",
        })
    }
}

impl FromStr for ExportFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "json" => Ok(ExportFormat::Json),
            "dot" => Ok(ExportFormat::Dot),
            "obj" => Ok(ExportFormat::Obj),
            _ => Err(format!("unknown format '{s}' (expected dot, json or obj)")),
        }
    }
}

/// Nearest double to `x` written with 9 significant digits.
pub fn round_sig(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{:.*e}", SIGNIFICANT_DIGITS - 1, x).parse().expect("formatted float parses")
}

fn round_vec(v: Vec3) -> [f64; 3] {
    [round_sig(v.x), round_sig(v.y), round_sig(v.z)]
}

fn fmt_num(x: f64) -> String {
    format!("{}", round_sig(x))
}

// Fields are declared in alphabetical order; serde keeps declaration order.
#[derive(Serialize, Deserialize)]
struct NodeDoc {
    children: Vec<usize>,
    depth: usize,
    id: usize,
    normal: [f64; 3],
    on_navmesh: bool,
    origin: usize,
    parent: Option<usize>,
    position: [f64; 3],
    source: NodeSource,
    terminal: bool,
}

#[derive(Serialize, Deserialize)]
struct TreeDoc {
    nodes: Vec<NodeDoc>,
    root: usize,
}

#[derive(Serialize, Deserialize)]
struct ForestDoc {
    trees: Vec<TreeDoc>,
}

pub fn structure_json(forest: &[RootedTree]) -> String {
    let doc = ForestDoc {
        trees: forest
            .iter()
            .map(|t| TreeDoc {
                root: t.root,
                nodes: t
                    .nodes
                    .values()
                    .map(|n| NodeDoc {
                        children: n.children.clone(),
                        depth: n.depth,
                        id: n.id,
                        normal: round_vec(n.normal),
                        on_navmesh: n.on_navmesh,
                        origin: n.origin,
                        parent: n.parent,
                        position: round_vec(n.position),
                        source: n.source,
                        terminal: n.terminal,
                    })
                    .collect(),
            })
            .collect(),
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("forest serialises");
    s.push('\n');
    s
}

pub fn parse_structure_json(text: &str) -> Result<Vec<RootedTree>, serde_json::Error> {
    let doc: ForestDoc = serde_json::from_str(text)?;
    Ok(doc
        .trees
        .into_iter()
        .map(|t| {
            let nodes: BTreeMap<usize, TreeNode> = t
                .nodes
                .into_iter()
                .map(|n| {
                    (
                        n.id,
                        TreeNode {
                            id: n.id,
                            origin: n.origin,
                            parent: n.parent,
                            children: n.children,
                            depth: n.depth,
                            position: Vec3::from(n.position),
                            normal: Vec3::from(n.normal),
                            on_navmesh: n.on_navmesh,
                            terminal: n.terminal,
                            source: n.source,
                        },
                    )
                })
                .collect();
            RootedTree { root: t.root, nodes }
        })
        .collect())
}

/// Directed graph, one node per tree node labelled `origin/depth[/T]`.
pub fn structure_dot(forest: &[RootedTree]) -> String {
    let mut out = String::from("digraph structure {\n");
    for (ti, t) in forest.iter().enumerate() {
        let _ = writeln!(out, "  // tree {ti}, root n{}", t.root);
        for n in t.preorder().iter().map(|&v| t.node(v)) {
            let flag = if n.terminal { "/T" } else { "" };
            let shape = if n.parent.is_none() { ", shape=doublecircle" } else { "" };
            let _ = writeln!(out, "  n{} [label=\"{}/{}{flag}\"{shape}];", n.id, n.origin, n.depth);
        }
        for (p, c) in t.edges() {
            let _ = writeln!(out, "  n{p} -> n{c};");
        }
    }
    out.push_str("}\n");
    out
}

/// One `v` per node, one two-vertex `l` per edge, and a `p` record on each
/// root.
pub fn structure_obj(forest: &[RootedTree]) -> String {
    let mut out = String::from("# navtree overlay\n");
    let mut base = 1;
    for (ti, t) in forest.iter().enumerate() {
        let _ = writeln!(out, "o tree{ti}");
        let order = t.preorder();
        let index: BTreeMap<usize, usize> = order.iter().enumerate().map(|(i, &v)| (v, base + i)).collect();
        for &v in &order {
            let p = t.node(v).position;
            let _ = writeln!(out, "v {} {} {}", fmt_num(p.x), fmt_num(p.y), fmt_num(p.z));
        }
        let _ = writeln!(out, "p {}", index[&t.root]);
        for (p, c) in t.edges() {
            let _ = writeln!(out, "l {} {}", index[&p], index[&c]);
        }
        base += order.len();
    }
    out
}

pub fn render(forest: &[RootedTree], format: ExportFormat) -> String {
    match format {
        ExportFormat::Json => structure_json(forest),
        ExportFormat::Dot => structure_dot(forest),
        ExportFormat::Obj => structure_obj(forest),
    }
}

pub fn export_structure(forest: &[RootedTree], format: ExportFormat, path: &Path) -> std::io::Result<()> {
    std::fs::write(path, render(forest, format))
}
