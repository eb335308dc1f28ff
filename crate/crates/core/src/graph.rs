//! The undirected weighted search-space graph and its two constructors.

use std::collections::HashSet;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Vec3;
use crate::mesh::WalkableSurface;

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("node {0} does not exist")]
    UnknownNode(usize),
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("edge ({a}, {b}) has invalid weight {weight}")]
    InvalidWeight { a: usize, b: usize, weight: f64 },
    #[error("polygon centres {a} and {b} coincide; edge would have zero weight")]
    DegenerateEdge { a: usize, b: usize },
    #[error("neighbourhood lists {from} -> {to} but not {to} -> {from}")]
    AsymmetricNeighborhood { from: usize, to: usize },
    #[error("sample field is empty")]
    EmptyField,
    #[error("sample field has {points} points but {normals} normals")]
    NormalCountMismatch { points: usize, normals: usize },
    #[error("cannot read graph {path}: {message}")]
    Io { path: String, message: String },
    #[error("graph parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

/// Where a node came from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeSource {
    PolygonCenter,
    Sample,
    EntryExit,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphNode {
    pub id: usize,
    pub position: Vec3,
    pub normal: Vec3,
    pub on_navmesh: bool,
    pub source: NodeSource,
    /// Identifier in the graph this node was first created in. Subgraphs keep
    /// it so exported structures refer back to initial-graph nodes.
    pub origin: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Edge {
    pub a: usize,
    pub b: usize,
    pub weight: f64,
}

impl Edge {
    pub fn other(&self, n: usize) -> usize {
        if n == self.a {
            self.b
        } else {
            self.a
        }
    }

    /// `(min id, max id)`, the tie-break key used by the spanning-tree code.
    pub fn key(&self) -> (usize, usize) {
        (self.a.min(self.b), self.a.max(self.b))
    }
}

/// Undirected simple graph with dense node ids `0..n`.
#[derive(Clone, Debug, Default)]
pub struct SurfaceGraph {
    nodes: Vec<GraphNode>,
    edges: Vec<Edge>,
    // (neighbour, edge index), kept sorted by neighbour id
    adjacency: Vec<Vec<(usize, usize)>>,
    edge_set: HashSet<(usize, usize)>,
    node_index: Option<Vec<usize>>,
}

impl SurfaceGraph {
    pub fn new() -> Self {
        SurfaceGraph::default()
    }

    /// Appends a node and returns its id, which is also its `origin`.
    pub fn add_node(&mut self, position: Vec3, normal: Vec3, on_navmesh: bool, source: NodeSource) -> usize {
        let id = self.nodes.len();
        self.push_node(GraphNode { id, position, normal, on_navmesh, source, origin: id })
    }

    fn push_node(&mut self, mut node: GraphNode) -> usize {
        let id = self.nodes.len();
        node.id = id;
        node.normal = node.normal.normalized().unwrap_or(Vec3::Z);
        self.nodes.push(node);
        self.adjacency.push(Vec::new());
        id
    }

    pub fn add_edge(&mut self, a: usize, b: usize, weight: f64) -> Result<usize, GraphError> {
        if a >= self.nodes.len() {
            return Err(GraphError::UnknownNode(a));
        }
        if b >= self.nodes.len() {
            return Err(GraphError::UnknownNode(b));
        }
        if a == b {
            return Err(GraphError::SelfLoop(a));
        }
        if !(weight.is_finite() && weight >= 0.0) {
            return Err(GraphError::InvalidWeight { a, b, weight });
        }
        let key = (a.min(b), a.max(b));
        if !self.edge_set.insert(key) {
            return Err(GraphError::DuplicateEdge(key.0, key.1));
        }
        let idx = self.edges.len();
        self.edges.push(Edge { a, b, weight });
        insert_sorted(&mut self.adjacency[a], (b, idx));
        insert_sorted(&mut self.adjacency[b], (a, idx));
        Ok(idx)
    }

    /// Adds an edge weighted by the Euclidean distance between its endpoints.
    pub fn add_euclidean_edge(&mut self, a: usize, b: usize) -> Result<usize, GraphError> {
        let (pa, pb) = (self.node(a)?.position, self.node(b)?.position);
        self.add_edge(a, b, pa.distance(pb))
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn nodes(&self) -> &[GraphNode] {
        &self.nodes
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn node(&self, id: usize) -> Result<&GraphNode, GraphError> {
        self.nodes.get(id).ok_or(GraphError::UnknownNode(id))
    }

    pub(crate) fn node_mut(&mut self, id: usize) -> &mut GraphNode {
        &mut self.nodes[id]
    }

    /// `(neighbour, edge index)` pairs in ascending neighbour order.
    pub fn neighbors(&self, id: usize) -> &[(usize, usize)] {
        &self.adjacency[id]
    }

    pub fn degree(&self, id: usize) -> usize {
        self.adjacency[id].len()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edge_set.contains(&(a.min(b), a.max(b)))
    }

    pub fn edge_between(&self, a: usize, b: usize) -> Option<&Edge> {
        self.adjacency.get(a)?.binary_search_by_key(&b, |&(n, _)| n).ok().map(|i| &self.edges[self.adjacency[a][i].1])
    }

    /// Polygon id -> node id, for navmesh-derived graphs.
    pub fn polygon_node(&self, polygon: usize) -> Option<usize> {
        self.node_index.as_ref()?.get(polygon).copied()
    }

    pub fn centroid(&self) -> Vec3 {
        crate::geom::centroid(self.nodes.iter().map(|n| n.position))
    }

    /// Connected component label per node (labels in first-seen order).
    pub fn components(&self) -> Vec<usize> {
        let mut label = vec![usize::MAX; self.nodes.len()];
        let mut next = 0;
        for s in 0..self.nodes.len() {
            if label[s] != usize::MAX {
                continue;
            }
            let mut stack = vec![s];
            label[s] = next;
            while let Some(u) = stack.pop() {
                for &(v, _) in &self.adjacency[u] {
                    if label[v] == usize::MAX {
                        label[v] = next;
                        stack.push(v);
                    }
                }
            }
            next += 1;
        }
        label
    }

    pub fn component_count(&self) -> usize {
        self.components().into_iter().max().map_or(0, |m| m + 1)
    }

    /// Subgraph on `nodes` (any order; output ids follow ascending input id)
    /// keeping the listed edges. Node payloads, including `origin`, are copied.
    /// Returns the subgraph and the old id of each new node.
    pub fn subgraph(&self, nodes: &[usize], edges: &[usize]) -> (SurfaceGraph, Vec<usize>) {
        let mut keep: Vec<usize> = nodes.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut remap = vec![usize::MAX; self.nodes.len()];
        let mut sub = SurfaceGraph::new();
        for &old in &keep {
            remap[old] = sub.push_node(self.nodes[old].clone());
        }
        let mut edge_list: Vec<usize> = edges.to_vec();
        edge_list.sort_unstable();
        edge_list.dedup();
        for e in edge_list {
            let Edge { a, b, weight } = self.edges[e];
            if remap[a] != usize::MAX && remap[b] != usize::MAX {
                // both endpoints are kept and the edge is unique in self
                let _ = sub.add_edge(remap[a], remap[b], weight);
            }
        }
        (sub, keep)
    }
}

fn insert_sorted(list: &mut Vec<(usize, usize)>, item: (usize, usize)) {
    let pos = list.partition_point(|&(n, _)| n < item.0);
    list.insert(pos, item);
}

/// One node per polygon at its centre, one edge per adjacent polygon pair.
pub fn graph_from_navmesh(surface: &WalkableSurface) -> Result<SurfaceGraph, GraphError> {
    let mut g = SurfaceGraph::new();
    for (p, (&c, &n)) in surface.polygon_centers().iter().zip(surface.polygon_normals()).enumerate() {
        let id = g.add_node(c, n, true, NodeSource::PolygonCenter);
        debug_assert_eq!(id, p);
    }
    for p in 0..surface.polygon_count() {
        for adj in surface.adjacency(p) {
            let q = adj.neighbor;
            if q <= p || g.has_edge(p, q) {
                continue;
            }
            let w = g.nodes[p].position.distance(g.nodes[q].position);
            if w <= 0.0 {
                return Err(GraphError::DegenerateEdge { a: p, b: q });
            }
            g.add_edge(p, q, w)?;
        }
    }
    g.node_index = Some((0..surface.polygon_count()).collect());
    Ok(g)
}

/// Point samples with optional per-point normals (default +Z).
#[derive(Clone, Debug, Default)]
pub struct SampleField {
    pub points: Vec<Vec3>,
    pub normals: Option<Vec<Vec3>>,
}

/// Which samples are connected.
#[derive(Clone, Debug)]
pub enum Neighborhood {
    /// Row-major `width x height` lattice; 4-neighbourhood, or 8 with `diagonal`.
    Grid { width: usize, height: usize, diagonal: bool },
    /// All pairs closer than the radius.
    Radius(f64),
    /// Explicit neighbour lists, which must be symmetric.
    Explicit(Vec<Vec<usize>>),
}

impl Neighborhood {
    fn pairs(&self, points: &[Vec3]) -> Result<Vec<(usize, usize)>, GraphError> {
        let n = points.len();
        let mut pairs = Vec::new();
        match self {
            Neighborhood::Grid { width, height, diagonal } => {
                let (w, h) = (*width, *height);
                if w * h != n {
                    return Err(GraphError::Parse {
                        line: 0,
                        message: format!("grid {w}x{h} does not match {n} samples"),
                    });
                }
                for y in 0..h {
                    for x in 0..w {
                        let i = y * w + x;
                        if x + 1 < w {
                            pairs.push((i, i + 1));
                        }
                        if y + 1 < h {
                            pairs.push((i, i + w));
                        }
                        if *diagonal && y + 1 < h {
                            if x + 1 < w {
                                pairs.push((i, i + w + 1));
                            }
                            if x > 0 {
                                pairs.push((i, i + w - 1));
                            }
                        }
                    }
                }
            }
            Neighborhood::Radius(r) => {
                for i in 0..n {
                    for j in i + 1..n {
                        if points[i].distance(points[j]) <= *r {
                            pairs.push((i, j));
                        }
                    }
                }
            }
            Neighborhood::Explicit(lists) => {
                let mut seen = HashSet::new();
                for (i, list) in lists.iter().enumerate() {
                    for &j in list {
                        if i >= n {
                            return Err(GraphError::UnknownNode(i));
                        }
                        if j >= n {
                            return Err(GraphError::UnknownNode(j));
                        }
                        seen.insert((i, j));
                    }
                }
                let mut ordered: Vec<_> = seen.iter().copied().collect();
                ordered.sort_unstable();
                for (i, j) in ordered {
                    if !seen.contains(&(j, i)) {
                        return Err(GraphError::AsymmetricNeighborhood { from: i, to: j });
                    }
                    if i < j {
                        pairs.push((i, j));
                    } else if i == j {
                        return Err(GraphError::SelfLoop(i));
                    }
                }
            }
        }
        Ok(pairs)
    }
}

/// Euclidean distance between node positions, the default sampling weight.
pub fn euclidean_weight(a: &GraphNode, b: &GraphNode) -> f64 {
    a.position.distance(b.position)
}

/// One node per sample, edges per the neighbourhood rule, weights from `weight_fn`.
pub fn graph_from_sampling<F>(
    field: &SampleField,
    neighborhood: &Neighborhood,
    weight_fn: F,
) -> Result<SurfaceGraph, GraphError>
where
    F: Fn(&GraphNode, &GraphNode) -> f64,
{
    if field.points.is_empty() {
        return Err(GraphError::EmptyField);
    }
    if let Some(normals) = &field.normals {
        if normals.len() != field.points.len() {
            return Err(GraphError::NormalCountMismatch { points: field.points.len(), normals: normals.len() });
        }
    }
    let mut g = SurfaceGraph::new();
    for (i, &p) in field.points.iter().enumerate() {
        let normal = field.normals.as_ref().map_or(Vec3::Z, |n| n[i]);
        g.add_node(p, normal, true, NodeSource::Sample);
    }
    for (a, b) in neighborhood.pairs(&field.points)? {
        let w = weight_fn(&g.nodes[a], &g.nodes[b]);
        g.add_edge(a, b, w)?;
    }
    Ok(g)
}

#[derive(Serialize, Deserialize)]
struct GraphDocNode {
    pos: [f64; 3],
    #[serde(default, skip_serializing_if = "Option::is_none")]
    normal: Option<[f64; 3]>,
}

#[derive(Serialize, Deserialize)]
struct GraphDoc {
    nodes: Vec<GraphDocNode>,
    edges: Vec<(usize, usize, f64)>,
}

/// Parses the JSON graph format
/// `{"nodes":[{"pos":[x,y,z],"normal":[x,y,z]}..],"edges":[[i,j,w],..]}`.
pub fn parse_graph_json(text: &str) -> Result<SurfaceGraph, GraphError> {
    let doc: GraphDoc =
        serde_json::from_str(text).map_err(|e| GraphError::Parse { line: e.line(), message: e.to_string() })?;
    let mut g = SurfaceGraph::new();
    for n in &doc.nodes {
        let normal = n.normal.map_or(Vec3::Z, Vec3::from);
        g.add_node(Vec3::from(n.pos), normal, true, NodeSource::Sample);
    }
    for &(a, b, w) in &doc.edges {
        g.add_edge(a, b, w)?;
    }
    Ok(g)
}

pub fn load_graph_json(path: &Path) -> Result<SurfaceGraph, GraphError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| GraphError::Io { path: path.display().to_string(), message: e.to_string() })?;
    parse_graph_json(&text)
}

pub fn graph_to_json(g: &SurfaceGraph) -> String {
    let doc = GraphDoc {
        nodes: g
            .nodes
            .iter()
            .map(|n| GraphDocNode { pos: n.position.to_array(), normal: Some(n.normal.to_array()) })
            .collect(),
        edges: g.edges.iter().map(|e| (e.a, e.b, e.weight)).collect(),
    };
    serde_json::to_string(&doc).expect("graph document serialises")
}
