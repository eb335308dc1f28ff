//! Approximate Steiner tree (Kou, Markowsky and Berman).
//!
//! 1. complete distance graph over the terminals;
//! 2. its minimum spanning tree;
//! 3. expand each tree edge into a shortest path of the input graph;
//! 4. minimum spanning tree of the expanded subgraph;
//! 5. repeatedly delete non-terminal leaves.

use std::collections::{BTreeSet, VecDeque};

use thiserror::Error;

use crate::algo::mst::kruskal;
use crate::algo::paths::{dijkstra, ShortestPaths};
use crate::graph::{Edge, SurfaceGraph};

#[derive(Debug, Error, PartialEq)]
pub enum SteinerError {
    #[error("terminal set is empty")]
    EmptyTerminalSet,
    #[error("terminal {0} is not a node of the graph")]
    UnknownTerminal(usize),
    #[error("terminals {a} and {b} are not connected")]
    DisconnectedTerminals { a: usize, b: usize },
}

#[derive(Clone, Debug)]
pub struct SteinerTree {
    /// The tree with its own dense ids; node `origin` fields are preserved.
    pub graph: SurfaceGraph,
    /// Input-graph id of each tree node, ascending.
    pub original_ids: Vec<usize>,
    /// Tree-local ids of the terminals, ascending.
    pub terminals: Vec<usize>,
    pub total_weight: f64,
}

impl SteinerTree {
    pub fn node_count(&self) -> usize {
        self.graph.node_count()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn is_terminal(&self, local: usize) -> bool {
        self.terminals.binary_search(&local).is_ok()
    }

    /// Input-graph edge keys `(min id, max id)` in ascending order.
    pub fn original_edges(&self) -> Vec<(usize, usize)> {
        let mut keys: Vec<_> = self
            .graph
            .edges()
            .iter()
            .map(|e| {
                let (a, b) = (self.original_ids[e.a], self.original_ids[e.b]);
                (a.min(b), a.max(b))
            })
            .collect();
        keys.sort_unstable();
        keys
    }
}

fn edge_index(g: &SurfaceGraph, a: usize, b: usize) -> usize {
    let list = g.neighbors(a);
    let i = list.binary_search_by_key(&b, |&(n, _)| n).expect("consecutive path nodes are adjacent");
    list[i].1
}

pub fn build_steiner_tree(g: &SurfaceGraph, terminals: &[usize]) -> Result<SteinerTree, SteinerError> {
    let mut t: Vec<usize> = terminals.to_vec();
    t.sort_unstable();
    t.dedup();
    if t.is_empty() {
        return Err(SteinerError::EmptyTerminalSet);
    }
    if let Some(&bad) = t.iter().find(|&&v| v >= g.node_count()) {
        return Err(SteinerError::UnknownTerminal(bad));
    }

    let runs: Vec<ShortestPaths> = t.iter().map(|&s| dijkstra(g, s)).collect();
    let mut g1 = Vec::with_capacity(t.len() * (t.len().saturating_sub(1)) / 2);
    for i in 0..t.len() {
        for j in i + 1..t.len() {
            let d = runs[i].distance(t[j]).ok_or(SteinerError::DisconnectedTerminals { a: t[i], b: t[j] })?;
            g1.push(Edge { a: i, b: j, weight: d });
        }
    }

    let mut expanded = BTreeSet::new();
    for e in kruskal(t.len(), &g1) {
        let Edge { a: i, b: j, .. } = g1[e];
        let path = runs[i].path_to(t[j]).expect("distance was finite");
        for w in path.windows(2) {
            expanded.insert(edge_index(g, w[0], w[1]));
        }
    }
    let gs_edges: Vec<usize> = expanded.into_iter().collect();
    let gs_list: Vec<Edge> = gs_edges.iter().map(|&e| g.edges()[e]).collect();
    let mut kept: Vec<usize> = kruskal(g.node_count(), &gs_list).into_iter().map(|i| gs_edges[i]).collect();
    kept.sort_unstable();

    // prune non-terminal leaves
    let mut degree = vec![0usize; g.node_count()];
    for &e in &kept {
        degree[g.edges()[e].a] += 1;
        degree[g.edges()[e].b] += 1;
    }
    let is_terminal = |v: usize| t.binary_search(&v).is_ok();
    let mut alive = vec![true; kept.len()];
    let mut incident: Vec<Vec<usize>> = vec![Vec::new(); g.node_count()];
    for (k, &e) in kept.iter().enumerate() {
        incident[g.edges()[e].a].push(k);
        incident[g.edges()[e].b].push(k);
    }
    let mut queue: VecDeque<usize> = (0..g.node_count()).filter(|&v| degree[v] == 1 && !is_terminal(v)).collect();
    while let Some(v) = queue.pop_front() {
        if degree[v] != 1 {
            continue;
        }
        let k = *incident[v].iter().find(|&&k| alive[k]).expect("leaf has one live edge");
        alive[k] = false;
        degree[v] = 0;
        let u = g.edges()[kept[k]].other(v);
        degree[u] -= 1;
        if degree[u] == 1 && !is_terminal(u) {
            queue.push_back(u);
        }
    }
    let final_edges: Vec<usize> = kept.iter().zip(&alive).filter(|(_, &a)| a).map(|(&e, _)| e).collect();
    let mut nodes: BTreeSet<usize> = t.iter().copied().collect();
    for &e in &final_edges {
        nodes.insert(g.edges()[e].a);
        nodes.insert(g.edges()[e].b);
    }
    let nodes: Vec<usize> = nodes.into_iter().collect();
    let (graph, original_ids) = g.subgraph(&nodes, &final_edges);
    let terminals = t.iter().map(|v| original_ids.binary_search(v).expect("terminal kept")).collect();
    let total_weight = graph.edges().iter().map(|e| e.weight).sum();
    Ok(SteinerTree { graph, original_ids, terminals, total_weight })
}
