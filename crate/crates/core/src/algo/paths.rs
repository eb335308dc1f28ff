//! Single-source shortest paths (Dijkstra with a binary heap).
//!
//! Equal-cost ties are resolved towards the smallest predecessor id so that
//! retrieved paths are reproducible.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use thiserror::Error;

use crate::graph::SurfaceGraph;

#[derive(Debug, Error, PartialEq)]
pub enum PathError {
    #[error("node {0} does not exist")]
    UnknownNode(usize),
    #[error("no path from {src} to {dst}")]
    NoPath { src: usize, dst: usize },
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct HeapItem {
    pub dist: f64,
    pub node: usize,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for HeapItem {}

impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for HeapItem {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other.dist.total_cmp(&self.dist).then_with(|| other.node.cmp(&self.node))
    }
}

/// Shortest-path tree rooted at `source`.
#[derive(Clone, Debug)]
pub struct ShortestPaths {
    pub source: usize,
    dist: Vec<f64>,
    pred: Vec<Option<usize>>,
}

impl ShortestPaths {
    pub fn distance(&self, target: usize) -> Option<f64> {
        self.dist.get(target).copied().filter(|d| d.is_finite())
    }

    pub fn predecessor(&self, target: usize) -> Option<usize> {
        self.pred.get(target).copied().flatten()
    }

    /// Node sequence `source ..= target`, or `None` when unreachable.
    pub fn path_to(&self, target: usize) -> Option<Vec<usize>> {
        self.distance(target)?;
        let mut path = vec![target];
        let mut cur = target;
        while let Some(p) = self.pred[cur] {
            path.push(p);
            cur = p;
        }
        path.reverse();
        Some(path)
    }
}

pub fn dijkstra(g: &SurfaceGraph, source: usize) -> ShortestPaths {
    let n = g.node_count();
    let mut dist = vec![f64::INFINITY; n];
    let mut pred: Vec<Option<usize>> = vec![None; n];
    let mut settled = vec![false; n];
    let mut heap = BinaryHeap::new();
    if source < n {
        dist[source] = 0.0;
        heap.push(HeapItem { dist: 0.0, node: source });
    }
    while let Some(HeapItem { dist: d, node: u }) = heap.pop() {
        if settled[u] || d > dist[u] {
            continue;
        }
        settled[u] = true;
        for &(v, e) in g.neighbors(u) {
            if settled[v] {
                continue;
            }
            let nd = d + g.edges()[e].weight;
            if nd < dist[v] {
                dist[v] = nd;
                pred[v] = Some(u);
                heap.push(HeapItem { dist: nd, node: v });
            } else if nd == dist[v] && pred[v].is_some_and(|p| u < p) {
                pred[v] = Some(u);
            }
        }
    }
    ShortestPaths { source, dist, pred }
}

/// A minimum-weight walk and its cost.
#[derive(Clone, Debug, PartialEq)]
pub struct Path {
    pub nodes: Vec<usize>,
    pub cost: f64,
}

pub fn shortest_path(g: &SurfaceGraph, src: usize, dst: usize) -> Result<Path, PathError> {
    for id in [src, dst] {
        if id >= g.node_count() {
            return Err(PathError::UnknownNode(id));
        }
    }
    let tree = dijkstra(g, src);
    match (tree.path_to(dst), tree.distance(dst)) {
        (Some(nodes), Some(cost)) => Ok(Path { nodes, cost }),
        _ => Err(PathError::NoPath { src, dst }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::path_graph;
    use crate::geom::Vec3;
    use crate::graph::NodeSource;

    #[test]
    fn path_graph_end_to_end() {
        let g = path_graph(3);
        let p = shortest_path(&g, 0, 2).unwrap();
        assert_eq!(p.nodes, vec![0, 1, 2]);
        assert_eq!(p.cost, 2.0);
    }

    #[test]
    fn source_equals_destination() {
        let g = path_graph(3);
        let p = shortest_path(&g, 1, 1).unwrap();
        assert_eq!(p.nodes, vec![1]);
        assert_eq!(p.cost, 0.0);
    }

    #[test]
    fn disconnected_and_unknown() {
        let mut g = path_graph(2);
        g.add_node(Vec3::new(9.0, 0.0, 0.0), Vec3::Z, true, NodeSource::Sample);
        assert_eq!(shortest_path(&g, 0, 2), Err(PathError::NoPath { src: 0, dst: 2 }));
        assert_eq!(shortest_path(&g, 0, 7), Err(PathError::UnknownNode(7)));
    }

    #[test]
    fn equal_cost_prefers_smaller_predecessor() {
        // square 0-1-3 and 0-2-3, all unit weights
        let mut g = crate::graph::SurfaceGraph::new();
        for _ in 0..4 {
            g.add_node(Vec3::ZERO, Vec3::Z, true, NodeSource::Sample);
        }
        g.add_edge(0, 2, 1.0).unwrap();
        g.add_edge(2, 3, 1.0).unwrap();
        g.add_edge(0, 1, 1.0).unwrap();
        g.add_edge(1, 3, 1.0).unwrap();
        assert_eq!(shortest_path(&g, 0, 3).unwrap().nodes, vec![0, 1, 3]);
        assert_eq!(shortest_path(&g, 3, 0).unwrap().nodes, vec![3, 1, 0]);
    }
}
