//! Kruskal's minimum spanning tree over a union–find.
//!
//! Edges are scanned by `(weight, min endpoint, max endpoint)`, so equal-weight
//! edges are taken in lexicographic endpoint order and the result is unique.

use crate::graph::{Edge, SurfaceGraph};

/// Disjoint-set forest with path halving and union by size.
#[derive(Clone, Debug)]
pub struct DisjointSet {
    parent: Vec<usize>,
    size: Vec<usize>,
}

impl DisjointSet {
    pub fn new(n: usize) -> Self {
        DisjointSet { parent: (0..n).collect(), size: vec![1; n] }
    }

    pub fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    /// Returns false when `a` and `b` were already joined.
    pub fn union(&mut self, a: usize, b: usize) -> bool {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return false;
        }
        if self.size[ra] < self.size[rb] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb] = ra;
        self.size[ra] += self.size[rb];
        true
    }
}

/// Indices of the accepted edges, in acceptance order.
pub fn kruskal(node_count: usize, edges: &[Edge]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..edges.len()).collect();
    order.sort_by(|&i, &j| {
        edges[i].weight.total_cmp(&edges[j].weight).then_with(|| edges[i].key().cmp(&edges[j].key()))
    });
    let mut dsu = DisjointSet::new(node_count);
    let mut picked = Vec::with_capacity(node_count.saturating_sub(1));
    for i in order {
        if dsu.union(edges[i].a, edges[i].b) {
            picked.push(i);
        }
    }
    picked
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpanningForest {
    /// Edge indices into the source graph, ascending.
    pub edges: Vec<usize>,
    pub total_weight: f64,
    pub components: usize,
}

impl SpanningForest {
    /// True when the input was disconnected and a forest came back.
    pub fn is_forest(&self) -> bool {
        self.components > 1
    }
}

pub fn minimum_spanning_tree(g: &SurfaceGraph) -> SpanningForest {
    let mut edges = kruskal(g.node_count(), g.edges());
    edges.sort_unstable();
    let total_weight = edges.iter().map(|&e| g.edges()[e].weight).sum();
    SpanningForest { components: g.node_count() - edges.len(), edges, total_weight }
}
