//! Rooted trees over a tree-shaped graph, and their simplification.

pub mod los;
pub mod simplify;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::geom::Vec3;
use crate::graph::{NodeSource, SurfaceGraph};

pub use los::{surface_los, BlockerClearance, LineOfSight, LosError, SimplifyConfig, SurfaceLos};
pub use simplify::{audit_removals, can_simplify, simplify_tree, Removal, SimplifyOutcome};

/// Relative tolerance for centrality ties during root selection.
pub const ROOT_TIE_EPS: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeNode {
    /// Id in the graph the tree was built from.
    pub id: usize,
    /// Initial-graph id.
    pub origin: usize,
    pub parent: Option<usize>,
    /// Ascending.
    pub children: Vec<usize>,
    pub depth: usize,
    pub position: Vec3,
    pub normal: Vec3,
    pub on_navmesh: bool,
    pub terminal: bool,
    pub source: NodeSource,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RootedTree {
    pub root: usize,
    pub nodes: BTreeMap<usize, TreeNode>,
}

impl RootedTree {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.nodes.len().saturating_sub(1)
    }

    pub fn node(&self, id: usize) -> &TreeNode {
        &self.nodes[&id]
    }

    pub fn contains(&self, id: usize) -> bool {
        self.nodes.contains_key(&id)
    }

    /// A node without children. A lone root counts as a leaf.
    pub fn is_leaf(&self, id: usize) -> bool {
        self.nodes[&id].children.is_empty()
    }

    pub fn leaves(&self) -> Vec<usize> {
        self.nodes.values().filter(|n| n.children.is_empty()).map(|n| n.id).collect()
    }

    pub fn terminals(&self) -> Vec<usize> {
        self.nodes.values().filter(|n| n.terminal).map(|n| n.id).collect()
    }

    /// `(parent, child)` pairs in ascending child order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.nodes.values().filter_map(|n| n.parent.map(|p| (p, n.id))).collect()
    }

    pub fn max_depth(&self) -> usize {
        self.nodes.values().map(|n| n.depth).max().unwrap_or(0)
    }

    /// Node ids in depth-first pre-order, children ascending.
    pub fn preorder(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![self.root];
        while let Some(v) = stack.pop() {
            out.push(v);
            stack.extend(self.nodes[&v].children.iter().rev());
        }
        out
    }

    pub fn recompute_depths(&mut self) {
        let mut stack = vec![(self.root, 0)];
        while let Some((v, d)) = stack.pop() {
            let node = self.nodes.get_mut(&v).expect("child exists");
            node.depth = d;
            for &c in &node.children {
                stack.push((c, d + 1));
            }
        }
    }

    /// Checks the structural invariants, naming the first violation.
    pub fn validate(&self) -> Result<(), String> {
        let root = self.nodes.get(&self.root).ok_or("root is not a node")?;
        if root.parent.is_some() || root.depth != 0 {
            return Err("root has a parent or non-zero depth".into());
        }
        for n in self.nodes.values() {
            if n.id != self.root {
                let p = n.parent.ok_or_else(|| format!("node {} has no parent", n.id))?;
                let pn = self.nodes.get(&p).ok_or_else(|| format!("parent {p} of {} missing", n.id))?;
                if !pn.children.contains(&n.id) {
                    return Err(format!("node {} not listed under its parent {p}", n.id));
                }
                if n.depth != pn.depth + 1 {
                    return Err(format!("node {} depth {} under depth {}", n.id, n.depth, pn.depth));
                }
            }
            if !n.children.windows(2).all(|w| w[0] < w[1]) {
                return Err(format!("children of {} are not strictly ascending", n.id));
            }
        }
        if self.preorder().len() != self.nodes.len() {
            return Err("tree is not connected from its root".into());
        }
        Ok(())
    }
}

/// Index of the best root among `candidates`: highest score, then nearest
/// `centroid`, then lowest id. Scores and distances within a relative
/// `ROOT_TIE_EPS` count as ties.
pub fn select_root(g: &SurfaceGraph, scores: &[f64], centroid: Vec3, candidates: &[usize]) -> Option<usize> {
    let tol = |x: f64| ROOT_TIE_EPS * x.abs().max(1.0);
    let best = candidates.iter().map(|&v| scores[v]).fold(f64::NEG_INFINITY, f64::max);
    let top: Vec<usize> = candidates.iter().copied().filter(|&v| scores[v] >= best - tol(best)).collect();
    let dist = |v: usize| g.nodes()[v].position.distance(centroid);
    let nearest = top.iter().map(|&v| dist(v)).fold(f64::INFINITY, f64::min);
    top.into_iter().filter(|&v| dist(v) <= nearest + tol(nearest)).min()
}

/// Splits `g` into rooted trees: repeatedly root the best unvisited node
/// and claim its component by depth-first search.
pub fn find_rooted_trees(g: &SurfaceGraph, scores: &[f64], centroid: Vec3, terminals: &[usize]) -> Vec<RootedTree> {
    assert_eq!(scores.len(), g.node_count(), "one score per node");
    let n = g.node_count();
    let mut is_terminal = vec![false; n];
    for &t in terminals {
        is_terminal[t] = true;
    }
    let mut visited = vec![false; n];
    let mut forest = Vec::new();
    loop {
        let unvisited: Vec<usize> = (0..n).filter(|&v| !visited[v]).collect();
        let Some(root) = select_root(g, scores, centroid, &unvisited) else {
            break;
        };
        let mut nodes = BTreeMap::new();
        let make = |v: usize, parent: Option<usize>, depth: usize| {
            let gn = &g.nodes()[v];
            TreeNode {
                id: v,
                origin: gn.origin,
                parent,
                children: Vec::new(),
                depth,
                position: gn.position,
                normal: gn.normal,
                on_navmesh: gn.on_navmesh,
                terminal: is_terminal[v],
                source: gn.source,
            }
        };
        visited[root] = true;
        nodes.insert(root, make(root, None, 0));
        // (node, next neighbour slot)
        let mut stack = vec![(root, 0usize)];
        while let Some(&mut (v, ref mut slot)) = stack.last_mut() {
            let nbrs = g.neighbors(v);
            if *slot >= nbrs.len() {
                stack.pop();
                continue;
            }
            let w = nbrs[*slot].0;
            *slot += 1;
            if visited[w] {
                continue;
            }
            visited[w] = true;
            let depth = nodes[&v].depth + 1;
            nodes.insert(w, make(w, Some(v), depth));
            nodes.get_mut(&v).unwrap().children.push(w);
            stack.push((w, 0));
        }
        for node in nodes.values_mut() {
            node.children.sort_unstable();
        }
        forest.push(RootedTree { root, nodes });
    }
    forest
}
