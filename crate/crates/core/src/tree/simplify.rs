//! Tree simplification: collapse an intermediate node `B` into its parent
//! `A` when every child `C` of `B` passes the acceptance predicate.

use serde::{Deserialize, Serialize};

use super::los::{LineOfSight, SimplifyConfig};
use super::{RootedTree, TreeNode};

/// Acceptance predicate for collapsing `b` (child of `a`) with respect to
/// its child `c`. `c_is_leaf` is the leaf status of `c` in the current tree.
///
/// All of: `b` is not a terminal; `c` is not an off-surface leaf; the
/// normals of `a` and `b` are within tolerance; `c` is visible from `a`.
pub fn can_simplify(
    a: &TreeNode,
    b: &TreeNode,
    c: &TreeNode,
    c_is_leaf: bool,
    los: &dyn LineOfSight,
    cfg: &SimplifyConfig,
) -> bool {
    if b.terminal {
        return false;
    }
    if c_is_leaf && !c.on_navmesh {
        return false;
    }
    if a.normal.angle_to(b.normal) > cfg.normal_angle_tolerance {
        return false;
    }
    los.visible(a.position, c.position)
}

/// One collapsed node and the links it had at the time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub removed: usize,
    pub parent: usize,
    pub children: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct SimplifyOutcome {
    pub tree: RootedTree,
    /// In removal order.
    pub removals: Vec<Removal>,
    /// Full passes over the tree, including the final one that removed nothing.
    pub passes: usize,
}

/// Collapses removable non-leaf children of `a`, restarting the scan after
/// each removal. Returns whether anything was removed.
fn collapse_children(
    tree: &mut RootedTree,
    a: usize,
    los: &dyn LineOfSight,
    cfg: &SimplifyConfig,
    log: &mut Vec<Removal>,
) -> bool {
    let mut any = false;
    loop {
        let candidate = tree.nodes[&a].children.iter().copied().find(|&b| {
            let bn = &tree.nodes[&b];
            !bn.children.is_empty()
                && bn
                    .children
                    .iter()
                    .all(|c| can_simplify(&tree.nodes[&a], bn, &tree.nodes[c], tree.is_leaf(*c), los, cfg))
        });
        let Some(b) = candidate else {
            return any;
        };
        let removed = tree.nodes.remove(&b).expect("candidate exists");
        for &c in &removed.children {
            tree.nodes.get_mut(&c).unwrap().parent = Some(a);
        }
        let an = tree.nodes.get_mut(&a).unwrap();
        an.children.retain(|&x| x != b);
        an.children.extend(&removed.children);
        an.children.sort_unstable();
        log.push(Removal { removed: b, parent: a, children: removed.children });
        any = true;
    }
}

/// Depth-first simplification, repeated until a pass removes nothing.
pub fn simplify_tree(tree: &RootedTree, los: &dyn LineOfSight, cfg: &SimplifyConfig) -> SimplifyOutcome {
    let mut tree = tree.clone();
    let mut removals = Vec::new();
    let mut passes = 0;
    loop {
        passes += 1;
        let mut changed = false;
        let mut stack = vec![tree.root];
        while let Some(a) = stack.pop() {
            changed |= collapse_children(&mut tree, a, los, cfg, &mut removals);
            stack.extend(tree.nodes[&a].children.iter().rev());
        }
        if !changed {
            break;
        }
    }
    tree.recompute_depths();
    SimplifyOutcome { tree, removals, passes }
}

/// Re-evaluates the predicate for every logged removal against the payloads
/// and leaf flags of `original`. Returns the first failing `(removed, child)`.
pub fn audit_removals(
    original: &RootedTree,
    removals: &[Removal],
    los: &dyn LineOfSight,
    cfg: &SimplifyConfig,
) -> Result<(), (usize, usize)> {
    for r in removals {
        let (a, b) = (original.node(r.parent), original.node(r.removed));
        for &c in &r.children {
            if !can_simplify(a, b, original.node(c), original.is_leaf(c), los, cfg) {
                return Err((r.removed, c));
            }
        }
    }
    Ok(())
}
