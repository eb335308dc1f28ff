//! Map-analysis post-processing and per-stage run reports.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::algo::centrality::CentralityScores;
use crate::geom::Vec3;
use crate::graph::SurfaceGraph;
use crate::tree::RootedTree;

/// Graph rebuilt from a forest. Node `i` came from `sources[i]`
/// (tree index, tree node id).
#[derive(Clone, Debug)]
pub struct ForestGraph {
    pub graph: SurfaceGraph,
    pub sources: Vec<(usize, usize)>,
    /// Graph ids of terminal nodes, ascending.
    pub terminals: Vec<usize>,
}

/// Undirected graph of the parent–child links, Euclidean weights. Node
/// payloads, including `origin`, are carried over.
pub fn forest_to_graph(forest: &[RootedTree]) -> ForestGraph {
    let mut graph = SurfaceGraph::new();
    let mut sources = Vec::new();
    let mut terminals = Vec::new();
    for (ti, tree) in forest.iter().enumerate() {
        let mut local = std::collections::BTreeMap::new();
        for (&id, node) in &tree.nodes {
            let g = graph.add_node(node.position, node.normal, node.on_navmesh, node.source);
            graph.node_mut(g).origin = node.origin;
            local.insert(id, g);
            sources.push((ti, id));
            if node.terminal {
                terminals.push(g);
            }
        }
        for (p, c) in tree.edges() {
            graph.add_euclidean_edge(local[&p], local[&c]).expect("tree edges are unique");
        }
    }
    ForestGraph { graph, sources, terminals }
}

/// Density bucket per node plus the thresholds that separate buckets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityClasses {
    pub buckets: usize,
    /// `0` is the lowest class.
    pub class_of: Vec<usize>,
    /// Ascending; a value belongs to the class equal to the number of
    /// thresholds it strictly exceeds.
    pub thresholds: Vec<f64>,
}

impl DensityClasses {
    pub fn label(&self, class: usize) -> String {
        class_label(class, self.buckets)
    }

    pub fn sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0; self.buckets];
        for &c in &self.class_of {
            sizes[c] += 1;
        }
        sizes
    }
}

pub fn class_label(class: usize, buckets: usize) -> String {
    match (buckets, class) {
        (3, 0) => "low".into(),
        (3, 1) => "medium".into(),
        (3, 2) => "high".into(),
        _ => format!("class-{class}"),
    }
}

/// Quantile buckets. With `n` values sorted by (value, id), cut `k` sits at
/// rank `floor(k n / buckets)`; equal values never straddle a cut, they all
/// take the lower class.
pub fn density_classes(values: &[f64], buckets: usize) -> DensityClasses {
    let buckets = buckets.max(1);
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));
    let mut thresholds = Vec::new();
    for k in 1..buckets {
        let cut = k * n / buckets;
        if cut > 0 {
            thresholds.push(values[order[cut - 1]]);
        }
    }
    let class_of = values.iter().map(|&v| thresholds.iter().filter(|&&t| v > t).count()).collect();
    DensityClasses { buckets, class_of, thresholds }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    BuildInitialGraph,
    IdentifyTerminals,
    SteinerTree,
    RootedTrees,
    Simplify,
    PostProcess,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::BuildInitialGraph => "build_initial_graph",
            Stage::IdentifyTerminals => "identify_terminals",
            Stage::SteinerTree => "steiner_tree",
            Stage::RootedTrees => "rooted_trees",
            Stage::Simplify => "simplify",
            Stage::PostProcess => "post_process",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageRow {
    pub stage: Stage,
    pub millis: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub nodes: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub edges: Option<usize>,
}

/// Raw instrumentation collected while the pipeline runs.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub experiment: String,
    pub stages: Vec<StageRow>,
    pub terminals: usize,
    /// Nodes added to the graph by terminal registration.
    pub added_terminal_nodes: usize,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub nodes: usize,
    pub edges: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub experiment: String,
    pub rows: Vec<StageRow>,
    pub terminals: usize,
    pub initial: Counts,
    pub steiner: Counts,
    pub simplified: Counts,
    pub added_terminal_nodes: usize,
    pub total_ms: u64,
}

impl StageReport {
    pub fn millis(&self, stage: Stage) -> Option<u64> {
        self.rows.iter().find(|r| r.stage == stage).map(|r| r.millis)
    }

    /// simplified <= Steiner <= initial + added terminal nodes, for nodes
    /// and edges.
    pub fn counts_monotone(&self) -> bool {
        let (i, st, si) = (self.initial, self.steiner, self.simplified);
        si.nodes <= st.nodes
            && st.nodes <= i.nodes + self.added_terminal_nodes
            && si.edges <= st.edges
            && st.edges <= i.edges + self.added_terminal_nodes
    }
}

fn counts_of(record: &RunRecord, stage: Stage) -> Counts {
    record
        .stages
        .iter()
        .find(|r| r.stage == stage)
        .map(|r| Counts { nodes: r.nodes.unwrap_or(0), edges: r.edges.unwrap_or(0) })
        .unwrap_or_default()
}

pub fn stage_metrics(record: &RunRecord) -> StageReport {
    StageReport {
        experiment: record.experiment.clone(),
        rows: record.stages.clone(),
        terminals: record.terminals,
        initial: counts_of(record, Stage::BuildInitialGraph),
        steiner: counts_of(record, Stage::SteinerTree),
        simplified: counts_of(record, Stage::Simplify),
        added_terminal_nodes: record.added_terminal_nodes,
        total_ms: record.stages.iter().map(|r| r.millis).sum(),
    }
}

/// Plain-text table: step 1 (t, #N, #E), step 2 (t, #terminals), step 3
/// (t, #N, #E), step 4 (t), step 5 (t, #N, #E), optional post-process (t),
/// total.
pub fn render_table(report: &StageReport) -> String {
    let t = |s| report.millis(s).map_or("-".to_string(), |m| m.to_string());
    let post = report.millis(Stage::PostProcess).is_some();
    let mut header = vec![
        "experiment",
        "s1_t",
        "s1_N",
        "s1_E",
        "s2_t",
        "s2_N",
        "s3_t",
        "s3_N",
        "s3_E",
        "s4_t",
        "s5_t",
        "s5_N",
        "s5_E",
    ];
    if post {
        header.push("post_t");
    }
    header.push("total_t");
    let mut row = vec![
        report.experiment.clone(),
        t(Stage::BuildInitialGraph),
        report.initial.nodes.to_string(),
        report.initial.edges.to_string(),
        t(Stage::IdentifyTerminals),
        report.terminals.to_string(),
        t(Stage::SteinerTree),
        report.steiner.nodes.to_string(),
        report.steiner.edges.to_string(),
        t(Stage::RootedTrees),
        t(Stage::Simplify),
        report.simplified.nodes.to_string(),
        report.simplified.edges.to_string(),
    ];
    if post {
        row.push(t(Stage::PostProcess));
    }
    row.push(report.total_ms.to_string());
    let widths: Vec<usize> = header.iter().zip(&row).map(|(h, r)| h.len().max(r.len())).collect();
    let mut out = String::new();
    for (i, h) in header.iter().enumerate() {
        let sep = if i == 0 { "" } else { "  " };
        if i == 0 {
            let _ = write!(out, "{sep}{h:<w$}", w = widths[i]);
        } else {
            let _ = write!(out, "{sep}{h:>w$}", w = widths[i]);
        }
    }
    out.push('\n');
    for (i, r) in row.iter().enumerate() {
        let sep = if i == 0 { "" } else { "  " };
        if i == 0 {
            let _ = write!(out, "{sep}{r:<w$}", w = widths[i]);
        } else {
            let _ = write!(out, "{sep}{r:>w$}", w = widths[i]);
        }
    }
    out.push('\n');
    out
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NodeMetric {
    /// Initial-graph id.
    pub id: usize,
    pub position: Vec3,
    pub betweenness: f64,
    pub class: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityReport {
    pub buckets: usize,
    pub thresholds: Vec<f64>,
    pub nodes: Vec<NodeMetric>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub stages: StageReport,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub density: Option<DensityReport>,
}

/// Per-node density rows for a forest graph and its betweenness scores.
pub fn density_report(fg: &ForestGraph, scores: &CentralityScores, buckets: usize) -> DensityReport {
    let classes = density_classes(&scores.values, buckets);
    let nodes = fg
        .graph
        .nodes()
        .iter()
        .map(|n| NodeMetric {
            id: n.origin,
            position: n.position,
            betweenness: scores.values[n.id],
            class: classes.label(classes.class_of[n.id]),
        })
        .collect();
    DensityReport { buckets: classes.buckets, thresholds: classes.thresholds, nodes }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algo::centrality::{betweenness_centrality, EdgeWeights};
    use crate::fixtures::{path_graph, random_tree, rng};
    use crate::tree::find_rooted_trees;

    #[test]
    fn chain_tree_gives_path_graph() {
        let g = path_graph(3);
        let forest = find_rooted_trees(&g, &[0.0, 1.0, 0.0], g.centroid(), &[0, 2]);
        let fg = forest_to_graph(&forest);
        assert_eq!((fg.graph.node_count(), fg.graph.edge_count()), (3, 2));
        assert_eq!(fg.terminals, vec![0, 2]);
        let empty = forest_to_graph(&[]);
        assert_eq!(empty.graph.node_count(), 0);
    }

    #[test]
    fn forest_edge_count_identity() {
        let mut r = rng(9);
        let mut whole = SurfaceGraph::new();
        // three random trees side by side
        let mut sizes = Vec::new();
        for k in 0..3 {
            let t = random_tree(&mut r, 5 + 3 * k);
            let off = whole.node_count();
            for n in t.nodes() {
                whole.add_node(n.position, n.normal, true, n.source);
            }
            for e in t.edges() {
                whole.add_edge(e.a + off, e.b + off, e.weight).unwrap();
            }
            sizes.push(t.node_count());
        }
        let scores = betweenness_centrality(&whole, EdgeWeights::Euclidean).values;
        let forest = find_rooted_trees(&whole, &scores, whole.centroid(), &[]);
        let fg = forest_to_graph(&forest);
        let expect: usize = forest.iter().map(|t| t.len() - 1).sum();
        assert_eq!(fg.graph.edge_count(), expect);
        assert_eq!(expect, sizes.iter().map(|s| s - 1).sum::<usize>());
    }

    #[test]
    fn density_small_cases() {
        let all_equal = density_classes(&[2.0; 6], 3);
        assert!(all_equal.class_of.iter().all(|&c| c == 0));
        assert_eq!(all_equal.label(0), "low");
        let three = density_classes(&[0.0, 1.0, 2.0], 3);
        assert_eq!(three.class_of, vec![0, 1, 2]);
        assert_eq!(three.thresholds, vec![0.0, 1.0]);
    }

    #[test]
    fn density_is_scale_free() {
        let v = [3.0, 0.5, 9.0, 1.0, 4.0, 4.5, 7.0];
        let scaled: Vec<f64> = v.iter().map(|x| x * 12.5).collect();
        assert_eq!(density_classes(&v, 3).class_of, density_classes(&scaled, 3).class_of);
    }

    #[test]
    fn stage_totals_add_up() {
        let record = RunRecord {
            experiment: "x".into(),
            stages: vec![
                StageRow { stage: Stage::BuildInitialGraph, millis: 3, nodes: Some(12), edges: Some(11) },
                StageRow { stage: Stage::IdentifyTerminals, millis: 1, nodes: None, edges: None },
                StageRow { stage: Stage::SteinerTree, millis: 2, nodes: Some(14), edges: Some(13) },
                StageRow { stage: Stage::RootedTrees, millis: 0, nodes: None, edges: None },
                StageRow { stage: Stage::Simplify, millis: 5, nodes: Some(3), edges: Some(2) },
            ],
            terminals: 2,
            added_terminal_nodes: 2,
        };
        let rep = stage_metrics(&record);
        assert_eq!(rep.total_ms, 11);
        assert!(rep.counts_monotone());
        let table = render_table(&rep);
        assert_eq!(table.lines().count(), 2);
        assert!(!table.contains("post_t"));
    }
}
