//! End-to-end extraction: initial graph, terminals, Steiner tree, rooted
//! trees, simplification, and the optional map-analysis post-process.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use log::{info, warn};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algo::centrality::{betweenness_centrality, compute_centrality, CentralityError, CentralityOptions, Metric};
use crate::analysis::{
    class_label, density_report, forest_to_graph, render_table, stage_metrics, AnalysisReport, RunRecord, Stage,
    StageRow,
};
use crate::export::{render, ExportFormat};
use crate::graph::{graph_from_navmesh, load_graph_json, GraphError, SurfaceGraph};
use crate::mesh::{load_blocker_mesh, load_walkable_surface, BlockerMesh, MeshError, SurfaceConfig, WalkableSurface};
use crate::steiner::{build_steiner_tree, SteinerError, SteinerTree};
use crate::terminals::{
    classify_samples, extract_segments, register_terminals, sample_boundary, terminals_from_metric, ClassifyConfig,
    EntryExitSegment, MetricSelection, SegmentConfig, SelectionMethod, TerminalError, TerminalSet,
};
use crate::tree::{
    find_rooted_trees, simplify_tree, BlockerClearance, LineOfSight, Removal, RootedTree, SimplifyConfig, SurfaceLos,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    Extract,
    Analyze,
}

#[derive(Clone, Debug, PartialEq)]
pub struct PipelineConfig {
    pub experiment: String,
    pub surface: Option<PathBuf>,
    pub blockers: Option<PathBuf>,
    pub graph: Option<PathBuf>,
    pub surface_config: SurfaceConfig,
    pub terminals: SelectionMethod,
    /// Metric and count for [`SelectionMethod::MetricTopK`].
    pub terminal_metric: Metric,
    pub k: Option<usize>,
    pub interval: f64,
    pub classify: ClassifyConfig,
    pub segments: SegmentConfig,
    pub root_metric: Metric,
    pub centrality: CentralityOptions,
    pub simplify: SimplifyConfig,
    pub mode: Mode,
    pub density_buckets: usize,
    /// Only used when generating fixtures.
    pub seed: u64,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            experiment: "run".into(),
            surface: None,
            blockers: None,
            graph: None,
            surface_config: SurfaceConfig::default(),
            terminals: SelectionMethod::EntryExit,
            terminal_metric: Metric::Betweenness,
            k: None,
            interval: 0.5,
            classify: ClassifyConfig::default(),
            segments: SegmentConfig::default(),
            root_metric: Metric::Betweenness,
            centrality: CentralityOptions::default(),
            simplify: SimplifyConfig::default(),
            mode: Mode::Extract,
            density_buckets: 3,
            seed: 0,
        }
    }
}

fn positive(name: &str, v: f64) -> Result<(), PipelineError> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(PipelineError::Config(format!("{name} must be positive, got {v}")))
    }
}

impl PipelineConfig {
    /// Checks parameter ranges. Input presence is checked against the
    /// inputs actually supplied, see [`Inputs::validate`].
    pub fn validate(&self) -> Result<(), PipelineError> {
        positive("interval", self.interval)?;
        positive("radius", self.classify.radius)?;
        let sharp = self.segments.sharpness_threshold;
        if !(sharp > 0.0 && sharp <= std::f64::consts::PI) {
            return Err(PipelineError::Config(format!(
                "sharpness threshold must be in (0, 180] degrees, got {}",
                sharp.to_degrees()
            )));
        }
        let off = self.segments.exit_offset;
        if !(off.is_finite() && off >= 0.0) {
            return Err(PipelineError::Config(format!("exit offset must be non-negative, got {off}")));
        }
        if let Some(w) = self.surface_config.weld_eps {
            if !(w.is_finite() && w >= 0.0) {
                return Err(PipelineError::Config(format!("weld eps must be non-negative, got {w}")));
            }
        }
        if self.terminals == SelectionMethod::MetricTopK && self.k.unwrap_or(0) == 0 {
            return Err(PipelineError::Config("metric terminals need --k >= 1".into()));
        }
        if self.density_buckets == 0 {
            return Err(PipelineError::Config("density buckets must be at least 1".into()));
        }
        if let Some(a) = self.centrality.katz_alpha {
            positive("katz alpha", a)?;
        }
        positive("centrality tolerance", self.centrality.tolerance)?;
        self.simplify.validate().map_err(PipelineError::Config)
    }

    pub fn load_inputs(&self) -> Result<Inputs, PipelineError> {
        match (&self.surface, &self.graph) {
            (Some(_), Some(_)) => {
                return Err(PipelineError::Config("give either a surface or a graph, not both".into()))
            }
            (None, None) => return Err(PipelineError::Config("a surface or a graph input is required".into())),
            _ => {}
        }
        let stage = Stage::BuildInitialGraph;
        let surface = match &self.surface {
            Some(p) => Some(
                load_walkable_surface(p, &self.surface_config).map_err(|e| PipelineError::Mesh { stage, source: e })?,
            ),
            None => None,
        };
        let graph = match &self.graph {
            Some(p) => Some(load_graph_json(p).map_err(|e| PipelineError::Graph { stage, source: e })?),
            None => None,
        };
        let blockers = match &self.blockers {
            Some(p) => Some(load_blocker_mesh(p).map_err(|e| PipelineError::Mesh { stage, source: e })?),
            None => None,
        };
        Ok(Inputs { surface, graph, blockers })
    }
}

/// Loaded geometry. Exactly one of `surface` and `graph` is set.
#[derive(Clone, Debug, Default)]
pub struct Inputs {
    pub surface: Option<WalkableSurface>,
    pub graph: Option<SurfaceGraph>,
    pub blockers: Option<BlockerMesh>,
}

impl Inputs {
    pub fn from_surface(surface: WalkableSurface, blockers: Option<BlockerMesh>) -> Inputs {
        Inputs { surface: Some(surface), graph: None, blockers }
    }

    pub fn from_graph(graph: SurfaceGraph, blockers: Option<BlockerMesh>) -> Inputs {
        Inputs { surface: None, graph: Some(graph), blockers }
    }

    pub fn validate(&self) -> Result<(), PipelineError> {
        match (&self.surface, &self.graph) {
            (Some(_), Some(_)) => Err(PipelineError::Config("give either a surface or a graph, not both".into())),
            (None, None) => Err(PipelineError::Config("a surface or a graph input is required".into())),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{}: {source}", stage.name())]
    Mesh { stage: Stage, source: MeshError },
    #[error("{}: {source}", stage.name())]
    Graph { stage: Stage, source: GraphError },
    #[error("{}: {source}", Stage::IdentifyTerminals.name())]
    Terminals { source: TerminalError },
    #[error("{}: {source}", Stage::SteinerTree.name())]
    Steiner { source: SteinerError },
    #[error("{}: {source}", stage.name())]
    Centrality { stage: Stage, source: CentralityError },
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
}

impl PipelineError {
    pub fn stage(&self) -> Option<Stage> {
        match self {
            PipelineError::Config(_) | PipelineError::Write { .. } => None,
            PipelineError::Mesh { stage, .. }
            | PipelineError::Graph { stage, .. }
            | PipelineError::Centrality { stage, .. } => Some(*stage),
            PipelineError::Terminals { .. } => Some(Stage::IdentifyTerminals),
            PipelineError::Steiner { .. } => Some(Stage::SteinerTree),
        }
    }

    /// 2 validation, 3 disconnected terminals, 4 I/O, 1 anything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            PipelineError::Config(_) => 2,
            PipelineError::Mesh { source, .. } => {
                if source.is_io() {
                    4
                } else {
                    2
                }
            }
            PipelineError::Graph { source: GraphError::Io { .. }, .. } => 4,
            PipelineError::Graph { .. } => 2,
            PipelineError::Terminals { source: TerminalError::Centrality(_) } => 1,
            PipelineError::Terminals { .. } => 2,
            PipelineError::Steiner { source: SteinerError::DisconnectedTerminals { .. } } => 3,
            PipelineError::Steiner { .. } => 2,
            PipelineError::Centrality { source: CentralityError::NoConvergence { .. }, .. } => 1,
            PipelineError::Centrality { .. } => 2,
            PipelineError::Write { .. } => 4,
        }
    }
}

/// Everything a run produced.
#[derive(Clone, Debug)]
pub struct Extraction {
    /// Initial graph with terminal nodes registered; ids match node `origin`s.
    pub graph: SurfaceGraph,
    pub terminals: TerminalSet,
    pub segments: Vec<EntryExitSegment>,
    pub steiner: SteinerTree,
    /// Root-metric scores over the Steiner tree's local ids.
    pub root_scores: Vec<f64>,
    pub rooted: Vec<RootedTree>,
    pub forest: Vec<RootedTree>,
    /// Per tree, in removal order.
    pub removals: Vec<Vec<Removal>>,
    /// Which line-of-sight test simplification used.
    pub los: LosKind,
    pub report: AnalysisReport,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum LosKind {
    Surface,
    Blockers,
    Skipped,
}

struct Clock {
    start: Instant,
    last_ms: u64,
    record: RunRecord,
}

impl Clock {
    fn new(experiment: &str) -> Clock {
        Clock {
            start: Instant::now(),
            last_ms: 0,
            record: RunRecord { experiment: experiment.to_string(), ..RunRecord::default() },
        }
    }

    /// Stage times are differences of the cumulative clock floored to whole
    /// milliseconds, so they sum to the floored total.
    fn lap(&mut self, stage: Stage, counts: Option<(usize, usize)>) {
        let now = self.start.elapsed().as_millis() as u64;
        let millis = now - self.last_ms;
        self.last_ms = now;
        info!("{} done in {millis} ms", stage.name());
        self.record.stages.push(StageRow { stage, millis, nodes: counts.map(|c| c.0), edges: counts.map(|c| c.1) });
    }
}

/// Loads the configured inputs and runs every stage.
pub fn run_extract(cfg: &PipelineConfig) -> Result<Extraction, PipelineError> {
    cfg.validate()?;
    let start = Instant::now();
    let inputs = cfg.load_inputs()?;
    run_with_inputs(cfg, &inputs, Some(start))
}

/// Runs every stage on already loaded inputs. `started` lets the caller
/// charge input loading to the first stage.
pub fn run_with_inputs(
    cfg: &PipelineConfig,
    inputs: &Inputs,
    started: Option<Instant>,
) -> Result<Extraction, PipelineError> {
    cfg.validate()?;
    inputs.validate()?;
    let mut clock = Clock::new(&cfg.experiment);
    if let Some(t) = started {
        clock.start = t;
    }

    let initial = match (&inputs.surface, &inputs.graph) {
        (Some(s), _) => {
            graph_from_navmesh(s).map_err(|e| PipelineError::Graph { stage: Stage::BuildInitialGraph, source: e })?
        }
        (None, Some(g)) => g.clone(),
        (None, None) => unreachable!("inputs validated"),
    };
    clock.lap(Stage::BuildInitialGraph, Some((initial.node_count(), initial.edge_count())));

    let terr = |e| PipelineError::Terminals { source: e };
    let (graph, terminals, segments) = match cfg.terminals {
        SelectionMethod::EntryExit => {
            let surface = inputs
                .surface
                .as_ref()
                .ok_or_else(|| PipelineError::Config("entry-exit terminals need a surface input".into()))?;
            let samples = sample_boundary(surface, cfg.interval).map_err(terr)?;
            let samples = classify_samples(&samples, inputs.blockers.as_ref(), &cfg.classify).map_err(terr)?;
            let segs = extract_segments(&samples, &cfg.segments);
            register_terminals(&initial, &segs, Some(surface), cfg.simplify.los_height_tolerance).map_err(terr)?
        }
        SelectionMethod::LeafNodes => {
            let set = terminals_from_metric(&initial, MetricSelection::Leaves, &cfg.centrality).map_err(terr)?;
            (initial.clone(), set, Vec::new())
        }
        SelectionMethod::MetricTopK => {
            let sel = MetricSelection::TopK { metric: cfg.terminal_metric, k: cfg.k.unwrap_or(1) };
            let set = terminals_from_metric(&initial, sel, &cfg.centrality).map_err(terr)?;
            (initial.clone(), set, Vec::new())
        }
    };
    clock.record.terminals = terminals.len();
    clock.record.added_terminal_nodes = graph.node_count() - initial.node_count();
    clock.lap(Stage::IdentifyTerminals, Some((terminals.len(), 0)));

    let steiner = build_steiner_tree(&graph, &terminals.nodes).map_err(|e| PipelineError::Steiner { source: e })?;
    clock.lap(Stage::SteinerTree, Some((steiner.node_count(), steiner.edge_count())));

    let root_scores = if steiner.edge_count() == 0 {
        vec![0.0; steiner.node_count()]
    } else {
        compute_centrality(&steiner.graph, cfg.root_metric, &cfg.centrality)
            .map_err(|e| PipelineError::Centrality { stage: Stage::RootedTrees, source: e })?
            .values
    };
    let rooted = find_rooted_trees(&steiner.graph, &root_scores, steiner.graph.centroid(), &steiner.terminals);
    clock.lap(Stage::RootedTrees, None);

    let surface_los;
    let blocker_los;
    let (los, kind): (Option<&dyn LineOfSight>, LosKind) = match (&inputs.surface, &inputs.blockers) {
        (Some(s), _) => {
            surface_los = SurfaceLos { surface: s, config: cfg.simplify };
            (Some(&surface_los), LosKind::Surface)
        }
        (None, Some(b)) if !b.is_empty() => {
            blocker_los = BlockerClearance { blockers: b };
            (Some(&blocker_los), LosKind::Blockers)
        }
        _ => {
            warn!("no surface or blocker geometry; simplification skipped");
            (None, LosKind::Skipped)
        }
    };
    let mut forest = Vec::with_capacity(rooted.len());
    let mut removals = Vec::with_capacity(rooted.len());
    for tree in &rooted {
        match los {
            Some(los) => {
                let out = simplify_tree(tree, los, &cfg.simplify);
                forest.push(out.tree);
                removals.push(out.removals);
            }
            None => {
                forest.push(tree.clone());
                removals.push(Vec::new());
            }
        }
    }
    let kept: usize = forest.iter().map(RootedTree::len).sum();
    let kept_edges: usize = forest.iter().map(RootedTree::edge_count).sum();
    clock.lap(Stage::Simplify, Some((kept, kept_edges)));

    let density = if cfg.mode == Mode::Analyze {
        let fg = forest_to_graph(&forest);
        let scores = betweenness_centrality(&fg.graph, cfg.centrality.weights);
        let rep = density_report(&fg, &scores, cfg.density_buckets);
        clock.lap(Stage::PostProcess, None);
        Some(rep)
    } else {
        None
    };

    let report = AnalysisReport { stages: stage_metrics(&clock.record), density };
    Ok(Extraction { graph, terminals, segments, steiner, root_scores, rooted, forest, removals, los: kind, report })
}

/// Writes the requested structure files plus `report.json` and
/// `report.txt` under `dir`, returning the paths written.
pub fn write_outputs(out: &Extraction, dir: &Path, formats: &[ExportFormat]) -> Result<Vec<PathBuf>, PipelineError> {
    let write = |name: &str, text: String| {
        let path = dir.join(name);
        std::fs::write(&path, text).map(|_| path.clone()).map_err(|e| PipelineError::Write { path, source: e })
    };
    std::fs::create_dir_all(dir).map_err(|e| PipelineError::Write { path: dir.to_path_buf(), source: e })?;
    let mut formats = formats.to_vec();
    formats.sort_unstable();
    formats.dedup();
    let mut written = Vec::new();
    for f in formats {
        written.push(write(f.file_name(), render(&out.forest, f))?);
    }
    let mut json = serde_json::to_string_pretty(&out.report).expect("report serialises");
    json.push('\n');
    written.push(write("report.json", json)?);
    written.push(write("report.txt", report_text(out))?);
    Ok(written)
}

/// The stage table followed by a short summary.
pub fn report_text(out: &Extraction) -> String {
    let mut text = render_table(&out.report.stages);
    let _ = writeln!(text, "trees: {}", out.forest.len());
    let _ = writeln!(
        text,
        "line of sight: {}",
        match out.los {
            LosKind::Surface => "surface walk",
            LosKind::Blockers => "blocker clearance",
            LosKind::Skipped => "skipped",
        }
    );
    if let Some(d) = &out.report.density {
        let thresholds: Vec<String> = d.thresholds.iter().map(|t| format!("{t}")).collect();
        let _ = writeln!(text, "density thresholds: [{}]", thresholds.join(", "));
        for c in 0..d.buckets {
            let label = class_label(c, d.buckets);
            let n = d.nodes.iter().filter(|m| m.class == label).count();
            let _ = writeln!(text, "  {label}: {n}");
        }
    }
    text
}
