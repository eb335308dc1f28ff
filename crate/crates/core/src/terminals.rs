//! Terminal selection: entry/exit detection on the surface boundary, or
//! graph-metric selection (leaves, top-k by centrality).
//!
//! Boundary samples walk each loop in its stored direction (interior on the
//! left), so `forward x normal` points out of the walkable surface.

use std::fmt;
use std::str::FromStr;

use log::warn;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algo::centrality::{compute_centrality, CentralityError, CentralityOptions, Metric};
use crate::geom::Vec3;
use crate::graph::{NodeSource, SurfaceGraph};
use crate::mesh::{BlockerMesh, WalkableSurface};

#[derive(Debug, Error, PartialEq)]
pub enum TerminalError {
    #[error("no terminal nodes were found")]
    EmptyTerminalSet,
    #[error("invalid {name}: {value}")]
    InvalidParameter { name: &'static str, value: f64 },
    #[error(transparent)]
    Centrality(#[from] CentralityError),
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Classification {
    pub potential_start: bool,
    pub potential_end: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundarySample {
    pub position: Vec3,
    pub loop_id: usize,
    /// Distance along the loop from its first vertex.
    pub arc_param: f64,
    pub forward_dir: Vec3,
    pub backward_dir: Vec3,
    /// Normal of the polygon owning the boundary edge under the sample.
    pub normal: Vec3,
    pub classification: Classification,
}

impl BoundarySample {
    /// Horizontal-in-surface direction pointing away from the walkable side.
    pub fn outward(&self) -> Vec3 {
        self.forward_dir.cross(self.normal).normalized().unwrap_or(Vec3::ZERO)
    }
}

/// Samples every boundary loop at `interval` spacing from its first vertex.
pub fn sample_boundary(surface: &WalkableSurface, interval: f64) -> Result<Vec<BoundarySample>, TerminalError> {
    if !(interval.is_finite() && interval > 0.0) {
        return Err(TerminalError::InvalidParameter { name: "interval", value: interval });
    }
    let verts = surface.vertices();
    let normals = surface.polygon_normals();
    let mut out = Vec::new();
    for (loop_id, lp) in surface.loops().iter().enumerate() {
        let edges: Vec<_> = lp.edges.iter().map(|&e| surface.boundary_edges()[e]).collect();
        let dirs: Vec<Vec3> =
            edges.iter().map(|e| (verts[e.to] - verts[e.from]).normalized().unwrap_or(Vec3::ZERO)).collect();
        let mut cum = Vec::with_capacity(edges.len() + 1);
        cum.push(0.0);
        for e in &edges {
            let last = *cum.last().unwrap();
            cum.push(last + verts[e.from].distance(verts[e.to]));
        }
        let length = cum[edges.len()];
        let count = ((length / interval + 1e-9).floor() as usize).max(1);
        let mut ei = 0;
        for k in 0..count {
            let s = k as f64 * interval;
            while ei + 1 < edges.len() && cum[ei + 1] <= s {
                ei += 1;
            }
            let e = edges[ei];
            let t = s - cum[ei];
            let at_vertex = t.abs() <= 1e-12 * length.max(1.0);
            let prev = (ei + edges.len() - 1) % edges.len();
            out.push(BoundarySample {
                position: verts[e.from] + dirs[ei] * t,
                loop_id,
                arc_param: s,
                forward_dir: dirs[ei],
                backward_dir: if at_vertex { -dirs[prev] } else { -dirs[ei] },
                normal: normals[e.polygon],
                classification: Classification::default(),
            });
        }
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    pub radius: f64,
    pub ray_count: usize,
    /// Half-width of the ray fan around the tangent, radians.
    pub fan_half_angle: f64,
    /// Rays start this far above the surface along its normal, so walls that
    /// end exactly at floor level still register.
    pub ray_lift: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        ClassifyConfig { radius: 1.0, ray_count: 5, fan_half_angle: 45f64.to_radians(), ray_lift: 0.1 }
    }
}

fn fan_is_clear(blockers: &BlockerMesh, origin: Vec3, dir: Vec3, normal: Vec3, cfg: &ClassifyConfig) -> bool {
    let n = cfg.ray_count.max(1);
    (0..n).all(|i| {
        let angle =
            if n == 1 { 0.0 } else { -cfg.fan_half_angle + 2.0 * cfg.fan_half_angle * i as f64 / (n - 1) as f64 };
        let ray = dir.rotated_about(normal, angle);
        blockers.raycast(origin, ray, cfg.radius).is_none()
    })
}

/// Flags each sample from the forward and backward ray fans. Without
/// blockers every ray misses and every sample gets both flags.
pub fn classify_samples(
    samples: &[BoundarySample],
    blockers: Option<&BlockerMesh>,
    cfg: &ClassifyConfig,
) -> Result<Vec<BoundarySample>, TerminalError> {
    if !(cfg.radius.is_finite() && cfg.radius > 0.0) {
        return Err(TerminalError::InvalidParameter { name: "radius", value: cfg.radius });
    }
    if cfg.ray_count == 0 {
        return Err(TerminalError::InvalidParameter { name: "ray count", value: 0.0 });
    }
    let blockers = match blockers {
        Some(b) if !b.is_empty() => Some(b),
        _ => {
            warn!("no blocker geometry; every boundary sample is classified as both start and end");
            None
        }
    };
    Ok(samples
        .iter()
        .map(|s| {
            let mut s = s.clone();
            s.classification = match blockers {
                None => Classification { potential_start: true, potential_end: true },
                Some(b) => {
                    let origin = s.position + s.normal * cfg.ray_lift;
                    Classification {
                        potential_start: fan_is_clear(b, origin, s.forward_dir, s.normal, cfg),
                        potential_end: fan_is_clear(b, origin, s.backward_dir, s.normal, cfg),
                    }
                }
            };
            s
        })
        .collect())
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryExitSegment {
    pub loop_id: usize,
    /// Indices into the sample list, in boundary order.
    pub samples: Vec<usize>,
    /// Registered entry/exit positions.
    pub matched_points: Vec<Vec3>,
    /// Filled in by [`register_terminals`].
    pub terminal_node_ids: Vec<usize>,
}

impl EntryExitSegment {
    pub fn start(&self) -> usize {
        self.samples[0]
    }

    pub fn end(&self) -> usize {
        *self.samples.last().unwrap()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SegmentConfig {
    /// Radians.
    pub sharpness_threshold: f64,
    /// Outward offset of registered positions, world units.
    pub exit_offset: f64,
}

impl Default for SegmentConfig {
    fn default() -> Self {
        SegmentConfig { sharpness_threshold: 45f64.to_radians(), exit_offset: 0.0 }
    }
}

/// Arc-length midpoint of the polyline through `pts`, with the tangent of
/// the piece it falls on.
fn polyline_midpoint(pts: &[Vec3]) -> (Vec3, Option<Vec3>) {
    let total: f64 = pts.windows(2).map(|w| w[0].distance(w[1])).sum();
    let mut rest = total / 2.0;
    for w in pts.windows(2) {
        let len = w[0].distance(w[1]);
        if rest <= len && len > 0.0 {
            let dir = (w[1] - w[0]) / len;
            return (w[0] + dir * rest, Some(dir));
        }
        rest -= len;
    }
    (pts[0], None)
}

/// Splits each loop's classified samples into entry/exit segments.
///
/// A segment opens at an unconsumed potential start and grows forward. It
/// stops after an end sample whose successor is not an end (that end sample
/// is kept), or before a successor whose tangent turns by more than the
/// threshold. Scanning starts right after such a break so that a segment is
/// not cut by the loop seam. Each segment registers its arc-length midpoint,
/// pushed outward by `exit_offset`.
pub fn extract_segments(samples: &[BoundarySample], cfg: &SegmentConfig) -> Vec<EntryExitSegment> {
    let mut out = Vec::new();
    let mut lo = 0;
    while lo < samples.len() {
        let loop_id = samples[lo].loop_id;
        let mut hi = lo;
        while hi < samples.len() && samples[hi].loop_id == loop_id {
            hi += 1;
        }
        extract_loop(samples, lo, hi, cfg, &mut out);
        lo = hi;
    }
    out
}

fn extract_loop(
    samples: &[BoundarySample],
    lo: usize,
    hi: usize,
    cfg: &SegmentConfig,
    out: &mut Vec<EntryExitSegment>,
) {
    let m = hi - lo;
    let s = |k: usize| &samples[lo + k % m];
    let end = |k: usize| s(k).classification.potential_end;
    let sharp = |a: usize, b: usize| s(a).forward_dir.angle_to(s(b).forward_dir) > cfg.sharpness_threshold;
    let origin = (0..m)
        .find(|&k| {
            let prev = (k + m - 1) % m;
            (end(prev) && !end(k)) || (m > 1 && sharp(prev, k))
        })
        .unwrap_or(0);
    let mut consumed = vec![false; m];
    for step in 0..m {
        let k = (origin + step) % m;
        if consumed[k] || !s(k).classification.potential_start {
            continue;
        }
        consumed[k] = true;
        let mut members = vec![k];
        let mut cur = k;
        loop {
            let next = (cur + 1) % m;
            if next == origin || consumed[next] {
                break;
            }
            if end(cur) && !end(next) {
                break;
            }
            if sharp(cur, next) {
                break;
            }
            consumed[next] = true;
            members.push(next);
            cur = next;
        }
        let pts: Vec<Vec3> = members.iter().map(|&i| s(i).position).collect();
        let (mid, tangent) = polyline_midpoint(&pts);
        let normal = s(members[members.len() / 2]).normal;
        let outward = match tangent {
            Some(t) => t.cross(normal).normalized().unwrap_or(Vec3::ZERO),
            None => s(members[0]).outward(),
        };
        out.push(EntryExitSegment {
            loop_id: s(k).loop_id,
            samples: members.iter().map(|&i| lo + i).collect(),
            matched_points: vec![mid + outward * cfg.exit_offset],
            terminal_node_ids: Vec::new(),
        });
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SelectionMethod {
    EntryExit,
    LeafNodes,
    MetricTopK,
}

impl fmt::Display for SelectionMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SelectionMethod::EntryExit => "entry-exit",
            SelectionMethod::LeafNodes => "leaves",
            SelectionMethod::MetricTopK => "metric",
        })
    }
}

impl FromStr for SelectionMethod {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "entry-exit" => Ok(SelectionMethod::EntryExit),
            "leaves" | "leaf-nodes" => Ok(SelectionMethod::LeafNodes),
            "metric" | "metric-top-k" => Ok(SelectionMethod::MetricTopK),
            _ => Err(format!("unknown terminal method '{s}' (expected entry-exit, leaves or metric)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TerminalSet {
    /// Ascending node ids.
    pub nodes: Vec<usize>,
    pub method: SelectionMethod,
    pub metric: Option<Metric>,
    pub k: Option<usize>,
}

impl TerminalSet {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn contains(&self, id: usize) -> bool {
        self.nodes.binary_search(&id).is_ok()
    }
}

/// Adds one entry/exit node per registered position, joined to the nearest
/// pre-existing node. Returns the new graph, the terminal set, and the
/// segments with their node ids filled in.
pub fn register_terminals(
    g: &SurfaceGraph,
    segments: &[EntryExitSegment],
    surface: Option<&WalkableSurface>,
    height_tolerance: f64,
) -> Result<(SurfaceGraph, TerminalSet, Vec<EntryExitSegment>), TerminalError> {
    let positions = segments.iter().map(|s| s.matched_points.len()).sum::<usize>();
    if positions == 0 || g.node_count() == 0 {
        return Err(TerminalError::EmptyTerminalSet);
    }
    let original = g.node_count();
    let mut out = g.clone();
    let mut segs = segments.to_vec();
    let mut nodes = Vec::new();
    for seg in &mut segs {
        seg.terminal_node_ids.clear();
        for &p in &seg.matched_points {
            let nearest = (0..original)
                .min_by(|&a, &b| {
                    let da = g.nodes()[a].position.distance(p);
                    let db = g.nodes()[b].position.distance(p);
                    da.total_cmp(&db).then(a.cmp(&b))
                })
                .expect("graph has nodes");
            let on_mesh = surface.is_some_and(|s| s.locate(p, height_tolerance).is_some());
            let normal = surface
                .and_then(|s| s.locate(p, height_tolerance).map(|poly| s.polygon_normals()[poly]))
                .unwrap_or(g.nodes()[nearest].normal);
            let id = out.add_node(p, normal, on_mesh, NodeSource::EntryExit);
            // a zero-length link is legal here; only polygon centres must differ
            out.add_edge(id, nearest, p.distance(g.nodes()[nearest].position)).expect("new node, fresh edge");
            seg.terminal_node_ids.push(id);
            nodes.push(id);
        }
    }
    Ok((out, TerminalSet { nodes, method: SelectionMethod::EntryExit, metric: None, k: None }, segs))
}

/// Graph-metric terminal rules.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MetricSelection {
    /// Every degree-1 node.
    Leaves,
    /// The `k` highest scores, ties to the lower id.
    TopK { metric: Metric, k: usize },
}

pub fn terminals_from_metric(
    g: &SurfaceGraph,
    selection: MetricSelection,
    opts: &CentralityOptions,
) -> Result<TerminalSet, TerminalError> {
    let set = match selection {
        MetricSelection::Leaves => TerminalSet {
            nodes: (0..g.node_count()).filter(|&v| g.degree(v) == 1).collect(),
            method: SelectionMethod::LeafNodes,
            metric: None,
            k: None,
        },
        MetricSelection::TopK { metric, k } => {
            if k == 0 {
                return Err(TerminalError::InvalidParameter { name: "k", value: 0.0 });
            }
            let scores = compute_centrality(g, metric, opts)?;
            let mut order: Vec<usize> = (0..g.node_count()).collect();
            order.sort_by(|&a, &b| scores.values[b].total_cmp(&scores.values[a]).then(a.cmp(&b)));
            order.truncate(k);
            order.sort_unstable();
            TerminalSet { nodes: order, method: SelectionMethod::MetricTopK, metric: Some(metric), k: Some(k) }
        }
    };
    if set.is_empty() {
        return Err(TerminalError::EmptyTerminalSet);
    }
    Ok(set)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algo::centrality::degree_centrality;
    use crate::fixtures::{self, path_graph, star_graph};
    use crate::graph::graph_from_navmesh;

    fn corridor_samples(interval: f64) -> (WalkableSurface, Vec<BoundarySample>) {
        let s = fixtures::surface(fixtures::corridor_raw());
        let b = fixtures::blockers(fixtures::corridor_blockers_raw());
        let samples = sample_boundary(&s, interval).unwrap();
        let classified = classify_samples(&samples, Some(&b), &ClassifyConfig::default()).unwrap();
        (s, classified)
    }

    #[test]
    fn square_sampling_counts() {
        let s = fixtures::surface(fixtures::grid_raw(1, 1, 1.0));
        assert_eq!(sample_boundary(&s, 1.0).unwrap().len(), 4);
        assert_eq!(sample_boundary(&s, 5.0).unwrap().len(), 1);
        assert_eq!(sample_boundary(&s, 0.3).unwrap().len(), 13);
        assert!(sample_boundary(&s, 0.0).is_err());
    }

    #[test]
    fn l_shape_samples_follow_arc_length() {
        let s = fixtures::surface(fixtures::l_corridor_raw());
        let loop_pts: Vec<Vec3> = s.loop_vertices(0).iter().map(|&v| s.vertices()[v]).collect();
        let perimeter: f64 =
            (0..loop_pts.len()).map(|i| loop_pts[i].distance(loop_pts[(i + 1) % loop_pts.len()])).sum();
        assert!((perimeter - 12.0).abs() < 1e-12);
        let samples = sample_boundary(&s, 0.5).unwrap();
        assert_eq!(samples.len(), 24);
        // independent walk: every sample lies on the loop at its arc parameter
        for smp in &samples {
            let mut rest = smp.arc_param;
            let mut expect = loop_pts[0];
            for i in 0..loop_pts.len() {
                let (a, b) = (loop_pts[i], loop_pts[(i + 1) % loop_pts.len()]);
                let len = a.distance(b);
                if rest < len {
                    expect = a + (b - a) * (rest / len);
                    break;
                }
                rest -= len;
            }
            assert!(smp.position.distance(expect) < 1e-9);
        }
    }

    #[test]
    fn corridor_open_ends_are_flagged_and_walls_are_not() {
        let (_, samples) = corridor_samples(0.5);
        for smp in &samples {
            let p = smp.position;
            let on_wall_run = p.y.abs() < 1e-9 || (p.y - 4.0).abs() < 1e-9;
            let interior_x = p.x > 0.5 && p.x < 11.5;
            if on_wall_run && interior_x {
                assert_eq!(smp.classification, Classification::default(), "wall sample {p:?}");
            }
        }
        let mid_end = samples.iter().find(|s| (s.position - Vec3::new(12.0, 2.0, 0.0)).norm() < 1e-9).unwrap();
        assert_eq!(mid_end.classification, Classification { potential_start: true, potential_end: true });
    }

    #[test]
    fn no_blockers_flags_everything() {
        let s = fixtures::surface(fixtures::corridor_raw());
        let samples = classify_samples(&sample_boundary(&s, 0.5).unwrap(), None, &ClassifyConfig::default()).unwrap();
        assert!(samples.iter().all(|s| s.classification.potential_start && s.classification.potential_end));
    }

    #[test]
    fn enclosed_sample_gets_no_flags() {
        let s = fixtures::surface(fixtures::grid_raw(1, 1, 1.0));
        let raw = fixtures::cell_walls(&[(0, 0)], 0.25);
        let b = fixtures::blockers(raw);
        let samples =
            classify_samples(&sample_boundary(&s, 0.5).unwrap(), Some(&b), &ClassifyConfig::default()).unwrap();
        assert!(samples.iter().all(|s| s.classification == Classification::default()));
    }

    #[test]
    fn larger_radius_never_adds_flags() {
        let s = fixtures::surface(fixtures::hub_raw());
        let b = fixtures::blockers(fixtures::hub_blockers_raw());
        let samples = sample_boundary(&s, 0.5).unwrap();
        let mut prev =
            classify_samples(&samples, Some(&b), &ClassifyConfig { radius: 0.2, ..Default::default() }).unwrap();
        for r in [0.5, 1.0, 2.0, 4.0] {
            let cur =
                classify_samples(&samples, Some(&b), &ClassifyConfig { radius: r, ..Default::default() }).unwrap();
            for (a, b) in prev.iter().zip(&cur) {
                assert!(a.classification.potential_start || !b.classification.potential_start);
                assert!(a.classification.potential_end || !b.classification.potential_end);
            }
            prev = cur;
        }
    }

    #[test]
    fn all_flagged_straight_loop_is_one_segment() {
        // a loop with no sharp turns: a 16-gon approximating a circle
        let mut b = fixtures::MeshBuilder::new();
        let ring: Vec<Vec3> = (0..16)
            .map(|i| {
                let a = i as f64 * std::f64::consts::TAU / 16.0;
                Vec3::new(a.cos() * 3.0, a.sin() * 3.0, 0.0)
            })
            .collect();
        b.face(&ring);
        let s = fixtures::surface(b.finish());
        let samples = classify_samples(&sample_boundary(&s, 0.5).unwrap(), None, &ClassifyConfig::default()).unwrap();
        let segs = extract_segments(&samples, &SegmentConfig::default());
        assert_eq!(segs.len(), 1);
        assert_eq!(segs[0].samples.len(), samples.len());
    }

    #[test]
    fn corner_splits_flagged_run() {
        // square of side 2 with no blockers: 4 corners each turn 90 degrees
        let s = fixtures::surface(fixtures::grid_raw(1, 1, 2.0));
        let samples = classify_samples(&sample_boundary(&s, 0.5).unwrap(), None, &ClassifyConfig::default()).unwrap();
        let segs = extract_segments(&samples, &SegmentConfig::default());
        assert_eq!(segs.len(), 4);
        assert!(segs.iter().all(|s| s.samples.len() == 4));
        let none = extract_segments(
            &samples
                .iter()
                .cloned()
                .map(|mut s| {
                    s.classification = Classification::default();
                    s
                })
                .collect::<Vec<_>>(),
            &SegmentConfig::default(),
        );
        assert!(none.is_empty());
    }

    #[test]
    fn corridor_yields_two_registered_terminals() {
        let (s, samples) = corridor_samples(0.5);
        let segs = extract_segments(&samples, &SegmentConfig::default());
        assert_eq!(segs.len(), 2);
        let g = graph_from_navmesh(&s).unwrap();
        let (g2, t, segs) = register_terminals(&g, &segs, Some(&s), 0.5).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(g2.node_count(), 14);
        assert_eq!(g2.edge_count(), 13);
        for &id in &t.nodes {
            assert_eq!(g2.degree(id), 1);
            assert_eq!(g2.nodes()[id].source, NodeSource::EntryExit);
            assert!(g2.nodes()[id].on_navmesh);
        }
        assert_eq!(segs[0].terminal_node_ids.len(), 1);
        // original part untouched
        assert_eq!(&g2.edges()[..11], g.edges());
    }

    #[test]
    fn exit_offset_moves_terminals_off_mesh() {
        let (s, samples) = corridor_samples(0.5);
        let cfg = SegmentConfig { exit_offset: 0.5, ..SegmentConfig::default() };
        let segs = extract_segments(&samples, &cfg);
        let g = graph_from_navmesh(&s).unwrap();
        let (g2, t, _) = register_terminals(&g, &segs, Some(&s), 0.5).unwrap();
        for &id in &t.nodes {
            let p = g2.nodes()[id].position;
            assert!(!g2.nodes()[id].on_navmesh);
            assert!(p.x < 0.0 || p.x > 12.0);
        }
    }

    #[test]
    fn hub_has_four_openings() {
        let s = fixtures::surface(fixtures::hub_raw());
        let b = fixtures::blockers(fixtures::hub_blockers_raw());
        let samples =
            classify_samples(&sample_boundary(&s, 0.5).unwrap(), Some(&b), &ClassifyConfig::default()).unwrap();
        let segs = extract_segments(&samples, &SegmentConfig::default());
        assert_eq!(segs.len(), 4);
        let g = graph_from_navmesh(&s).unwrap();
        let (_, t, _) = register_terminals(&g, &segs, Some(&s), 0.5).unwrap();
        assert_eq!(t.len(), 4);
    }

    #[test]
    fn empty_segments_are_an_error() {
        let g = path_graph(3);
        assert_eq!(register_terminals(&g, &[], None, 0.5).unwrap_err(), TerminalError::EmptyTerminalSet);
    }

    #[test]
    fn leaf_and_top_k_selection() {
        let opts = CentralityOptions::default();
        let t = terminals_from_metric(&path_graph(5), MetricSelection::Leaves, &opts).unwrap();
        assert_eq!(t.nodes, vec![0, 4]);
        let t = terminals_from_metric(&star_graph(3), MetricSelection::Leaves, &opts).unwrap();
        assert_eq!(t.nodes, vec![1, 2, 3]);
        let tree = fixtures::random_tree(&mut fixtures::rng(11), 15);
        let d = degree_centrality(&tree).values;
        let max = d.iter().cloned().fold(0.0, f64::max);
        let first = d.iter().position(|&v| v == max).unwrap();
        let t = terminals_from_metric(&tree, MetricSelection::TopK { metric: Metric::Degree, k: 1 }, &opts).unwrap();
        assert_eq!(t.nodes, vec![first]);
        let lone = fixtures::weighted_graph(2, &[]);
        assert_eq!(
            terminals_from_metric(&lone, MetricSelection::Leaves, &opts).unwrap_err(),
            TerminalError::EmptyTerminalSet
        );
    }

    #[test]
    fn method_names_parse() {
        for m in [SelectionMethod::EntryExit, SelectionMethod::LeafNodes, SelectionMethod::MetricTopK] {
            assert_eq!(m.to_string().parse::<SelectionMethod>().unwrap(), m);
        }
    }
}
