//! Walkable-surface ingestion.
//!
//! A [`WalkableSurface`] is an indexed soup of convex planar polygons with
//! polygon adjacency and boundary loops derived from shared vertex indices.
//! Polygons are oriented by their ring order: the normal is the right-hand
//! normal of the ring, so every ring is counter-clockwise seen from the
//! normal side. Boundary edges keep the direction they have in their owning
//! ring, which means the walkable interior always lies to the **left** of a
//! directed boundary edge (viewed from the normal side). Outer loops come out
//! counter-clockwise and hole loops clockwise.
//!
//! Two input formats are accepted: a Wavefront OBJ restricted to `v`/`f`
//! records and a JSON document `{"vertices": [[x,y,z],..], "polygons": [[i,..],..]}`
//! with 0-based indices.

use std::collections::HashMap;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::{newell_normal, ray_triangle, Aabb, Vec3};

/// Containment slack for point-in-polygon tests, in world units.
pub const CONTAIN_EPS: f64 = 1e-7;

/// `(polygon, from vertex, to vertex)` for one directed polygon edge.
type EdgeUse = (usize, usize, usize);

#[derive(Debug, Error)]
pub enum MeshError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("polygon {polygon}: {reason}")]
    InvalidPolygon { polygon: usize, reason: String },
    #[error("non-manifold edge ({a}, {b}) shared by {count} polygons")]
    NonManifoldEdge { a: usize, b: usize, count: usize },
    #[error("edge ({a}, {b}) has the same direction in polygons {first} and {second}")]
    InconsistentWinding { a: usize, b: usize, first: usize, second: usize },
    #[error("boundary does not close at vertex {vertex}")]
    OpenBoundary { vertex: usize },
    #[error("triangle {triangle}: {reason}")]
    InvalidTriangle { triangle: usize, reason: String },
    #[error("mesh has no polygons")]
    Empty,
}

impl MeshError {
    pub fn is_io(&self) -> bool {
        matches!(self, MeshError::Io { .. })
    }
}

/// Ingestion tolerances.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SurfaceConfig {
    /// Planarity and convexity slack in world units.
    pub plane_eps: f64,
    /// When set, vertices closer than this are merged before indexing.
    pub weld_eps: Option<f64>,
}

impl Default for SurfaceConfig {
    fn default() -> Self {
        SurfaceConfig { plane_eps: 1e-4, weld_eps: None }
    }
}

/// Unvalidated vertex/polygon lists as read from disk.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct RawMesh {
    pub vertices: Vec<Vec3>,
    pub polygons: Vec<Vec<usize>>,
}

impl RawMesh {
    /// Reads a mesh file; `.json` selects the JSON format, anything else OBJ.
    pub fn read(path: &Path) -> Result<RawMesh, MeshError> {
        let text = fs::read_to_string(path).map_err(|source| MeshError::Io { path: path.to_path_buf(), source })?;
        let is_json = path.extension().and_then(|e| e.to_str()).is_some_and(|e| e.eq_ignore_ascii_case("json"));
        if is_json {
            RawMesh::parse_json(&text)
        } else {
            RawMesh::parse_obj(&text)
        }
    }

    pub fn parse_json(text: &str) -> Result<RawMesh, MeshError> {
        serde_json::from_str(text).map_err(|e| MeshError::Parse { line: e.line(), message: e.to_string() })
    }

    pub fn parse_obj(text: &str) -> Result<RawMesh, MeshError> {
        let mut mesh = RawMesh::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line_no = lineno + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            let mut tokens = line.split_whitespace();
            let Some(tag) = tokens.next() else { continue };
            let err = |message: String| MeshError::Parse { line: line_no, message };
            match tag {
                "v" => {
                    let coords: Vec<f64> = tokens
                        .take(3)
                        .map(|t| t.parse::<f64>().map_err(|e| err(format!("bad coordinate {t:?}: {e}"))))
                        .collect::<Result<_, _>>()?;
                    if coords.len() != 3 {
                        return Err(err("vertex needs 3 coordinates".into()));
                    }
                    mesh.vertices.push(Vec3::new(coords[0], coords[1], coords[2]));
                }
                "f" => {
                    let count = mesh.vertices.len() as i64;
                    let mut ring = Vec::new();
                    for t in tokens {
                        let first = t.split('/').next().unwrap_or("");
                        let idx: i64 = first.parse().map_err(|e| err(format!("bad face index {t:?}: {e}")))?;
                        let resolved = match idx {
                            0 => return Err(err("face index 0 is invalid in OBJ".into())),
                            i if i > 0 => i - 1,
                            i => count + i,
                        };
                        if resolved < 0 {
                            return Err(err(format!("face index {idx} out of range")));
                        }
                        ring.push(resolved as usize);
                    }
                    if ring.len() < 3 {
                        return Err(err("face needs at least 3 vertices".into()));
                    }
                    mesh.polygons.push(ring);
                }
                _ => log::debug!("ignoring OBJ record {tag:?} on line {line_no}"),
            }
        }
        Ok(mesh)
    }

    /// Serialises as OBJ with 1-based face indices.
    pub fn to_obj(&self) -> String {
        let mut out = String::new();
        for v in &self.vertices {
            out.push_str(&format!("v {} {} {}\n", v.x, v.y, v.z));
        }
        for p in &self.polygons {
            out.push('f');
            for i in p {
                out.push_str(&format!(" {}", i + 1));
            }
            out.push('\n');
        }
        out
    }

    /// Merges vertices closer than `eps` onto the first vertex seen in their
    /// neighbourhood and drops the repeated ring entries this produces.
    pub fn weld(&mut self, eps: f64) {
        if eps <= 0.0 || self.vertices.is_empty() {
            return;
        }
        let cell = |p: Vec3| ((p.x / eps).floor() as i64, (p.y / eps).floor() as i64, (p.z / eps).floor() as i64);
        let mut grid: HashMap<(i64, i64, i64), Vec<usize>> = HashMap::new();
        let mut remap = vec![0usize; self.vertices.len()];
        for (i, &p) in self.vertices.iter().enumerate() {
            let (cx, cy, cz) = cell(p);
            let mut found = None;
            for dx in -1..=1 {
                for dy in -1..=1 {
                    for dz in -1..=1 {
                        if let Some(reps) = grid.get(&(cx + dx, cy + dy, cz + dz)) {
                            for &r in reps {
                                if self.vertices[r].distance(p) <= eps && found.is_none_or(|f: usize| r < f) {
                                    found = Some(r);
                                }
                            }
                        }
                    }
                }
            }
            remap[i] = match found {
                Some(r) => r,
                None => {
                    grid.entry((cx, cy, cz)).or_default().push(i);
                    i
                }
            };
        }
        for ring in &mut self.polygons {
            let mut out: Vec<usize> = Vec::with_capacity(ring.len());
            for &i in ring.iter() {
                let r = remap.get(i).copied().unwrap_or(i);
                if out.last() != Some(&r) {
                    out.push(r);
                }
            }
            while out.len() > 1 && out.first() == out.last() {
                out.pop();
            }
            *ring = out;
        }
    }
}

/// A polygon adjacent to another across one shared edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Adjacency {
    pub neighbor: usize,
    /// The shared edge as it is directed in the owning polygon's ring.
    pub edge: (usize, usize),
}

/// A directed edge that belongs to exactly one polygon.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryEdge {
    pub from: usize,
    pub to: usize,
    pub polygon: usize,
}

/// A closed chain of boundary edges (indices into the surface's boundary edges).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundaryLoop {
    pub edges: Vec<usize>,
}

#[derive(Clone, Debug)]
pub struct WalkableSurface {
    vertices: Vec<Vec3>,
    polygons: Vec<Vec<usize>>,
    normals: Vec<Vec3>,
    centers: Vec<Vec3>,
    bounds: Vec<Aabb>,
    adjacency: Vec<Vec<Adjacency>>,
    boundary_edges: Vec<BoundaryEdge>,
    loops: Vec<BoundaryLoop>,
    interior_edges: usize,
}

/// Loads, welds (optionally) and validates a walkable surface file.
pub fn load_walkable_surface(path: &Path, config: &SurfaceConfig) -> Result<WalkableSurface, MeshError> {
    let raw = RawMesh::read(path)?;
    WalkableSurface::from_raw(raw, config)
}

/// Ordered vertex loops of the surface boundary; interior lies to the left.
pub fn boundary_loops(surface: &WalkableSurface) -> Vec<Vec<usize>> {
    (0..surface.loops.len()).map(|i| surface.loop_vertices(i)).collect()
}

impl WalkableSurface {
    pub fn from_raw(mut raw: RawMesh, config: &SurfaceConfig) -> Result<WalkableSurface, MeshError> {
        if let Some(eps) = config.weld_eps {
            raw.weld(eps);
        }
        if raw.polygons.is_empty() {
            return Err(MeshError::Empty);
        }
        let RawMesh { vertices, polygons } = raw;
        let tol = config.plane_eps;

        let mut normals = Vec::with_capacity(polygons.len());
        let mut centers = Vec::with_capacity(polygons.len());
        let mut bounds = Vec::with_capacity(polygons.len());
        for (pi, ring) in polygons.iter().enumerate() {
            let bad = |reason: String| MeshError::InvalidPolygon { polygon: pi, reason };
            if ring.len() < 3 {
                return Err(bad(format!("ring has {} vertices, need at least 3", ring.len())));
            }
            for (k, &i) in ring.iter().enumerate() {
                if i >= vertices.len() {
                    return Err(bad(format!("vertex index {i} out of range")));
                }
                if ring[k + 1..].contains(&i) {
                    return Err(bad(format!("vertex {i} repeats in ring")));
                }
                if !vertices[i].is_finite() {
                    return Err(bad(format!("vertex {i} is not finite")));
                }
            }
            let pts: Vec<Vec3> = ring.iter().map(|&i| vertices[i]).collect();
            let normal = newell_normal(&pts).normalized().ok_or_else(|| bad("zero area".into()))?;
            let center = crate::geom::centroid(pts.iter().copied());
            for (k, p) in pts.iter().enumerate() {
                let off = normal.dot(*p - center).abs();
                if off > tol {
                    return Err(bad(format!("not planar: vertex {} is {off:.3e} from the polygon plane", ring[k])));
                }
            }
            let n = pts.len();
            for k in 0..n {
                let prev = pts[(k + n - 1) % n];
                let cur = pts[k];
                let next = pts[(k + 1) % n];
                let e1 = cur - prev;
                let e2 = next - cur;
                let turn = e1.cross(e2).dot(normal);
                if turn < -tol * e1.norm().max(1.0) * e2.norm().max(1.0) {
                    return Err(bad(format!("not convex at vertex {}", ring[k])));
                }
            }
            normals.push(normal);
            centers.push(center);
            bounds.push(Aabb::from_points(pts.iter().copied()));
        }

        // Undirected edge -> (polygon, directed edge) occurrences.
        let mut edge_map: HashMap<(usize, usize), Vec<EdgeUse>> = HashMap::new();
        for (pi, ring) in polygons.iter().enumerate() {
            for k in 0..ring.len() {
                let a = ring[k];
                let b = ring[(k + 1) % ring.len()];
                edge_map.entry((a.min(b), a.max(b))).or_default().push((pi, a, b));
            }
        }

        let mut adjacency = vec![Vec::new(); polygons.len()];
        let mut boundary_edges = Vec::new();
        let mut interior_edges = 0usize;
        for (pi, ring) in polygons.iter().enumerate() {
            for k in 0..ring.len() {
                let a = ring[k];
                let b = ring[(k + 1) % ring.len()];
                let uses = &edge_map[&(a.min(b), a.max(b))];
                match uses.len() {
                    1 => boundary_edges.push(BoundaryEdge { from: a, to: b, polygon: pi }),
                    2 => {
                        let &(other, oa, ob) = uses.iter().find(|u| u.0 != pi).unwrap_or(&uses[0]);
                        if (oa, ob) == (a, b) {
                            return Err(MeshError::InconsistentWinding {
                                a,
                                b,
                                first: pi.min(other),
                                second: pi.max(other),
                            });
                        }
                        adjacency[pi].push(Adjacency { neighbor: other, edge: (a, b) });
                        if pi < other {
                            interior_edges += 1;
                        }
                    }
                    count => {
                        return Err(MeshError::NonManifoldEdge { a: a.min(b), b: a.max(b), count });
                    }
                }
            }
        }

        let loops = trace_loops(&boundary_edges)?;
        Ok(WalkableSurface {
            vertices,
            polygons,
            normals,
            centers,
            bounds,
            adjacency,
            boundary_edges,
            loops,
            interior_edges,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn polygons(&self) -> &[Vec<usize>] {
        &self.polygons
    }

    pub fn polygon_count(&self) -> usize {
        self.polygons.len()
    }

    pub fn polygon_normals(&self) -> &[Vec3] {
        &self.normals
    }

    pub fn polygon_centers(&self) -> &[Vec3] {
        &self.centers
    }

    pub fn adjacency(&self, polygon: usize) -> &[Adjacency] {
        &self.adjacency[polygon]
    }

    pub fn boundary_edges(&self) -> &[BoundaryEdge] {
        &self.boundary_edges
    }

    pub fn loops(&self) -> &[BoundaryLoop] {
        &self.loops
    }

    pub fn interior_edge_count(&self) -> usize {
        self.interior_edges
    }

    /// Largest ring size; 3 means the input was fully triangulated.
    pub fn max_arity(&self) -> usize {
        self.polygons.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn is_triangulated(&self) -> bool {
        self.max_arity() == 3
    }

    /// Vertex indices of loop `i`, starting at the origin of its first edge.
    pub fn loop_vertices(&self, i: usize) -> Vec<usize> {
        self.loops[i].edges.iter().map(|&e| self.boundary_edges[e].from).collect()
    }

    pub fn polygon_points(&self, polygon: usize) -> impl Iterator<Item = Vec3> + '_ {
        self.polygons[polygon].iter().map(|&i| self.vertices[i])
    }

    /// Signed distance of `p` from the plane of `polygon`.
    pub fn plane_offset(&self, polygon: usize, p: Vec3) -> f64 {
        self.normals[polygon].dot(p - self.centers[polygon])
    }

    /// Whether the projection of `p` along the polygon normal falls inside
    /// the polygon (boundary included, with `CONTAIN_EPS` slack).
    pub fn projects_inside(&self, polygon: usize, p: Vec3) -> bool {
        let n = self.normals[polygon];
        let q = p - n * self.plane_offset(polygon, p);
        let ring = &self.polygons[polygon];
        (0..ring.len()).all(|k| {
            let a = self.vertices[ring[k]];
            let b = self.vertices[ring[(k + 1) % ring.len()]];
            let e = b - a;
            e.cross(q - a).dot(n) >= -CONTAIN_EPS * e.norm().max(1.0)
        })
    }

    /// The polygon `p` stands on: inside its projection and within
    /// `height_tol` of its plane. Closest plane wins, then lowest id.
    pub fn locate(&self, p: Vec3, height_tol: f64) -> Option<usize> {
        let mut best: Option<(f64, usize)> = None;
        for pi in 0..self.polygons.len() {
            if !self.bounds[pi].expanded(height_tol + CONTAIN_EPS).contains(p) {
                continue;
            }
            let off = self.plane_offset(pi, p).abs();
            if off > height_tol || !self.projects_inside(pi, p) {
                continue;
            }
            if best.is_none_or(|(d, _)| off < d) {
                best = Some((off, pi));
            }
        }
        best.map(|(_, pi)| pi)
    }

    /// Neighbour across the undirected edge `(a, b)` of `polygon`, if any.
    pub fn neighbor_across(&self, polygon: usize, a: usize, b: usize) -> Option<usize> {
        self.adjacency[polygon]
            .iter()
            .find(|adj| {
                let (x, y) = adj.edge;
                (x, y) == (a, b) || (x, y) == (b, a)
            })
            .map(|adj| adj.neighbor)
    }
}

fn trace_loops(edges: &[BoundaryEdge]) -> Result<Vec<BoundaryLoop>, MeshError> {
    let mut outgoing: HashMap<usize, Vec<usize>> = HashMap::new();
    for (i, e) in edges.iter().enumerate() {
        outgoing.entry(e.from).or_default().push(i);
    }
    let mut used = vec![false; edges.len()];
    let mut loops = Vec::new();
    for start in 0..edges.len() {
        if used[start] {
            continue;
        }
        let origin = edges[start].from;
        let mut chain = vec![start];
        used[start] = true;
        let mut cur = start;
        while edges[cur].to != origin {
            let v = edges[cur].to;
            let next = outgoing
                .get(&v)
                .and_then(|out| out.iter().copied().find(|&e| !used[e]))
                .ok_or(MeshError::OpenBoundary { vertex: v })?;
            used[next] = true;
            chain.push(next);
            cur = next;
        }
        loops.push(BoundaryLoop { edges: chain });
    }
    Ok(loops)
}

/// Triangle soup used as raycast and clearance geometry.
#[derive(Clone, Debug, Default)]
pub struct BlockerMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    bounds: Vec<Aabb>,
}

pub fn load_blocker_mesh(path: &Path) -> Result<BlockerMesh, MeshError> {
    BlockerMesh::from_raw(RawMesh::read(path)?)
}

impl BlockerMesh {
    pub fn from_raw(raw: RawMesh) -> Result<BlockerMesh, MeshError> {
        let mut triangles = Vec::with_capacity(raw.polygons.len());
        let mut bounds = Vec::with_capacity(raw.polygons.len());
        for (ti, ring) in raw.polygons.iter().enumerate() {
            let bad = |reason: String| MeshError::InvalidTriangle { triangle: ti, reason };
            if ring.len() != 3 {
                return Err(bad(format!("blocker faces must be triangles, got {} vertices", ring.len())));
            }
            if let Some(&i) = ring.iter().find(|&&i| i >= raw.vertices.len()) {
                return Err(bad(format!("vertex index {i} out of range")));
            }
            let t = [raw.vertices[ring[0]], raw.vertices[ring[1]], raw.vertices[ring[2]]];
            let area2 = (t[1] - t[0]).cross(t[2] - t[0]).norm();
            if area2.is_nan() || area2 <= 1e-12 {
                return Err(bad("degenerate triangle".into()));
            }
            triangles.push([ring[0], ring[1], ring[2]]);
            bounds.push(Aabb::from_points(t));
        }
        Ok(BlockerMesh { vertices: raw.vertices, triangles, bounds })
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn triangle(&self, i: usize) -> [Vec3; 3] {
        let [a, b, c] = self.triangles[i];
        [self.vertices[a], self.vertices[b], self.vertices[c]]
    }

    /// Nearest hit distance along a unit-direction ray, up to `max_t`.
    pub fn raycast(&self, origin: Vec3, dir: Vec3, max_t: f64) -> Option<f64> {
        let reach = Aabb::from_points([origin, origin + dir * max_t]);
        let mut best: Option<f64> = None;
        for i in 0..self.triangles.len() {
            if !self.bounds[i].overlaps(&reach) {
                continue;
            }
            if let Some(t) = ray_triangle(origin, dir, self.triangle(i), max_t) {
                if best.is_none_or(|b| t < b) {
                    best = Some(t);
                }
            }
        }
        best
    }

    /// Whether the straight segment `a`–`b` crosses any blocker triangle.
    pub fn segment_blocked(&self, a: Vec3, b: Vec3) -> bool {
        let d = b - a;
        let len = d.norm();
        if len == 0.0 {
            return false;
        }
        self.raycast(a, d / len, len).is_some()
    }

    pub fn to_raw(&self) -> RawMesh {
        RawMesh { vertices: self.vertices.clone(), polygons: self.triangles.iter().map(|t| t.to_vec()).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn surface(raw: RawMesh) -> WalkableSurface {
        WalkableSurface::from_raw(raw, &SurfaceConfig::default()).unwrap()
    }

    #[test]
    fn two_squares_share_one_edge() {
        let s = surface(fixtures::grid_raw(2, 1, 1.0));
        assert_eq!(s.polygon_count(), 2);
        assert_eq!(s.interior_edge_count(), 1);
        assert_eq!(s.boundary_edges().len(), 6);
        assert_eq!(s.loops().len(), 1);
    }

    #[test]
    fn single_triangle() {
        let raw = RawMesh {
            vertices: vec![Vec3::new(0.0, 0.0, 0.0), Vec3::new(1.0, 0.0, 0.0), Vec3::new(0.0, 1.0, 0.0)],
            polygons: vec![vec![0, 1, 2]],
        };
        let s = surface(raw);
        assert_eq!(s.interior_edge_count(), 0);
        assert_eq!(s.boundary_edges().len(), 3);
        assert!(s.is_triangulated());
    }

    #[test]
    fn three_by_three_grid_counts() {
        // Hand count: 2 rows x 3 vertical interior segments + 2 x 3 horizontal = 12,
        // perimeter 4 sides x 3 = 12.
        let s = surface(fixtures::grid_raw(3, 3, 1.0));
        assert_eq!(s.polygon_count(), 9);
        assert_eq!(s.interior_edge_count(), 12);
        assert_eq!(s.boundary_edges().len(), 12);
    }

    #[test]
    fn square_loop_and_hole_loops() {
        let single = surface(fixtures::grid_raw(1, 1, 1.0));
        let loops = boundary_loops(&single);
        assert_eq!(loops.len(), 1);
        assert_eq!(loops[0].len(), 4);

        let ring = surface(fixtures::ring_raw());
        let loops = boundary_loops(&ring);
        assert_eq!(loops.len(), 2);
        let mut sizes: Vec<usize> = loops.iter().map(Vec::len).collect();
        sizes.sort();
        assert_eq!(sizes, vec![4, 12]);
        // outer counter-clockwise, hole clockwise
        for l in &loops {
            let pts: Vec<Vec3> = l.iter().map(|&v| ring.vertices()[v]).collect();
            let area_z = newell_normal(&pts).z;
            if l.len() == 12 {
                assert!(area_z > 0.0);
            } else {
                assert!(area_z < 0.0);
            }
        }
    }

    #[test]
    fn two_disjoint_squares_two_loops() {
        let mut raw = fixtures::grid_raw(1, 1, 1.0);
        let off = raw.vertices.len();
        for v in raw.vertices.clone() {
            raw.vertices.push(v + Vec3::new(5.0, 0.0, 0.0));
        }
        raw.polygons.push(raw.polygons[0].iter().map(|i| i + off).collect());
        let s = surface(raw);
        assert_eq!(boundary_loops(&s).len(), 2);
    }

    #[test]
    fn rejects_non_convex_polygon() {
        let raw = RawMesh {
            vertices: vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(2.0, 0.0, 0.0),
                Vec3::new(1.0, 0.5, 0.0),
                Vec3::new(2.0, 2.0, 0.0),
                Vec3::new(0.0, 2.0, 0.0),
            ],
            polygons: vec![vec![0, 1, 2, 3, 4]],
        };
        let err = WalkableSurface::from_raw(raw, &SurfaceConfig::default()).unwrap_err();
        assert!(matches!(err, MeshError::InvalidPolygon { polygon: 0, .. }), "{err}");
        assert!(err.to_string().contains("convex"));
    }

    #[test]
    fn rejects_non_planar_polygon() {
        let raw = RawMesh {
            vertices: vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.1),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            polygons: vec![vec![0, 1, 2, 3]],
        };
        let err = WalkableSurface::from_raw(raw, &SurfaceConfig::default()).unwrap_err();
        assert!(err.to_string().contains("planar"), "{err}");
    }

    #[test]
    fn rejects_edge_shared_by_three_polygons() {
        let raw = RawMesh {
            vertices: vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(0.5, 1.0, 0.0),
                Vec3::new(0.5, -1.0, 0.0),
                Vec3::new(0.5, 0.0, 1.0),
            ],
            polygons: vec![vec![0, 1, 2], vec![1, 0, 3], vec![0, 1, 4]],
        };
        let err = WalkableSurface::from_raw(raw, &SurfaceConfig::default()).unwrap_err();
        assert!(matches!(err, MeshError::NonManifoldEdge { a: 0, b: 1, count: 3 }), "{err}");
    }

    #[test]
    fn rejects_flipped_neighbour() {
        let mut raw = fixtures::grid_raw(2, 1, 1.0);
        raw.polygons[1].reverse();
        let err = WalkableSurface::from_raw(raw, &SurfaceConfig::default()).unwrap_err();
        assert!(matches!(err, MeshError::InconsistentWinding { .. }), "{err}");
    }

    #[test]
    fn obj_parsing_and_errors() {
        let text = "# quad\nv 0 0 0\nv 1 0 0\nv 1 1 0\nv 0 1 0\nvn 0 0 1\nf 1//1 2//1 3//1 -1//1\n";
        let raw = RawMesh::parse_obj(text).unwrap();
        assert_eq!(raw.polygons, vec![vec![0, 1, 2, 3]]);
        let err = RawMesh::parse_obj("v 0 0\n").unwrap_err();
        assert!(matches!(err, MeshError::Parse { line: 1, .. }));
        let err = RawMesh::parse_obj("v 0 0 0\nf 1 2 x\n").unwrap_err();
        assert!(matches!(err, MeshError::Parse { line: 2, .. }));
        let err = RawMesh::parse_obj("v 0 0 0\nf 0 1 2\n").unwrap_err();
        assert!(matches!(err, MeshError::Parse { line: 2, .. }));
    }

    #[test]
    fn json_parsing() {
        let raw = RawMesh::parse_json(r#"{"vertices": [[0,0,0],[1,0,0],[0,1,0]], "polygons": [[0,1,2]]}"#).unwrap();
        assert_eq!(raw.vertices.len(), 3);
        assert!(RawMesh::parse_json(r#"{"vertices": [[0,0]]}"#).is_err());
    }

    #[test]
    fn out_of_range_index_is_validation_error() {
        let raw = RawMesh { vertices: vec![Vec3::ZERO; 2], polygons: vec![vec![0, 1, 5]] };
        let err = WalkableSurface::from_raw(raw, &SurfaceConfig::default()).unwrap_err();
        assert!(matches!(err, MeshError::InvalidPolygon { polygon: 0, .. }));
    }

    #[test]
    fn weld_joins_split_squares() {
        let mut raw = fixtures::grid_raw(1, 1, 1.0);
        let off = raw.vertices.len();
        let shifted: Vec<Vec3> = raw.vertices.iter().map(|v| *v + Vec3::new(1.0 + 1e-6, 0.0, 0.0)).collect();
        raw.vertices.extend(shifted);
        raw.polygons.push(raw.polygons[0].iter().map(|i| i + off).collect());
        let unwelded = WalkableSurface::from_raw(raw.clone(), &SurfaceConfig::default()).unwrap();
        assert_eq!(unwelded.interior_edge_count(), 0);
        let cfg = SurfaceConfig { weld_eps: Some(1e-4), ..SurfaceConfig::default() };
        let welded = WalkableSurface::from_raw(raw, &cfg).unwrap();
        assert_eq!(welded.interior_edge_count(), 1);
    }

    #[test]
    fn locate_respects_height_tolerance() {
        let s = surface(fixtures::grid_raw(2, 1, 1.0));
        assert_eq!(s.locate(Vec3::new(0.5, 0.5, 0.2), 0.5), Some(0));
        assert_eq!(s.locate(Vec3::new(1.5, 0.5, -0.2), 0.5), Some(1));
        assert_eq!(s.locate(Vec3::new(1.5, 0.5, 0.8), 0.5), None);
        assert_eq!(s.locate(Vec3::new(2.5, 0.5, 0.0), 0.5), None);
        // on the outer boundary
        assert_eq!(s.locate(Vec3::new(0.0, 0.5, 0.0), 0.5), Some(0));
    }

    #[test]
    fn blocker_mesh_validation_and_raycast() {
        let quad = RawMesh {
            vertices: vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            polygons: vec![vec![0, 1, 2, 3]],
        };
        assert!(BlockerMesh::from_raw(quad.clone()).is_err());
        let degenerate = RawMesh {
            vertices: vec![Vec3::ZERO, Vec3::new(1.0, 0.0, 0.0), Vec3::new(2.0, 0.0, 0.0)],
            polygons: vec![vec![0, 1, 2]],
        };
        assert!(BlockerMesh::from_raw(degenerate).is_err());
        let tris = RawMesh { vertices: quad.vertices, polygons: vec![vec![0, 1, 2], vec![0, 2, 3]] };
        let b = BlockerMesh::from_raw(tris).unwrap();
        let down = Vec3::new(0.0, 0.0, -1.0);
        assert!(b.raycast(Vec3::new(0.5, 0.2, 1.0), down, 2.0).is_some());
        assert!(b.segment_blocked(Vec3::new(0.5, 0.2, 1.0), Vec3::new(0.5, 0.2, -1.0)));
        assert!(!b.segment_blocked(Vec3::new(0.5, 0.2, 1.0), Vec3::new(0.5, 0.2, 0.5)));
    }
}
