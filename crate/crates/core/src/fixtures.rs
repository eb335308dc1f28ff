//! Synthetic surfaces, blockers and graphs with known structure.
//!
//! Used by the test suites, the benches and the CLI `fixture` writer.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::geom::Vec3;
use crate::graph::{euclidean_weight, graph_from_sampling, Neighborhood, NodeSource, SampleField, SurfaceGraph};
use crate::mesh::{BlockerMesh, RawMesh, SurfaceConfig, WalkableSurface};

/// Wall height range used by every blocker fixture. Walls reach below the
/// floor so rays lifted off the surface cannot slip underneath.
pub const WALL_Z: (f64, f64) = (-1.0, 3.0);
/// Distance between a walkable boundary and the wall behind it.
pub const WALL_GAP: f64 = 0.25;

/// Builds faces over exactly shared vertices.
#[derive(Default)]
pub struct MeshBuilder {
    raw: RawMesh,
    index: HashMap<[i64; 3], usize>,
}

impl MeshBuilder {
    pub fn new() -> Self {
        MeshBuilder::default()
    }

    pub fn vertex(&mut self, p: Vec3) -> usize {
        let key = [p.x, p.y, p.z].map(|c| (c * 1e6).round() as i64);
        *self.index.entry(key).or_insert_with(|| {
            self.raw.vertices.push(p);
            self.raw.vertices.len() - 1
        })
    }

    pub fn face(&mut self, ring: &[Vec3]) {
        let ids = ring.iter().map(|&p| self.vertex(p)).collect();
        self.raw.polygons.push(ids);
    }

    /// Axis-aligned floor rectangle at height `z`, counter-clockwise from above.
    pub fn rect(&mut self, x0: f64, y0: f64, x1: f64, y1: f64, z: f64) {
        self.face(&[Vec3::new(x0, y0, z), Vec3::new(x1, y0, z), Vec3::new(x1, y1, z), Vec3::new(x0, y1, z)]);
    }

    /// Vertical wall over the floor segment `a`–`b`, as two triangles.
    pub fn wall(&mut self, a: (f64, f64), b: (f64, f64)) {
        let (z0, z1) = WALL_Z;
        let p = [Vec3::new(a.0, a.1, z0), Vec3::new(b.0, b.1, z0), Vec3::new(b.0, b.1, z1), Vec3::new(a.0, a.1, z1)];
        self.face(&[p[0], p[1], p[2]]);
        self.face(&[p[0], p[2], p[3]]);
    }

    pub fn finish(self) -> RawMesh {
        self.raw
    }
}

/// `w x h` grid of square cells, row-major, counter-clockwise from above.
pub fn grid_raw(w: usize, h: usize, size: f64) -> RawMesh {
    let mut raw = RawMesh::default();
    for j in 0..=h {
        for i in 0..=w {
            raw.vertices.push(Vec3::new(i as f64 * size, j as f64 * size, 0.0));
        }
    }
    let v = |i: usize, j: usize| j * (w + 1) + i;
    for j in 0..h {
        for i in 0..w {
            raw.polygons.push(vec![v(i, j), v(i + 1, j), v(i + 1, j + 1), v(i, j + 1)]);
        }
    }
    raw
}

/// 3x3 grid with the centre cell removed: one outer loop and one hole.
pub fn ring_raw() -> RawMesh {
    let mut raw = grid_raw(3, 3, 1.0);
    raw.polygons.remove(4);
    raw
}

/// Unit floor cells at integer coordinates.
pub fn cells_raw(cells: &[(i64, i64)]) -> RawMesh {
    let mut b = MeshBuilder::new();
    for &(x, y) in cells {
        let (x, y) = (x as f64, y as f64);
        b.rect(x, y, x + 1.0, y + 1.0, 0.0);
    }
    b.finish()
}

/// Walls on every cell side that does not face another cell, pushed `gap`
/// outward and extended by `gap` at both ends so that corners close.
pub fn cell_walls(cells: &[(i64, i64)], gap: f64) -> RawMesh {
    let set: BTreeSet<(i64, i64)> = cells.iter().copied().collect();
    let mut b = MeshBuilder::new();
    for &(x, y) in &set {
        let (fx, fy) = (x as f64, y as f64);
        if !set.contains(&(x, y - 1)) {
            b.wall((fx - gap, fy - gap), (fx + 1.0 + gap, fy - gap));
        }
        if !set.contains(&(x, y + 1)) {
            b.wall((fx - gap, fy + 1.0 + gap), (fx + 1.0 + gap, fy + 1.0 + gap));
        }
        if !set.contains(&(x - 1, y)) {
            b.wall((fx - gap, fy - gap), (fx - gap, fy + 1.0 + gap));
        }
        if !set.contains(&(x + 1, y)) {
            b.wall((fx + 1.0 + gap, fy - gap), (fx + 1.0 + gap, fy + 1.0 + gap));
        }
    }
    b.finish()
}

pub fn surface(raw: RawMesh) -> WalkableSurface {
    WalkableSurface::from_raw(raw, &SurfaceConfig::default()).expect("fixture surface is valid")
}

pub fn blockers(raw: RawMesh) -> BlockerMesh {
    BlockerMesh::from_raw(raw).expect("fixture blockers are valid")
}

/// Number of strips in the straight corridor.
pub const CORRIDOR_LEN: usize = 12;
pub const CORRIDOR_WIDTH: f64 = 4.0;

/// Straight corridor of 12 collinear `1 x 4` strips along +x, open at both ends.
pub fn corridor_raw() -> RawMesh {
    let mut b = MeshBuilder::new();
    for i in 0..CORRIDOR_LEN {
        b.rect(i as f64, 0.0, i as f64 + 1.0, CORRIDOR_WIDTH, 0.0);
    }
    b.finish()
}

/// Side walls of the corridor; the two short ends stay open.
pub fn corridor_blockers_raw() -> RawMesh {
    let len = CORRIDOR_LEN as f64;
    let mut b = MeshBuilder::new();
    b.wall((-WALL_GAP, -WALL_GAP), (len + WALL_GAP, -WALL_GAP));
    b.wall((-WALL_GAP, CORRIDOR_WIDTH + WALL_GAP), (len + WALL_GAP, CORRIDOR_WIDTH + WALL_GAP));
    b.finish()
}

/// Plus-shaped hub: a `4 x 4` centre square with four arms of four `1 x 4`
/// strips, each arm open at its far end.
pub fn hub_raw() -> RawMesh {
    let mut b = MeshBuilder::new();
    b.rect(4.0, 4.0, 8.0, 8.0, 0.0);
    for k in 0..4 {
        let k = k as f64;
        b.rect(8.0 + k, 4.0, 9.0 + k, 8.0, 0.0); // east
        b.rect(4.0, 8.0 + k, 8.0, 9.0 + k, 0.0); // north
        b.rect(3.0 - k, 4.0, 4.0 - k, 8.0, 0.0); // west
        b.rect(4.0, 3.0 - k, 8.0, 4.0 - k, 0.0); // south
    }
    b.finish()
}

pub fn hub_blockers_raw() -> RawMesh {
    let (g, lo, hi) = (WALL_GAP, 4.0 - WALL_GAP, 8.0 + WALL_GAP);
    let mut b = MeshBuilder::new();
    // each arm wall starts at the centre square's corner and overlaps the
    // neighbouring arm's wall behind the inner corner
    b.wall((8.0, lo), (12.0 + g, lo));
    b.wall((8.0, hi), (12.0 + g, hi));
    b.wall((-g, lo), (4.0, lo));
    b.wall((-g, hi), (4.0, hi));
    b.wall((lo, -g), (lo, 4.0));
    b.wall((hi, -g), (hi, 4.0));
    b.wall((lo, 8.0), (lo, 12.0 + g));
    b.wall((hi, 8.0), (hi, 12.0 + g));
    b.finish()
}

/// L-shaped corridor of unit cells turning left after three cells.
pub fn l_corridor_cells() -> Vec<(i64, i64)> {
    vec![(0, 0), (1, 0), (2, 0), (2, 1), (2, 2)]
}

pub fn l_corridor_raw() -> RawMesh {
    cells_raw(&l_corridor_cells())
}

/// Flat floor, a 30° ramp, and a raised flat landing, each split into unit
/// strips along +x.
pub fn ramp_raw() -> RawMesh {
    let slope = 30f64.to_radians();
    let (dx, dz) = (slope.cos(), slope.sin());
    let mut b = MeshBuilder::new();
    for i in 0..3 {
        b.rect(i as f64, 0.0, i as f64 + 1.0, 2.0, 0.0);
    }
    for i in 0..3 {
        let (x0, z0) = (3.0 + i as f64 * dx, i as f64 * dz);
        let (x1, z1) = (x0 + dx, z0 + dz);
        b.face(&[Vec3::new(x0, 0.0, z0), Vec3::new(x1, 0.0, z1), Vec3::new(x1, 2.0, z1), Vec3::new(x0, 2.0, z0)]);
    }
    let (x, z) = (3.0 + 3.0 * dx, 3.0 * dz);
    for i in 0..3 {
        b.rect(x + i as f64, 0.0, x + i as f64 + 1.0, 2.0, z);
    }
    b.finish()
}

/// Walkable cells of the comb level: a `20 x 20` room with 24 teeth of
/// length 25 (6 per side), 1 000 cells in all. Tooth tips are the only
/// degree-1 cells of the 4-neighbourhood graph.
pub fn comb_cells() -> Vec<(i64, i64)> {
    let mut cells = Vec::with_capacity(1000);
    for y in 0..20 {
        for x in 0..20 {
            cells.push((x, y));
        }
    }
    for t in 0..6 {
        let p = 1 + 3 * t;
        for d in 1..=25 {
            cells.push((p, -d)); // south
            cells.push((19 + d, p)); // east
            cells.push((p, 19 + d)); // north
            cells.push((-d, p)); // west
        }
    }
    cells
}

/// Cell-centre sample graph over `cells` with the 4-neighbourhood and
/// Euclidean weights. Node `i` is cell `i`.
pub fn cell_graph(cells: &[(i64, i64)]) -> SurfaceGraph {
    let index: HashMap<(i64, i64), usize> = cells.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    let points = cells.iter().map(|&(x, y)| Vec3::new(x as f64 + 0.5, y as f64 + 0.5, 0.0)).collect();
    let lists = cells
        .iter()
        .map(|&(x, y)| {
            let mut l: Vec<usize> =
                [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)].iter().filter_map(|c| index.get(c).copied()).collect();
            l.sort_unstable();
            l
        })
        .collect();
    let field = SampleField { points, normals: None };
    graph_from_sampling(&field, &Neighborhood::Explicit(lists), euclidean_weight).expect("cell graph is valid")
}

/// Cell-centre sample graph on a regular `w x h` lattice.
pub fn sampled_grid(w: usize, h: usize, spacing: f64) -> SurfaceGraph {
    let mut points = Vec::with_capacity(w * h);
    for y in 0..h {
        for x in 0..w {
            points.push(Vec3::new(x as f64 * spacing, y as f64 * spacing, 0.0));
        }
    }
    let field = SampleField { points, normals: None };
    graph_from_sampling(&field, &Neighborhood::Grid { width: w, height: h, diagonal: false }, euclidean_weight)
        .expect("grid graph is valid")
}

/// Graph with explicit weights; node `i` sits at `(i, 0, 0)`.
pub fn weighted_graph(n: usize, edges: &[(usize, usize, f64)]) -> SurfaceGraph {
    let mut g = SurfaceGraph::new();
    for i in 0..n {
        g.add_node(Vec3::new(i as f64, 0.0, 0.0), Vec3::Z, true, NodeSource::Sample);
    }
    for &(a, b, w) in edges {
        g.add_edge(a, b, w).expect("fixture edge is valid");
    }
    g
}

/// Path `0 - 1 - ... - (n-1)` with unit spacing along +x.
pub fn path_graph(n: usize) -> SurfaceGraph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i, 1.0)).collect();
    weighted_graph(n, &edges)
}

/// Centre 0 with `k` leaves on the unit circle, unit weights.
pub fn star_graph(k: usize) -> SurfaceGraph {
    let mut g = SurfaceGraph::new();
    g.add_node(Vec3::ZERO, Vec3::Z, true, NodeSource::Sample);
    for i in 0..k {
        let a = i as f64 * std::f64::consts::TAU / k as f64;
        let leaf = g.add_node(Vec3::new(a.cos(), a.sin(), 0.0), Vec3::Z, true, NodeSource::Sample);
        g.add_edge(0, leaf, 1.0).expect("fixture edge is valid");
    }
    g
}

/// Cycle of `n` nodes on the unit circle, unit weights.
pub fn cycle_graph(n: usize) -> SurfaceGraph {
    let mut g = SurfaceGraph::new();
    for i in 0..n {
        let a = i as f64 * std::f64::consts::TAU / n as f64;
        g.add_node(Vec3::new(a.cos(), a.sin(), 0.0), Vec3::Z, true, NodeSource::Sample);
    }
    for i in 0..n {
        g.add_edge(i, (i + 1) % n, 1.0).expect("fixture edge is valid");
    }
    g
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn random_position(rng: &mut ChaCha8Rng) -> Vec3 {
    Vec3::new(rng.random_range(0.0..10.0), rng.random_range(0.0..10.0), 0.0)
}

/// `G(n, p)` conditioned on connectivity, weights uniform in `(0, 1]`.
pub fn random_connected_graph(rng: &mut ChaCha8Rng, n: usize, p: f64) -> SurfaceGraph {
    loop {
        let mut g = SurfaceGraph::new();
        for _ in 0..n {
            let pos = random_position(rng);
            g.add_node(pos, Vec3::Z, true, NodeSource::Sample);
        }
        for a in 0..n {
            for b in a + 1..n {
                if rng.random::<f64>() < p {
                    let w = 1.0 - rng.random::<f64>();
                    g.add_edge(a, b, w).expect("fresh edge");
                }
            }
        }
        if g.component_count() <= 1 {
            return g;
        }
    }
}

/// Random labelled tree on `n` nodes at random positions, Euclidean weights.
pub fn random_tree(rng: &mut ChaCha8Rng, n: usize) -> SurfaceGraph {
    let mut label: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        label.swap(i, rng.random_range(0..=i));
    }
    let mut g = SurfaceGraph::new();
    for _ in 0..n {
        let pos = random_position(rng);
        g.add_node(pos, Vec3::Z, true, NodeSource::Sample);
    }
    for i in 1..n {
        let j = rng.random_range(0..i);
        g.add_euclidean_edge(label[i], label[j]).expect("fresh edge");
    }
    g
}

/// Random subset of a `w x h` cell grid: each cell kept with probability
/// `keep`, restricted to the 4-connected component of the first kept cell.
pub fn random_cells(rng: &mut ChaCha8Rng, w: i64, h: i64, keep: f64) -> Vec<(i64, i64)> {
    let mut all = BTreeSet::new();
    for y in 0..h {
        for x in 0..w {
            if rng.random::<f64>() < keep {
                all.insert((x, y));
            }
        }
    }
    let Some(&start) = all.iter().next() else {
        return vec![(0, 0)];
    };
    let mut comp = BTreeSet::from([start]);
    let mut stack = vec![start];
    while let Some((x, y)) = stack.pop() {
        for c in [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)] {
            if all.contains(&c) && comp.insert(c) {
                stack.push(c);
            }
        }
    }
    comp.into_iter().collect()
}
