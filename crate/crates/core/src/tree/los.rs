//! Line-of-sight queries used by the simplification predicate.
//!
//! [`surface_los`] walks the segment polygon to polygon in the plane that
//! drops the dominant axis of the starting polygon's normal. Crossing into a
//! neighbour requires the projected segment to cross a shared edge; touching
//! a boundary edge ends the walk with `false`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::geom::Vec3;
use crate::mesh::{BlockerMesh, WalkableSurface};

const WALK_EPS: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum LosError {
    #[error("point {0:?} is not on the walkable surface")]
    PointOffMesh(Vec3),
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SimplifyConfig {
    /// Largest allowed angle between parent and removed-node normals, radians.
    pub normal_angle_tolerance: f64,
    /// Largest allowed distance between the segment and each polygon plane.
    pub los_height_tolerance: f64,
    /// Polygon crossings after which the walk gives up.
    pub max_walk_steps: usize,
}

impl Default for SimplifyConfig {
    fn default() -> Self {
        SimplifyConfig {
            normal_angle_tolerance: 15f64.to_radians(),
            los_height_tolerance: 0.5,
            max_walk_steps: 100_000,
        }
    }
}

impl SimplifyConfig {
    pub fn validate(&self) -> Result<(), String> {
        let t = self.normal_angle_tolerance;
        if !(t > 0.0 && t < std::f64::consts::FRAC_PI_2) {
            return Err(format!("normal angle tolerance must be in (0, 90) degrees, got {}", t.to_degrees()));
        }
        if !(self.los_height_tolerance.is_finite() && self.los_height_tolerance > 0.0) {
            return Err(format!("line-of-sight height tolerance must be positive, got {}", self.los_height_tolerance));
        }
        Ok(())
    }
}

pub trait LineOfSight {
    fn visible(&self, a: Vec3, c: Vec3) -> bool;
}

/// Surface walk; a start point off the surface has no line of sight.
#[derive(Clone, Copy)]
pub struct SurfaceLos<'a> {
    pub surface: &'a WalkableSurface,
    pub config: SimplifyConfig,
}

impl LineOfSight for SurfaceLos<'_> {
    fn visible(&self, a: Vec3, c: Vec3) -> bool {
        surface_los(self.surface, a, c, &self.config).unwrap_or(false)
    }
}

/// Straight 3D segment that crosses no blocker triangle.
#[derive(Clone, Copy)]
pub struct BlockerClearance<'a> {
    pub blockers: &'a BlockerMesh,
}

impl LineOfSight for BlockerClearance<'_> {
    fn visible(&self, a: Vec3, c: Vec3) -> bool {
        !self.blockers.segment_blocked(a, c)
    }
}

fn cross2(a: (f64, f64), b: (f64, f64)) -> f64 {
    a.0 * b.1 - a.1 * b.0
}

struct Plane2 {
    u: usize,
    v: usize,
}

impl Plane2 {
    fn dropping(axis: usize) -> Plane2 {
        Plane2 { u: (axis + 1) % 3, v: (axis + 2) % 3 }
    }

    fn project(&self, p: Vec3) -> (f64, f64) {
        (p.component(self.u), p.component(self.v))
    }
}

fn ring2(surface: &WalkableSurface, polygon: usize, plane: &Plane2) -> Vec<(f64, f64)> {
    surface.polygon_points(polygon).map(|p| plane.project(p)).collect()
}

fn signed_area(ring: &[(f64, f64)]) -> f64 {
    (0..ring.len()).map(|i| cross2(ring[i], ring[(i + 1) % ring.len()])).sum::<f64>() / 2.0
}

fn inside2(ring: &[(f64, f64)], q: (f64, f64)) -> bool {
    let sign = signed_area(ring).signum();
    (0..ring.len()).all(|i| {
        let a = ring[i];
        let b = ring[(i + 1) % ring.len()];
        let e = (b.0 - a.0, b.1 - a.1);
        let len = (e.0 * e.0 + e.1 * e.1).sqrt().max(1.0);
        sign * cross2(e, (q.0 - a.0, q.1 - a.1)) >= -1e-7 * len
    })
}

/// Whether `c` is reachable from `a` along the straight segment without
/// leaving the walkable surface or straying more than the height tolerance
/// from any crossed polygon's plane.
pub fn surface_los(surface: &WalkableSurface, a: Vec3, c: Vec3, cfg: &SimplifyConfig) -> Result<bool, LosError> {
    let h = cfg.los_height_tolerance;
    let start = surface.locate(a, h).ok_or(LosError::PointOffMesh(a))?;
    let plane = Plane2::dropping(surface.polygon_normals()[start].dominant_axis());
    let (a2, c2) = (plane.project(a), plane.project(c));
    let d2 = (c2.0 - a2.0, c2.1 - a2.1);
    let at = |t: f64| a + (c - a) * t;
    let level = |poly: usize, t0: f64, t1: f64| {
        surface.plane_offset(poly, at(t0)).abs() <= h && surface.plane_offset(poly, at(t1)).abs() <= h
    };

    let mut poly = start;
    let mut t_in = 0.0;
    let mut entry: Option<(usize, usize)> = None;
    for _ in 0..cfg.max_walk_steps {
        let ring = ring2(surface, poly, &plane);
        if inside2(&ring, c2) {
            return Ok(level(poly, t_in, 1.0));
        }
        let ids = &surface.polygons()[poly];
        let mut exit: Option<(f64, usize)> = None;
        for k in 0..ids.len() {
            let (ia, ib) = (ids[k], ids[(k + 1) % ids.len()]);
            if entry.is_some_and(|(x, y)| (x, y) == (ia, ib) || (x, y) == (ib, ia)) {
                continue;
            }
            let (p, q) = (ring[k], ring[(k + 1) % ring.len()]);
            let e = (q.0 - p.0, q.1 - p.1);
            let denom = cross2(d2, e);
            if denom.abs() < 1e-15 {
                continue;
            }
            let w = (p.0 - a2.0, p.1 - a2.1);
            let t = cross2(w, e) / denom;
            let s = cross2(w, d2) / denom;
            if !(-WALK_EPS..=1.0 + WALK_EPS).contains(&s) || t < t_in - WALK_EPS {
                continue;
            }
            if exit.is_none_or(|(bt, _)| t > bt) {
                exit = Some((t, k));
            }
        }
        let Some((t_out, k)) = exit else {
            return Ok(false);
        };
        if t_out >= 1.0 {
            return Ok(level(poly, t_in, 1.0));
        }
        if !level(poly, t_in, t_out) {
            return Ok(false);
        }
        let (ia, ib) = (ids[k], ids[(k + 1) % ids.len()]);
        match surface.neighbor_across(poly, ia, ib) {
            Some(next) => {
                poly = next;
                entry = Some((ia, ib));
                t_in = t_out.max(t_in);
            }
            None => return Ok(false),
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn cfg() -> SimplifyConfig {
        SimplifyConfig::default()
    }

    #[test]
    fn same_polygon_is_visible() {
        let s = fixtures::surface(fixtures::grid_raw(1, 1, 4.0));
        assert_eq!(surface_los(&s, Vec3::new(0.5, 0.5, 0.0), Vec3::new(3.5, 3.0, 0.0), &cfg()), Ok(true));
    }

    #[test]
    fn across_a_grid_and_through_vertices() {
        let s = fixtures::surface(fixtures::grid_raw(4, 4, 1.0));
        let a = Vec3::new(0.5, 0.5, 0.0);
        assert_eq!(surface_los(&s, a, Vec3::new(3.5, 2.2, 0.0), &cfg()), Ok(true));
        // exactly through grid vertices
        assert_eq!(surface_los(&s, a, Vec3::new(3.5, 3.5, 0.0), &cfg()), Ok(true));
        assert_eq!(surface_los(&s, Vec3::new(3.5, 3.5, 0.0), a, &cfg()), Ok(true));
    }

    #[test]
    fn disjoint_components_are_not_visible() {
        let s = fixtures::surface(fixtures::cells_raw(&[(0, 0), (2, 0)]));
        assert_eq!(surface_los(&s, Vec3::new(0.5, 0.5, 0.0), Vec3::new(2.5, 0.5, 0.0), &cfg()), Ok(false));
    }

    #[test]
    fn l_corridor_corner_blocks() {
        let s = fixtures::surface(fixtures::l_corridor_raw());
        // segment (0.5,0.5) -> (2.5,2.5) passes (1.5,1.5), outside the L
        assert_eq!(surface_los(&s, Vec3::new(0.5, 0.5, 0.0), Vec3::new(2.5, 2.5, 0.0), &cfg()), Ok(false));
        // along the bottom arm and up the side arm are fine
        assert_eq!(surface_los(&s, Vec3::new(0.5, 0.5, 0.0), Vec3::new(2.5, 0.5, 0.0), &cfg()), Ok(true));
        assert_eq!(surface_los(&s, Vec3::new(2.5, 0.5, 0.0), Vec3::new(2.5, 2.5, 0.0), &cfg()), Ok(true));
        // cutting the inner corner closely stays inside: (1.9,0.2) -> (2.2,1.9)
        assert_eq!(surface_los(&s, Vec3::new(1.9, 0.2, 0.0), Vec3::new(2.2, 1.9, 0.0), &cfg()), Ok(true));
    }

    #[test]
    fn off_mesh_start_is_an_error() {
        let s = fixtures::surface(fixtures::grid_raw(1, 1, 1.0));
        let p = Vec3::new(5.0, 5.0, 0.0);
        assert_eq!(surface_los(&s, p, Vec3::ZERO, &cfg()), Err(LosError::PointOffMesh(p)));
    }

    #[test]
    fn end_off_the_surface_is_not_visible() {
        let s = fixtures::surface(fixtures::corridor_raw());
        assert_eq!(surface_los(&s, Vec3::new(5.5, 2.0, 0.0), Vec3::new(-0.5, 2.0, 0.0), &cfg()), Ok(false));
        assert_eq!(surface_los(&s, Vec3::new(5.5, 2.0, 0.0), Vec3::new(0.0, 2.25, 0.0), &cfg()), Ok(true));
    }

    #[test]
    fn height_deviation_is_limited() {
        let s = fixtures::surface(fixtures::ramp_raw());
        let a = Vec3::new(0.5, 1.0, 0.0);
        let top_x = 3.0 + 3.0 * 30f64.to_radians().cos() + 2.5;
        let top = Vec3::new(top_x, 1.0, 1.5);
        // the straight chord floats about 0.49 above the lower floor where the ramp starts
        let tight = SimplifyConfig { los_height_tolerance: 0.3, ..cfg() };
        assert_eq!(surface_los(&s, a, top, &tight), Ok(false));
        let loose = SimplifyConfig { los_height_tolerance: 2.0, ..cfg() };
        assert_eq!(surface_los(&s, a, top, &loose), Ok(true));
    }

    #[test]
    fn blocker_clearance() {
        let b = fixtures::blockers(fixtures::corridor_blockers_raw());
        let los = BlockerClearance { blockers: &b };
        assert!(los.visible(Vec3::new(1.0, 1.0, 0.0), Vec3::new(10.0, 3.0, 0.0)));
        assert!(!los.visible(Vec3::new(1.0, 1.0, 0.0), Vec3::new(1.0, -1.0, 0.0)));
    }
}
