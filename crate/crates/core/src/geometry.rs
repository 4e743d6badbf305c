//! Axially segmented pincell with exact surface tracking.
//!
//! The cell is a fuel cylinder of radius `fuel_radius` centred in a square
//! box of side `pitch` spanning `z ∈ [0, height]`. The fuel is cut into
//! `n_axial` equal slabs, each its own material and tally region. All six
//! box planes reflect.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Rejects the root belonging to the surface a particle is leaving (cm).
pub const EPSILON: f64 = 1e-10;
/// Extra distance moved past a crossed surface before relocating (cm).
pub const NUDGE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Vec3 { x, y, z }
    }

    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn normalized(self) -> Vec3 {
        self * (1.0 / self.norm())
    }
}

impl Add for Vec3 {
    type Output = Vec3;
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

impl Mul<f64> for Vec3 {
    type Output = Vec3;
    fn mul(self, s: f64) -> Vec3 {
        Vec3::new(self.x * s, self.y * s, self.z * s)
    }
}

impl Neg for Vec3 {
    type Output = Vec3;
    fn neg(self) -> Vec3 {
        Vec3::new(-self.x, -self.y, -self.z)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CellId {
    Fuel { axial_index: u32 },
    Moderator,
}

impl CellId {
    pub fn kind(&self) -> &'static str {
        match self {
            CellId::Fuel { .. } => "fuel",
            CellId::Moderator => "moderator",
        }
    }
}

/// Surfaces in tie-break order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Surface {
    Cylinder,
    XMin,
    XMax,
    YMin,
    YMax,
    ZMin,
    ZMax,
    /// Internal plane `z = k * height / n_axial`, `0 < k < n_axial`.
    AxialPlane(u32),
}

impl Surface {
    pub fn is_outer(&self) -> bool {
        !matches!(self, Surface::Cylinder | Surface::AxialPlane(_))
    }

    /// Outward unit normal of an outer plane.
    pub fn outward_normal(&self) -> Option<Vec3> {
        Some(match self {
            Surface::XMin => Vec3::new(-1.0, 0.0, 0.0),
            Surface::XMax => Vec3::new(1.0, 0.0, 0.0),
            Surface::YMin => Vec3::new(0.0, -1.0, 0.0),
            Surface::YMax => Vec3::new(0.0, 1.0, 0.0),
            Surface::ZMin => Vec3::new(0.0, 0.0, -1.0),
            Surface::ZMax => Vec3::new(0.0, 0.0, 1.0),
            Surface::Cylinder | Surface::AxialPlane(_) => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoundaryHit {
    pub distance: f64,
    pub surface: Surface,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Pincell {
    pub fuel_radius: f64,
    pub pitch: f64,
    pub height: f64,
    pub n_axial: u32,
    pub fuel_material_ids: Vec<u32>,
    pub moderator_material_id: u32,
}

impl Default for Pincell {
    fn default() -> Self {
        Pincell::new(0.4096, 1.26, 10.0, 10, (0..10).collect(), 10).unwrap()
    }
}

impl fmt::Display for Pincell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "pincell r={} pitch={} height={} axial={}",
            self.fuel_radius, self.pitch, self.height, self.n_axial
        )
    }
}

impl Pincell {
    pub fn new(
        fuel_radius: f64,
        pitch: f64,
        height: f64,
        n_axial: u32,
        fuel_material_ids: Vec<u32>,
        moderator_material_id: u32,
    ) -> Result<Self> {
        if !(fuel_radius > 0.0 && 2.0 * fuel_radius < pitch && pitch.is_finite()) {
            return Err(Error::Config(format!(
                "pincell needs 0 < 2 * fuel_radius < pitch (got r={fuel_radius}, pitch={pitch})"
            )));
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::Config(format!(
                "pincell height must be positive (got {height})"
            )));
        }
        if n_axial == 0 {
            return Err(Error::Config("n_axial must be at least 1".into()));
        }
        if fuel_material_ids.len() != n_axial as usize {
            return Err(Error::Config(format!(
                "{} fuel materials given for {n_axial} axial segments",
                fuel_material_ids.len()
            )));
        }
        Ok(Pincell {
            fuel_radius,
            pitch,
            height,
            n_axial,
            fuel_material_ids,
            moderator_material_id,
        })
    }

    pub fn half_pitch(&self) -> f64 {
        0.5 * self.pitch
    }

    pub fn material_of(&self, cell: CellId) -> u32 {
        match cell {
            CellId::Fuel { axial_index } => self.fuel_material_ids[axial_index as usize],
            CellId::Moderator => self.moderator_material_id,
        }
    }

    /// Number of tally regions: every fuel slab plus the moderator.
    pub fn n_regions(&self) -> usize {
        self.n_axial as usize + 1
    }

    pub fn region_index(&self, cell: CellId) -> usize {
        match cell {
            CellId::Fuel { axial_index } => axial_index as usize,
            CellId::Moderator => self.n_axial as usize,
        }
    }

    pub fn region_cell(&self, region: usize) -> CellId {
        if region < self.n_axial as usize {
            CellId::Fuel {
                axial_index: region as u32,
            }
        } else {
            CellId::Moderator
        }
    }

    pub fn contains(&self, p: Vec3) -> bool {
        let h = self.half_pitch();
        p.x.abs() <= h && p.y.abs() <= h && p.z >= 0.0 && p.z <= self.height
    }

    fn axial_plane_z(&self, k: u32) -> f64 {
        k as f64 * self.height / self.n_axial as f64
    }

    pub fn locate(&self, p: Vec3) -> Result<CellId> {
        if !self.contains(p) {
            return Err(Error::Geometry(format!(
                "position ({}, {}, {}) outside pincell",
                p.x, p.y, p.z
            )));
        }
        if p.x * p.x + p.y * p.y < self.fuel_radius * self.fuel_radius {
            let k = (p.z * self.n_axial as f64 / self.height).floor();
            let k = (k.max(0.0) as u32).min(self.n_axial - 1);
            Ok(CellId::Fuel { axial_index: k })
        } else {
            Ok(CellId::Moderator)
        }
    }

    /// Distance to the nearest bounding surface of `current` along `dir`.
    pub fn distance_to_boundary(&self, p: Vec3, dir: Vec3, current: CellId) -> Result<BoundaryHit> {
        let mut best: Option<BoundaryHit> = None;
        let mut consider = |distance: f64, surface: Surface| {
            if distance > EPSILON
                && distance.is_finite()
                && best.is_none_or(|b| distance < b.distance)
            {
                best = Some(BoundaryHit { distance, surface });
            }
        };

        // cylinder: a t^2 + b t + c = 0
        let a = dir.x * dir.x + dir.y * dir.y;
        if a > 0.0 {
            let b = 2.0 * (p.x * dir.x + p.y * dir.y);
            let c = p.x * p.x + p.y * p.y - self.fuel_radius * self.fuel_radius;
            let disc = b * b - 4.0 * a * c;
            if disc >= 0.0 {
                let sq = disc.sqrt();
                let t1 = (-b - sq) / (2.0 * a);
                let t2 = (-b + sq) / (2.0 * a);
                let t = if t1 > EPSILON { t1 } else { t2 };
                consider(t, Surface::Cylinder);
            }
        }

        let plane = |target: f64, coord: f64, comp: f64| {
            if comp != 0.0 {
                (target - coord) / comp
            } else {
                f64::INFINITY
            }
        };

        match current {
            CellId::Moderator => {
                let h = self.half_pitch();
                if dir.x < 0.0 {
                    consider(plane(-h, p.x, dir.x), Surface::XMin);
                }
                if dir.x > 0.0 {
                    consider(plane(h, p.x, dir.x), Surface::XMax);
                }
                if dir.y < 0.0 {
                    consider(plane(-h, p.y, dir.y), Surface::YMin);
                }
                if dir.y > 0.0 {
                    consider(plane(h, p.y, dir.y), Surface::YMax);
                }
                if dir.z < 0.0 {
                    consider(plane(0.0, p.z, dir.z), Surface::ZMin);
                }
                if dir.z > 0.0 {
                    consider(plane(self.height, p.z, dir.z), Surface::ZMax);
                }
            }
            CellId::Fuel { axial_index: k } => {
                if dir.z < 0.0 {
                    let s = if k == 0 {
                        Surface::ZMin
                    } else {
                        Surface::AxialPlane(k)
                    };
                    consider(plane(self.axial_plane_z(k), p.z, dir.z), s);
                }
                if dir.z > 0.0 {
                    let s = if k + 1 == self.n_axial {
                        Surface::ZMax
                    } else {
                        Surface::AxialPlane(k + 1)
                    };
                    let z = if k + 1 == self.n_axial {
                        self.height
                    } else {
                        self.axial_plane_z(k + 1)
                    };
                    consider(plane(z, p.z, dir.z), s);
                }
            }
        }

        best.ok_or_else(|| {
            Error::Geometry(format!(
                "no boundary ahead of ({}, {}, {}) along ({}, {}, {}) in {:?}",
                p.x, p.y, p.z, dir.x, dir.y, dir.z, current
            ))
        })
    }

    /// Clamps a coordinate that roundoff pushed past an outer plane.
    pub fn snap_to_box(&self, p: Vec3) -> Vec3 {
        let h = self.half_pitch();
        Vec3::new(
            p.x.clamp(-h, h),
            p.y.clamp(-h, h),
            p.z.clamp(0.0, self.height),
        )
    }

    /// Outer planes the particle sits on (within roundoff) while heading out.
    pub fn outgoing_outer_planes(&self, p: Vec3, dir: Vec3) -> Vec<Surface> {
        let h = self.half_pitch();
        let tol = 4.0 * NUDGE;
        let mut out = Vec::new();
        if p.x <= -h + tol && dir.x < 0.0 {
            out.push(Surface::XMin);
        }
        if p.x >= h - tol && dir.x > 0.0 {
            out.push(Surface::XMax);
        }
        if p.y <= -h + tol && dir.y < 0.0 {
            out.push(Surface::YMin);
        }
        if p.y >= h - tol && dir.y > 0.0 {
            out.push(Surface::YMax);
        }
        if p.z <= tol && dir.z < 0.0 {
            out.push(Surface::ZMin);
        }
        if p.z >= self.height - tol && dir.z > 0.0 {
            out.push(Surface::ZMax);
        }
        out
    }
}

/// Specular reflection off an outer plane.
pub fn apply_boundary(dir: Vec3, surface: Surface) -> Result<Vec3> {
    let n = surface
        .outward_normal()
        .ok_or_else(|| Error::Logic(format!("{surface:?} is an internal surface")))?;
    Ok(dir - n * (2.0 * dir.dot(n)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prng::RngState;

    fn cell() -> Pincell {
        Pincell::default()
    }

    #[test]
    fn rejects_bad_dimensions() {
        assert!(Pincell::new(0.7, 1.26, 10.0, 1, vec![0], 1).is_err());
        assert!(Pincell::new(0.4, 1.26, 0.0, 1, vec![0], 1).is_err());
        assert!(Pincell::new(0.4, 1.26, 1.0, 0, vec![], 1).is_err());
        assert!(Pincell::new(0.4, 1.26, 1.0, 2, vec![0], 1).is_err());
    }

    #[test]
    fn locate_examples() {
        let g = cell();
        assert_eq!(
            g.locate(Vec3::new(0.0, 0.0, 5.0)).unwrap(),
            CellId::Fuel { axial_index: 5 }
        );
        assert_eq!(
            g.locate(Vec3::new(0.6, 0.0, 5.0)).unwrap(),
            CellId::Moderator
        );
        let top = 10.0 - 1e-12;
        assert_eq!(
            g.locate(Vec3::new(0.0, 0.0, top)).unwrap(),
            CellId::Fuel { axial_index: 9 }
        );
        assert_eq!(
            g.locate(Vec3::new(0.0, 0.0, 10.0)).unwrap(),
            CellId::Fuel { axial_index: 9 }
        );
        // strict inequality: on the cylinder is moderator
        assert_eq!(
            g.locate(Vec3::new(0.4096, 0.0, 1.0)).unwrap(),
            CellId::Moderator
        );
        assert!(matches!(
            g.locate(Vec3::new(0.7, 0.0, 1.0)),
            Err(Error::Geometry(_))
        ));
        assert!(g.locate(Vec3::new(0.0, 0.0, -0.1)).is_err());
    }

    #[test]
    fn radial_ray_hits_cylinder() {
        let g = cell();
        let hit = g
            .distance_to_boundary(
                Vec3::new(0.0, 0.0, 5.0),
                Vec3::new(1.0, 0.0, 0.0),
                CellId::Fuel { axial_index: 5 },
            )
            .unwrap();
        assert_eq!(hit.surface, Surface::Cylinder);
        assert!((hit.distance - 0.4096).abs() < 1e-15);
    }

    #[test]
    fn moderator_ray_hits_box() {
        let g = cell();
        let hit = g
            .distance_to_boundary(
                Vec3::new(0.5, 0.0, 5.0),
                Vec3::new(1.0, 0.0, 0.0),
                CellId::Moderator,
            )
            .unwrap();
        assert_eq!(hit.surface, Surface::XMax);
        assert!((hit.distance - 0.13).abs() < 1e-15);
    }

    #[test]
    fn oblique_ray_matches_quadratic_oracle() {
        let g = cell();
        let p = Vec3::new(0.1, 0.2, 5.0);
        let d = Vec3::new(0.6, 0.8, 0.0).normalized();
        let hit = g
            .distance_to_boundary(p, d, CellId::Fuel { axial_index: 5 })
            .unwrap();
        // oracle: bisection on |p + t d|_xy = r over t in [0, 1]
        let f = |t: f64| (p.x + t * d.x).powi(2) + (p.y + t * d.y).powi(2) - 0.4096f64.powi(2);
        let (mut lo, mut hi) = (0.0f64, 1.0f64);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        assert_eq!(hit.surface, Surface::Cylinder);
        assert!(
            (hit.distance - lo).abs() < 1e-13,
            "{} vs {lo}",
            hit.distance
        );
    }

    #[test]
    fn axial_planes_bound_fuel_slabs() {
        let g = cell();
        let hit = g
            .distance_to_boundary(
                Vec3::new(0.0, 0.0, 3.5),
                Vec3::new(0.0, 0.0, 1.0),
                CellId::Fuel { axial_index: 3 },
            )
            .unwrap();
        assert_eq!(hit.surface, Surface::AxialPlane(4));
        assert!((hit.distance - 0.5).abs() < 1e-14);
        let hit = g
            .distance_to_boundary(
                Vec3::new(0.0, 0.0, 0.5),
                Vec3::new(0.0, 0.0, -1.0),
                CellId::Fuel { axial_index: 0 },
            )
            .unwrap();
        assert_eq!(hit.surface, Surface::ZMin);
    }

    #[test]
    fn reflection_examples() {
        let d = apply_boundary(Vec3::new(1.0, 0.0, 0.0), Surface::XMax).unwrap();
        assert_eq!(d, Vec3::new(-1.0, 0.0, 0.0));
        let d = apply_boundary(Vec3::new(0.6, 0.8, 0.0), Surface::XMax).unwrap();
        assert_eq!(d, Vec3::new(-0.6, 0.8, 0.0));
        let d0 = Vec3::new(0.3, -0.4, 0.5).normalized();
        let twice =
            apply_boundary(apply_boundary(d0, Surface::ZMin).unwrap(), Surface::ZMin).unwrap();
        assert_eq!(twice, d0);
        assert!(matches!(
            apply_boundary(d0, Surface::Cylinder),
            Err(Error::Logic(_))
        ));
        assert!(apply_boundary(d0, Surface::AxialPlane(2)).is_err());
    }

    fn random_interior(g: &Pincell, rng: &mut RngState) -> (Vec3, Vec3) {
        let h = g.half_pitch();
        let p = Vec3::new(
            (2.0 * rng.next_uniform() - 1.0) * h,
            (2.0 * rng.next_uniform() - 1.0) * h,
            rng.next_uniform() * g.height,
        );
        let mu = 2.0 * rng.next_uniform() - 1.0;
        let phi = 2.0 * std::f64::consts::PI * rng.next_uniform();
        let s = (1.0 - mu * mu).sqrt();
        (p, Vec3::new(s * phi.cos(), s * phi.sin(), mu))
    }

    #[test]
    fn closure_over_random_rays() {
        let g = cell();
        let mut rng = RngState::new(2024);
        for _ in 0..100_000 {
            let (p, d) = random_interior(&g, &mut rng);
            let before = g.locate(p).unwrap();
            let hit = g.distance_to_boundary(p, d, before).unwrap();
            assert!(hit.distance > 0.0 && hit.distance.is_finite());
            if hit.surface.is_outer() {
                let r = apply_boundary(d, hit.surface).unwrap();
                assert!((r.norm() - 1.0).abs() < 1e-12);
                assert_eq!(apply_boundary(r, hit.surface).unwrap(), d);
            } else {
                let q = p + d * (hit.distance + NUDGE);
                assert_ne!(g.locate(q).unwrap(), before, "{p:?} {d:?} {hit:?}");
            }
        }
    }

    #[test]
    fn axial_partition_is_unique() {
        let g = Pincell::new(0.4, 1.26, 7.0, 13, (0..13).collect(), 13).unwrap();
        let mut counts = [0u32; 13];
        for i in 0..=7000 {
            let z = i as f64 * 0.001;
            match g.locate(Vec3::new(0.0, 0.0, z)).unwrap() {
                CellId::Fuel { axial_index } => counts[axial_index as usize] += 1,
                CellId::Moderator => panic!("axis is fuel"),
            }
        }
        assert_eq!(counts.iter().sum::<u32>(), 7001);
        assert!(counts.iter().all(|&c| c > 0));
    }
}
