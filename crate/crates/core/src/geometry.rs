//! Toroidal vertex domain, voxel lattices and rigid transforms.
//!
//! All volumetric work happens on a cubic lattice. Lattice voxel `[i, j, k]`
//! has its center at `origin + h * (i + 0.5, j + 0.5, k + 0.5)`. The grids built
//! for a torus are symmetric about the torus center, so a half turn about the
//! axis maps voxels to voxels exactly.

use nalgebra::{Matrix3, Point3, Rotation3, Unit, Vector3};
use rayon::prelude::*;

use crate::voxel::{Voxel, VoxelSet};
use crate::{Error, Result};

/// Solid torus with a square cross-section.
#[derive(Clone, Debug, PartialEq)]
pub struct TorusSpec {
    revolve_radius: f64,
    side: f64,
    center: Point3<f64>,
    axis: Unit<Vector3<f64>>,
}

impl TorusSpec {
    /// Torus centered at the origin revolving about `+z`.
    pub fn new(revolve_radius: f64, side: f64) -> Result<Self> {
        Self::with_frame(revolve_radius, side, Point3::origin(), Vector3::z())
    }

    pub fn with_frame(
        revolve_radius: f64,
        side: f64,
        center: Point3<f64>,
        axis: Vector3<f64>,
    ) -> Result<Self> {
        if !(side.is_finite() && side > 0.0) {
            return Err(Error::InvalidTorus(format!("side must be positive, got {side}")));
        }
        if !(revolve_radius.is_finite() && revolve_radius > side / 2.0) {
            return Err(Error::InvalidTorus(format!(
                "revolve radius {revolve_radius} must exceed half the side {}",
                side / 2.0
            )));
        }
        let norm = axis.norm();
        if !norm.is_finite() || (norm - 1.0).abs() > 1e-9 {
            return Err(Error::InvalidTorus(format!("axis must be a unit vector, |axis| = {norm}")));
        }
        Ok(Self {
            revolve_radius,
            side,
            center,
            axis: Unit::new_unchecked(axis),
        })
    }

    pub fn revolve_radius(&self) -> f64 {
        self.revolve_radius
    }

    pub fn side(&self) -> f64 {
        self.side
    }

    pub fn center(&self) -> Point3<f64> {
        self.center
    }

    pub fn axis(&self) -> Unit<Vector3<f64>> {
        self.axis
    }

    pub fn half_side(&self) -> f64 {
        self.side / 2.0
    }

    pub fn inner_radius(&self) -> f64 {
        self.revolve_radius - self.half_side()
    }

    pub fn outer_radius(&self) -> f64 {
        self.revolve_radius + self.half_side()
    }

    /// Right-handed orthonormal frame `(e1, e2, axis)`. Angle zero lies along `e1`.
    pub fn basis(&self) -> (Vector3<f64>, Vector3<f64>, Vector3<f64>) {
        let a = self.axis.into_inner();
        let seed = if a.x.abs() < 0.9 { Vector3::x() } else { Vector3::y() };
        let e1 = (seed - a * a.dot(&seed)).normalize();
        let e2 = a.cross(&e1);
        (e1, e2, a)
    }

    /// Cylindrical coordinates `(radial distance, angle, axial offset)` of `p`.
    pub fn cylindrical(&self, p: &Point3<f64>) -> (f64, f64, f64) {
        let (e1, e2, a) = self.basis();
        let d = p - self.center;
        let x = d.dot(&e1);
        let y = d.dot(&e2);
        (x.hypot(y), y.atan2(x), d.dot(&a))
    }

    /// World point at the given cylindrical coordinates.
    pub fn from_cylindrical(&self, radial: f64, angle: f64, axial: f64) -> Point3<f64> {
        let (e1, e2, a) = self.basis();
        self.center + e1 * (radial * angle.cos()) + e2 * (radial * angle.sin()) + a * axial
    }

    /// Coordinates of `p` in the sector frame at `angle`: radial, tangential
    /// (toward increasing angle) and axial.
    pub fn sector_coords(&self, p: &Point3<f64>, angle: f64) -> (f64, f64, f64) {
        let (e1, e2, a) = self.basis();
        let u = e1 * angle.cos() + e2 * angle.sin();
        let w = a.cross(&u);
        let d = p - self.center;
        (d.dot(&u), d.dot(&w), d.dot(&a))
    }

    /// Signed distance-like margin to the boundary in the cross-section
    /// (square metric): positive inside, zero on the boundary.
    pub fn boundary_margin(&self, p: &Point3<f64>) -> f64 {
        let (r, _, z) = self.cylindrical(p);
        let hs = self.half_side();
        (hs - (r - self.revolve_radius).abs()).min(hs - z.abs())
    }

    pub fn contains(&self, p: &Point3<f64>) -> bool {
        point_in_torus(p, self)
    }

    pub fn volume(&self) -> f64 {
        torus_volume(self)
    }

    /// Half extents of the solid along the world axes.
    fn world_half_extents(&self) -> Vector3<f64> {
        let a = self.axis.into_inner();
        let hs = self.half_side();
        let ro = self.outer_radius();
        Vector3::from_fn(|i, _| ro * (1.0 - a[i] * a[i]).max(0.0).sqrt() + hs * a[i].abs())
    }
}

/// Closed-set membership in the solid torus.
pub fn point_in_torus(p: &Point3<f64>, t: &TorusSpec) -> bool {
    let (r, _, z) = t.cylindrical(p);
    let hs = t.half_side();
    r >= t.revolve_radius - hs && r <= t.revolve_radius + hs && z >= -hs && z <= hs
}

/// Pappus: the square of side `s` revolved at radius `R` sweeps `2πR s²`.
pub fn torus_volume(t: &TorusSpec) -> f64 {
    2.0 * std::f64::consts::PI * t.revolve_radius * t.side * t.side
}

/// Maps integer voxel coordinates to space.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Lattice {
    pub spacing: f64,
    pub origin: Point3<f64>,
}

impl Lattice {
    pub fn new(spacing: f64, origin: Point3<f64>) -> Self {
        Self { spacing, origin }
    }

    pub fn center(&self, v: Voxel) -> Point3<f64> {
        let h = self.spacing;
        self.origin
            + Vector3::new(
                h * (v[0] as f64 + 0.5),
                h * (v[1] as f64 + 0.5),
                h * (v[2] as f64 + 0.5),
            )
    }

    /// Lower corner of voxel `v`.
    pub fn corner(&self, v: Voxel) -> Point3<f64> {
        let h = self.spacing;
        self.origin + Vector3::new(h * v[0] as f64, h * v[1] as f64, h * v[2] as f64)
    }

    /// Voxel whose cell contains `p`.
    pub fn voxel_at(&self, p: &Point3<f64>) -> Voxel {
        let q = (p - self.origin) / self.spacing;
        [q.x.floor() as i32, q.y.floor() as i32, q.z.floor() as i32]
    }

    pub fn voxel_volume(&self) -> f64 {
        self.spacing.powi(3)
    }
}

/// Axis-aligned box of cubic voxels on a [`Lattice`].
///
/// Linear voxel order is x fastest, then y, then z; it matches the order of
/// [`VoxelSet`].
#[derive(Clone, Debug, PartialEq)]
pub struct VoxelGrid {
    lattice: Lattice,
    min: Voxel,
    dims: [usize; 3],
}

impl VoxelGrid {
    pub fn new(lattice: Lattice, min: Voxel, dims: [usize; 3]) -> Result<Self> {
        if dims.contains(&0) || !(lattice.spacing.is_finite() && lattice.spacing > 0.0) {
            return Err(Error::Coverage(format!(
                "grid needs positive dims and spacing, got {dims:?} at h = {}",
                lattice.spacing
            )));
        }
        Ok(Self { lattice, min, dims })
    }

    /// Grid symmetric about the torus center with `voxels_per_side` voxels
    /// across the cross-section side and at least one voxel of margin.
    pub fn for_torus(t: &TorusSpec, voxels_per_side: usize) -> Result<Self> {
        if voxels_per_side == 0 {
            return Err(Error::Coverage("resolution must be positive".into()));
        }
        let h = t.side() / voxels_per_side as f64;
        let ext = t.world_half_extents();
        let half = |e: f64| (e / h - 1e-9).ceil() as usize + 1;
        let hx = [half(ext.x), half(ext.y), half(ext.z)];
        let min = [-(hx[0] as i32), -(hx[1] as i32), -(hx[2] as i32)];
        Self::new(Lattice::new(h, t.center()), min, [2 * hx[0], 2 * hx[1], 2 * hx[2]])
    }

    /// Cubic `n × n × n` grid (n even, n ≥ 4) around the torus. The spacing is
    /// the largest `s / k`, `k` an integer, that still leaves a voxel of margin,
    /// so the cross-section side is a whole number of voxels.
    pub fn cube_for_torus(t: &TorusSpec, n: usize) -> Result<Self> {
        if n < 4 || !n.is_multiple_of(2) {
            return Err(Error::Coverage(format!("cube resolution must be even and >= 4, got {n}")));
        }
        let ext = t.world_half_extents();
        let span = 2.0 * ext.x.max(ext.y).max(ext.z);
        let k = ((n - 2) as f64 * t.side() / span + 1e-9).floor();
        if k < 1.0 {
            return Err(Error::Coverage(format!("{n} voxels per axis cannot cover the torus")));
        }
        let half = (n / 2) as i32;
        let g = Self::new(Lattice::new(t.side() / k, t.center()), [-half; 3], [n; 3])?;
        g.check_covers(t)?;
        Ok(g)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn spacing(&self) -> f64 {
        self.lattice.spacing
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn min_voxel(&self) -> Voxel {
        self.min
    }

    /// World position of the grid's lower corner.
    pub fn origin(&self) -> Point3<f64> {
        self.lattice.corner(self.min)
    }

    pub fn len(&self) -> usize {
        self.dims.iter().product()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains_voxel(&self, v: Voxel) -> bool {
        (0..3).all(|i| v[i] >= self.min[i] && ((v[i] - self.min[i]) as usize) < self.dims[i])
    }

    pub fn index(&self, v: Voxel) -> Option<usize> {
        if !self.contains_voxel(v) {
            return None;
        }
        let [nx, ny, _] = self.dims;
        let x = (v[0] - self.min[0]) as usize;
        let y = (v[1] - self.min[1]) as usize;
        let z = (v[2] - self.min[2]) as usize;
        Some(x + nx * (y + ny * z))
    }

    pub fn voxel(&self, index: usize) -> Voxel {
        let [nx, ny, _] = self.dims;
        let x = index % nx;
        let y = (index / nx) % ny;
        let z = index / (nx * ny);
        [self.min[0] + x as i32, self.min[1] + y as i32, self.min[2] + z as i32]
    }

    pub fn center(&self, v: Voxel) -> Point3<f64> {
        self.lattice.center(v)
    }

    /// True when the grid box holds the torus plus a voxel of margin on every side.
    pub fn covers(&self, t: &TorusSpec) -> bool {
        self.check_covers(t).is_ok()
    }

    pub fn check_covers(&self, t: &TorusSpec) -> Result<()> {
        let h = self.spacing();
        let lo = self.origin();
        let ext = t.world_half_extents();
        let c = t.center();
        for i in 0..3 {
            let hi = lo[i] + h * self.dims[i] as f64;
            let need_lo = c[i] - ext[i] - h;
            let need_hi = c[i] + ext[i] + h;
            // 1e-9 relative slack for round-off in the bounds themselves
            let eps = 1e-9 * (ext[i] + h);
            if lo[i] > need_lo + eps || hi < need_hi - eps {
                return Err(Error::Coverage(format!(
                    "axis {i}: grid spans [{:.6}, {:.6}], torus plus margin needs [{:.6}, {:.6}]",
                    lo[i], hi, need_lo, need_hi
                )));
            }
        }
        Ok(())
    }
}

/// Voxels of `g` whose centers lie in the closed torus solid.
pub fn domain_voxels(t: &TorusSpec, g: &VoxelGrid) -> Result<VoxelSet> {
    g.check_covers(t)?;
    let [nx, ny, nz] = g.dims();
    let min = g.min_voxel();
    let slabs: Vec<Vec<Voxel>> = (0..nz)
        .into_par_iter()
        .map(|z| {
            let mut out = Vec::new();
            for y in 0..ny {
                for x in 0..nx {
                    let v = [min[0] + x as i32, min[1] + y as i32, min[2] + z as i32];
                    if point_in_torus(&g.center(v), t) {
                        out.push(v);
                    }
                }
            }
            out
        })
        .collect();
    Ok(VoxelSet::from_sorted(slabs.into_iter().flatten().collect()))
}

/// Proper rigid motion `x ↦ R x + t`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RigidTransform {
    pub rotation: Rotation3<f64>,
    pub translation: Vector3<f64>,
}

impl Default for RigidTransform {
    fn default() -> Self {
        Self::identity()
    }
}

impl RigidTransform {
    pub fn identity() -> Self {
        Self {
            rotation: Rotation3::identity(),
            translation: Vector3::zeros(),
        }
    }

    /// Rejects matrices that are not orthonormal with determinant +1.
    pub fn from_matrix(m: Matrix3<f64>, translation: Vector3<f64>) -> Result<Self> {
        let ortho = (m.transpose() * m - Matrix3::identity()).abs().max();
        let det = m.determinant();
        if ortho > 1e-9 || (det - 1.0).abs() > 1e-9 {
            return Err(Error::Precondition(format!(
                "rotation must be orthonormal with det +1 (orthogonality error {ortho:.2e}, det {det})"
            )));
        }
        Ok(Self {
            rotation: Rotation3::from_matrix_unchecked(m),
            translation,
        })
    }

    /// Rotation by `angle` about `+z` followed by an in-plane translation.
    pub fn planar(angle: f64, tx: f64, ty: f64) -> Self {
        Self {
            rotation: Rotation3::from_axis_angle(&Vector3::z_axis(), angle),
            translation: Vector3::new(tx, ty, 0.0),
        }
    }

    pub fn about_axis(axis: &Unit<Vector3<f64>>, angle: f64, pivot: &Point3<f64>) -> Self {
        let rotation = Rotation3::from_axis_angle(axis, angle);
        let translation = pivot.coords - rotation * pivot.coords;
        Self { rotation, translation }
    }

    pub fn apply(&self, p: &Point3<f64>) -> Point3<f64> {
        self.rotation * p + self.translation
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &RigidTransform) -> RigidTransform {
        RigidTransform {
            rotation: self.rotation * other.rotation,
            translation: self.rotation * other.translation + self.translation,
        }
    }

    pub fn inverse(&self) -> RigidTransform {
        let rotation = self.rotation.inverse();
        RigidTransform {
            rotation,
            translation: -(rotation * self.translation),
        }
    }

    /// Row-major 3×4 `[R | t]`.
    pub fn to_row_major(&self) -> [f64; 12] {
        let m = self.rotation.matrix();
        let t = self.translation;
        [
            m[(0, 0)], m[(0, 1)], m[(0, 2)], t.x,
            m[(1, 0)], m[(1, 1)], m[(1, 2)], t.y,
            m[(2, 0)], m[(2, 1)], m[(2, 2)], t.z,
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn unit_torus() -> TorusSpec {
        TorusSpec::new(2.0, 1.0).unwrap()
    }

    #[test]
    fn membership_examples() {
        let t = unit_torus();
        assert!(point_in_torus(&Point3::new(2.0, 0.0, 0.0), &t));
        assert!(!point_in_torus(&Point3::new(3.0, 0.0, 0.0), &t));
        // closed set: the corner of the cross-section is inside
        assert!(point_in_torus(&Point3::new(0.0, 2.5, 0.5), &t));
        assert!(!point_in_torus(&Point3::new(0.0, 0.0, 0.0), &t));
    }

    #[test]
    fn volume_examples() {
        assert_relative_eq!(torus_volume(&unit_torus()), 4.0 * PI, max_relative = 1e-12);
        let t = TorusSpec::new(10.0, 2.0).unwrap();
        assert_relative_eq!(torus_volume(&t), 80.0 * PI, max_relative = 1e-12);
    }

    #[test]
    fn degenerate_torus_rejected() {
        assert!(matches!(TorusSpec::new(2.0, 0.0), Err(Error::InvalidTorus(_))));
        assert!(matches!(TorusSpec::new(0.5, 1.0), Err(Error::InvalidTorus(_))));
        assert!(TorusSpec::with_frame(2.0, 1.0, Point3::origin(), Vector3::new(0.0, 0.0, 2.0)).is_err());
    }

    #[test]
    fn cube_grid_volume_within_two_percent() {
        let t = unit_torus();
        let g = VoxelGrid::cube_for_torus(&t, 64).unwrap();
        let set = domain_voxels(&t, &g).unwrap();
        assert!(!set.is_empty());
        let vol = set.len() as f64 * g.lattice().voxel_volume();
        assert!((vol - 4.0 * PI).abs() / (4.0 * PI) < 0.02, "volume {vol}");
        assert!(set.iter().all(|v| point_in_torus(&g.center(*v), &t)));
    }

    #[test]
    fn uncovered_grid_is_an_error() {
        let t = unit_torus();
        let g = VoxelGrid::new(Lattice::new(0.1, Point3::origin()), [-10, -10, -10], [20, 20, 20]).unwrap();
        assert!(matches!(domain_voxels(&t, &g), Err(Error::Coverage(_))));
    }

    #[test]
    fn symmetric_grid_layout() {
        let t = unit_torus();
        let g = VoxelGrid::for_torus(&t, 8).unwrap();
        assert_eq!(g.dims(), [42, 42, 10]);
        assert!(g.covers(&t));
        for i in [0, 17, g.len() - 1] {
            assert_eq!(g.index(g.voxel(i)), Some(i));
        }
    }

    #[test]
    fn tilted_axis_membership() {
        let axis = Vector3::new(1.0, 0.0, 0.0);
        let t = TorusSpec::with_frame(2.0, 1.0, Point3::new(1.0, 1.0, 1.0), axis).unwrap();
        assert!(t.contains(&Point3::new(1.0, 3.0, 1.0)));
        assert!(t.contains(&Point3::new(1.0, 1.0, 3.0)));
        assert!(!t.contains(&Point3::new(3.0, 1.0, 1.0)));
        let g = VoxelGrid::for_torus(&t, 8).unwrap();
        assert!(g.covers(&t));
    }

    #[test]
    fn rigid_transform_algebra() {
        let a = RigidTransform::planar(0.3, 1.0, -2.0);
        let b = RigidTransform::planar(-1.1, 0.5, 0.25);
        let c = RigidTransform::about_axis(&Vector3::x_axis(), 0.7, &Point3::new(0.0, 1.0, 0.0));
        let p = Point3::new(0.2, -0.4, 1.5);
        let left = a.compose(&b).compose(&c).apply(&p);
        let right = a.compose(&b.compose(&c)).apply(&p);
        assert_relative_eq!(left, right, epsilon = 1e-12);
        assert_relative_eq!(a.inverse().compose(&a).apply(&p), p, epsilon = 1e-12);
        assert_relative_eq!(RigidTransform::identity().apply(&p), p);
        assert_relative_eq!(a.rotation.matrix().determinant(), 1.0, epsilon = 1e-12);
        let reflection = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, -1.0);
        assert!(RigidTransform::from_matrix(reflection, Vector3::zeros()).is_err());
    }
}
