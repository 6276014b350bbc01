//! Splitting one Connector into two halves around a socket, plus the peg.

use nalgebra::Point3;

use crate::geometry::{point_in_torus, TorusSpec, VoxelGrid};
use crate::voronoi::ConnectorRegion;
use crate::voxel::{Voxel, VoxelSet};
use crate::{Error, Result};

#[derive(Clone, Debug, PartialEq)]
pub struct SplitSpec {
    pub target_label: usize,
    /// Peg cross-section side `p`.
    pub peg_side: f64,
    /// Peg length `ℓ`, measured inward from the outer face.
    pub peg_length: f64,
    /// Play around the peg, in voxels.
    pub clearance: usize,
}

impl SplitSpec {
    pub fn defaults(t: &TorusSpec) -> Self {
        Self {
            target_label: 0,
            peg_side: 0.4 * t.side(),
            peg_length: 0.7 * t.side(),
            clearance: 1,
        }
    }

    pub fn validate(&self, t: &TorusSpec, valence: usize) -> Result<()> {
        let s = t.side();
        if !(self.peg_side > 0.0 && self.peg_side < s) {
            return Err(Error::Config(format!("peg side {} must lie in (0, s)", self.peg_side)));
        }
        if !(self.peg_length > 0.0 && self.peg_length < s) {
            return Err(Error::Config(format!("peg length {} must lie in (0, s)", self.peg_length)));
        }
        if self.target_label >= valence {
            return Err(Error::Config(format!(
                "split target label {} out of range for valence {valence}",
                self.target_label
            )));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SplitConnector {
    pub label: usize,
    /// Negative tangential side of the split plane.
    pub half_a: VoxelSet,
    pub half_b: VoxelSet,
    pub peg: VoxelSet,
    pub socket: VoxelSet,
}

/// Sector-center angle `2π·label/n`.
pub fn sector_angle(label: usize, valence: usize) -> f64 {
    std::f64::consts::TAU * label as f64 / valence as f64
}

struct Channel {
    angle: f64,
    half_width: f64,
    inner: f64,
}

impl Channel {
    fn contains(&self, t: &TorusSpec, p: &Point3<f64>) -> bool {
        let (a, b, z) = t.sector_coords(p, self.angle);
        b.abs() <= self.half_width && z.abs() <= self.half_width && a >= self.inner
    }
}

pub fn split_connector(
    region: &ConnectorRegion,
    spec: &SplitSpec,
    valence: usize,
    t: &TorusSpec,
    g: &VoxelGrid,
) -> Result<SplitConnector> {
    spec.validate(t, valence)?;
    if region.label != spec.target_label {
        return Err(Error::Precondition(format!(
            "region label {} is not the split target {}",
            region.label, spec.target_label
        )));
    }
    if region.voxels.is_empty() || !region.voxels.is_connected() {
        return Err(Error::Precondition(format!(
            "Connector {} must be a single nonempty component",
            region.label
        )));
    }
    let h = g.spacing();
    let angle = sector_angle(region.label, valence);
    let play = spec.clearance as f64 * h;
    let socket_box = Channel {
        angle,
        half_width: spec.peg_side / 2.0 + play,
        inner: t.outer_radius() - spec.peg_length - play,
    };
    let peg_box = Channel {
        angle,
        half_width: spec.peg_side / 2.0,
        inner: t.outer_radius() - spec.peg_length,
    };

    if let Some(v) = box_voxels(&socket_box, t, g)
        .into_iter()
        .find(|v| !region.voxels.contains(v))
    {
        return Err(Error::Split(format!(
            "socket of Connector {} reaches voxel {v:?} owned by another Connector",
            region.label
        )));
    }

    let lattice = g.lattice();
    let mut half_a = Vec::new();
    let mut half_b = Vec::new();
    let mut socket = Vec::new();
    let mut peg = Vec::new();
    for v in region.voxels.iter() {
        let c = lattice.center(*v);
        if socket_box.contains(t, &c) {
            socket.push(*v);
            if peg_box.contains(t, &c) {
                peg.push(*v);
            }
        } else if t.sector_coords(&c, angle).1 < 0.0 {
            half_a.push(*v);
        } else {
            half_b.push(*v);
        }
    }
    Ok(SplitConnector {
        label: region.label,
        half_a: VoxelSet::from_sorted(half_a),
        half_b: VoxelSet::from_sorted(half_b),
        peg: VoxelSet::from_sorted(peg),
        socket: VoxelSet::from_sorted(socket),
    })
}

/// Torus voxels whose centers fall in the channel.
fn box_voxels(ch: &Channel, t: &TorusSpec, g: &VoxelGrid) -> Vec<Voxel> {
    let lattice = g.lattice();
    let outer = t.outer_radius();
    let mut lo = [i32::MAX; 3];
    let mut hi = [i32::MIN; 3];
    for a in [ch.inner, outer] {
        for b in [-ch.half_width, ch.half_width] {
            for z in [-ch.half_width, ch.half_width] {
                // the box corner in world space, via the sector frame
                let p = corner(t, ch.angle, a, b, z);
                let v = lattice.voxel_at(&p);
                for i in 0..3 {
                    lo[i] = lo[i].min(v[i] - 1);
                    hi[i] = hi[i].max(v[i] + 1);
                }
            }
        }
    }
    let mut out = Vec::new();
    for z in lo[2]..=hi[2] {
        for y in lo[1]..=hi[1] {
            for x in lo[0]..=hi[0] {
                let c = lattice.center([x, y, z]);
                if point_in_torus(&c, t) && ch.contains(t, &c) {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

fn corner(t: &TorusSpec, angle: f64, a: f64, b: f64, z: f64) -> Point3<f64> {
    let (e1, e2, ax) = t.basis();
    let u = e1 * angle.cos() + e2 * angle.sin();
    let w = ax.cross(&u);
    t.center() + u * a + w * b + ax * z
}

/// Smallest number of socket voxels between the peg and the socket wall,
/// measured along the lattice axes across the peg's long sides (the two axes
/// other than `radial_axis`).
pub fn peg_clearance(sc: &SplitConnector, radial_axis: usize) -> usize {
    let Some(mask) = sc.socket.mask() else {
        return 0;
    };
    let mut best = usize::MAX;
    for v in sc.peg.iter() {
        for axis in (0..3).filter(|&i| i != radial_axis) {
            for sign in [-1, 1] {
                let mut k = 0;
                loop {
                    let mut w = *v;
                    w[axis] += sign * (k + 1);
                    if sc.peg.contains(&w) {
                        break;
                    }
                    if !mask.get(w) {
                        best = best.min(k as usize);
                        break;
                    }
                    k += 1;
                }
            }
        }
    }
    if best == usize::MAX {
        0
    } else {
        best
    }
}

/// The three loose pieces with their ids.
pub fn make_loose_pieces(sc: &SplitConnector) -> Vec<(String, VoxelSet)> {
    vec![
        ("half_a".to_string(), sc.half_a.clone()),
        ("half_b".to_string(), sc.half_b.clone()),
        ("peg".to_string(), sc.peg.clone()),
    ]
}
