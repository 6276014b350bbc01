//! Voxel-sampled Voronoi decomposition of the torus by labeled site curves.

use std::io::{Read, Write};

use nalgebra::Point3;
use rayon::prelude::*;

use crate::curves::SiteCurve;
use crate::geometry::{point_in_torus, Lattice, RigidTransform, TorusSpec, VoxelGrid};
use crate::kdtree::KdTree;
use crate::voxel::{Voxel, VoxelSet};
use crate::{Error, Result};

pub const OUTSIDE: u8 = 255;

/// One `u8` label per grid voxel in grid order (x fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct LabelField {
    grid: VoxelGrid,
    valence: usize,
    labels: Vec<u8>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConnectorRegion {
    pub label: usize,
    pub voxels: VoxelSet,
    pub volume: f64,
}

impl LabelField {
    pub fn from_labels(grid: VoxelGrid, valence: usize, labels: Vec<u8>) -> Result<Self> {
        if labels.len() != grid.len() {
            return Err(Error::Precondition(format!(
                "{} labels for a grid of {} voxels",
                labels.len(),
                grid.len()
            )));
        }
        if valence == 0 || valence >= OUTSIDE as usize {
            return Err(Error::Precondition(format!("valence {valence} out of range")));
        }
        Ok(Self { grid, valence, labels })
    }

    pub fn grid(&self) -> &VoxelGrid {
        &self.grid
    }

    pub fn valence(&self) -> usize {
        self.valence
    }

    pub fn labels(&self) -> &[u8] {
        &self.labels
    }

    /// `None` outside the grid box, `Some(OUTSIDE)` outside the torus.
    pub fn get(&self, v: Voxel) -> Option<u8> {
        self.grid.index(v).map(|i| self.labels[i])
    }

    pub fn inside_count(&self) -> usize {
        self.labels.iter().filter(|&&l| l != OUTSIDE).count()
    }

    pub fn counts(&self) -> Vec<usize> {
        let mut c = vec![0; self.valence];
        for &l in &self.labels {
            if l != OUTSIDE {
                c[l as usize] += 1;
            }
        }
        c
    }

    /// Little-endian: dims (3×u32), h (f64), origin (3×f64), n (u32), labels.
    pub fn write_to<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        for d in self.grid.dims() {
            w.write_all(&(d as u32).to_le_bytes())?;
        }
        w.write_all(&self.grid.spacing().to_le_bytes())?;
        let o = self.grid.origin();
        for c in [o.x, o.y, o.z] {
            w.write_all(&c.to_le_bytes())?;
        }
        w.write_all(&(self.valence as u32).to_le_bytes())?;
        w.write_all(&self.labels)
    }

    /// The grid of the result has its lattice origin at the stored corner and
    /// voxel indices starting at zero.
    pub fn read_from<R: Read>(mut r: R) -> Result<Self> {
        let mut u = [0u8; 4];
        let mut f = [0u8; 8];
        let mut dims = [0usize; 3];
        for d in &mut dims {
            r.read_exact(&mut u)?;
            *d = u32::from_le_bytes(u) as usize;
        }
        r.read_exact(&mut f)?;
        let h = f64::from_le_bytes(f);
        let mut o = [0.0; 3];
        for c in &mut o {
            r.read_exact(&mut f)?;
            *c = f64::from_le_bytes(f);
        }
        r.read_exact(&mut u)?;
        let n = u32::from_le_bytes(u) as usize;
        let grid = VoxelGrid::new(Lattice::new(h, Point3::new(o[0], o[1], o[2])), [0, 0, 0], dims)?;
        let mut labels = vec![0u8; grid.len()];
        r.read_exact(&mut labels)?;
        Self::from_labels(grid, n, labels)
    }
}

/// Labels every torus voxel with the label of its nearest curve sample.
/// Ties go to the smaller label, then the smaller sample index.
pub fn label_voxels(curves: &[SiteCurve], t: &TorusSpec, g: &VoxelGrid) -> Result<LabelField> {
    if curves.is_empty() {
        return Err(Error::EmptyCurveSet);
    }
    g.check_covers(t)?;
    let mut ordered: Vec<&SiteCurve> = curves.iter().collect();
    ordered.sort_by_key(|c| c.label);
    let valence = ordered.last().map_or(0, |c| c.label + 1);
    if valence >= OUTSIDE as usize {
        return Err(Error::Precondition(format!("at most 254 labels supported, got {valence}")));
    }
    let mut points = Vec::new();
    let mut owner = Vec::new();
    for c in &ordered {
        for p in &c.points {
            points.push([p.x, p.y, p.z]);
            owner.push(c.label as u8);
        }
    }
    if points.is_empty() {
        return Err(Error::EmptyCurveSet);
    }
    let tree = KdTree::new(&points);
    let [nx, ny, nz] = g.dims();
    let min = g.min_voxel();
    let slabs: Vec<Vec<u8>> = (0..nz)
        .into_par_iter()
        .map(|z| {
            let mut out = vec![OUTSIDE; nx * ny];
            let mut hint = None;
            for y in 0..ny {
                for x in 0..nx {
                    let v = [min[0] + x as i32, min[1] + y as i32, min[2] + z as i32];
                    let c = g.center(v);
                    if !point_in_torus(&c, t) {
                        continue;
                    }
                    let best = tree.nearest(&[c.x, c.y, c.z], hint).expect("nonempty tree");
                    hint = Some(best.id);
                    out[x + nx * y] = owner[best.id as usize];
                }
            }
            out
        })
        .collect();
    LabelField::from_labels(g.clone(), valence, slabs.concat())
}

/// One region per label, in label order.
pub fn extract_regions(field: &LabelField) -> Vec<ConnectorRegion> {
    let mut sets: Vec<Vec<Voxel>> = vec![Vec::new(); field.valence];
    for (i, &l) in field.labels.iter().enumerate() {
        if l != OUTSIDE {
            sets[l as usize].push(field.grid.voxel(i));
        }
    }
    let cell = field.grid.lattice().voxel_volume();
    sets.into_iter()
        .enumerate()
        .map(|(label, v)| {
            let voxels = VoxelSet::from_sorted(v);
            ConnectorRegion {
                label,
                volume: voxels.len() as f64 * cell,
                voxels,
            }
        })
        .collect()
}

/// Number of face-connected components.
pub fn check_connectivity(region: &ConnectorRegion) -> usize {
    region.voxels.components().len()
}

/// Rotational congruence of a field: each torus voxel is turned by `2π/n`
/// about the axis and compared, after the label shift `k → k + 1`, with the
/// voxel its image lands in. Images that land outside the torus are skipped.
/// Returns `(mismatches, compared)`.
pub fn rotation_mismatch(field: &LabelField, t: &TorusSpec) -> (usize, usize) {
    let n = field.valence;
    let rot = RigidTransform::about_axis(&t.axis(), std::f64::consts::TAU / n as f64, &t.center());
    let g = &field.grid;
    let lattice = *g.lattice();
    let [nx, ny, nz] = g.dims();
    let per_slab: Vec<(usize, usize)> = (0..nz)
        .into_par_iter()
        .map(|z| {
            let (mut bad, mut total) = (0, 0);
            for y in 0..ny {
                for x in 0..nx {
                    let i = x + nx * (y + ny * z);
                    let l = field.labels[i];
                    if l == OUTSIDE {
                        continue;
                    }
                    let image = lattice.voxel_at(&rot.apply(&g.center(g.voxel(i))));
                    match field.get(image) {
                        Some(m) if m != OUTSIDE => {
                            total += 1;
                            if m as usize != (l as usize + 1) % n {
                                bad += 1;
                            }
                        }
                        _ => {}
                    }
                }
            }
            (bad, total)
        })
        .collect();
    per_slab.into_iter().fold((0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
}
