//! Watertight boundary meshes of voxel solids, and STL/OBJ output.
//!
//! Vertices are keyed by doubled integer lattice coordinates, so corners,
//! edge midpoints and face centers all merge exactly. Where two voxels of the
//! solid touch along a single edge only, the four faces meeting there would
//! make the edge non-manifold. Each of the two voxels then gets its own vertex
//! at the edge midpoint and the faces along that edge are fanned from their
//! centers, so every mesh edge is used by exactly two triangles.

use std::collections::HashMap;
use std::io::Write;
use std::path::Path;

use nalgebra::{Point3, Vector3};

use crate::geometry::Lattice;
use crate::voxel::{Voxel, VoxelSet};
use crate::{Error, Result};

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TriangleMesh {
    pub vertices: Vec<Point3<f64>>,
    pub triangles: Vec<[u32; 3]>,
}

impl TriangleMesh {
    pub fn translate(&mut self, d: Vector3<f64>) {
        for v in &mut self.vertices {
            *v += d;
        }
    }

    pub fn triangle_count(&self) -> usize {
        self.triangles.len()
    }
}

type Key = [i64; 3];

struct Builder {
    lattice: Lattice,
    vertices: Vec<Point3<f64>>,
    index: HashMap<(Key, Option<Voxel>), u32>,
    triangles: Vec<[u32; 3]>,
}

impl Builder {
    fn vertex(&mut self, key: Key, owner: Option<Voxel>) -> u32 {
        if let Some(&i) = self.index.get(&(key, owner)) {
            return i;
        }
        let i = self.vertices.len() as u32;
        let h2 = self.lattice.spacing * 0.5;
        self.vertices.push(
            self.lattice.origin + Vector3::new(h2 * key[0] as f64, h2 * key[1] as f64, h2 * key[2] as f64),
        );
        self.index.insert((key, owner), i);
        i
    }
}

fn unit(axis: usize, sign: i32) -> Voxel {
    let mut u = [0; 3];
    u[axis] = sign;
    u
}

fn add(a: Voxel, b: Voxel) -> Voxel {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn voxels_to_mesh(voxels: &VoxelSet, lattice: &Lattice) -> Result<TriangleMesh> {
    let mask = voxels.mask().ok_or(Error::EmptyMesh)?;
    let filled = |v: Voxel| mask.get(v);
    let mut b = Builder {
        lattice: *lattice,
        vertices: Vec::new(),
        index: HashMap::new(),
        triangles: Vec::new(),
    };
    for &v in voxels.iter() {
        for axis in 0..3 {
            for sign in [-1, 1] {
                if filled(add(v, unit(axis, sign))) {
                    continue;
                }
                emit_face(&mut b, &filled, v, axis, sign);
            }
        }
    }
    Ok(TriangleMesh { vertices: b.vertices, triangles: b.triangles })
}

fn emit_face(b: &mut Builder, filled: &impl Fn(Voxel) -> bool, v: Voxel, axis: usize, sign: i32) {
    let (p, q) = ((axis + 1) % 3, (axis + 2) % 3);
    // corner offsets in (p, q), counter-clockwise seen from outside
    let mut loop_pq: [(i32, i32); 4] = [(0, 0), (1, 0), (1, 1), (0, 1)];
    if sign < 0 {
        loop_pq.reverse();
    }
    let plane = if sign > 0 { 1 } else { 0 };
    let corner_key = |(dp, dq): (i32, i32)| {
        let mut c = [0i64; 3];
        c[axis] = 2 * (v[axis] + plane) as i64;
        c[p] = 2 * (v[p] + dp) as i64;
        c[q] = 2 * (v[q] + dq) as i64;
        c
    };
    let out = add(v, unit(axis, sign));
    // for each side of the loop, a split vertex if that edge is pinched
    let mut split = [false; 4];
    for (e, s) in split.iter_mut().enumerate() {
        let (a0, a1) = (loop_pq[e], loop_pq[(e + 1) % 4]);
        // the side is parallel to p when q is constant, and vice versa
        let (side_axis, off) = if a0.1 == a1.1 { (q, a0.1) } else { (p, a0.0) };
        let step = unit(side_axis, if off == 1 { 1 } else { -1 });
        *s = filled(add(out, step)) && !filled(add(v, step));
    }
    let corners: Vec<u32> = loop_pq.iter().map(|&c| b.vertex(corner_key(c), None)).collect();
    if !split.iter().any(|&s| s) {
        b.triangles.push([corners[0], corners[1], corners[2]]);
        b.triangles.push([corners[0], corners[2], corners[3]]);
        return;
    }
    let mut ring = Vec::with_capacity(8);
    for e in 0..4 {
        ring.push(corners[e]);
        if split[e] {
            let k0 = corner_key(loop_pq[e]);
            let k1 = corner_key(loop_pq[(e + 1) % 4]);
            let mid = [(k0[0] + k1[0]) / 2, (k0[1] + k1[1]) / 2, (k0[2] + k1[2]) / 2];
            ring.push(b.vertex(mid, Some(v)));
        }
    }
    let mut center = [0i64; 3];
    center[axis] = 2 * (v[axis] + plane) as i64;
    center[p] = 2 * v[p] as i64 + 1;
    center[q] = 2 * v[q] as i64 + 1;
    let c = b.vertex(center, None);
    for i in 0..ring.len() {
        b.triangles.push([c, ring[i], ring[(i + 1) % ring.len()]]);
    }
}

/// Sum of signed tetrahedron volumes against the first vertex.
pub fn mesh_volume(mesh: &TriangleMesh) -> f64 {
    let Some(o) = mesh.vertices.first() else {
        return 0.0;
    };
    mesh.triangles
        .iter()
        .map(|t| {
            let a = mesh.vertices[t[0] as usize] - o;
            let b = mesh.vertices[t[1] as usize] - o;
            let c = mesh.vertices[t[2] as usize] - o;
            a.dot(&b.cross(&c))
        })
        .sum::<f64>()
        / 6.0
}

/// Closed, edge-manifold and consistently wound with positive volume: every
/// directed edge occurs once and its reverse once.
pub fn watertight_check(mesh: &TriangleMesh) -> bool {
    if mesh.triangles.is_empty() {
        return false;
    }
    let n = mesh.vertices.len() as u32;
    let mut edges: Vec<u64> = Vec::with_capacity(mesh.triangles.len() * 3);
    for t in &mesh.triangles {
        if t.iter().any(|&i| i >= n) || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
            return false;
        }
        for e in 0..3 {
            edges.push(((t[e] as u64) << 32) | t[(e + 1) % 3] as u64);
        }
    }
    edges.sort_unstable();
    if edges.windows(2).any(|w| w[0] == w[1]) {
        return false;
    }
    let all_paired = edges.iter().all(|&e| edges.binary_search(&e.rotate_left(32)).is_ok());
    all_paired && mesh_volume(mesh) > 0.0
}

const STL_HEADER: &[u8] = b"binary STL, interlock-truss";

pub fn stl_bytes(mesh: &TriangleMesh) -> Vec<u8> {
    let mut out = Vec::with_capacity(84 + 50 * mesh.triangles.len());
    let mut header = [0u8; 80];
    header[..STL_HEADER.len()].copy_from_slice(STL_HEADER);
    out.extend_from_slice(&header);
    out.extend_from_slice(&(mesh.triangles.len() as u32).to_le_bytes());
    for t in &mesh.triangles {
        let [a, b, c] = t.map(|i| mesh.vertices[i as usize]);
        let n = (b - a).cross(&(c - a));
        let n = if n.norm() > 0.0 { n.normalize() } else { n };
        for x in [n.x, n.y, n.z, a.x, a.y, a.z, b.x, b.y, b.z, c.x, c.y, c.z] {
            out.extend_from_slice(&(x as f32).to_le_bytes());
        }
        out.extend_from_slice(&0u16.to_le_bytes());
    }
    out
}

pub fn write_stl_binary(mesh: &TriangleMesh, path: &Path) -> Result<()> {
    std::fs::write(path, stl_bytes(mesh))?;
    Ok(())
}

pub fn write_obj(mesh: &TriangleMesh, path: &Path) -> Result<()> {
    let mut w = std::io::BufWriter::new(std::fs::File::create(path)?);
    for v in &mesh.vertices {
        writeln!(w, "v {} {} {}", v.x, v.y, v.z)?;
    }
    for t in &mesh.triangles {
        writeln!(w, "f {} {} {}", t[0] + 1, t[1] + 1, t[2] + 1)?;
    }
    w.flush()?;
    Ok(())
}
