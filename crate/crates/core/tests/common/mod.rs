#![allow(dead_code)]

use std::collections::HashMap;

use interlock_truss::curves::SiteCurve;
use interlock_truss::TorusSpec;

/// Triangles read back from a binary STL, vertices only.
pub struct ParsedStl {
    pub header: [u8; 80],
    pub triangles: Vec<[[f32; 3]; 3]>,
}

pub fn parse_stl(bytes: &[u8]) -> Result<ParsedStl, String> {
    if bytes.len() < 84 {
        return Err(format!("file too short: {} bytes", bytes.len()));
    }
    let mut header = [0u8; 80];
    header.copy_from_slice(&bytes[..80]);
    let count = u32::from_le_bytes(bytes[80..84].try_into().unwrap()) as usize;
    if bytes.len() != 84 + 50 * count {
        return Err(format!("size {} does not match {count} triangles", bytes.len()));
    }
    let f = |off: usize| f32::from_le_bytes(bytes[off..off + 4].try_into().unwrap());
    let mut triangles = Vec::with_capacity(count);
    for i in 0..count {
        let base = 84 + 50 * i + 12;
        let mut tri = [[0f32; 3]; 3];
        for (k, v) in tri.iter_mut().enumerate() {
            for (a, c) in v.iter_mut().enumerate() {
                *c = f(base + 12 * k + 4 * a);
            }
        }
        if bytes[84 + 50 * i + 48] != 0 || bytes[84 + 50 * i + 49] != 0 {
            return Err(format!("triangle {i} has a nonzero attribute"));
        }
        triangles.push(tri);
    }
    Ok(ParsedStl { header, triangles })
}

impl ParsedStl {
    pub fn volume(&self) -> f64 {
        let mut v = 0.0;
        for t in &self.triangles {
            let [a, b, c] = t.map(|p| p.map(f64::from));
            v += a[0] * (b[1] * c[2] - b[2] * c[1]) - a[1] * (b[0] * c[2] - b[2] * c[0])
                + a[2] * (b[0] * c[1] - b[1] * c[0]);
        }
        v / 6.0
    }

    /// Every directed edge between two positions is matched by as many
    /// reverse edges. Positions are compared exactly, so the split vertices
    /// the mesher places on pinched voxel edges coincide here and such an
    /// edge is seen twice in each direction.
    pub fn is_closed(&self) -> bool {
        let key = |p: [f32; 3]| p.map(f32::to_bits);
        let mut ids: HashMap<[u32; 3], usize> = HashMap::new();
        let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
        for t in &self.triangles {
            let idx: Vec<usize> = t
                .iter()
                .map(|p| {
                    let n = ids.len();
                    *ids.entry(key(*p)).or_insert(n)
                })
                .collect();
            for k in 0..3 {
                *edges.entry((idx[k], idx[(k + 1) % 3])).or_default() += 1;
            }
        }
        edges.iter().all(|(&(a, b), &c)| a != b && edges.get(&(b, a)) == Some(&c))
    }
}

pub fn in_torus(t: &TorusSpec, p: [f64; 3]) -> bool {
    let c = t.center();
    let (x, y, z) = (p[0] - c.x, p[1] - c.y, p[2] - c.z);
    let rho = x.hypot(y);
    (rho - t.revolve_radius()).abs() <= t.half_side() && z.abs() <= t.half_side()
}

/// Exhaustive nearest sample: smallest (distance², label, sample index).
pub fn brute_label(curves: &[SiteCurve], q: [f64; 3]) -> usize {
    let mut best = (f64::INFINITY, usize::MAX, usize::MAX);
    for c in curves {
        for (i, p) in c.points.iter().enumerate() {
            let d = (p.x - q[0]).powi(2) + (p.y - q[1]).powi(2) + (p.z - q[2]).powi(2);
            let cand = (d, c.label, i);
            if cand.0 < best.0 || (cand.0 == best.0 && (cand.1, cand.2) < (best.1, best.2)) {
                best = cand;
            }
        }
    }
    best.1
}
