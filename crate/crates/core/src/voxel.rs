//! Sparse voxel sets on an integer lattice.

use std::cmp::Ordering;
use std::collections::VecDeque;

/// Integer lattice coordinate `[x, y, z]`.
pub type Voxel = [i32; 3];

/// Ordering used everywhere: z, then y, then x.
#[inline]
pub fn voxel_cmp(a: &Voxel, b: &Voxel) -> Ordering {
    (a[2], a[1], a[0]).cmp(&(b[2], b[1], b[0]))
}

pub const FACE_NEIGHBORS: [Voxel; 6] = [
    [1, 0, 0],
    [-1, 0, 0],
    [0, 1, 0],
    [0, -1, 0],
    [0, 0, 1],
    [0, 0, -1],
];

#[inline]
pub fn add(a: Voxel, b: Voxel) -> Voxel {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

/// Sorted, duplicate-free set of voxels.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VoxelSet {
    voxels: Vec<Voxel>,
}

impl VoxelSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Caller guarantees the input is sorted by [`voxel_cmp`] without duplicates.
    pub fn from_sorted(voxels: Vec<Voxel>) -> Self {
        debug_assert!(voxels.windows(2).all(|w| voxel_cmp(&w[0], &w[1]) == Ordering::Less));
        Self { voxels }
    }

    pub fn from_unsorted(mut voxels: Vec<Voxel>) -> Self {
        voxels.sort_unstable_by(voxel_cmp);
        voxels.dedup();
        Self { voxels }
    }

    pub fn len(&self) -> usize {
        self.voxels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.voxels.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Voxel> {
        self.voxels.iter()
    }

    pub fn as_slice(&self) -> &[Voxel] {
        &self.voxels
    }

    pub fn into_vec(self) -> Vec<Voxel> {
        self.voxels
    }

    pub fn contains(&self, v: &Voxel) -> bool {
        self.voxels.binary_search_by(|p| voxel_cmp(p, v)).is_ok()
    }

    pub fn union(&self, other: &VoxelSet) -> VoxelSet {
        let (a, b) = (&self.voxels, &other.voxels);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match voxel_cmp(&a[i], &b[j]) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push(a[i]);
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        VoxelSet { voxels: out }
    }

    pub fn intersection(&self, other: &VoxelSet) -> VoxelSet {
        self.merge_filter(other, true)
    }

    pub fn difference(&self, other: &VoxelSet) -> VoxelSet {
        self.merge_filter(other, false)
    }

    fn merge_filter(&self, other: &VoxelSet, keep_common: bool) -> VoxelSet {
        let b = &other.voxels;
        let mut j = 0;
        let mut out = Vec::new();
        for v in &self.voxels {
            while j < b.len() && voxel_cmp(&b[j], v) == Ordering::Less {
                j += 1;
            }
            let common = j < b.len() && b[j] == *v;
            if common == keep_common {
                out.push(*v);
            }
        }
        VoxelSet { voxels: out }
    }

    pub fn is_disjoint(&self, other: &VoxelSet) -> bool {
        let (a, b) = (&self.voxels, &other.voxels);
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match voxel_cmp(&a[i], &b[j]) {
                Ordering::Less => i += 1,
                Ordering::Greater => j += 1,
                Ordering::Equal => return false,
            }
        }
        true
    }

    pub fn translate(&self, d: Voxel) -> VoxelSet {
        VoxelSet {
            voxels: self.voxels.iter().map(|v| add(*v, d)).collect(),
        }
    }

    /// Image under an arbitrary voxel map.
    pub fn map(&self, f: impl Fn(Voxel) -> Voxel) -> VoxelSet {
        VoxelSet::from_unsorted(self.voxels.iter().map(|v| f(*v)).collect())
    }

    pub fn filter(&self, f: impl Fn(&Voxel) -> bool) -> VoxelSet {
        VoxelSet {
            voxels: self.voxels.iter().copied().filter(|v| f(v)).collect(),
        }
    }

    /// Inclusive bounding box `(min, max)`.
    pub fn bounds(&self) -> Option<(Voxel, Voxel)> {
        let first = *self.voxels.first()?;
        let mut lo = first;
        let mut hi = first;
        for v in &self.voxels {
            for i in 0..3 {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        Some((lo, hi))
    }

    pub fn mask(&self) -> Option<VoxelMask> {
        let (lo, hi) = self.bounds()?;
        let mut m = VoxelMask::new(lo, hi);
        for v in &self.voxels {
            m.set(*v);
        }
        Some(m)
    }

    /// Face-connected components, each sorted, ordered by their first voxel.
    pub fn components(&self) -> Vec<VoxelSet> {
        let Some(mask) = self.mask() else {
            return Vec::new();
        };
        let mut seen = VoxelMask::new(mask.min, mask.max);
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for &start in &self.voxels {
            if seen.get(start) {
                continue;
            }
            seen.set(start);
            queue.push_back(start);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for d in FACE_NEIGHBORS {
                    let w = add(v, d);
                    if mask.get(w) && !seen.get(w) {
                        seen.set(w);
                        queue.push_back(w);
                    }
                }
            }
            out.push(VoxelSet::from_unsorted(comp));
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }
}

impl FromIterator<Voxel> for VoxelSet {
    fn from_iter<I: IntoIterator<Item = Voxel>>(iter: I) -> Self {
        VoxelSet::from_unsorted(iter.into_iter().collect())
    }
}

impl<'a> IntoIterator for &'a VoxelSet {
    type Item = &'a Voxel;
    type IntoIter = std::slice::Iter<'a, Voxel>;
    fn into_iter(self) -> Self::IntoIter {
        self.voxels.iter()
    }
}

/// Dense bitmap over an inclusive box. Queries outside the box read as empty.
#[derive(Clone, Debug)]
pub struct VoxelMask {
    min: Voxel,
    max: Voxel,
    dims: [usize; 3],
    bits: Vec<u64>,
}

impl VoxelMask {
    pub fn new(min: Voxel, max: Voxel) -> Self {
        let dims = [
            (max[0] - min[0] + 1).max(0) as usize,
            (max[1] - min[1] + 1).max(0) as usize,
            (max[2] - min[2] + 1).max(0) as usize,
        ];
        let n = dims[0] * dims[1] * dims[2];
        Self {
            min,
            max,
            dims,
            bits: vec![0; n.div_ceil(64)],
        }
    }

    pub fn min(&self) -> Voxel {
        self.min
    }

    pub fn max(&self) -> Voxel {
        self.max
    }

    #[inline]
    fn index(&self, v: Voxel) -> Option<usize> {
        let mut idx = 0usize;
        for i in (0..3).rev() {
            let o = v[i] - self.min[i];
            if o < 0 || o as usize >= self.dims[i] {
                return None;
            }
            idx = idx * self.dims[i] + o as usize;
        }
        Some(idx)
    }

    #[inline]
    pub fn get(&self, v: Voxel) -> bool {
        match self.index(v) {
            Some(i) => self.bits[i >> 6] >> (i & 63) & 1 == 1,
            None => false,
        }
    }

    /// Panics if `v` lies outside the box.
    #[inline]
    pub fn set(&mut self, v: Voxel) {
        let i = self.index(v).expect("voxel outside mask bounds");
        self.bits[i >> 6] |= 1 << (i & 63);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(v: &[Voxel]) -> VoxelSet {
        VoxelSet::from_unsorted(v.to_vec())
    }

    #[test]
    fn boolean_ops() {
        let a = set(&[[0, 0, 0], [1, 0, 0], [2, 0, 0]]);
        let b = set(&[[1, 0, 0], [0, 0, 1]]);
        assert_eq!(a.union(&b).len(), 4);
        assert_eq!(a.intersection(&b).as_slice(), &[[1, 0, 0]]);
        assert_eq!(a.difference(&b).as_slice(), &[[0, 0, 0], [2, 0, 0]]);
        assert!(!a.is_disjoint(&b));
        assert!(a.is_disjoint(&a.translate([0, 5, 0])));
        assert!(a.contains(&[2, 0, 0]));
        assert!(!a.contains(&[3, 0, 0]));
    }

    #[test]
    fn ordering_is_z_major() {
        let s = set(&[[5, 0, 0], [0, 0, 1], [0, 1, 0]]);
        assert_eq!(s.as_slice(), &[[5, 0, 0], [0, 1, 0], [0, 0, 1]]);
    }

    #[test]
    fn components_split_on_gaps() {
        let s = set(&[[0, 0, 0], [1, 0, 0], [3, 0, 0], [1, 1, 1]]);
        let c = s.components();
        assert_eq!(c.len(), 3);
        assert_eq!(c.iter().map(VoxelSet::len).sum::<usize>(), 4);
        assert!(set(&[[0, 0, 0], [0, 0, 1], [0, 1, 1]]).is_connected());
    }

    #[test]
    fn mask_matches_set() {
        let s = set(&[[-3, 2, 7], [4, -1, 0], [0, 0, 0]]);
        let m = s.mask().unwrap();
        assert!(s.iter().all(|v| m.get(*v)));
        assert!(!m.get([1, 1, 1]));
        assert!(!m.get([100, 0, 0]));
        assert_eq!(s.bounds(), Some(([-3, -1, 0], [4, 2, 7])));
    }
}
