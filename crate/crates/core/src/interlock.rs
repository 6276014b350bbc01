//! Translational escape analysis of voxel assemblies.
//!
//! A piece escapes along an integer step `d` when it can be moved by
//! `d, 2d, 3d, ...` without ever overlapping another piece until it is clear
//! of them. Only straight translations are tested; rotational blocking is
//! not considered.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::voxel::{Voxel, VoxelSet};
use crate::{Error, Result};

pub type Direction = [i32; 3];

pub const MOTION_MODEL: &str = "straight-line translations only; rotational blocking is not tested";

#[derive(Clone, Debug, PartialEq)]
pub struct Piece {
    pub id: String,
    pub voxels: VoxelSet,
}

impl Piece {
    pub fn new(id: impl Into<String>, voxels: VoxelSet) -> Self {
        Self { id: id.into(), voxels }
    }
}

/// Pieces in a common lattice frame, pairwise disjoint.
#[derive(Clone, Debug, Default)]
pub struct Assembly {
    pieces: Vec<Piece>,
}

impl Assembly {
    pub fn new(pieces: Vec<Piece>) -> Result<Self> {
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if pieces[i].id == pieces[j].id {
                    return Err(Error::Precondition(format!("duplicate piece id {}", pieces[i].id)));
                }
                if !pieces[i].voxels.is_disjoint(&pieces[j].voxels) {
                    return Err(Error::Precondition(format!(
                        "pieces {} and {} overlap",
                        pieces[i].id, pieces[j].id
                    )));
                }
            }
        }
        Ok(Self { pieces })
    }

    pub fn pieces(&self) -> &[Piece] {
        &self.pieces
    }

    pub fn len(&self) -> usize {
        self.pieces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pieces.is_empty()
    }

    /// The assembly without the named pieces.
    pub fn without(&self, ids: &[&str]) -> Assembly {
        Assembly {
            pieces: self.pieces.iter().filter(|p| !ids.contains(&p.id.as_str())).cloned().collect(),
        }
    }

    fn union_except(&self, skip: usize) -> VoxelSet {
        self.pieces
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != skip)
            .fold(VoxelSet::new(), |acc, (_, p)| acc.union(&p.voxels))
    }
}

/// The 26 lattice neighbour steps, x-major.
pub fn neighbor_directions() -> Vec<Direction> {
    let mut out = Vec::with_capacity(26);
    for x in -1..=1 {
        for y in -1..=1 {
            for z in -1..=1 {
                if [x, y, z] != [0, 0, 0] {
                    out.push([x, y, z]);
                }
            }
        }
    }
    out
}

fn gcd(a: i32, b: i32) -> i32 {
    if b == 0 {
        a.abs()
    } else {
        gcd(b, a % b)
    }
}

/// The 26 neighbour steps followed by `random` distinct primitive steps with
/// entries in `[-7, 7]`, at least one entry of magnitude above 1.
pub fn sampled_directions(seed: u64, random: usize) -> Vec<Direction> {
    let mut out = neighbor_directions();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let target = out.len() + random;
    while out.len() < target {
        let d: Direction = [rng.gen_range(-7..=7), rng.gen_range(-7..=7), rng.gen_range(-7..=7)];
        if d.iter().all(|c| c.abs() <= 1) || gcd(gcd(d[0], d[1]), d[2]) != 1 || out.contains(&d) {
            continue;
        }
        out.push(d);
    }
    out
}

/// Default direction set: 26 neighbours plus 72 seeded random steps.
pub fn default_directions(seed: u64) -> Vec<Direction> {
    sampled_directions(seed, 72)
}

/// Direct simulation of the straight-line removal of `piece` along `d`.
pub fn can_translate(piece: &VoxelSet, d: Direction, others: &VoxelSet, max_steps: usize) -> bool {
    if d == [0, 0, 0] {
        return false;
    }
    let (Some((plo, phi)), Some(mask)) = (piece.bounds(), others.mask()) else {
        return true;
    };
    let (olo, ohi) = (mask.min(), mask.max());
    let mut clear = i64::MAX;
    for i in 0..3 {
        let di = d[i] as i64;
        let gap = match di.signum() {
            1 => ohi[i] as i64 - plo[i] as i64,
            -1 => phi[i] as i64 - olo[i] as i64,
            _ => continue,
        };
        clear = clear.min((gap.div_euclid(di.abs()) + 1).max(1));
    }
    for k in 1..=max_steps as i64 {
        let shift = [d[0] * k as i32, d[1] * k as i32, d[2] * k as i32];
        if piece.iter().any(|v| mask.get([v[0] + shift[0], v[1] + shift[1], v[2] + shift[2]])) {
            return false;
        }
        if k >= clear {
            return true;
        }
    }
    false
}

/// For one step direction, which pieces are blocked, in a single sweep over
/// the lattice lines parallel to `d`.
pub fn blocked_pieces(assembly: &Assembly, d: Direction) -> Vec<bool> {
    let n = assembly.pieces.len();
    let mut blocked = vec![false; n];
    if n < 2 || d == [0, 0, 0] {
        return blocked;
    }
    let mut lo = [i32::MAX; 3];
    let mut hi = [i32::MIN; 3];
    for p in &assembly.pieces {
        if let Some((a, b)) = p.voxels.bounds() {
            for i in 0..3 {
                lo[i] = lo[i].min(a[i]);
                hi[i] = hi[i].max(b[i]);
            }
        }
    }
    if lo[0] > hi[0] {
        return blocked;
    }
    let ext = [
        (hi[0] - lo[0]) as i64,
        (hi[1] - lo[1]) as i64,
        (hi[2] - lo[2]) as i64,
    ];
    let a = (0..3).fold(0, |best, i| if d[i].abs() > d[best].abs() { i } else { best });
    let da = d[a] as i64;
    let step = |q: i64| if da > 0 { q.div_euclid(da) } else { -q.div_euclid(-da) };
    let (k0, k1) = {
        let (x, y) = (step(0), step(ext[a]));
        (x.min(y), x.max(y))
    };
    let mut bmin = [0i64; 3];
    let mut span = [da.abs(); 3];
    for i in (0..3).filter(|&i| i != a) {
        let (m0, m1) = (k0 * d[i] as i64, k1 * d[i] as i64);
        bmin[i] = -m0.max(m1);
        span[i] = ext[i] - m0.min(m1) - bmin[i] + 1;
    }
    let line_of = |v: &Voxel| -> (usize, i64) {
        let q = [(v[0] - lo[0]) as i64, (v[1] - lo[1]) as i64, (v[2] - lo[2]) as i64];
        let k = step(q[a]);
        let mut idx = 0i64;
        for i in 0..3 {
            let base = q[i] - k * d[i] as i64 - bmin[i];
            idx = idx * span[i] + base;
        }
        (idx as usize, k)
    };
    let lines = (span[0] * span[1] * span[2]) as usize;
    let mut top_k = vec![i64::MIN; lines];
    let mut top_p = vec![u32::MAX; lines];
    let mut second_k = vec![i64::MIN; lines];
    for (pi, p) in assembly.pieces.iter().enumerate() {
        let pi = pi as u32;
        for v in p.voxels.iter() {
            let (l, k) = line_of(v);
            if top_p[l] == pi {
                top_k[l] = top_k[l].max(k);
            } else if k > top_k[l] {
                second_k[l] = top_k[l];
                top_k[l] = k;
                top_p[l] = pi;
            } else {
                second_k[l] = second_k[l].max(k);
            }
        }
    }
    for (pi, p) in assembly.pieces.iter().enumerate() {
        let me = pi as u32;
        blocked[pi] = p.voxels.iter().any(|v| {
            let (l, k) = line_of(v);
            let other = if top_p[l] == me { second_k[l] } else { top_k[l] };
            other > k
        });
    }
    blocked
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EscapeReport {
    pub escapes: BTreeMap<String, Vec<Direction>>,
    pub interlocked: bool,
    pub directions_tested: usize,
    pub motion_model: String,
}

impl EscapeReport {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn escapes_of(&self, id: &str) -> &[Direction] {
        self.escapes.get(id).map_or(&[], Vec::as_slice)
    }
}

pub fn verify_interlocked(assembly: &Assembly, directions: &[Direction]) -> Result<EscapeReport> {
    if assembly.len() < 2 {
        return Err(Error::Precondition("interlocking needs at least two pieces".into()));
    }
    let per_dir: Vec<Vec<bool>> = directions.par_iter().map(|d| blocked_pieces(assembly, *d)).collect();
    let mut escapes = BTreeMap::new();
    for (pi, p) in assembly.pieces.iter().enumerate() {
        let free: Vec<Direction> = directions
            .iter()
            .zip(&per_dir)
            .filter(|(_, b)| !b[pi])
            .map(|(d, _)| *d)
            .collect();
        escapes.insert(p.id.clone(), free);
    }
    let interlocked = escapes.values().all(Vec::is_empty);
    Ok(EscapeReport {
        escapes,
        interlocked,
        directions_tested: directions.len(),
        motion_model: MOTION_MODEL.to_string(),
    })
}

/// Cross-check of [`blocked_pieces`] by direct simulation, for small assemblies.
pub fn escapes_by_simulation(assembly: &Assembly, piece: usize, d: Direction) -> bool {
    let others = assembly.union_except(piece);
    let diameter = assembly
        .pieces
        .iter()
        .filter_map(|p| p.voxels.bounds())
        .flat_map(|(a, b)| (0..3).map(move |i| (b[i] - a[i]) as usize + 1))
        .sum::<usize>()
        .max(1);
    can_translate(&assembly.pieces[piece].voxels, d, &others, 2 * diameter + 2)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Removal {
    pub piece: String,
    /// `None` for the last piece, which needs no motion.
    pub direction: Option<Direction>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Stuck {
    pub removed: Vec<Removal>,
    pub remaining: Vec<String>,
}

impl std::fmt::Display for Stuck {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "no piece can be removed from {{{}}}", self.remaining.join(", "))?;
        if !self.removed.is_empty() {
            let done: Vec<&str> = self.removed.iter().map(|r| r.piece.as_str()).collect();
            write!(f, " after removing {}", done.join(", "))?;
        }
        Ok(())
    }
}

/// Greedy disassembly: each round removes the first piece, in assembly
/// order, that escapes along some sampled direction (the first such
/// direction is recorded).
pub fn verify_disassembly_sequence(
    assembly: &Assembly,
    directions: &[Direction],
) -> std::result::Result<Vec<Removal>, Stuck> {
    let mut current = assembly.clone();
    let mut removed = Vec::new();
    while !current.is_empty() {
        if current.len() == 1 {
            removed.push(Removal { piece: current.pieces[0].id.clone(), direction: None });
            break;
        }
        let mut first_free: Vec<Option<Direction>> = vec![None; current.len()];
        for d in directions {
            let blocked = blocked_pieces(&current, *d);
            for (slot, b) in first_free.iter_mut().zip(blocked) {
                if slot.is_none() && !b {
                    *slot = Some(*d);
                }
            }
            if first_free[0].is_some() {
                break;
            }
        }
        match first_free.iter().position(Option::is_some) {
            Some(i) => {
                let piece = current.pieces.remove(i);
                removed.push(Removal { piece: piece.id, direction: first_free[i] });
            }
            None => {
                return Err(Stuck {
                    removed,
                    remaining: current.pieces.iter().map(|p| p.id.clone()).collect(),
                });
            }
        }
    }
    Ok(removed)
}
