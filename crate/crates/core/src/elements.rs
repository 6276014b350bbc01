//! Square tubes and the Edge Elements built from them.
//!
//! Element frame: the tube runs along `+x`, vertex A's torus is centered at
//! the origin and vertex B's at `(Lv h, 0, 0)` where `Lv = round(L / h)`. The
//! lattice has its origin at vertex A, so a half turn about vertex B maps
//! voxel `[i, j, k]` to `[Lv - 1 - i, -1 - j, k]` exactly.

use serde::{Deserialize, Serialize};

use crate::geometry::{point_in_torus, Lattice, TorusSpec};
use crate::split::sector_angle;
use crate::voronoi::{LabelField, OUTSIDE};
use crate::voxel::{Voxel, VoxelSet};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum EdgeElementType {
    Basic,
    OneKey,
    TwoKey,
    SplitConnectorPieces,
}

impl EdgeElementType {
    pub const ALL: [EdgeElementType; 4] = [
        EdgeElementType::Basic,
        EdgeElementType::OneKey,
        EdgeElementType::TwoKey,
        EdgeElementType::SplitConnectorPieces,
    ];

    pub fn file_stem(self) -> &'static str {
        match self {
            EdgeElementType::Basic => "basic",
            EdgeElementType::OneKey => "one_key",
            EdgeElementType::TwoKey => "two_key",
            EdgeElementType::SplitConnectorPieces => "split_connector",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        let norm: String = s.chars().filter(|c| c.is_ascii_alphanumeric()).collect::<String>().to_ascii_lowercase();
        match norm.as_str() {
            "basic" => Some(EdgeElementType::Basic),
            "onekey" => Some(EdgeElementType::OneKey),
            "twokey" => Some(EdgeElementType::TwoKey),
            "splitconnector" | "splitconnectorpieces" | "split" => Some(EdgeElementType::SplitConnectorPieces),
            _ => None,
        }
    }

    /// Number of peg ends on a tube-mounted element.
    pub fn peg_ends(self) -> usize {
        match self {
            EdgeElementType::Basic | EdgeElementType::SplitConnectorPieces => 0,
            EdgeElementType::OneKey => 1,
            EdgeElementType::TwoKey => 2,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TubeSpec {
    pub length: f64,
    pub side: f64,
}

impl TubeSpec {
    /// Tube between the outer faces of two tori `edge_length` apart.
    pub fn for_edge(edge_length: f64, t: &TorusSpec) -> Result<Self> {
        let length = edge_length - 2.0 * t.outer_radius();
        if !(length > 0.0) {
            return Err(Error::Precondition(format!(
                "edge length {edge_length} leaves no room for a tube (needs more than {})",
                2.0 * t.outer_radius()
            )));
        }
        Ok(Self { length, side: t.side() })
    }
}

/// Voxels with centers in `0 ≤ x ≤ L_e`, `|y|, |z| ≤ side/2`.
pub fn make_tube(spec: &TubeSpec, lattice: &Lattice) -> Result<VoxelSet> {
    if !(spec.length > 0.0) {
        return Err(Error::Precondition(format!("tube length {} must be positive", spec.length)));
    }
    let half = spec.side / 2.0;
    let lo = lattice.voxel_at(&(lattice.origin + nalgebra::Vector3::new(0.0, -half, -half)));
    let hi = lattice.voxel_at(&(lattice.origin + nalgebra::Vector3::new(spec.length, half, half)));
    let mut out = Vec::new();
    for z in lo[2] - 1..=hi[2] + 1 {
        for y in lo[1] - 1..=hi[1] + 1 {
            for x in lo[0] - 1..=hi[0] + 1 {
                let d = lattice.center([x, y, z]) - lattice.origin;
                if d.x >= 0.0 && d.x <= spec.length && d.y.abs() <= half && d.z.abs() <= half {
                    out.push([x, y, z]);
                }
            }
        }
    }
    Ok(VoxelSet::from_sorted(out))
}

/// Tube cross-section swept radially into the torus at a sector angle, down
/// to `depth` below the outer face.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TubeFootprint {
    pub angle: f64,
    pub half_width: f64,
    pub depth: f64,
}

impl TubeFootprint {
    pub fn at_sector(label: usize, valence: usize, t: &TorusSpec, depth: f64) -> Self {
        Self {
            angle: sector_angle(label, valence),
            half_width: t.half_side(),
            depth,
        }
    }
}

/// True iff every torus voxel under the footprint carries `label`.
pub fn validate_attachment(field: &LabelField, label: usize, fp: &TubeFootprint, t: &TorusSpec) -> bool {
    let g = field.grid();
    let inner = t.outer_radius() - fp.depth;
    for (i, &l) in field.labels().iter().enumerate() {
        if l == OUTSIDE || l as usize == label {
            continue;
        }
        let c = g.center(g.voxel(i));
        let (a, b, z) = t.sector_coords(&c, fp.angle);
        if a > 0.0 && b.abs() <= fp.half_width && z.abs() <= fp.half_width && a.hypot(b) >= inner {
            return false;
        }
    }
    true
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum EndKind {
    Connector { valence: usize },
    Peg,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EdgeElement {
    pub kind: EdgeElementType,
    pub end_a: EndKind,
    pub end_b: EndKind,
    pub solid: VoxelSet,
    /// Center-to-center edge length actually realized on the lattice.
    pub length: f64,
}

/// End geometry in the vertex frame: torus at the origin, sector 0 facing `+x`.
#[derive(Clone, Debug)]
pub struct EndGeometry {
    pub valence: usize,
    pub connector: VoxelSet,
    pub peg: VoxelSet,
}

impl EndGeometry {
    /// Checks that the Connector of label 0 owns the whole tube footprint.
    pub fn new(field: &LabelField, connector: VoxelSet, peg: VoxelSet, t: &TorusSpec, depth: f64) -> Result<Self> {
        let fp = TubeFootprint::at_sector(0, field.valence(), t, depth);
        if !validate_attachment(field, 0, &fp, t) {
            return Err(Error::Composition(format!(
                "tube footprint at sector 0 meets voxels of other Connectors (depth {depth})"
            )));
        }
        Ok(Self { valence: field.valence(), connector, peg })
    }
}

fn flip_to_b(v: Voxel, lv: i32) -> Voxel {
    [lv - 1 - v[0], -1 - v[1], v[2]]
}

/// Tube from outer face to outer face, in the element frame.
fn bridging_tube(t: &TorusSpec, lattice: &Lattice, lv: i32) -> VoxelSet {
    let hs = t.half_side();
    let ro = t.outer_radius();
    let length = lv as f64 * lattice.spacing;
    let ny = (hs / lattice.spacing).ceil() as i32 + 1;
    let mut out = Vec::new();
    for z in -ny..ny {
        for y in -ny..ny {
            for x in -1..=lv {
                let c = lattice.center([x, y, z]) - lattice.origin;
                if c.x < 0.0 || c.x > length || c.y.abs() > hs || c.z.abs() > hs {
                    continue;
                }
                if c.x.hypot(c.y) > ro && (length - c.x).hypot(c.y) > ro {
                    out.push([x, y, z]);
                }
            }
        }
    }
    VoxelSet::from_sorted(out)
}

/// Builds a tube-mounted element. Connector ends come first: OneKey has its
/// Connector at vertex A and its peg at vertex B.
pub fn compose_edge_element(
    kind: EdgeElementType,
    edge_length: f64,
    ends: &EndGeometry,
    t: &TorusSpec,
    lattice: &Lattice,
) -> Result<EdgeElement> {
    TubeSpec::for_edge(edge_length, t)?;
    let (end_a, end_b) = match kind {
        EdgeElementType::Basic => (EndKind::Connector { valence: ends.valence }, EndKind::Connector { valence: ends.valence }),
        EdgeElementType::OneKey => (EndKind::Connector { valence: ends.valence }, EndKind::Peg),
        EdgeElementType::TwoKey => (EndKind::Peg, EndKind::Peg),
        EdgeElementType::SplitConnectorPieces => {
            return Err(Error::Precondition("split Connector pieces are not tube-mounted".into()));
        }
    };
    let lv = (edge_length / lattice.spacing).round() as i32;
    let a_part = match end_a {
        EndKind::Connector { .. } => &ends.connector,
        EndKind::Peg => &ends.peg,
    };
    let b_part = match end_b {
        EndKind::Connector { .. } => &ends.connector,
        EndKind::Peg => &ends.peg,
    };
    let tube = bridging_tube(t, lattice, lv);
    let solid = a_part.union(&tube).union(&b_part.map(|v| flip_to_b(v, lv)));
    if solid.len() != a_part.len() + tube.len() + b_part.len() {
        return Err(Error::Composition(format!("{kind:?} ends overlap the tube")));
    }
    if !solid.is_connected() {
        return Err(Error::Composition(format!("{kind:?} element is not connected")));
    }
    Ok(EdgeElement {
        kind,
        end_a,
        end_b,
        solid,
        length: lv as f64 * lattice.spacing,
    })
}

/// Torus voxels of the element frame, for both vertices. Used by tests and
/// by callers that want to check the tube stays outside both rings.
pub fn in_either_torus(t: &TorusSpec, lattice: &Lattice, lv: i32, v: Voxel) -> bool {
    let c = lattice.center(v);
    let b = lattice.center(flip_to_b(v, lv));
    point_in_torus(&c, t) || point_in_torus(&b, t)
}
