//! Truss graphs, key assignment and assembly plans.
//!
//! Every vertex of a plan has `n` sectors, `2π/n` apart, starting at the
//! vertex frame rotation. Sector `j` holds the Connector of label `j`, and the
//! frame is turned so that sector 0, the split Connector, is the key sector.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use nalgebra::{Matrix3, Rotation3, Vector3};
use serde::{Deserialize, Serialize};

use crate::elements::{EdgeElementType, EndKind};
use crate::geometry::{RigidTransform, TorusSpec};
use crate::error::PlanViolations;
use crate::{Error, Result};

const ANGLE_TOL: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphVertex {
    pub id: usize,
    pub position: [f64; 2],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphEdge {
    pub id: usize,
    pub vertices: [usize; 2],
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct TrussGraph {
    pub vertices: Vec<GraphVertex>,
    pub edges: Vec<GraphEdge>,
}

impl TrussGraph {
    /// Vertex and edge ids must equal their positions in the lists.
    pub fn new(vertices: Vec<GraphVertex>, edges: Vec<GraphEdge>) -> Result<Self> {
        for (i, v) in vertices.iter().enumerate() {
            if v.id != i {
                return Err(Error::Precondition(format!("vertex at index {i} has id {}", v.id)));
            }
        }
        for (i, e) in edges.iter().enumerate() {
            if e.id != i || e.vertices.iter().any(|&v| v >= vertices.len()) || e.vertices[0] == e.vertices[1] {
                return Err(Error::Precondition(format!("edge {i} is malformed: {:?}", e.vertices)));
            }
        }
        Ok(Self { vertices, edges })
    }

    /// Incident edge ids of every vertex, ascending.
    pub fn incidence(&self) -> Vec<Vec<usize>> {
        let mut inc = vec![Vec::new(); self.vertices.len()];
        for e in &self.edges {
            inc[e.vertices[0]].push(e.id);
            inc[e.vertices[1]].push(e.id);
        }
        inc
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.vertices.contains(&v)).count()
    }

    /// Direction of edge `e` leaving vertex `v`.
    pub fn edge_angle_at(&self, e: usize, v: usize) -> f64 {
        let [a, b] = self.edges[e].vertices;
        let other = if a == v { b } else { a };
        let p = self.vertices[v].position;
        let q = self.vertices[other].position;
        (q[1] - p[1]).atan2(q[0] - p[0])
    }

    pub fn edge_length(&self, e: usize) -> f64 {
        let [a, b] = self.edges[e].vertices;
        let p = self.vertices[a].position;
        let q = self.vertices[b].position;
        (q[0] - p[0]).hypot(q[1] - p[1])
    }
}

fn check_edge_length(edge_length: f64, t: &TorusSpec) -> Result<()> {
    if !(edge_length > 2.0 * t.outer_radius()) {
        return Err(Error::Precondition(format!(
            "edge length {edge_length} must exceed 2(R + s/2) = {}",
            2.0 * t.outer_radius()
        )));
    }
    Ok(())
}

/// `w × h` square cells: `(w+1)(h+1)` vertices, row-major from the origin.
pub fn make_square_grid(w: usize, h: usize, edge_length: f64, t: &TorusSpec) -> Result<TrussGraph> {
    if w == 0 || h == 0 {
        return Err(Error::Precondition("grid dimensions must be at least 1".into()));
    }
    check_edge_length(edge_length, t)?;
    let id = |i: usize, j: usize| j * (w + 1) + i;
    let mut vertices = Vec::new();
    for j in 0..=h {
        for i in 0..=w {
            vertices.push(GraphVertex {
                id: id(i, j),
                position: [i as f64 * edge_length, j as f64 * edge_length],
            });
        }
    }
    let mut edges = Vec::new();
    for j in 0..=h {
        for i in 0..=w {
            if i < w {
                edges.push([id(i, j), id(i + 1, j)]);
            }
            if j < h {
                edges.push([id(i, j), id(i, j + 1)]);
            }
        }
    }
    let edges = edges.into_iter().enumerate().map(|(id, vertices)| GraphEdge { id, vertices }).collect();
    TrussGraph::new(vertices, edges)
}

/// Patch of `w × h` pointy-top hexagons in offset rows (odd rows shifted
/// right). Vertices are merged on exact integer keys.
pub fn make_hex_grid(w: usize, h: usize, edge_length: f64, t: &TorusSpec) -> Result<TrussGraph> {
    if w == 0 || h == 0 {
        return Err(Error::Precondition("grid dimensions must be at least 1".into()));
    }
    check_edge_length(edge_length, t)?;
    // corner offsets in units (√3/2 L, L/2), counter-clockwise from 30°
    const CORNERS: [(i64, i64); 6] = [(1, 1), (0, 2), (-1, 1), (-1, -1), (0, -2), (1, -1)];
    let mut keys: BTreeMap<(i64, i64), usize> = BTreeMap::new();
    let mut vertices = Vec::new();
    let mut edge_keys: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut edges = Vec::new();
    for row in 0..h as i64 {
        for col in 0..w as i64 {
            let q = col - (row - (row & 1)) / 2;
            let (ca, cb) = (2 * q + row, 3 * row);
            let mut ring = [0usize; 6];
            for (k, (da, db)) in CORNERS.iter().enumerate() {
                let key = (ca + da, cb + db);
                let next = vertices.len();
                let id = *keys.entry(key).or_insert(next);
                if id == next {
                    vertices.push(GraphVertex {
                        id,
                        position: [
                            key.0 as f64 * edge_length * 3f64.sqrt() / 2.0,
                            key.1 as f64 * edge_length / 2.0,
                        ],
                    });
                }
                ring[k] = id;
            }
            for k in 0..6 {
                let (a, b) = (ring[k], ring[(k + 1) % 6]);
                let pair = (a.min(b), a.max(b));
                if let std::collections::btree_map::Entry::Vacant(slot) = edge_keys.entry(pair) {
                    slot.insert(edges.len());
                    edges.push(GraphEdge { id: edges.len(), vertices: [a, b] });
                }
            }
        }
    }
    TrussGraph::new(vertices, edges)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum KeyPolicy {
    #[default]
    EdgeKey,
    LooseKey,
}

impl KeyPolicy {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "edge-key" => Some(KeyPolicy::EdgeKey),
            "loose-key" => Some(KeyPolicy::LooseKey),
            _ => None,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum KeySource {
    EdgeEnd { edge: usize },
    LoosePeg,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SectorUse {
    /// Connector end of an Edge Element.
    Edge { edge: usize },
    SplitPair,
    LooseConnector,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VertexPlan {
    pub id: usize,
    pub position: [f64; 2],
    pub valence: usize,
    /// Angle of sector 0, the key sector.
    pub frame_rotation: f64,
    pub key_sector: usize,
    pub key_source: KeySource,
    /// The edge lying in the key sector, if any.
    pub key_edge: Option<usize>,
    pub sectors: Vec<SectorUse>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EdgePlan {
    pub id: usize,
    /// Vertex at the element's end A, then end B.
    pub vertices: [usize; 2],
    pub element: EdgeElementType,
    pub ends: [EndKind; 2],
    /// Row-major `[R | t]` placing the midpoint-centred element mesh.
    pub transform: [f64; 12],
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LooseConnector {
    pub vertex: usize,
    pub label: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct LoosePieces {
    /// Vertices receiving a split pair (one each).
    pub split_pairs: Vec<usize>,
    pub connectors: Vec<LooseConnector>,
    /// Vertices receiving a loose peg.
    pub pegs: Vec<usize>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bom {
    pub basic: usize,
    pub one_key: usize,
    pub two_key: usize,
    pub split_pairs: usize,
    pub loose_connectors: usize,
    pub loose_pegs: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AssemblyPlan {
    pub valence: usize,
    pub edge_length: f64,
    pub policy: KeyPolicy,
    pub vertices: Vec<VertexPlan>,
    pub edges: Vec<EdgePlan>,
    pub loose: LoosePieces,
    pub bom: Bom,
}

impl AssemblyPlan {
    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    /// Distinct tube-mounted element kinds used, in a fixed order.
    pub fn element_kinds(&self) -> Vec<EdgeElementType> {
        EdgeElementType::ALL
            .into_iter()
            .filter(|k| self.edges.iter().any(|e| e.element == *k))
            .collect()
    }
}

/// Sector index of angle `beta` in a frame starting at `alpha`, if aligned.
fn sector_of(beta: f64, alpha: f64, n: usize) -> Option<usize> {
    let step = TAU / n as f64;
    let rel = (beta - alpha).rem_euclid(TAU);
    let j = (rel / step).round();
    let off = rel - j * step;
    (off.abs() <= ANGLE_TOL).then_some(j as usize % n)
}

/// One key source per vertex. Under `EdgeKey`, vertices are matched to
/// distinct incident edges where possible (augmenting paths, vertices and
/// edges in id order); a vertex left unmatched takes its smallest incident
/// edge, which then carries pegs at both ends. Isolated vertices, and every
/// vertex under `LooseKey`, get a loose peg.
pub fn assign_keys(graph: &TrussGraph, valence: usize, policy: KeyPolicy) -> Result<Vec<KeySource>> {
    let inc = graph.incidence();
    for (v, edges) in inc.iter().enumerate() {
        if edges.len() > valence {
            return Err(Error::Planning {
                vertex: v,
                reason: format!("valence {} exceeds design valence {valence}", edges.len()),
            });
        }
    }
    if policy == KeyPolicy::LooseKey {
        return Ok(vec![KeySource::LoosePeg; graph.vertices.len()]);
    }
    let mut owner: Vec<Option<usize>> = vec![None; graph.edges.len()];
    fn augment(v: usize, inc: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
        for &e in &inc[v] {
            if seen[e] {
                continue;
            }
            seen[e] = true;
            if owner[e].is_none_or(|w| augment(w, inc, owner, seen)) {
                owner[e] = Some(v);
                return true;
            }
        }
        false
    }
    for v in 0..graph.vertices.len() {
        let mut seen = vec![false; graph.edges.len()];
        augment(v, &inc, &mut owner, &mut seen);
    }
    let mut keys = vec![KeySource::LoosePeg; graph.vertices.len()];
    for (e, o) in owner.iter().enumerate() {
        if let Some(v) = o {
            keys[*v] = KeySource::EdgeEnd { edge: e };
        }
    }
    for (v, k) in keys.iter_mut().enumerate() {
        if *k == KeySource::LoosePeg {
            if let Some(&e) = inc[v].first() {
                *k = KeySource::EdgeEnd { edge: e };
            }
        }
    }
    Ok(keys)
}

/// Full plan from explicit key sources.
pub fn plan_with_keys(
    graph: &TrussGraph,
    valence: usize,
    edge_length: f64,
    policy: KeyPolicy,
    keys: &[KeySource],
) -> Result<AssemblyPlan> {
    let inc = graph.incidence();
    let n = valence;
    let step = TAU / n as f64;
    let mut vertices = Vec::with_capacity(graph.vertices.len());
    let mut loose = LoosePieces::default();
    for (v, gv) in graph.vertices.iter().enumerate() {
        let edges = &inc[v];
        let key = keys[v];
        let reference = match key {
            KeySource::EdgeEnd { edge } => {
                if !edges.contains(&edge) {
                    return Err(Error::Planning { vertex: v, reason: format!("key edge {edge} is not incident") });
                }
                Some(edge)
            }
            KeySource::LoosePeg => edges.first().copied(),
        };
        let mut sectors = vec![SectorUse::LooseConnector; n];
        let mut frame_rotation = 0.0;
        let mut key_edge = None;
        if let Some(r) = reference {
            let alpha = graph.edge_angle_at(r, v);
            let mut taken = vec![None; n];
            for &e in edges {
                let j = sector_of(graph.edge_angle_at(e, v), alpha, n).ok_or_else(|| Error::Planning {
                    vertex: v,
                    reason: format!("edge {e} is not aligned with the {n} sectors"),
                })?;
                if taken[j].is_some() {
                    return Err(Error::Planning { vertex: v, reason: format!("two edges share sector {j}") });
                }
                taken[j] = Some(e);
            }
            let key_at = match key {
                KeySource::EdgeEnd { .. } => 0,
                KeySource::LoosePeg => taken.iter().position(Option::is_none).ok_or_else(|| Error::Planning {
                    vertex: v,
                    reason: "every sector carries an edge, so no sector is free for a loose peg".into(),
                })?,
            };
            frame_rotation = (alpha + key_at as f64 * step).rem_euclid(TAU);
            for (j, e) in taken.iter().enumerate() {
                let label = (j + n - key_at) % n;
                if let Some(e) = e {
                    if label == 0 {
                        key_edge = Some(*e);
                    } else {
                        sectors[label] = SectorUse::Edge { edge: *e };
                    }
                }
            }
        }
        sectors[0] = SectorUse::SplitPair;
        loose.split_pairs.push(v);
        for (label, s) in sectors.iter().enumerate() {
            if *s == SectorUse::LooseConnector {
                loose.connectors.push(LooseConnector { vertex: v, label });
            }
        }
        if key == KeySource::LoosePeg {
            loose.pegs.push(v);
        }
        vertices.push(VertexPlan {
            id: v,
            position: gv.position,
            valence: edges.len(),
            frame_rotation,
            key_sector: 0,
            key_source: key,
            key_edge,
            sectors,
        });
    }

    let mut edges = Vec::with_capacity(graph.edges.len());
    for ge in &graph.edges {
        let peg_at = |v: usize| keys[v] == KeySource::EdgeEnd { edge: ge.id };
        let [a, b] = ge.vertices;
        let (pa, pb) = (peg_at(a), peg_at(b));
        let (element, order) = match (pa, pb) {
            (false, false) => (EdgeElementType::Basic, [a, b]),
            (true, true) => (EdgeElementType::TwoKey, [a, b]),
            // the Connector end sits at end A of a OneKey element
            (false, true) => (EdgeElementType::OneKey, [a, b]),
            (true, false) => (EdgeElementType::OneKey, [b, a]),
        };
        let end = |v: usize| if peg_at(v) { EndKind::Peg } else { EndKind::Connector { valence: n } };
        let pa = graph.vertices[order[0]].position;
        let pb = graph.vertices[order[1]].position;
        let angle = (pb[1] - pa[1]).atan2(pb[0] - pa[0]);
        let mid = [(pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0];
        edges.push(EdgePlan {
            id: ge.id,
            vertices: order,
            element,
            ends: [end(order[0]), end(order[1])],
            transform: RigidTransform::planar(angle, mid[0], mid[1]).to_row_major(),
        });
    }

    let count = |k: EdgeElementType| edges.iter().filter(|e| e.element == k).count();
    let bom = Bom {
        basic: count(EdgeElementType::Basic),
        one_key: count(EdgeElementType::OneKey),
        two_key: count(EdgeElementType::TwoKey),
        split_pairs: loose.split_pairs.len(),
        loose_connectors: loose.connectors.len(),
        loose_pegs: loose.pegs.len(),
    };
    Ok(AssemblyPlan { valence: n, edge_length, policy, vertices, edges, loose, bom })
}

/// Key assignment, sectors, placements and bill of materials.
pub fn plan_assembly(graph: &TrussGraph, valence: usize, edge_length: f64, policy: KeyPolicy) -> Result<AssemblyPlan> {
    let keys = assign_keys(graph, valence, policy)?;
    plan_with_keys(graph, valence, edge_length, policy, &keys)
}

/// Re-derives every plan invariant from the plan alone.
pub fn validate_plan(plan: &AssemblyPlan) -> Result<()> {
    let mut bad: Vec<String> = Vec::new();
    let n = plan.valence;
    let step = TAU / n.max(1) as f64;
    let edge_by_id: BTreeMap<usize, &EdgePlan> = plan.edges.iter().map(|e| (e.id, e)).collect();
    let end_at = |e: &EdgePlan, v: usize| -> Option<EndKind> {
        e.vertices.iter().position(|&x| x == v).map(|i| e.ends[i])
    };
    let angle_at = |e: &EdgePlan, v: usize| -> f64 {
        let other = if e.vertices[0] == v { e.vertices[1] } else { e.vertices[0] };
        let p = plan.vertices[v].position;
        let q = plan.vertices[other].position;
        (q[1] - p[1]).atan2(q[0] - p[0])
    };

    for vp in &plan.vertices {
        let v = vp.id;
        if vp.sectors.len() != n {
            bad.push(format!("vertex {v}: {} sectors for valence {n}", vp.sectors.len()));
            continue;
        }
        let splits: Vec<usize> = (0..n).filter(|&j| vp.sectors[j] == SectorUse::SplitPair).collect();
        if splits != vec![vp.key_sector] {
            bad.push(format!("vertex {v}: split pair sectors {splits:?}, key sector {}", vp.key_sector));
        }
        let incident: Vec<&EdgePlan> = plan.edges.iter().filter(|e| e.vertices.contains(&v)).collect();
        if incident.len() != vp.valence {
            bad.push(format!("vertex {v}: valence {} but {} incident edges", vp.valence, incident.len()));
        }
        let pegs_here: Vec<usize> =
            incident.iter().filter(|e| end_at(e, v) == Some(EndKind::Peg)).map(|e| e.id).collect();
        match vp.key_source {
            KeySource::EdgeEnd { edge } => {
                if pegs_here != vec![edge] {
                    bad.push(format!("vertex {v}: key edge {edge} but peg ends from {pegs_here:?}"));
                }
                if vp.key_edge != Some(edge) {
                    bad.push(format!("vertex {v}: key edge {edge} does not lie in the key sector"));
                }
                if plan.loose.pegs.contains(&v) {
                    bad.push(format!("vertex {v}: has both an edge key and a loose peg"));
                }
            }
            KeySource::LoosePeg => {
                if !pegs_here.is_empty() {
                    bad.push(format!("vertex {v}: loose peg but peg ends from {pegs_here:?}"));
                }
                if plan.loose.pegs.iter().filter(|&&p| p == v).count() != 1 {
                    bad.push(format!("vertex {v}: loose peg missing from the loose piece list"));
                }
                if vp.key_edge.is_some() {
                    bad.push(format!("vertex {v}: loose peg but an edge sits in the key sector"));
                }
            }
        }
        let mut seen = Vec::new();
        for (j, s) in vp.sectors.iter().enumerate() {
            let lying = match s {
                SectorUse::Edge { edge } => {
                    match edge_by_id.get(edge) {
                        Some(e) if e.vertices.contains(&v) => {
                            if end_at(e, v) != Some(EndKind::Connector { valence: n }) {
                                bad.push(format!("vertex {v}: edge {edge} in sector {j} has no Connector end here"));
                            }
                        }
                        _ => bad.push(format!("vertex {v}: sector {j} names non-incident edge {edge}")),
                    }
                    Some(*edge)
                }
                SectorUse::SplitPair => vp.key_edge,
                SectorUse::LooseConnector => {
                    if !plan.loose.connectors.contains(&LooseConnector { vertex: v, label: j }) {
                        bad.push(format!("vertex {v}: loose Connector {j} missing from the loose piece list"));
                    }
                    None
                }
            };
            if let Some(e) = lying.and_then(|e| edge_by_id.get(&e)) {
                seen.push(e.id);
                let expect = vp.frame_rotation + j as f64 * step;
                if sector_of(angle_at(e, v), expect, n) != Some(0) {
                    bad.push(format!("vertex {v}: edge {} is not aligned with sector {j}", e.id));
                }
            }
        }
        seen.sort_unstable();
        let mut want: Vec<usize> = incident.iter().map(|e| e.id).collect();
        want.sort_unstable();
        if seen != want {
            bad.push(format!("vertex {v}: sectors cover edges {seen:?}, incident edges are {want:?}"));
        }
        let edge_connectors = vp.sectors.iter().filter(|s| matches!(s, SectorUse::Edge { .. })).count();
        let loose_connectors = vp.sectors.iter().filter(|s| **s == SectorUse::LooseConnector).count();
        if edge_connectors + 1 + loose_connectors != n {
            bad.push(format!("vertex {v}: sector accounting does not sum to {n}"));
        }
    }

    for e in &plan.edges {
        let pegs = e.ends.iter().filter(|k| **k == EndKind::Peg).count();
        let expect = match pegs {
            0 => EdgeElementType::Basic,
            1 => EdgeElementType::OneKey,
            _ => EdgeElementType::TwoKey,
        };
        if e.element != expect {
            bad.push(format!("edge {}: {:?} with {pegs} peg ends", e.id, e.element));
        }
        if e.element == EdgeElementType::OneKey && e.ends[0] == EndKind::Peg {
            bad.push(format!("edge {}: OneKey element must have its Connector at end A", e.id));
        }
        let m = &e.transform;
        let rot = Matrix3::new(m[0], m[1], m[2], m[4], m[5], m[6], m[8], m[9], m[10]);
        if RigidTransform::from_matrix(rot, Vector3::new(m[3], m[7], m[11])).is_err() {
            bad.push(format!("edge {}: placement is not a rigid motion", e.id));
        }
        if let (Some(pa), Some(pb)) = (plan.vertices.get(e.vertices[0]), plan.vertices.get(e.vertices[1])) {
            let mid = [(pa.position[0] + pb.position[0]) / 2.0, (pa.position[1] + pb.position[1]) / 2.0];
            let dir = Vector3::new(pb.position[0] - pa.position[0], pb.position[1] - pa.position[1], 0.0);
            let x = Rotation3::from_matrix_unchecked(rot) * Vector3::x();
            if (m[3] - mid[0]).abs() > 1e-9 * plan.edge_length.max(1.0)
                || (m[7] - mid[1]).abs() > 1e-9 * plan.edge_length.max(1.0)
                || m[11] != 0.0
            {
                bad.push(format!("edge {}: placement is not at the edge midpoint", e.id));
            }
            if dir.norm() == 0.0 || (x - dir.normalize()).norm() > 1e-9 {
                bad.push(format!("edge {}: placement does not point from end A to end B", e.id));
            }
        }
    }

    let edge_pegs: usize = plan.edges.iter().map(|e| e.ends.iter().filter(|k| **k == EndKind::Peg).count()).sum();
    if edge_pegs + plan.loose.pegs.len() != plan.vertices.len() {
        bad.push(format!(
            "{edge_pegs} edge pegs plus {} loose pegs for {} vertices",
            plan.loose.pegs.len(),
            plan.vertices.len()
        ));
    }
    let count = |k: EdgeElementType| plan.edges.iter().filter(|e| e.element == k).count();
    let expect = Bom {
        basic: count(EdgeElementType::Basic),
        one_key: count(EdgeElementType::OneKey),
        two_key: count(EdgeElementType::TwoKey),
        split_pairs: plan.vertices.len(),
        loose_connectors: plan
            .vertices
            .iter()
            .map(|v| v.sectors.iter().filter(|s| **s == SectorUse::LooseConnector).count())
            .sum(),
        loose_pegs: plan.vertices.iter().filter(|v| v.key_source == KeySource::LoosePeg).count(),
    };
    if plan.bom != expect {
        bad.push(format!("bill of materials {:?} does not match the plan {:?}", plan.bom, expect));
    }
    if plan.loose.split_pairs.len() != plan.vertices.len() || plan.loose.connectors.len() != expect.loose_connectors {
        bad.push("loose piece lists do not match the sectors".into());
    }
    if bad.is_empty() {
        Ok(())
    } else {
        Err(Error::PlanViolation(PlanViolations(bad)))
    }
}
