use std::collections::BTreeMap;

use interlock_truss::elements::{EdgeElementType, EndKind};
use interlock_truss::planner::{
    make_hex_grid, make_square_grid, plan_assembly, validate_plan, AssemblyPlan, KeyPolicy, SectorUse, TrussGraph,
};
use interlock_truss::TorusSpec;

fn torus() -> TorusSpec {
    TorusSpec::new(2.0, 1.0).unwrap()
}

/// Recounts keys, sectors and the BOM from the raw plan and graph.
fn audit(graph: &TrussGraph, plan: &AssemblyPlan, n: usize) {
    assert_eq!(plan.vertices.len(), graph.vertices.len());
    assert_eq!(plan.edges.len(), graph.edges.len());
    let mut pegs = vec![0usize; graph.vertices.len()];
    let mut mounted = vec![0usize; graph.vertices.len()];
    let mut kinds: BTreeMap<EdgeElementType, usize> = BTreeMap::new();
    for (e, g) in plan.edges.iter().zip(&graph.edges) {
        let mut ends = e.vertices;
        ends.sort_unstable();
        let mut want = g.vertices;
        want.sort_unstable();
        assert_eq!(ends, want);
        for (v, end) in e.vertices.iter().zip(e.ends) {
            match end {
                EndKind::Peg => pegs[*v] += 1,
                EndKind::Connector { valence } => {
                    assert_eq!(valence, n);
                    mounted[*v] += 1;
                }
            }
        }
        let peg_ends = e.ends.iter().filter(|k| **k == EndKind::Peg).count();
        assert_eq!(peg_ends, e.element.peg_ends());
        *kinds.entry(e.element).or_default() += 1;
        let [a, b] = e.vertices.map(|v| graph.vertices[v].position);
        let mid = [(a[0] + b[0]) / 2.0, (a[1] + b[1]) / 2.0];
        assert!((e.transform[3] - mid[0]).abs() < 1e-9 && (e.transform[7] - mid[1]).abs() < 1e-9);
        let len = (b[0] - a[0]).hypot(b[1] - a[1]);
        let dir = [(b[0] - a[0]) / len, (b[1] - a[1]) / len];
        assert!((e.transform[0] - dir[0]).abs() < 1e-9 && (e.transform[4] - dir[1]).abs() < 1e-9);
    }
    for v in &plan.vertices {
        let loose_pegs = plan.loose.pegs.iter().filter(|&&p| p == v.id).count();
        assert_eq!(pegs[v.id] + loose_pegs, 1, "vertex {} keys", v.id);
        let pairs = plan.loose.split_pairs.iter().filter(|&&p| p == v.id).count();
        let loose = plan.loose.connectors.iter().filter(|c| c.vertex == v.id).count();
        assert_eq!(pairs, 1);
        assert_eq!(mounted[v.id] + pairs + loose, n, "vertex {} sectors", v.id);
        assert_eq!(v.sectors.len(), n);
        assert_eq!(v.sectors.iter().filter(|s| **s == SectorUse::SplitPair).count(), 1);
    }
    let bom = &plan.bom;
    assert_eq!(bom.basic, kinds.get(&EdgeElementType::Basic).copied().unwrap_or(0));
    assert_eq!(bom.one_key, kinds.get(&EdgeElementType::OneKey).copied().unwrap_or(0));
    assert_eq!(bom.two_key, kinds.get(&EdgeElementType::TwoKey).copied().unwrap_or(0));
    assert_eq!(bom.split_pairs, graph.vertices.len());
    assert_eq!(bom.loose_pegs, plan.loose.pegs.len());
    assert_eq!(bom.loose_connectors, plan.loose.connectors.len());
    let total_pegs: usize = plan.edges.iter().map(|e| e.element.peg_ends()).sum();
    assert_eq!(total_pegs + bom.loose_pegs, graph.vertices.len());
    validate_plan(plan).unwrap();
}

#[test]
fn hex_patch_conserves_keys_and_sectors() {
    let g = make_hex_grid(3, 3, 8.0, &torus()).unwrap();
    for policy in [KeyPolicy::EdgeKey, KeyPolicy::LooseKey] {
        match plan_assembly(&g, 3, 8.0, policy) {
            Ok(plan) => audit(&g, &plan, 3),
            Err(e) => assert_eq!(policy, KeyPolicy::LooseKey, "{e}"),
        }
    }
    let plan = plan_assembly(&g, 3, 8.0, KeyPolicy::EdgeKey).unwrap();
    let interior = plan.vertices.iter().filter(|v| v.valence == 3).count();
    assert!(interior > 0);
}

#[test]
fn square_patch_conserves_keys_and_sectors() {
    let g = make_square_grid(2, 2, 8.0, &torus()).unwrap();
    audit(&g, &plan_assembly(&g, 4, 8.0, KeyPolicy::EdgeKey).unwrap(), 4);
    let g = make_square_grid(1, 1, 8.0, &torus()).unwrap();
    let plan = plan_assembly(&g, 4, 8.0, KeyPolicy::EdgeKey).unwrap();
    audit(&g, &plan, 4);
    assert_eq!((plan.bom.one_key, plan.bom.split_pairs, plan.bom.loose_connectors), (4, 4, 8));
}

#[test]
fn single_hexagon_bom() {
    let g = make_hex_grid(1, 1, 8.0, &torus()).unwrap();
    let plan = plan_assembly(&g, 3, 8.0, KeyPolicy::EdgeKey).unwrap();
    audit(&g, &plan, 3);
    let b = &plan.bom;
    assert_eq!((b.basic, b.one_key, b.two_key), (0, 6, 0));
    assert_eq!((b.split_pairs, b.loose_connectors, b.loose_pegs), (6, 6, 0));
    let loose = plan_assembly(&g, 3, 8.0, KeyPolicy::LooseKey).unwrap();
    audit(&g, &loose, 3);
    assert_eq!((loose.bom.basic, loose.bom.loose_pegs), (6, 6));
}

#[test]
fn wider_grids_audit_clean() {
    for (w, h) in [(4, 2), (2, 5), (5, 5)] {
        let g = make_hex_grid(w, h, 9.0, &torus()).unwrap();
        audit(&g, &plan_assembly(&g, 3, 9.0, KeyPolicy::EdgeKey).unwrap(), 3);
        let g = make_square_grid(w, h, 9.0, &torus()).unwrap();
        audit(&g, &plan_assembly(&g, 4, 9.0, KeyPolicy::EdgeKey).unwrap(), 4);
    }
}
