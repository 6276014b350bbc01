mod common;

use interlock_truss::curves::{build_curves, CurveParams};
use interlock_truss::geometry::Lattice;
use interlock_truss::mesh::{mesh_volume, stl_bytes, voxels_to_mesh, watertight_check, write_stl_binary};
use interlock_truss::voronoi::{extract_regions, label_voxels};
use interlock_truss::{TorusSpec, VoxelGrid, VoxelSet};
use nalgebra::Point3;
use proptest::prelude::*;

#[test]
fn connector_mesh_survives_stl_round_trip() {
    let t = TorusSpec::new(2.0, 1.0).unwrap();
    let grid = VoxelGrid::for_torus(&t, 12).unwrap();
    let curves = build_curves(&CurveParams::defaults(3, &t), &t).unwrap();
    let regions = extract_regions(&label_voxels(&curves, &t, &grid).unwrap());
    let dir = tempfile::tempdir().unwrap();
    for r in &regions {
        let mesh = voxels_to_mesh(&r.voxels, grid.lattice()).unwrap();
        assert!(watertight_check(&mesh));
        let h3 = grid.lattice().voxel_volume();
        let expect = r.voxels.len() as f64 * h3;
        assert!((mesh_volume(&mesh) - expect).abs() <= 1e-9 * expect);

        let path = dir.path().join(format!("c{}.stl", r.label));
        write_stl_binary(&mesh, &path).unwrap();
        let bytes = std::fs::read(&path).unwrap();
        assert_eq!(bytes.len(), 84 + 50 * mesh.triangles.len());
        let parsed = common::parse_stl(&bytes).unwrap();
        assert_eq!(parsed.triangles.len(), mesh.triangles.len());
        assert!(parsed.is_closed());
        assert!((parsed.volume() - expect).abs() <= 1e-5 * expect);
    }
}

#[test]
fn stl_sizes_for_small_meshes() {
    let lattice = Lattice::new(0.5, Point3::origin());
    let cube = voxels_to_mesh(&VoxelSet::from_sorted(vec![[0, 0, 0]]), &lattice).unwrap();
    assert_eq!(stl_bytes(&cube).len(), 684);
    let parsed = common::parse_stl(&stl_bytes(&cube)).unwrap();
    assert!((parsed.volume() - 0.125).abs() < 1e-12);
    assert!(parsed.is_closed());
}

fn voxel_set(max: i32) -> impl Strategy<Value = VoxelSet> {
    prop::collection::vec((0..max, 0..max, 0..max), 1..60)
        .prop_map(|v| VoxelSet::from_unsorted(v.into_iter().map(|(x, y, z)| [x, y, z]).collect()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_sets_mesh_watertight(set in voxel_set(5), h in 0.1f64..2.0) {
        let lattice = Lattice::new(h, Point3::new(-1.0, 0.5, 2.0));
        let mesh = voxels_to_mesh(&set, &lattice).unwrap();
        prop_assert!(watertight_check(&mesh));
        let mut directed = std::collections::HashMap::new();
        for t in &mesh.triangles {
            for k in 0..3 {
                *directed.entry((t[k], t[(k + 1) % 3])).or_insert(0) += 1;
            }
        }
        for (&(a, b), &c) in &directed {
            prop_assert_eq!(c, 1);
            prop_assert_eq!(directed.get(&(b, a)), Some(&1));
        }
        let expect = set.len() as f64 * h * h * h;
        prop_assert!((mesh_volume(&mesh) - expect).abs() <= 1e-9 * expect);
        let bytes = stl_bytes(&mesh);
        prop_assert_eq!(bytes.len(), 84 + 50 * mesh.triangles.len());
        let parsed = common::parse_stl(&bytes).unwrap();
        prop_assert!(parsed.is_closed());
        prop_assert!((parsed.volume() - expect).abs() <= 1e-4 * expect);
    }
}
