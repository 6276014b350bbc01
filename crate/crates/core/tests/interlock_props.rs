use interlock_truss::interlock::{
    blocked_pieces, escapes_by_simulation, neighbor_directions, sampled_directions, verify_disassembly_sequence,
    verify_interlocked, Assembly, Piece,
};
use interlock_truss::{Voxel, VoxelSet};
use proptest::prelude::*;

fn assembly(cells: Vec<(Voxel, usize)>) -> Option<Assembly> {
    let mut groups: Vec<Vec<Voxel>> = vec![Vec::new(); 3];
    let mut taken = std::collections::BTreeSet::new();
    for (v, k) in cells {
        if taken.insert(v) {
            groups[k].push(v);
        }
    }
    let pieces: Vec<Piece> = groups
        .into_iter()
        .enumerate()
        .filter(|(_, g)| !g.is_empty())
        .map(|(i, g)| Piece::new(format!("p{i}"), VoxelSet::from_unsorted(g)))
        .collect();
    (pieces.len() >= 2).then(|| Assembly::new(pieces).unwrap())
}

fn cells() -> impl Strategy<Value = Vec<(Voxel, usize)>> {
    prop::collection::vec(((0..5, 0..5, 0..5).prop_map(|(x, y, z)| [x, y, z]), 0..3usize), 2..50)
}

fn direction() -> impl Strategy<Value = [i32; 3]> {
    (-3i32..4, -3i32..4, -3i32..4).prop_filter("nonzero", |d| *d != (0, 0, 0)).prop_map(|(x, y, z)| [x, y, z])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sweep_agrees_with_simulation(c in cells(), d in direction()) {
        if let Some(a) = assembly(c) {
            let blocked = blocked_pieces(&a, d);
            for (i, b) in blocked.iter().enumerate() {
                prop_assert_eq!(!b, escapes_by_simulation(&a, i, d), "piece {} along {:?}", i, d);
            }
        }
    }

    #[test]
    fn removing_pieces_never_blocks(c in cells(), d in direction()) {
        if let Some(a) = assembly(c) {
            if a.len() < 3 {
                return Ok(());
            }
            let full = blocked_pieces(&a, d);
            let gone = a.pieces()[2].id.clone();
            let smaller = a.without(&[gone.as_str()]);
            let fewer = blocked_pieces(&smaller, d);
            for i in 0..2 {
                prop_assert!(!(fewer[i] && !full[i]), "piece {} blocked only after removal", i);
            }
        }
    }
}

fn block(lo: Voxel, hi: Voxel) -> VoxelSet {
    let mut v = Vec::new();
    for z in lo[2]..hi[2] {
        for y in lo[1]..hi[1] {
            for x in lo[0]..hi[0] {
                v.push([x, y, z]);
            }
        }
    }
    VoxelSet::from_unsorted(v)
}

#[test]
fn caged_piece_is_interlocked_and_door_opens_it() {
    let outer = block([0, 0, 0], [6, 6, 6]);
    let inner = block([2, 2, 2], [4, 4, 4]);
    let door = block([2, 2, 5], [4, 4, 6]);
    let cage = outer.difference(&block([1, 1, 1], [5, 5, 5])).difference(&door);
    let a = Assembly::new(vec![
        Piece::new("door", door),
        Piece::new("inner", inner),
        Piece::new("cage", cage),
    ])
    .unwrap();
    // walls are one voxel thick, so only unit steps are meaningful here
    let dirs = neighbor_directions();
    let closed = Assembly::new(vec![
        Piece::new("inner", block([2, 2, 2], [4, 4, 4])),
        Piece::new("cage", outer.difference(&block([1, 1, 1], [5, 5, 5]))),
    ])
    .unwrap();
    assert!(verify_interlocked(&closed, &dirs).unwrap().interlocked);
    let open = verify_interlocked(&a, &dirs).unwrap();
    assert!(!open.interlocked);
    assert!(open.escapes_of("inner").is_empty());
    let seq = verify_disassembly_sequence(&a, &dirs).unwrap();
    let order: Vec<&str> = seq.iter().map(|r| r.piece.as_str()).collect();
    assert_eq!(order, ["door", "inner", "cage"]);
    assert!(seq[0].direction.is_some_and(|d| d[2] == 1));
}

#[test]
fn sampled_directions_are_seeded_and_primitive() {
    let a = sampled_directions(9, 72);
    assert_eq!(a, sampled_directions(9, 72));
    assert_ne!(a, sampled_directions(10, 72));
    assert_eq!(a.len(), 98);
    assert_eq!(&a[..26], neighbor_directions().as_slice());
    let gcd = |mut x: i32, mut y: i32| {
        while y != 0 {
            (x, y) = (y, x % y);
        }
        x.abs()
    };
    for d in &a[26..] {
        assert!(d.iter().all(|c| c.abs() <= 7));
        assert_eq!(gcd(gcd(d[0], d[1]), d[2]), 1);
    }
    let unique: std::collections::BTreeSet<_> = a.iter().collect();
    assert_eq!(unique.len(), a.len());
}
