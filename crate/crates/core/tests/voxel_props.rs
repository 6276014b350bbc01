use std::collections::{BTreeSet, VecDeque};

use interlock_truss::{Voxel, VoxelSet};
use proptest::prelude::*;

fn raw(max: i32) -> impl Strategy<Value = Vec<Voxel>> {
    prop::collection::vec((0..max, 0..max, 0..max).prop_map(|(x, y, z)| [x, y, z]), 0..80)
}

fn oracle(v: &[Voxel]) -> BTreeSet<Voxel> {
    v.iter().copied().collect()
}

fn as_set(s: &VoxelSet) -> BTreeSet<Voxel> {
    s.iter().copied().collect()
}

fn flood_components(set: &BTreeSet<Voxel>) -> usize {
    let mut seen = BTreeSet::new();
    let mut count = 0;
    for &start in set {
        if !seen.insert(start) {
            continue;
        }
        count += 1;
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            for (a, d) in [(0, 1), (0, -1), (1, 1), (1, -1), (2, 1), (2, -1)] {
                let mut w = v;
                w[a] += d;
                if set.contains(&w) && seen.insert(w) {
                    queue.push_back(w);
                }
            }
        }
    }
    count
}

proptest! {
    #[test]
    fn set_algebra_matches_btreeset(a in raw(6), b in raw(6)) {
        let (sa, sb) = (VoxelSet::from_unsorted(a.clone()), VoxelSet::from_unsorted(b.clone()));
        let (oa, ob) = (oracle(&a), oracle(&b));
        prop_assert_eq!(sa.len(), oa.len());
        prop_assert_eq!(as_set(&sa.union(&sb)), oa.union(&ob).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(as_set(&sa.intersection(&sb)), oa.intersection(&ob).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(as_set(&sa.difference(&sb)), oa.difference(&ob).copied().collect::<BTreeSet<_>>());
        prop_assert_eq!(sa.is_disjoint(&sb), oa.is_disjoint(&ob));
        for v in &b {
            prop_assert_eq!(sa.contains(v), oa.contains(v));
        }
    }

    #[test]
    fn translate_and_components(a in raw(7), d in (-3i32..4, -3i32..4, -3i32..4)) {
        let s = VoxelSet::from_unsorted(a.clone());
        let d = [d.0, d.1, d.2];
        let moved: BTreeSet<Voxel> = a.iter().map(|v| [v[0] + d[0], v[1] + d[1], v[2] + d[2]]).collect();
        prop_assert_eq!(as_set(&s.translate(d)), moved);
        let comps = s.components();
        prop_assert_eq!(comps.len(), flood_components(&oracle(&a)));
        prop_assert_eq!(comps.iter().map(VoxelSet::len).sum::<usize>(), s.len());
        prop_assert_eq!(s.is_connected(), comps.len() <= 1);
    }
}
