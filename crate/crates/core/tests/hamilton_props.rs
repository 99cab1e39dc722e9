use proptest::prelude::*;
use pvg_core::hamilton::{hamiltonian_cycle_report, is_hamiltonian_cycle};
use pvg_core::{build_pvg, Error, PointSet};

fn point_set(side: i64, max_n: usize) -> impl Strategy<Value = PointSet> {
    proptest::collection::btree_set((0..side, 0..side), 3..=max_n)
        .prop_map(|s| PointSet::from_coords(&s.into_iter().collect::<Vec<_>>()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(600))]

    #[test]
    fn layer_merge_gives_a_cycle_on_dense_grids(ps in point_set(6, 30)) {
        let e = build_pvg(&ps);
        match hamiltonian_cycle_report(&e) {
            Ok(r) => {
                prop_assert!(is_hamiltonian_cycle(&e.graph, &r.cycle));
                prop_assert_eq!(r.cycle[0], 0);
                prop_assert_eq!(r.fallbacks(), 0);
            }
            Err(err) => {
                prop_assert_eq!(err, Error::PathGraph);
                prop_assert!(ps.all_collinear());
            }
        }
    }

    #[test]
    fn layer_merge_on_sparse_sets(ps in point_set(40, 40)) {
        let e = build_pvg(&ps);
        if !ps.all_collinear() {
            let r = hamiltonian_cycle_report(&e).unwrap();
            prop_assert!(is_hamiltonian_cycle(&e.graph, &r.cycle));
            prop_assert_eq!(r.fallbacks(), 0);
        }
    }
}
