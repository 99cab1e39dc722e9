use proptest::prelude::*;
use pvg_core::audit::{audit_embedding_with, blocker_bound_check, sample_blocker_sets, AuditConfig};
use pvg_core::{build_pvg, PointSet};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point_set(side: i64, max_n: usize) -> impl Strategy<Value = PointSet> {
    proptest::collection::btree_set((0..side, 0..side), 1..=max_n)
        .prop_map(|s| PointSet::from_coords(&s.into_iter().collect::<Vec<_>>()).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn audit_passes_on_collinear_heavy_sets(ps in point_set(6, 24), seed in any::<u64>()) {
        let e = build_pvg(&ps);
        let r = audit_embedding_with(&e, &AuditConfig { blocker_samples: 20, seed });
        prop_assert!(r.passed(), "{}", r.to_text());
    }

    #[test]
    fn sampled_blocker_sets_meet_the_bound(ps in point_set(12, 30), seed in any::<u64>()) {
        let e = build_pvg(&ps);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        if let Some((a, c)) = sample_blocker_sets(&e.graph, 6, &mut rng) {
            let b = blocker_bound_check(&e, &a, &c).unwrap();
            prop_assert!(b.pass, "A={:?} C={:?} B={:?}", a, c, b.blockers);
        }
    }
}
