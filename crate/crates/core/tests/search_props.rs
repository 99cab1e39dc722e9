use std::collections::HashSet;

use proptest::prelude::*;
use pvg_core::nc::SearchBudget;
use pvg_core::search::{grid_search_embedding, GridOutcome};
use pvg_core::{build_pvg, Graph, PointSet};

fn unlimited() -> SearchBudget {
    SearchBudget {
        node_limit: u64::MAX,
        time_limit: None,
    }
}

fn edge_mask(g: &Graph) -> u64 {
    g.edges().fold(0, |m, (u, v)| m | 1 << (u * 8 + v))
}

/// Every labelled graph realized by an injective placement on the grid.
fn realizable(n: usize, w: i64, h: i64) -> HashSet<u64> {
    let cells: Vec<(i64, i64)> = (0..h).flat_map(|y| (0..w).map(move |x| (x, y))).collect();
    let mut out = HashSet::new();
    let mut pick = Vec::new();
    fn rec(cells: &[(i64, i64)], n: usize, pick: &mut Vec<(i64, i64)>, out: &mut HashSet<u64>) {
        if pick.len() == n {
            out.insert(edge_mask(&build_pvg(&PointSet::from_coords(pick).unwrap()).graph));
            return;
        }
        for &c in cells {
            if !pick.contains(&c) {
                pick.push(c);
                rec(cells, n, pick, out);
                pick.pop();
            }
        }
    }
    rec(&cells, n, &mut pick, &mut out);
    out
}

#[test]
fn search_agrees_with_exhaustive_placement() {
    for (n, w, h) in [(4, 3, 3), (5, 3, 3), (4, 4, 2), (5, 4, 2)] {
        let real = realizable(n, w, h);
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        for bits in 0u32..1 << pairs.len() {
            let g = Graph::from_edges(
                n,
                pairs
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| bits >> i & 1 == 1)
                    .map(|(_, &p)| p),
            )
            .unwrap();
            let r = grid_search_embedding(&g, w as u32, h as u32, &unlimited()).unwrap();
            let found = matches!(r.outcome, GridOutcome::Found { .. });
            assert_eq!(
                found,
                real.contains(&edge_mask(&g)),
                "n={n} grid {w}x{h} edges {:?}",
                g.edges().collect::<Vec<_>>()
            );
            assert_ne!(r.outcome, GridOutcome::Timeout);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn found_is_monotone_in_grid_size(coords in proptest::collection::btree_set((0i64..4, 0i64..4), 2..=7)) {
        let ps = PointSet::from_coords(&coords.into_iter().collect::<Vec<_>>()).unwrap();
        let g = build_pvg(&ps).graph;
        for side in [4u32, 5] {
            let r = grid_search_embedding(&g, side, side, &unlimited()).unwrap();
            let e = r.embedding().expect("the sampled points are a witness");
            prop_assert_eq!(&e.graph, &g);
        }
    }
}
