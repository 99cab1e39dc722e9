use std::time::Duration;

use pvg_core::fixtures;
use pvg_core::nc::{self, NcConfig, SearchBudget, Verdict};

fn long_budget() -> NcConfig {
    NcConfig {
        max_interior: None,
        budget: SearchBudget {
            node_limit: 200_000_000,
            time_limit: Some(Duration::from_secs(300)),
        },
    }
}

#[test]
fn g_satisfies_all_conditions() {
    let g = fixtures::g_embedding().graph;
    let r = nc::check_all(&g, &long_budget()).unwrap();
    assert_eq!(r.verdict(), Verdict::Satisfied, "{r:?}");
    let a = r.nc3.assignment.unwrap();
    assert_eq!(r.nc3.ordering.unwrap().check(&g, &a), None);
}

#[test]
fn g_prime_nc3_exhaustive() {
    let g = fixtures::g_prime();
    let r = nc::search_nc3(&g, &long_budget()).unwrap();
    eprintln!("{:?} {:?}", r.verdict, r.stats);
    assert_eq!(r.verdict, Verdict::Refuted);
}
