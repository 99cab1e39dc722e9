//! Small named graphs used by tests, the CLI and the demo.

use crate::geom::PointSet;
use crate::graph::Graph;
use crate::nc::BlockerAssignment;
use crate::pvg::{build_pvg, Embedding};

/// Thirteen points: the origin and three rows of four points on the rays
/// through `(i, 1)`, `i = 1..4`.
pub fn g_points() -> PointSet {
    let mut c = vec![(0, 0)];
    for row in 1..=3i64 {
        for i in 1..=4i64 {
            c.push((row * i, row));
        }
    }
    PointSet::from_coords(&c).expect("fixture is valid")
}

pub fn g_embedding() -> Embedding {
    build_pvg(&g_points())
}

/// The PVG of [`g_points`] with the top row rewired from `9-10-11-12` to
/// `9-11-10-12`.
pub fn g_prime() -> Graph {
    let g = g_embedding().graph;
    let mut g = g.toggle_edge(9, 10).expect("in range");
    for (u, v) in [(11, 12), (9, 11), (10, 12)] {
        g = g.toggle_edge(u, v).expect("in range");
    }
    g
}

/// Assignment for [`g_prime`] that satisfies NC2 but not NC3.
pub fn g_prime_assignment() -> BlockerAssignment {
    let mut a = BlockerAssignment::new();
    for ray in 1..=4 {
        let (r1, r2, r3) = (ray, ray + 4, ray + 8);
        a.insert(0, r2, vec![r1]);
        a.insert(0, r3, vec![r1, r2]);
        a.insert(r1, r3, vec![r2]);
    }
    for base in [1, 5] {
        a.insert(base, base + 2, vec![base + 1]);
        a.insert(base, base + 3, vec![base + 1, base + 2]);
        a.insert(base + 1, base + 3, vec![base + 2]);
    }
    a.insert(9, 10, vec![11]);
    a.insert(9, 12, vec![11, 10]);
    a.insert(11, 12, vec![10]);
    a
}

/// A path on five vertices with the chord between the second and fourth.
pub fn p5_chord() -> Graph {
    Graph::from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (1, 3)]).expect("fixture is valid")
}

/// Four collinear points and an apex above the line: the path plus one
/// vertex adjacent to all of it.
pub fn fan5() -> Embedding {
    build_pvg(&PointSet::from_coords(&[(0, 0), (1, 0), (2, 0), (3, 0), (0, 1)]).expect("valid"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::invisible_pairs;

    #[test]
    fn g_has_expected_shape() {
        let e = g_embedding();
        assert_eq!(e.graph.n(), 13);
        assert_eq!(e.blockers.len(), 21);
        assert_eq!(e.blockers.get(0, 9), vec![1, 5]);
        assert_eq!(e.blockers.get(1, 4), vec![2, 3]);
        assert_eq!(e.graph.neighbors(0), &[1, 2, 3, 4]);
        let gp = g_prime();
        assert_eq!(gp.m(), e.graph.m());
        let pairs = invisible_pairs(&gp);
        assert!(pairs.contains(9, 10) && pairs.contains(9, 12) && pairs.contains(11, 12));
        assert_eq!(g_prime_assignment().len(), 21);
    }

    #[test]
    fn fan_is_path_plus_apex() {
        let e = fan5();
        assert_eq!(e.graph.degree(4), 4);
        assert_eq!(e.graph.m(), 7);
    }
}
