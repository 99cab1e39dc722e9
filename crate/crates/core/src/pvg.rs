//! Point visibility graph construction.
//!
//! [`build_pvg`] sorts the other points angularly around each pivot; on every
//! shared ray only the nearest point is visible and each farther point is
//! blocked by all nearer ones. [`build_pvg_naive`] is the cubic reference
//! that tests every third point against every segment.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{self, Point, PointSet};
use crate::graph::Graph;

/// Blockers of every invisible pair, keyed `(i, j)` with `i < j` and listed
/// from `p_i` towards `p_j`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BlockerMap {
    map: BTreeMap<(usize, usize), Vec<usize>>,
}

impl BlockerMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Blockers on segment `p_a p_b` ordered from `p_a`; empty when visible.
    pub fn get(&self, a: usize, b: usize) -> Vec<usize> {
        if a < b {
            self.map.get(&(a, b)).cloned().unwrap_or_default()
        } else {
            let mut v = self.map.get(&(b, a)).cloned().unwrap_or_default();
            v.reverse();
            v
        }
    }

    pub fn is_blocked(&self, a: usize, b: usize) -> bool {
        self.map.contains_key(&(a.min(b), a.max(b)))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ((usize, usize), &[usize])> {
        self.map.iter().map(|(&k, v)| (k, v.as_slice()))
    }

    pub(crate) fn insert(&mut self, a: usize, b: usize, mut blockers: Vec<usize>) {
        if a > b {
            blockers.reverse();
            self.map.insert((b, a), blockers);
        } else {
            self.map.insert((a, b), blockers);
        }
    }
}

#[derive(Serialize, Deserialize)]
struct BlockerRecord {
    pair: (usize, usize),
    blockers: Vec<usize>,
}

impl Serialize for BlockerMap {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.map.iter().map(|(&pair, b)| BlockerRecord {
            pair,
            blockers: b.clone(),
        }))
    }
}

impl<'de> Deserialize<'de> for BlockerMap {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let recs = Vec::<BlockerRecord>::deserialize(d)?;
        let mut m = BlockerMap::new();
        for r in recs {
            m.insert(r.pair.0, r.pair.1, r.blockers);
        }
        Ok(m)
    }
}

/// A point set together with the graph it is claimed to realize.
///
/// The fields are public so that callers can assemble candidate embeddings
/// from other sources; [`Embedding::is_consistent`] re-derives the PVG.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub points: PointSet,
    pub graph: Graph,
    pub blockers: BlockerMap,
}

impl Embedding {
    /// True iff `graph` is exactly the PVG of `points`.
    pub fn is_consistent(&self) -> bool {
        self.points.len() == self.graph.n() && build_pvg(&self.points).graph == self.graph
    }

    pub fn n(&self) -> usize {
        self.points.len()
    }
}

/// Angular-sweep construction, `O(n^2 log n)`.
pub fn build_pvg(points: &PointSet) -> Embedding {
    let pts = points.points();
    let n = pts.len();
    let mut adj: Vec<Vec<usize>> = vec![Vec::new(); n];
    let mut blockers = BlockerMap::new();
    let mut order: Vec<usize> = Vec::with_capacity(n);
    for (i, &pivot) in pts.iter().enumerate() {
        order.clear();
        order.extend((0..n).filter(|&j| j != i));
        order.sort_unstable_by(|&a, &b| geom::cmp_angular(pivot, pts[a], pts[b]));
        let mut start = 0;
        while start < order.len() {
            let mut end = start + 1;
            while end < order.len() && geom::cmp_direction(pivot, pts[order[start]], pts[order[end]]) == Ordering::Equal
            {
                end += 1;
            }
            let ray = &order[start..end];
            adj[i].push(ray[0]);
            for (k, &far) in ray.iter().enumerate().skip(1) {
                if i < far {
                    blockers.insert(i, far, ray[..k].to_vec());
                }
            }
            start = end;
        }
    }
    for list in &mut adj {
        list.sort_unstable();
    }
    Embedding {
        points: points.clone(),
        graph: Graph::from_sorted_adjacency(adj),
        blockers,
    }
}

/// Reference construction: every pair against every third point, `O(n^3)`.
pub fn build_pvg_naive(points: &PointSet) -> Embedding {
    let pts = points.points();
    let n = pts.len();
    let mut edges = Vec::new();
    let mut blockers = BlockerMap::new();
    for i in 0..n {
        for j in i + 1..n {
            let mut on: Vec<usize> = (0..n)
                .filter(|&k| k != i && k != j && geom::between(pts[i], pts[k], pts[j]))
                .collect();
            if on.is_empty() {
                edges.push((i, j));
            } else {
                on.sort_by_key(|&k| geom::dist2(pts[i], pts[k]));
                blockers.insert(i, j, on);
            }
        }
    }
    Embedding {
        points: points.clone(),
        graph: Graph::from_edges(n, edges).expect("indices in range"),
        blockers,
    }
}

/// Line `a x + b y + c = 0` in lowest terms with `a > 0` or `a = 0, b > 0`.
pub(crate) fn normalized_line(p: Point, q: Point) -> (i64, i64, i128) {
    let mut a = q.y - p.y;
    let mut b = p.x - q.x;
    let g = gcd(a.unsigned_abs(), b.unsigned_abs()) as i64;
    a /= g;
    b /= g;
    if a < 0 || (a == 0 && b < 0) {
        a = -a;
        b = -b;
    }
    let c = -(a as i128 * p.x as i128 + b as i128 * p.y as i128);
    (a, b, c)
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// Every line through at least three points, as the indices on it sorted
/// along the line; ordered by normalized line coefficients.
pub fn maximal_gsps(points: &PointSet) -> Vec<Vec<usize>> {
    let pts = points.points();
    let mut lines: BTreeMap<(i64, i64, i128), BTreeSet<usize>> = BTreeMap::new();
    for i in 0..pts.len() {
        for j in i + 1..pts.len() {
            let set = lines.entry(normalized_line(pts[i], pts[j])).or_default();
            set.insert(i);
            set.insert(j);
        }
    }
    lines
        .into_values()
        .filter(|s| s.len() >= 3)
        .map(|s| {
            let mut run: Vec<usize> = s.into_iter().collect();
            run.sort_by_key(|&k| pts[k]);
            run
        })
        .collect()
}

/// Validates a raw coordinate list into a [`PointSet`] and builds its PVG.
pub fn build_from_coords(coords: &[(i64, i64)]) -> Result<Embedding> {
    if coords.is_empty() {
        return Err(Error::InvalidArgument("empty point set".into()));
    }
    Ok(build_pvg(&PointSet::from_coords(coords)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid3() -> PointSet {
        let c: Vec<(i64, i64)> = (0..3).flat_map(|y| (0..3).map(move |x| (x, y))).collect();
        PointSet::from_coords(&c).unwrap()
    }

    #[test]
    fn collinear_four() {
        let ps = PointSet::from_coords(&[(0, 0), (1, 0), (2, 0), (3, 0)]).unwrap();
        let e = build_pvg(&ps);
        assert_eq!(e.graph, Graph::path(4));
        let got: Vec<_> = e.blockers.iter().map(|(k, v)| (k, v.to_vec())).collect();
        assert_eq!(got, vec![((0, 2), vec![1]), ((0, 3), vec![1, 2]), ((1, 3), vec![2])]);
        assert_eq!(e.blockers.get(3, 0), vec![2, 1]);
        assert_eq!(build_pvg_naive(&ps), e);
    }

    #[test]
    fn general_position_is_complete() {
        let ps = PointSet::from_coords(&[(0, 0), (5, 1), (2, 7), (-3, 4)]).unwrap();
        let e = build_pvg(&ps);
        assert_eq!(e.graph, Graph::complete(4));
        assert!(e.blockers.is_empty());
        assert_eq!(build_pvg_naive(&ps), e);
    }

    #[test]
    fn grid_degrees() {
        let e = build_pvg(&grid3());
        assert_eq!(e.graph.m(), 28);
        // corners, edge midpoints, centre
        for (v, d) in [(0, 5), (2, 5), (6, 5), (8, 5), (1, 7), (3, 7), (5, 7), (7, 7), (4, 8)] {
            assert_eq!(e.graph.degree(v), d, "vertex {v}");
        }
        assert_eq!(build_pvg_naive(&grid3()), e);
    }

    #[test]
    fn tiny_inputs() {
        let one = PointSet::from_coords(&[(3, 3)]).unwrap();
        assert_eq!(build_pvg(&one).graph.n(), 1);
        assert_eq!(build_pvg_naive(&one).graph.m(), 0);
        let two = PointSet::from_coords(&[(3, 3), (-1, 2)]).unwrap();
        assert_eq!(build_pvg(&two).graph.m(), 1);
        assert_eq!(build_pvg_naive(&two).graph.m(), 1);
        assert!(build_from_coords(&[(0, 0), (0, 0)]).is_err());
    }

    #[test]
    fn gsp_examples() {
        let line = PointSet::from_coords(&[(3, 0), (0, 0), (2, 0), (1, 0)]).unwrap();
        assert_eq!(maximal_gsps(&line), vec![vec![1, 3, 2, 0]]);
        let runs = maximal_gsps(&grid3());
        assert_eq!(runs.len(), 8);
        assert!(runs.iter().all(|r| r.len() == 3));
        let general = PointSet::from_coords(&[(0, 0), (5, 1), (2, 7)]).unwrap();
        assert!(maximal_gsps(&general).is_empty());
    }

    #[test]
    fn embedding_json_lists_blocker_chains() {
        let ps = PointSet::from_coords(&[(0, 0), (1, 0), (2, 0)]).unwrap();
        let s = serde_json::to_string(&build_pvg(&ps)).unwrap();
        assert!(s.contains(r#""blockers":[{"pair":[0,2],"blockers":[1]}]"#), "{s}");
        let back: Embedding = serde_json::from_str(&s).unwrap();
        assert!(back.is_consistent());
    }
}
