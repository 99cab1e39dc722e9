//! Embedding an arbitrary graph as an induced subgraph of a PVG.
//!
//! Base vertex `i` sits at `(i, i^2)`, so the base points are in convex
//! position with no three collinear and see each other. Each non-edge
//! `{i, j}` then gets one blocker at `p_i + (a / D)(p_j - p_i)` with the
//! smallest `a` that keeps the new point off every line through two other
//! points. Such a blocker hides only `p_i` from `p_j` and sees everything
//! else, so the result is the base graph plus one universal vertex per
//! non-edge. All coordinates are multiplied by `D` to make them integers.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{cross, Point, PointSet};
use crate::graph::{brute_optima, Graph, Optima};
use crate::pvg::{build_pvg, Embedding};

pub const GADGET_MAX_N: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gadget {
    pub base: Graph,
    /// Base graph plus one universal vertex per non-edge.
    pub graph: Graph,
    pub embedding: Embedding,
    /// Number of blockers added.
    pub x: usize,
    /// `injection[v]` is the vertex of the output graph for base vertex `v`.
    pub injection: Vec<usize>,
    /// The non-edge each blocker `n + t` hides, in order.
    pub blocked_pairs: Vec<(usize, usize)>,
    pub denominator: i64,
}

/// The base graph with `x` vertices adjacent to everything appended.
pub fn with_universal_vertices(g: &Graph, x: usize) -> Graph {
    let n = g.n();
    let total = n + x;
    let extra = (n..total).flat_map(|b| (0..b).map(move |u| (u, b)));
    Graph::from_edges(total, g.edges().chain(extra)).expect("valid vertex range")
}

pub fn build_gadget(g: &Graph) -> Result<Gadget> {
    let n = g.n();
    if n > GADGET_MAX_N {
        return Err(Error::Budget {
            what: "gadget base vertices",
            got: n,
            limit: GADGET_MAX_N,
        });
    }
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .filter(|&(i, j)| !g.has_edge(i, j))
        .collect();
    let x = pairs.len();
    let total = (n + x) as i64;
    // More parameter values than lines that could forbid one.
    let d = 2 * total * total + 1;
    let mut pts: Vec<Point> = (0..n as i64).map(|i| Point { x: d * i, y: d * i * i }).collect();
    for &(i, j) in &pairs {
        let (pi, pj) = (pts[i], pts[j]);
        let q = (1..d)
            .map(|a| Point {
                x: pi.x + (pj.x - pi.x) / d * a,
                y: pi.y + (pj.y - pi.y) / d * a,
            })
            .find(|&q| off_other_lines(&pts, (i, j), q))
            .expect("fewer forbidden parameters than candidates");
        pts.push(q);
    }
    if let Some(p) = pts.iter().find(|p| !p.in_bound()) {
        return Err(Error::CoordinateBound { x: p.x, y: p.y });
    }
    let embedding = build_pvg(&PointSet::new(pts)?);
    let graph = with_universal_vertices(g, x);
    if embedding.graph != graph {
        return Err(Error::InvalidArgument("gadget embedding failed certification".into()));
    }
    Ok(Gadget {
        base: g.clone(),
        graph,
        embedding,
        x,
        injection: (0..n).collect(),
        blocked_pairs: pairs,
        denominator: d,
    })
}

/// `q` is collinear with no two existing points except `pts[i]`, `pts[j]`.
fn off_other_lines(pts: &[Point], (i, j): (usize, usize), q: Point) -> bool {
    for a in 0..pts.len() {
        for b in a + 1..pts.len() {
            if (a, b) != (i, j) && cross(pts[a], pts[b], q) == 0 {
                return false;
            }
        }
    }
    true
}

/// Optima of the base graph and of the gadget graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct GadgetOptima {
    pub base: Optima,
    pub gadget: Optima,
    pub x: usize,
}

impl GadgetOptima {
    /// Cover and clique grow by `x`; the independent set is unchanged.
    pub fn shifted_as_expected(&self) -> bool {
        self.gadget.vertex_cover == self.base.vertex_cover + self.x
            && self.gadget.independent_set == self.base.independent_set
            && self.gadget.clique == self.base.clique + self.x
    }
}

pub fn gadget_optima(gd: &Gadget) -> Result<GadgetOptima> {
    Ok(GadgetOptima {
        base: brute_optima(&gd.base)?,
        gadget: brute_optima(&gd.embedding.graph)?,
        x: gd.x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let k3 = build_gadget(&Graph::complete(3)).unwrap();
        assert_eq!(k3.x, 0);
        assert_eq!(k3.graph, Graph::complete(3));
        let d = k3.denominator;
        assert_eq!(
            k3.embedding.points.points(),
            &[Point { x: 0, y: 0 }, Point { x: d, y: d }, Point { x: 2 * d, y: 4 * d }]
        );

        let p3 = build_gadget(&Graph::path(3)).unwrap();
        assert_eq!(p3.x, 1);
        let o = gadget_optima(&p3).unwrap();
        assert_eq!((o.base.vertex_cover, o.base.independent_set, o.base.clique), (1, 2, 2));
        assert_eq!(
            (o.gadget.vertex_cover, o.gadget.independent_set, o.gadget.clique),
            (2, 2, 3)
        );

        let c5 = build_gadget(&Graph::cycle(5)).unwrap();
        assert_eq!(c5.x, 5);
        let o = gadget_optima(&c5).unwrap();
        assert_eq!((o.base.vertex_cover, o.base.independent_set, o.base.clique), (3, 2, 2));
        assert_eq!(
            (o.gadget.vertex_cover, o.gadget.independent_set, o.gadget.clique),
            (8, 2, 7)
        );
        assert!(o.shifted_as_expected());
    }

    #[test]
    fn base_graph_is_induced_and_blockers_are_universal() {
        let g = Graph::empty(6);
        let gd = build_gadget(&g).unwrap();
        assert_eq!(gd.x, 15);
        assert_eq!(gd.embedding.graph.induced(&gd.injection), g);
        for b in 6..21 {
            assert_eq!(gd.embedding.graph.degree(b), 20);
        }
        for (t, &(i, j)) in gd.blocked_pairs.iter().enumerate() {
            assert_eq!(gd.embedding.blockers.get(i, j), vec![6 + t]);
        }
    }

    #[test]
    fn size_budget() {
        assert!(matches!(build_gadget(&Graph::empty(13)), Err(Error::Budget { .. })));
        let gd = build_gadget(&Graph::empty(12)).unwrap();
        assert_eq!(gd.x, 66);
    }
}
