//! Hamiltonian cycles of non-path PVGs by merging convex layers.
//!
//! The outer hull is a cycle of visible pairs. Each next layer is spliced in
//! through an edge `p_i p_j` of the previous layer (`p_j` clockwise after
//! `p_i`) using the left tangents `p_l` from `p_i` and `p_m` from `p_j`:
//!
//! * `p_l = p_m`: with `p_t` clockwise after `p_l`, swap `p_i p_j`, `p_l p_t`
//!   for `p_i p_l`, `p_j p_t`.
//! * `p_l p_m` a layer edge: swap `p_i p_j`, `p_l p_m` for `p_i p_l`, `p_j p_m`.
//! * otherwise, with `p_q` counterclockwise before `p_m`: swap `p_i p_j`,
//!   `p_q p_m` for `p_i p_q`, `p_j p_m`.
//!
//! A degenerate innermost layer (a point or a collinear path) is inserted
//! into any edge of the previous layer whose endpoints see its ends. Every
//! added pair is checked against the graph; if a case's pairs are not edges
//! the splice falls back to searching for any valid exchange, and the report
//! counts such fallbacks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{dist2, orient, Orientation, Point};
use crate::graph::Graph;
use crate::hull::{convex_layers, Layer, LayerKind};
use crate::pvg::Embedding;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpliceCase {
    SameTangent,
    AdjacentTangents,
    SeparateTangents,
    Fallback,
    InnerPoint,
    InnerPath,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HamiltonReport {
    pub cycle: Vec<usize>,
    /// One entry per merged layer.
    pub splices: Vec<SpliceCase>,
}

impl HamiltonReport {
    pub fn fallbacks(&self) -> usize {
        self.splices.iter().filter(|&&c| c == SpliceCase::Fallback).count()
    }
}

/// True iff `cycle` visits every vertex once and consecutive vertices,
/// including last and first, are adjacent.
pub fn is_hamiltonian_cycle(g: &Graph, cycle: &[usize]) -> bool {
    let n = g.n();
    if n < 3 || cycle.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &v in cycle {
        if v >= n || seen[v] {
            return false;
        }
        seen[v] = true;
    }
    (0..n).all(|i| g.has_edge(cycle[i], cycle[(i + 1) % n]))
}

pub fn hamiltonian_cycle(e: &Embedding) -> Result<Vec<usize>> {
    Ok(hamiltonian_cycle_report(e)?.cycle)
}

pub fn hamiltonian_cycle_report(e: &Embedding) -> Result<HamiltonReport> {
    let layers = convex_layers(&e.points).layers;
    if layers.is_empty() || layers[0].kind != LayerKind::Cycle {
        return Err(Error::PathGraph);
    }
    let mut b = Builder {
        g: &e.graph,
        pts: e.points.points(),
        nbr: vec![[NONE, NONE]; e.n()],
        splices: Vec::new(),
    };
    let outer = &layers[0].vertices;
    for i in 0..outer.len() {
        b.add(outer[i], outer[(i + 1) % outer.len()]);
    }
    // Lexicographically least hull edge, oriented clockwise.
    let mut edge = (0..outer.len())
        .map(|i| (outer[i], outer[(i + 1) % outer.len()]))
        .min_by_key(|&(u, v)| (u.min(v), u.max(v)))
        .expect("hull has edges");
    for t in 1..layers.len() {
        let prev = &layers[t - 1];
        let inner = &layers[t];
        match inner.kind {
            LayerKind::Cycle => {
                let start = b.splice_cycle(edge, prev, inner)?;
                edge = next_edge(&b, inner, start);
            }
            LayerKind::Point | LayerKind::Path => b.splice_tail(edge, prev, inner)?,
        }
    }
    let cycle = b.traverse();
    if !is_hamiltonian_cycle(&e.graph, &cycle) {
        return Err(Error::InvalidArgument("embedding does not realize its graph".into()));
    }
    Ok(HamiltonReport {
        cycle,
        splices: b.splices,
    })
}

const NONE: usize = usize::MAX;

struct Builder<'a> {
    g: &'a Graph,
    pts: &'a [Point],
    nbr: Vec<[usize; 2]>,
    splices: Vec<SpliceCase>,
}

fn cw(layer: &Layer, v: usize) -> usize {
    let k = layer.vertices.len();
    let i = layer.vertices.iter().position(|&x| x == v).expect("on layer");
    layer.vertices[(i + 1) % k]
}

fn ccw(layer: &Layer, v: usize) -> usize {
    let k = layer.vertices.len();
    let i = layer.vertices.iter().position(|&x| x == v).expect("on layer");
    layer.vertices[(i + k - 1) % k]
}

/// First clockwise layer edge from `start` still on the cycle.
fn next_edge(b: &Builder, layer: &Layer, start: usize) -> (usize, usize) {
    let vs = &layer.vertices;
    let s = vs.iter().position(|&x| x == start).expect("on layer");
    (0..vs.len())
        .map(|k| (vs[(s + k) % vs.len()], vs[(s + k + 1) % vs.len()]))
        .find(|&(u, v)| b.has(u, v))
        .expect("a merged layer keeps at least one of its edges")
}

impl Builder<'_> {
    fn has(&self, u: usize, v: usize) -> bool {
        self.nbr[u].contains(&v)
    }

    fn add(&mut self, u: usize, v: usize) {
        for (a, b) in [(u, v), (v, u)] {
            let slot = self.nbr[a].iter().position(|&x| x == NONE).expect("degree at most two");
            self.nbr[a][slot] = b;
        }
    }

    fn remove(&mut self, u: usize, v: usize) {
        for (a, b) in [(u, v), (v, u)] {
            let slot = self.nbr[a].iter().position(|&x| x == b).expect("edge on cycle");
            self.nbr[a][slot] = NONE;
        }
    }

    fn exchange(&mut self, out: [(usize, usize); 2], new: [(usize, usize); 2]) {
        for (u, v) in out {
            self.remove(u, v);
        }
        for (u, v) in new {
            self.add(u, v);
        }
    }

    /// Left tangent from `q` to a cycle layer: every layer point lies left
    /// of or on the ray `q -> p`; the nearest such `p` on the ray.
    fn left_tangent(&self, q: usize, layer: &Layer) -> usize {
        let pq = self.pts[q];
        let mut best = layer.vertices[0];
        for &r in &layer.vertices[1..] {
            match orient(pq, self.pts[best], self.pts[r]) {
                Orientation::Clockwise => best = r,
                Orientation::Collinear if dist2(pq, self.pts[r]) < dist2(pq, self.pts[best]) => best = r,
                _ => {}
            }
        }
        best
    }

    fn valid(&self, pairs: &[(usize, usize)]) -> bool {
        pairs.iter().all(|&(u, v)| self.g.has_edge(u, v))
    }

    /// Returns the vertex the next splice starts from.
    fn splice_cycle(&mut self, (pi, pj): (usize, usize), prev: &Layer, inner: &Layer) -> Result<usize> {
        let vs = &inner.vertices;
        for i in 0..vs.len() {
            self.add(vs[i], vs[(i + 1) % vs.len()]);
        }
        let pl = self.left_tangent(pi, inner);
        let pm = self.left_tangent(pj, inner);
        let (case, out, new, start) = if pl == pm {
            let pt = cw(inner, pl);
            (SpliceCase::SameTangent, (pl, pt), [(pi, pl), (pj, pt)], pt)
        } else if cw(inner, pl) == pm || ccw(inner, pl) == pm {
            (SpliceCase::AdjacentTangents, (pl, pm), [(pi, pl), (pj, pm)], pm)
        } else {
            let pq = ccw(inner, pm);
            (SpliceCase::SeparateTangents, (pq, pm), [(pi, pq), (pj, pm)], pm)
        };
        if self.valid(&new) {
            self.exchange([(pi, pj), out], new);
            self.splices.push(case);
            return Ok(start);
        }
        self.fallback(prev, inner)
    }

    /// Any exchange of a previous-layer edge and an inner-layer edge.
    fn fallback(&mut self, prev: &Layer, inner: &Layer) -> Result<usize> {
        let ring = |l: &Layer| {
            let vs = l.vertices.clone();
            (0..vs.len())
                .map(move |i| (vs[i], vs[(i + 1) % vs.len()]))
                .collect::<Vec<_>>()
        };
        for (u, v) in ring(prev) {
            if !self.has(u, v) {
                continue;
            }
            for (a, b) in ring(inner) {
                for (x, y) in [(a, b), (b, a)] {
                    if self.g.has_edge(u, x) && self.g.has_edge(v, y) {
                        self.exchange([(u, v), (a, b)], [(u, x), (v, y)]);
                        self.splices.push(SpliceCase::Fallback);
                        return Ok(y);
                    }
                }
            }
        }
        Err(Error::InvalidArgument(
            "no valid splice between consecutive layers".into(),
        ))
    }

    /// Inserts a point or collinear path into a previous-layer edge.
    fn splice_tail(&mut self, first: (usize, usize), prev: &Layer, inner: &Layer) -> Result<()> {
        let vs = &prev.vertices;
        let ring = (0..vs.len()).map(|i| (vs[i], vs[(i + 1) % vs.len()]));
        let edges: Vec<(usize, usize)> = std::iter::once(first)
            .chain(ring)
            .filter(|&(u, v)| self.has(u, v))
            .collect();
        let path = &inner.vertices;
        let (a, z) = (path[0], path[path.len() - 1]);
        for (u, v) in edges {
            for (x, y) in [(a, z), (z, a)] {
                if self.g.has_edge(u, x) && self.g.has_edge(v, y) {
                    self.remove(u, v);
                    self.add(u, x);
                    for w in path.windows(2) {
                        self.add(w[0], w[1]);
                    }
                    self.add(y, v);
                    self.splices.push(if path.len() == 1 {
                        SpliceCase::InnerPoint
                    } else {
                        SpliceCase::InnerPath
                    });
                    return Ok(());
                }
            }
        }
        Err(Error::InvalidArgument(
            "no edge of the previous layer sees the innermost layer".into(),
        ))
    }

    /// Cycle from vertex 0 towards its smaller neighbour.
    fn traverse(&self) -> Vec<usize> {
        let n = self.nbr.len();
        let mut out = Vec::with_capacity(n);
        let [a, b] = self.nbr[0];
        let (mut prev, mut cur) = (0, a.min(b));
        out.push(0);
        while cur != 0 && cur != NONE && out.len() <= n {
            out.push(cur);
            let [x, y] = self.nbr[cur];
            let next = if x == prev { y } else { x };
            prev = cur;
            cur = next;
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PointSet;
    use crate::pvg::build_pvg;

    fn emb(c: &[(i64, i64)]) -> Embedding {
        build_pvg(&PointSet::from_coords(c).unwrap())
    }

    #[test]
    fn examples() {
        assert_eq!(
            hamiltonian_cycle(&emb(&[(0, 0), (4, 0), (1, 3)])).unwrap(),
            vec![0, 1, 2]
        );
        let grid: Vec<(i64, i64)> = (0..3).flat_map(|y| (0..3).map(move |x| (x, y))).collect();
        let e = emb(&grid);
        let c = hamiltonian_cycle(&e).unwrap();
        assert!(is_hamiltonian_cycle(&e.graph, &c));
        assert_eq!(
            hamiltonian_cycle(&emb(&[(0, 0), (1, 0), (2, 0), (3, 0)])),
            Err(Error::PathGraph)
        );
    }

    #[test]
    fn nested_layers_and_inner_path() {
        let e = emb(&[
            (0, 0),
            (10, 0),
            (10, 10),
            (0, 10),
            (3, 3),
            (7, 3),
            (5, 7),
            (4, 4),
            (5, 4),
            (6, 4),
        ]);
        let r = hamiltonian_cycle_report(&e).unwrap();
        assert!(is_hamiltonian_cycle(&e.graph, &r.cycle));
        assert_eq!(r.splices.len(), 2);
        assert_eq!(*r.splices.last().unwrap(), SpliceCase::InnerPath);
    }

    #[test]
    fn validator_rejects_bad_cycles() {
        let g = Graph::cycle(4);
        assert!(is_hamiltonian_cycle(&g, &[0, 1, 2, 3]));
        assert!(!is_hamiltonian_cycle(&g, &[0, 2, 1, 3]));
        assert!(!is_hamiltonian_cycle(&g, &[0, 1, 2]));
        assert!(!is_hamiltonian_cycle(&g, &[0, 1, 1, 3]));
    }
}
