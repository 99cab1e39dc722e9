//! Bounded search for a visibility embedding on a lattice grid.
//!
//! Vertices are placed depth first onto free cells in row-major order.
//! A partial placement is abandoned as soon as it contradicts the graph:
//! a required edge already blocked, a new point landing inside a visible
//! edge, or a non-edge whose segment has no lattice point left to hold a
//! blocker. An unresolved non-edge is branched on first, by placing some
//! remaining vertex strictly inside it. The first vertex is restricted to
//! one cell per orbit of the grid's symmetry group.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{between, Point, PointSet};
use crate::graph::Graph;
use crate::nc::SearchBudget;
use crate::pvg::{build_pvg, Embedding};

pub const GRID_SEARCH_MAX_N: usize = 10;
/// Largest number of cells searched.
pub const GRID_SEARCH_MAX_CELLS: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum GridOutcome {
    Found { embedding: Embedding },
    Exhausted,
    Timeout,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridSearchReport {
    #[serde(flatten)]
    pub outcome: GridOutcome,
    pub width: u32,
    pub height: u32,
    pub nodes: u64,
    pub elapsed_ms: u128,
}

impl GridSearchReport {
    pub fn embedding(&self) -> Option<&Embedding> {
        match &self.outcome {
            GridOutcome::Found { embedding } => Some(embedding),
            _ => None,
        }
    }
}

/// Searches the `width x height` grid `[0, width) x [0, height)` for points
/// whose visibility graph is exactly `g`, vertex `v` at point `v`.
pub fn grid_search_embedding(g: &Graph, width: u32, height: u32, budget: &SearchBudget) -> Result<GridSearchReport> {
    let n = g.n();
    if n == 0 {
        return Err(Error::InvalidArgument("empty graph".into()));
    }
    if n > GRID_SEARCH_MAX_N {
        return Err(Error::Budget {
            what: "grid search vertices",
            got: n,
            limit: GRID_SEARCH_MAX_N,
        });
    }
    let cells = width as u64 * height as u64;
    if width == 0 || height == 0 || cells > GRID_SEARCH_MAX_CELLS {
        return Err(Error::InvalidArgument(format!(
            "grid {width}x{height} must be nonempty with at most {GRID_SEARCH_MAX_CELLS} cells"
        )));
    }
    let mut s = Search {
        g,
        w: width as i64,
        h: height as i64,
        order: placement_order(g),
        pos: vec![None; n],
        placed: Vec::with_capacity(n),
        occupied: vec![false; cells as usize],
        budget: *budget,
        started: Instant::now(),
        nodes: 0,
    };
    let outcome = if (n as u64) > cells {
        GridOutcome::Exhausted
    } else {
        match s.dfs() {
            Step::Found(e) => GridOutcome::Found { embedding: e },
            Step::Done => GridOutcome::Exhausted,
            Step::Budget => GridOutcome::Timeout,
        }
    };
    Ok(GridSearchReport {
        outcome,
        width,
        height,
        nodes: s.nodes,
        elapsed_ms: s.started.elapsed().as_millis(),
    })
}

/// Highest degree first, then repeatedly the vertex with most placed
/// neighbours.
fn placement_order(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut order = Vec::with_capacity(n);
    let mut done = vec![false; n];
    let mut links = vec![0usize; n];
    while order.len() < n {
        let v = (0..n)
            .filter(|&v| !done[v])
            .max_by_key(|&v| (links[v], g.degree(v), std::cmp::Reverse(v)))
            .expect("vertices remain");
        done[v] = true;
        order.push(v);
        for &u in g.neighbors(v) {
            links[u] += 1;
        }
    }
    order
}

enum Step {
    Found(Embedding),
    Done,
    Budget,
}

struct Search<'a> {
    g: &'a Graph,
    w: i64,
    h: i64,
    order: Vec<usize>,
    pos: Vec<Option<Point>>,
    placed: Vec<usize>,
    occupied: Vec<bool>,
    budget: SearchBudget,
    started: Instant,
    nodes: u64,
}

fn gcd(a: i64, b: i64) -> i64 {
    let (mut a, mut b) = (a.abs(), b.abs());
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl Search<'_> {
    fn cell(&self, p: Point) -> usize {
        (p.y * self.w + p.x) as usize
    }

    fn blocked(&self, a: Point, b: Point) -> bool {
        self.placed.iter().any(|&x| between(a, self.pos[x].expect("placed"), b))
    }

    fn feasible(&self, v: usize, c: Point) -> bool {
        if self.occupied[self.cell(c)] {
            return false;
        }
        for (i, &a) in self.placed.iter().enumerate() {
            let pa = self.pos[a].expect("placed");
            // c must not fall inside a visible edge.
            for &b in &self.placed[i + 1..] {
                let pb = self.pos[b].expect("placed");
                if self.g.has_edge(a, b) && between(pa, c, pb) {
                    return false;
                }
            }
            let hidden = self.blocked(pa, c);
            if self.g.has_edge(a, v) {
                if hidden {
                    return false;
                }
            } else if !hidden && gcd(c.x - pa.x, c.y - pa.y) < 2 {
                return false;
            }
        }
        true
    }

    fn place(&mut self, v: usize, c: Point) {
        let k = self.cell(c);
        self.occupied[k] = true;
        self.pos[v] = Some(c);
        self.placed.push(v);
    }

    fn unplace(&mut self, v: usize) {
        let c = self.pos[v].take().expect("placed");
        let k = self.cell(c);
        self.occupied[k] = false;
        self.placed.pop();
    }

    fn out_of_budget(&self) -> bool {
        if self.nodes >= self.budget.node_limit {
            return true;
        }
        self.nodes.is_multiple_of(1024) && self.budget.time_limit.is_some_and(|t| self.started.elapsed() >= t)
    }

    /// First placed non-edge with no placed point inside it.
    fn open_non_edge(&self) -> Option<(Point, Point)> {
        for (i, &a) in self.placed.iter().enumerate() {
            for &b in &self.placed[i + 1..] {
                if !self.g.has_edge(a, b) {
                    let (pa, pb) = (self.pos[a].expect("placed"), self.pos[b].expect("placed"));
                    if !self.blocked(pa, pb) {
                        return Some((pa, pb));
                    }
                }
            }
        }
        None
    }

    fn try_at(&mut self, v: usize, c: Point) -> Option<Step> {
        if !self.feasible(v, c) {
            return None;
        }
        self.place(v, c);
        let r = self.dfs();
        self.unplace(v);
        match r {
            Step::Done => None,
            other => Some(other),
        }
    }

    fn dfs(&mut self) -> Step {
        self.nodes += 1;
        if self.out_of_budget() {
            return Step::Budget;
        }
        let n = self.g.n();
        if let Some((pa, pb)) = self.open_non_edge() {
            let k = gcd(pb.x - pa.x, pb.y - pa.y);
            let (dx, dy) = ((pb.x - pa.x) / k, (pb.y - pa.y) / k);
            let rest: Vec<usize> = self.order.iter().copied().filter(|&v| self.pos[v].is_none()).collect();
            for v in rest {
                for t in 1..k {
                    let c = Point {
                        x: pa.x + t * dx,
                        y: pa.y + t * dy,
                    };
                    if let Some(step) = self.try_at(v, c) {
                        return step;
                    }
                }
            }
            return Step::Done;
        }
        if self.placed.len() == n {
            let ps = PointSet::new(self.pos.iter().map(|p| p.expect("placed")).collect()).expect("distinct grid cells");
            let e = build_pvg(&ps);
            return if e.graph == *self.g { Step::Found(e) } else { Step::Done };
        }
        let v = *self
            .order
            .iter()
            .find(|&&v| self.pos[v].is_none())
            .expect("vertex remains");
        let first = self.placed.is_empty();
        for y in 0..self.h {
            for x in 0..self.w {
                if first && !self.canonical_first(x, y) {
                    continue;
                }
                if let Some(step) = self.try_at(v, Point { x, y }) {
                    return step;
                }
            }
        }
        Step::Done
    }

    /// One cell per orbit under the reflections of the grid, and under the
    /// diagonal when it is square.
    fn canonical_first(&self, x: i64, y: i64) -> bool {
        let in_quadrant = 2 * x < self.w && 2 * y < self.h;
        in_quadrant && (self.w != self.h || x <= y)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::catalog;

    fn budget() -> SearchBudget {
        SearchBudget {
            node_limit: u64::MAX,
            time_limit: None,
        }
    }

    #[test]
    fn examples() {
        let r = grid_search_embedding(&Graph::path(3), 3, 1, &budget()).unwrap();
        let e = r.embedding().expect("found");
        assert_eq!(e.graph, Graph::path(3));
        assert!(e.points.all_collinear());

        for side in [3, 5, 8] {
            let r = grid_search_embedding(&Graph::cycle(5), side, side, &budget()).unwrap();
            assert_eq!(r.outcome, GridOutcome::Exhausted, "side {side}");
        }

        let g = &catalog().get(1).unwrap().graph;
        let r = grid_search_embedding(g, 7, 7, &budget()).unwrap();
        assert_eq!(&r.embedding().expect("found").graph, g);
    }

    #[test]
    fn budget_and_argument_errors() {
        let tight = SearchBudget {
            node_limit: 3,
            time_limit: None,
        };
        let r = grid_search_embedding(&Graph::cycle(5), 8, 8, &tight).unwrap();
        assert_eq!(r.outcome, GridOutcome::Timeout);
        assert!(grid_search_embedding(&Graph::complete(11), 5, 5, &budget()).is_err());
        assert!(grid_search_embedding(&Graph::path(2), 0, 5, &budget()).is_err());
        let r = grid_search_embedding(&Graph::complete(4), 2, 1, &budget()).unwrap();
        assert_eq!(r.outcome, GridOutcome::Exhausted);
    }

    #[test]
    fn small_grids_are_searched_exactly() {
        // K4 fits a 2x2 grid but not a line; a fan of three spokes needs
        // a collinear triple off the apex.
        let b = budget();
        assert!(grid_search_embedding(&Graph::complete(4), 2, 2, &b)
            .unwrap()
            .embedding()
            .is_some());
        assert_eq!(
            grid_search_embedding(&Graph::complete(4), 3, 1, &b).unwrap().outcome,
            GridOutcome::Exhausted
        );
        let star_plus = Graph::from_edges(4, [(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]).unwrap();
        let e = grid_search_embedding(&star_plus, 3, 3, &b).unwrap();
        assert_eq!(e.embedding().unwrap().graph, star_plus);
    }
}
