//! Exact integer predicates on planar lattice points.
//!
//! Coordinates are bounded by `2^30` in magnitude so every determinant used
//! here fits in an `i128` without rounding.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest admissible coordinate magnitude.
pub const COORD_BOUND: i64 = 1 << 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Point {
    pub x: i64,
    pub y: i64,
}

impl Point {
    /// Builds a point, rejecting coordinates outside `[-2^30, 2^30]`.
    pub fn new(x: i64, y: i64) -> Result<Self> {
        if x.abs() > COORD_BOUND || y.abs() > COORD_BOUND {
            return Err(Error::CoordinateBound { x, y });
        }
        Ok(Point { x, y })
    }

    pub(crate) fn in_bound(&self) -> bool {
        self.x.abs() <= COORD_BOUND && self.y.abs() <= COORD_BOUND
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sign of a turn.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Orientation {
    Clockwise,
    Collinear,
    CounterClockwise,
}

impl Orientation {
    pub fn sign(self) -> i32 {
        match self {
            Orientation::Clockwise => -1,
            Orientation::Collinear => 0,
            Orientation::CounterClockwise => 1,
        }
    }

    fn from_i128(v: i128) -> Self {
        match v.cmp(&0) {
            Ordering::Less => Orientation::Clockwise,
            Ordering::Equal => Orientation::Collinear,
            Ordering::Greater => Orientation::CounterClockwise,
        }
    }
}

#[inline]
pub(crate) fn cross(a: Point, b: Point, c: Point) -> i128 {
    let (bx, by) = ((b.x - a.x) as i128, (b.y - a.y) as i128);
    let (cx, cy) = ((c.x - a.x) as i128, (c.y - a.y) as i128);
    bx * cy - by * cx
}

#[inline]
pub(crate) fn dot(a: Point, b: Point, c: Point) -> i128 {
    let (bx, by) = ((b.x - a.x) as i128, (b.y - a.y) as i128);
    let (cx, cy) = ((c.x - a.x) as i128, (c.y - a.y) as i128);
    bx * cx + by * cy
}

#[inline]
pub(crate) fn dist2(a: Point, b: Point) -> i128 {
    let dx = (b.x - a.x) as i128;
    let dy = (b.y - a.y) as i128;
    dx * dx + dy * dy
}

fn check(points: &[Point]) -> Result<()> {
    for p in points {
        if !p.in_bound() {
            return Err(Error::CoordinateBound { x: p.x, y: p.y });
        }
    }
    Ok(())
}

/// Orientation of the triple `(a, b, c)`: counterclockwise when `c` lies to
/// the left of the directed line `a -> b`.
pub fn orientation(a: Point, b: Point, c: Point) -> Result<Orientation> {
    check(&[a, b, c])?;
    Ok(orient(a, b, c))
}

/// Unchecked variant used on already validated point sets.
#[inline]
pub(crate) fn orient(a: Point, b: Point, c: Point) -> Orientation {
    Orientation::from_i128(cross(a, b, c))
}

/// True iff `m` lies on the open segment `ab`.
pub fn strictly_between(a: Point, m: Point, b: Point) -> Result<bool> {
    check(&[a, m, b])?;
    if a == b {
        return Err(Error::DegenerateSegment(a));
    }
    Ok(between(a, m, b))
}

#[inline]
pub(crate) fn between(a: Point, m: Point, b: Point) -> bool {
    if m == a || m == b || cross(a, b, m) != 0 {
        return false;
    }
    let d = dot(a, m, b);
    d > 0 && d < dist2(a, b)
}

/// 0 for directions in `[0, pi)` measured from `(+1, 0)`, 1 for `[pi, 2pi)`.
#[inline]
fn half(dx: i64, dy: i64) -> u8 {
    if dy > 0 || (dy == 0 && dx > 0) {
        0
    } else {
        1
    }
}

/// Compares the directions of `a - pivot` and `b - pivot` counterclockwise
/// from `(+1, 0)`. Equal directions compare `Equal`.
#[inline]
pub(crate) fn cmp_direction(pivot: Point, a: Point, b: Point) -> Ordering {
    let ha = half(a.x - pivot.x, a.y - pivot.y);
    let hb = half(b.x - pivot.x, b.y - pivot.y);
    ha.cmp(&hb).then_with(|| 0.cmp(&cross(pivot, a, b)))
}

/// Total angular order around `pivot`, nearer points first on a shared ray.
#[inline]
pub(crate) fn cmp_angular(pivot: Point, a: Point, b: Point) -> Ordering {
    cmp_direction(pivot, a, b).then_with(|| dist2(pivot, a).cmp(&dist2(pivot, b)))
}

/// Sorts `others` counterclockwise around `pivot` starting at direction
/// `(+1, 0)`; points on a common ray are ordered by distance.
pub fn angular_order(pivot: Point, others: &[Point]) -> Result<Vec<Point>> {
    check(others)?;
    check(&[pivot])?;
    if others.contains(&pivot) {
        return Err(Error::DuplicatePoint(pivot));
    }
    let mut out = others.to_vec();
    out.sort_by(|&a, &b| cmp_angular(pivot, a, b));
    Ok(out)
}

/// An ordered, duplicate-free collection of points; index `i` is point `p_i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<Point>", into = "Vec<Point>")]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        check(&points)?;
        let mut sorted = points.clone();
        sorted.sort_unstable();
        if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicatePoint(w[0]));
        }
        Ok(PointSet { points })
    }

    pub fn from_coords(coords: &[(i64, i64)]) -> Result<Self> {
        Self::new(coords.iter().map(|&(x, y)| Point { x, y }).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn get(&self, i: usize) -> Point {
        self.points[i]
    }

    /// True when every point lies on one line (vacuously for n <= 2).
    pub fn all_collinear(&self) -> bool {
        let p = &self.points;
        if p.len() <= 2 {
            return true;
        }
        let a = p[0];
        let b = p[1];
        p[2..].iter().all(|&c| cross(a, b, c) == 0)
    }
}

impl TryFrom<Vec<Point>> for PointSet {
    type Error = Error;
    fn try_from(v: Vec<Point>) -> Result<Self> {
        PointSet::new(v)
    }
}

impl From<PointSet> for Vec<Point> {
    fn from(p: PointSet) -> Self {
        p.points
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(x: i64, y: i64) -> Point {
        Point { x, y }
    }

    #[test]
    fn orientation_examples() {
        assert_eq!(orientation(p(0, 0), p(1, 0), p(2, 0)).unwrap().sign(), 0);
        assert_eq!(orientation(p(0, 0), p(1, 0), p(0, 1)).unwrap().sign(), 1);
        assert_eq!(orientation(p(0, 0), p(0, 1), p(1, 0)).unwrap().sign(), -1);
    }

    #[test]
    fn orientation_extreme_coordinates() {
        let b = COORD_BOUND;
        let o = orientation(p(-b, -b), p(b, b), p(-b, b)).unwrap();
        assert_eq!(o, Orientation::CounterClockwise);
        assert!(orientation(p(b + 1, 0), p(0, 0), p(1, 1)).is_err());
    }

    #[test]
    fn betweenness_examples() {
        assert!(strictly_between(p(0, 0), p(1, 0), p(2, 0)).unwrap());
        assert!(!strictly_between(p(0, 0), p(2, 0), p(1, 0)).unwrap());
        assert!(!strictly_between(p(0, 0), p(1, 1), p(2, 0)).unwrap());
        assert!(!strictly_between(p(0, 0), p(0, 0), p(2, 0)).unwrap());
        assert!(matches!(
            strictly_between(p(1, 1), p(0, 0), p(1, 1)),
            Err(Error::DegenerateSegment(_))
        ));
    }

    #[test]
    fn angular_examples() {
        let o = angular_order(p(0, 0), &[p(-1, 0), p(0, 1), p(1, 1), p(1, 0)]).unwrap();
        assert_eq!(o, vec![p(1, 0), p(1, 1), p(0, 1), p(-1, 0)]);
        let o = angular_order(p(0, 0), &[p(2, 0), p(1, 0)]).unwrap();
        assert_eq!(o, vec![p(1, 0), p(2, 0)]);
        assert!(angular_order(p(0, 0), &[p(0, 0)]).is_err());
    }

    #[test]
    fn angular_grid_center() {
        let grid: Vec<Point> = (0..3)
            .flat_map(|y| (0..3).map(move |x| p(x, y)))
            .filter(|&q| q != p(1, 1))
            .collect();
        let o = angular_order(p(1, 1), &grid).unwrap();
        // Direction vectors enumerated by hand, counterclockwise from +x.
        let expect = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];
        let got: Vec<(i64, i64)> = o.iter().map(|q| (q.x - 1, q.y - 1)).collect();
        assert_eq!(got, expect);
    }

    #[test]
    fn point_set_rejects_duplicates() {
        assert!(PointSet::from_coords(&[(0, 0), (1, 2), (0, 0)]).is_err());
        assert!(PointSet::from_coords(&[(0, 0), (1, 2)]).is_ok());
    }
}
