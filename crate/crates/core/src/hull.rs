//! Convex layers by gift wrapping, collinear boundary points included.

use serde::{Deserialize, Serialize};

use crate::geom::{dist2, dot, orient, Orientation, PointSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LayerKind {
    /// Closed polygon in clockwise order.
    Cycle,
    /// Two or more collinear points, sorted along their line.
    Path,
    Point,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub kind: LayerKind,
    pub vertices: Vec<usize>,
}

/// Layers from the outer hull inwards.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvexLayers {
    pub layers: Vec<Layer>,
}

impl ConvexLayers {
    pub fn len(&self) -> usize {
        self.layers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.layers.is_empty()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.layers.iter().map(|l| l.vertices.len()).collect()
    }
}

pub fn convex_layers(points: &PointSet) -> ConvexLayers {
    let pts = points.points();
    let mut remaining: Vec<usize> = (0..pts.len()).collect();
    let mut layers = Vec::new();
    while !remaining.is_empty() {
        let layer = if remaining.len() == 1 {
            Layer {
                kind: LayerKind::Point,
                vertices: remaining.clone(),
            }
        } else if collinear(points, &remaining) {
            let mut v = remaining.clone();
            v.sort_by_key(|&i| pts[i]);
            Layer {
                kind: LayerKind::Path,
                vertices: v,
            }
        } else {
            Layer {
                kind: LayerKind::Cycle,
                vertices: wrap(points, &remaining),
            }
        };
        let mut on = vec![false; pts.len()];
        for &v in &layer.vertices {
            on[v] = true;
        }
        remaining.retain(|&v| !on[v]);
        layers.push(layer);
    }
    ConvexLayers { layers }
}

fn collinear(points: &PointSet, idx: &[usize]) -> bool {
    let p = points.points();
    let (a, b) = (p[idx[0]], p[idx[1]]);
    idx.iter().all(|&i| orient(a, b, p[i]) == Orientation::Collinear)
}

/// Clockwise hull of a non-collinear set, starting at the least point.
fn wrap(points: &PointSet, idx: &[usize]) -> Vec<usize> {
    let p = points.points();
    let start = *idx.iter().min_by_key(|&&i| p[i]).expect("nonempty");
    let mut hull = vec![start];
    let mut used = vec![false; p.len()];
    let mut cur = start;
    loop {
        let mut best: Option<usize> = None;
        for &r in idx {
            if r == cur || (used[r] && r != start) {
                continue;
            }
            let Some(q) = best else {
                best = Some(r);
                continue;
            };
            match orient(p[cur], p[q], p[r]) {
                // r lies left of cur->q, so q is not the clockwise extreme.
                Orientation::CounterClockwise => best = Some(r),
                Orientation::Collinear => {
                    let same_side = dot(p[cur], p[q], p[r]) > 0;
                    if same_side && dist2(p[cur], p[r]) < dist2(p[cur], p[q]) {
                        best = Some(r);
                    } else if !same_side && q == start {
                        // The start is behind: any forward point is better.
                        best = Some(r);
                    }
                }
                Orientation::Clockwise => {}
            }
        }
        let next = best.expect("at least two points");
        if next == start {
            return hull;
        }
        used[next] = true;
        hull.push(next);
        cur = next;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(c: &[(i64, i64)]) -> PointSet {
        PointSet::from_coords(c).unwrap()
    }

    #[test]
    fn examples() {
        let grid: Vec<(i64, i64)> = (0..3).flat_map(|y| (0..3).map(move |x| (x, y))).collect();
        let l = convex_layers(&ps(&grid));
        assert_eq!(l.sizes(), vec![8, 1]);
        // Clockwise from the least point (0,0): up the left side first.
        assert_eq!(l.layers[0].vertices, vec![0, 3, 6, 7, 8, 5, 2, 1]);
        assert_eq!(l.layers[1].kind, LayerKind::Point);

        let tri = convex_layers(&ps(&[(0, 0), (4, 0), (1, 3)]));
        assert_eq!(tri.sizes(), vec![3]);
        assert_eq!(tri.layers[0].kind, LayerKind::Cycle);

        let line = convex_layers(&ps(&[(4, 4), (0, 0), (2, 2), (1, 1), (3, 3)]));
        assert_eq!(line.sizes(), vec![5]);
        assert_eq!(line.layers[0].kind, LayerKind::Path);
        assert_eq!(line.layers[0].vertices, vec![1, 3, 2, 4, 0]);
    }

    #[test]
    fn inner_path_layer() {
        let l = convex_layers(&ps(&[(0, 0), (6, 0), (6, 6), (0, 6), (2, 3), (3, 3), (4, 3)]));
        assert_eq!(l.sizes(), vec![4, 3]);
        assert_eq!(l.layers[1].kind, LayerKind::Path);
    }
}
