//! Recognition and reconstruction of planar point visibility graphs.
//!
//! Every planar PVG is either one of five particular graphs (see
//! [`crate::catalog`]) or a path `l` with at most two extra vertices:
//!
//! * A: the path alone.
//! * B: one apex adjacent to the whole path.
//! * C: two adjacent apexes, each adjacent to everything.
//! * D: two non-adjacent apexes, each adjacent to the whole path.
//! * E: two adjacent apexes; one misses a path endpoint, which the other blocks.
//! * F: as E, with the missed vertex interior to the path.
//!
//! For `n >= 9` recognition is linear: path vertices have degree at most 4,
//! apexes at least `n - 2`, so the apexes are exactly the vertices of degree
//! at least `n - 3`. Smaller graphs are matched by isomorphism.

use serde::{Deserialize, Serialize};

use crate::catalog;
use crate::geom::{Point, PointSet};
use crate::graph::Graph;
use crate::iso::find_isomorphism;
use crate::pvg::{build_pvg, Embedding};

/// Threshold from which [`classify`] uses the degree filter.
pub const PARAMETRIC_MIN_N: usize = 9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Family {
    pub const ALL: [Family; 6] = [Family::A, Family::B, Family::C, Family::D, Family::E, Family::F];

    /// Smallest vertex count with a template.
    pub fn min_n(self) -> usize {
        match self {
            Family::A => 1,
            Family::B | Family::C => 3,
            Family::D | Family::E => 4,
            Family::F => 5,
        }
    }

    /// Number of vertices outside the path.
    pub fn apexes(self) -> usize {
        match self {
            Family::A => 0,
            Family::B => 1,
            _ => 2,
        }
    }
}

/// Result of [`classify`]. Family variants carry the path in order and the
/// apex vertices of the input graph.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "class")]
pub enum PlanarClass {
    FamilyA {
        n: usize,
        path: Vec<usize>,
    },
    FamilyB {
        n: usize,
        path: Vec<usize>,
        apex: usize,
    },
    FamilyC {
        n: usize,
        path: Vec<usize>,
        apex1: usize,
        apex2: usize,
    },
    FamilyD {
        n: usize,
        path: Vec<usize>,
        apex1: usize,
        apex2: usize,
    },
    /// `path[0]` is the missed endpoint.
    FamilyE {
        n: usize,
        path: Vec<usize>,
        full_apex: usize,
        partial_apex: usize,
        missed: usize,
    },
    FamilyF {
        n: usize,
        path: Vec<usize>,
        full_apex: usize,
        partial_apex: usize,
        missed: usize,
    },
    /// `bijection[v]` is the catalog vertex matched to `v`.
    Particular {
        id: usize,
        bijection: Vec<usize>,
    },
    NotPlanarPVG {
        reason: String,
    },
}

impl PlanarClass {
    pub fn family(&self) -> Option<Family> {
        Some(match self {
            PlanarClass::FamilyA { .. } => Family::A,
            PlanarClass::FamilyB { .. } => Family::B,
            PlanarClass::FamilyC { .. } => Family::C,
            PlanarClass::FamilyD { .. } => Family::D,
            PlanarClass::FamilyE { .. } => Family::E,
            PlanarClass::FamilyF { .. } => Family::F,
            _ => return None,
        })
    }

    pub fn is_planar_pvg(&self) -> bool {
        !matches!(self, PlanarClass::NotPlanarPVG { .. })
    }

    pub fn n(&self) -> Option<usize> {
        match self {
            PlanarClass::FamilyA { n, .. }
            | PlanarClass::FamilyB { n, .. }
            | PlanarClass::FamilyC { n, .. }
            | PlanarClass::FamilyD { n, .. }
            | PlanarClass::FamilyE { n, .. }
            | PlanarClass::FamilyF { n, .. } => Some(*n),
            PlanarClass::Particular { bijection, .. } => Some(bijection.len()),
            PlanarClass::NotPlanarPVG { .. } => None,
        }
    }

    /// One-line human-readable summary.
    pub fn summary(&self) -> String {
        match self {
            PlanarClass::FamilyA { n, .. } => format!("FamilyA(n={n})"),
            PlanarClass::FamilyB { n, apex, .. } => format!("FamilyB(n={n}, apex={apex})"),
            PlanarClass::FamilyC { n, apex1, apex2, .. } => format!("FamilyC(n={n}, apexes={apex1},{apex2})"),
            PlanarClass::FamilyD { n, apex1, apex2, .. } => format!("FamilyD(n={n}, apexes={apex1},{apex2})"),
            PlanarClass::FamilyE {
                n,
                full_apex,
                partial_apex,
                missed,
                ..
            } => {
                format!("FamilyE(n={n}, full={full_apex}, partial={partial_apex}, missed endpoint={missed})")
            }
            PlanarClass::FamilyF {
                n,
                full_apex,
                partial_apex,
                missed,
                ..
            } => {
                format!("FamilyF(n={n}, full={full_apex}, partial={partial_apex}, missed interior={missed})")
            }
            PlanarClass::Particular { id, .. } => format!("Particular(#{id})"),
            PlanarClass::NotPlanarPVG { reason } => format!("NotPlanarPVG({reason})"),
        }
    }
}

fn not_planar(reason: impl Into<String>) -> PlanarClass {
    PlanarClass::NotPlanarPVG { reason: reason.into() }
}

/// Template in canonical labelling: path `0..k`, apexes `k` and `k + 1`.
/// For F, `missed` selects the interior path position (default 1).
pub fn template(f: Family, n: usize, missed: Option<usize>) -> Option<PlanarClass> {
    if n < f.min_n() {
        return None;
    }
    let k = n - f.apexes();
    let path: Vec<usize> = (0..k).collect();
    Some(match f {
        Family::A => PlanarClass::FamilyA { n, path },
        Family::B => PlanarClass::FamilyB { n, path, apex: k },
        Family::C => PlanarClass::FamilyC {
            n,
            path,
            apex1: k,
            apex2: k + 1,
        },
        Family::D => PlanarClass::FamilyD {
            n,
            path,
            apex1: k,
            apex2: k + 1,
        },
        Family::E => PlanarClass::FamilyE {
            n,
            path,
            full_apex: k,
            partial_apex: k + 1,
            missed: 0,
        },
        Family::F => {
            let j = missed.unwrap_or(1);
            if j == 0 || j + 1 >= k {
                return None;
            }
            PlanarClass::FamilyF {
                n,
                path,
                full_apex: k,
                partial_apex: k + 1,
                missed: j,
            }
        }
    })
}

/// All templates with `n` vertices, F over every interior position.
pub fn templates_at(n: usize) -> Vec<PlanarClass> {
    let mut out = Vec::new();
    for f in Family::ALL {
        if f == Family::F {
            let k = n.saturating_sub(2);
            out.extend((1..k.saturating_sub(1)).filter_map(|j| template(f, n, Some(j))));
        } else {
            out.extend(template(f, n, None));
        }
    }
    out
}

/// The graph a family class describes, built from its decomposition alone.
/// `None` for particular and negative classes.
pub fn template_graph(c: &PlanarClass) -> Option<Graph> {
    let (n, path) = match c {
        PlanarClass::FamilyA { n, path }
        | PlanarClass::FamilyB { n, path, .. }
        | PlanarClass::FamilyC { n, path, .. }
        | PlanarClass::FamilyD { n, path, .. }
        | PlanarClass::FamilyE { n, path, .. }
        | PlanarClass::FamilyF { n, path, .. } => (*n, path),
        _ => return None,
    };
    let mut edges: Vec<(usize, usize)> = path.windows(2).map(|w| (w[0], w[1])).collect();
    let mut join = |a: usize, skip: Option<usize>| {
        edges.extend(path.iter().filter(|&&v| Some(v) != skip).map(|&v| (a, v)));
    };
    match *c {
        PlanarClass::FamilyB { apex, .. } => join(apex, None),
        PlanarClass::FamilyC { apex1, apex2, .. } => {
            join(apex1, None);
            join(apex2, None);
            edges.push((apex1, apex2));
        }
        PlanarClass::FamilyD { apex1, apex2, .. } => {
            join(apex1, None);
            join(apex2, None);
        }
        PlanarClass::FamilyE {
            full_apex,
            partial_apex,
            missed,
            ..
        }
        | PlanarClass::FamilyF {
            full_apex,
            partial_apex,
            missed,
            ..
        } => {
            join(full_apex, None);
            join(partial_apex, Some(missed));
            edges.push((full_apex, partial_apex));
        }
        _ => {}
    }
    Graph::from_edges(n, edges).ok()
}

/// Decides whether `g` is a planar PVG.
pub fn classify(g: &Graph) -> PlanarClass {
    let n = g.n();
    if n == 0 {
        return not_planar("empty graph");
    }
    if n >= 3 && g.m() > 3 * n - 6 {
        return not_planar(format!("{} edges exceed the planar bound {}", g.m(), 3 * n - 6));
    }
    if n < PARAMETRIC_MIN_N {
        if !g.is_connected() {
            return not_planar("disconnected");
        }
        classify_small(g)
    } else {
        // The path walk below implies connectivity: every apex has at
        // least n-3 neighbours, so it touches the path.
        classify_parametric(g)
    }
}

/// Particular graphs are tried before templates, so the two six-vertex
/// particular graphs that coincide with short-path C and F templates are
/// reported as particular.
fn classify_small(g: &Graph) -> PlanarClass {
    let n = g.n();
    for entry in catalog::catalog().entries() {
        if entry.graph.n() != n {
            continue;
        }
        if let Some(map) = find_isomorphism(g, &entry.graph) {
            return PlanarClass::Particular {
                id: entry.id,
                bijection: map,
            };
        }
    }
    for t in templates_at(n) {
        let tg = template_graph(&t).expect("family template");
        if let Some(map) = find_isomorphism(&tg, g) {
            return relabel_class(&t, &map);
        }
    }
    not_planar("no family template or particular graph is isomorphic")
}

/// Moves a canonical-labelled template onto `g` through `map[t] = v`.
fn relabel_class(t: &PlanarClass, map: &[usize]) -> PlanarClass {
    let path = |p: &Vec<usize>| p.iter().map(|&v| map[v]).collect::<Vec<_>>();
    match t {
        PlanarClass::FamilyA { n, path: p } => PlanarClass::FamilyA { n: *n, path: path(p) },
        PlanarClass::FamilyB { n, path: p, apex } => PlanarClass::FamilyB {
            n: *n,
            path: path(p),
            apex: map[*apex],
        },
        PlanarClass::FamilyC {
            n,
            path: p,
            apex1,
            apex2,
        } => PlanarClass::FamilyC {
            n: *n,
            path: path(p),
            apex1: map[*apex1],
            apex2: map[*apex2],
        },
        PlanarClass::FamilyD {
            n,
            path: p,
            apex1,
            apex2,
        } => PlanarClass::FamilyD {
            n: *n,
            path: path(p),
            apex1: map[*apex1],
            apex2: map[*apex2],
        },
        PlanarClass::FamilyE {
            n,
            path: p,
            full_apex,
            partial_apex,
            missed,
        } => PlanarClass::FamilyE {
            n: *n,
            path: path(p),
            full_apex: map[*full_apex],
            partial_apex: map[*partial_apex],
            missed: map[*missed],
        },
        PlanarClass::FamilyF {
            n,
            path: p,
            full_apex,
            partial_apex,
            missed,
        } => PlanarClass::FamilyF {
            n: *n,
            path: path(p),
            full_apex: map[*full_apex],
            partial_apex: map[*partial_apex],
            missed: map[*missed],
        },
        other => other.clone(),
    }
}

/// Linear-time recognition for `n >= 9`.
fn classify_parametric(g: &Graph) -> PlanarClass {
    let n = g.n();
    let apexes: Vec<usize> = (0..n).filter(|&v| g.degree(v) + 3 >= n).collect();
    if apexes.len() > 2 {
        return not_planar(format!("{} vertices of degree at least n-3", apexes.len()));
    }
    let mut is_apex = vec![false; n];
    for &a in &apexes {
        is_apex[a] = true;
    }
    let inner = |v: usize| g.neighbors(v).iter().filter(|&&u| !is_apex[u]);
    // The rest must be a single chordless path.
    let mut ends = Vec::new();
    for v in (0..n).filter(|&v| !is_apex[v]) {
        match inner(v).count() {
            1 => ends.push(v),
            2 => {}
            d => return not_planar(format!("vertex {v} has {d} neighbours off the apexes")),
        }
    }
    if ends.len() != 2 {
        return not_planar("the non-apex vertices do not form a path");
    }
    let k = n - apexes.len();
    let mut path = Vec::with_capacity(k);
    let (mut prev, mut cur) = (usize::MAX, ends[0]);
    loop {
        path.push(cur);
        match inner(cur).find(|&&u| u != prev) {
            Some(&next) if path.len() < k => {
                prev = cur;
                cur = next;
            }
            _ => break,
        }
    }
    if path.len() != k || *path.last().expect("nonempty") != ends[1] {
        return not_planar("the non-apex vertices do not form a path");
    }
    let mut pos = vec![usize::MAX; n];
    for (i, &v) in path.iter().enumerate() {
        pos[v] = i;
    }
    // Path vertices each apex misses.
    let missed_by = |a: usize| -> Vec<usize> {
        let mut seen = vec![false; k];
        for &u in g.neighbors(a) {
            if pos[u] != usize::MAX {
                seen[pos[u]] = true;
            }
        }
        (0..k).filter(|&i| !seen[i]).collect()
    };
    match apexes[..] {
        [] => PlanarClass::FamilyA { n, path },
        [a] => {
            if missed_by(a).is_empty() {
                PlanarClass::FamilyB { n, path, apex: a }
            } else {
                not_planar(format!("apex {a} misses part of the path"))
            }
        }
        [a, b] => {
            let (ma, mb) = (missed_by(a), missed_by(b));
            let adjacent = g.has_edge(a, b);
            match (ma.len(), mb.len(), adjacent) {
                (0, 0, true) => PlanarClass::FamilyC {
                    n,
                    path,
                    apex1: a,
                    apex2: b,
                },
                (0, 0, false) => PlanarClass::FamilyD {
                    n,
                    path,
                    apex1: a,
                    apex2: b,
                },
                (0, 1, true) | (1, 0, true) => {
                    let (full, partial, i) = if ma.is_empty() { (a, b, mb[0]) } else { (b, a, ma[0]) };
                    let missed = path[i];
                    if i == 0 || i == k - 1 {
                        if i != 0 {
                            path.reverse();
                        }
                        PlanarClass::FamilyE {
                            n,
                            path,
                            full_apex: full,
                            partial_apex: partial,
                            missed,
                        }
                    } else {
                        PlanarClass::FamilyF {
                            n,
                            path,
                            full_apex: full,
                            partial_apex: partial,
                            missed,
                        }
                    }
                }
                _ => not_planar("apex adjacencies match no family"),
            }
        }
        _ => unreachable!("at most two apexes"),
    }
}

/// Integer embedding of a positive class, indexed by the vertices of the
/// classified graph. `None` for `NotPlanarPVG`.
pub fn reconstruct(c: &PlanarClass) -> Option<Embedding> {
    let place = |n: usize, path: &[usize], extra: &[(usize, (i64, i64))]| {
        let mut pts = vec![Point { x: 0, y: 0 }; n];
        for (i, &v) in path.iter().enumerate() {
            pts[v] = Point { x: i as i64, y: 0 };
        }
        for &(v, (x, y)) in extra {
            pts[v] = Point { x, y };
        }
        pts
    };
    let pts = match c {
        PlanarClass::FamilyA { n, path } => place(*n, path, &[]),
        PlanarClass::FamilyB { n, path, apex } => place(*n, path, &[(*apex, (0, 1))]),
        PlanarClass::FamilyC { n, path, apex1, apex2 } => place(*n, path, &[(*apex1, (0, 1)), (*apex2, (1, 1))]),
        PlanarClass::FamilyD { n, path, apex1, apex2 } => place(*n, path, &[(*apex1, (1, 1)), (*apex2, (1, -1))]),
        PlanarClass::FamilyE {
            n,
            path,
            full_apex,
            partial_apex,
            ..
        } => place(*n, path, &[(*full_apex, (0, 1)), (*partial_apex, (0, 2))]),
        PlanarClass::FamilyF {
            n,
            path,
            full_apex,
            partial_apex,
            missed,
        } => {
            let j = path.iter().position(|v| v == missed)? as i64;
            place(*n, path, &[(*full_apex, (j, 1)), (*partial_apex, (j, 2))])
        }
        PlanarClass::Particular { id, bijection } => {
            let entry = catalog::catalog().get(*id)?;
            let cp = entry.embedding.points.points();
            bijection.iter().map(|&t| cp[t]).collect()
        }
        PlanarClass::NotPlanarPVG { .. } => return None,
    };
    Some(build_pvg(&PointSet::new(pts).ok()?))
}

/// [`classify`] followed by [`reconstruct`]; the embedding realizes `g` with
/// the same vertex labels.
pub fn recognize_and_reconstruct(g: &Graph) -> Option<Embedding> {
    let e = reconstruct(&classify(g))?;
    (e.graph == *g).then_some(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::iso::graph_isomorphic;

    #[test]
    fn spec_examples() {
        assert!(matches!(classify(&Graph::path(10)), PlanarClass::FamilyA { n: 10, .. }));
        let b = template_graph(&template(Family::B, 10, None).unwrap()).unwrap();
        assert!(matches!(classify(&b), PlanarClass::FamilyB { n: 10, apex: 9, .. }));
        assert!(!classify(&Graph::complete(5)).is_planar_pvg());

        // P8 on 0..8, full apex 8, partial apex 9 missing endpoint 7.
        let mut e: Vec<(usize, usize)> = (0..7).map(|i| (i, i + 1)).collect();
        e.extend((0..8).map(|i| (8, i)));
        e.extend((0..7).map(|i| (9, i)));
        e.push((8, 9));
        let g = Graph::from_edges(10, e).unwrap();
        match classify(&g) {
            PlanarClass::FamilyE {
                n: 10,
                full_apex: 8,
                partial_apex: 9,
                missed: 7,
                path,
            } => {
                assert_eq!(path[0], 7)
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(recognize_and_reconstruct(&g).unwrap().graph, g);
    }

    #[test]
    fn reconstruct_examples() {
        let a = reconstruct(&template(Family::A, 5, None).unwrap()).unwrap();
        let xs: Vec<(i64, i64)> = a.points.points().iter().map(|p| (p.x, p.y)).collect();
        assert_eq!(xs, vec![(0, 0), (1, 0), (2, 0), (3, 0), (4, 0)]);

        let d = template(Family::D, 7, None).unwrap();
        let e = reconstruct(&d).unwrap();
        assert_eq!(e.graph, template_graph(&d).unwrap());
        assert_eq!(e.points.get(5), Point { x: 1, y: 1 });

        let f = template(Family::F, 8, None).unwrap();
        let e = reconstruct(&f).unwrap();
        assert_eq!(e.graph, template_graph(&f).unwrap());
        assert_eq!(e.points.get(7), Point { x: 1, y: 2 });
        let blocked: Vec<usize> = (0..8).filter(|&v| v != 7 && !e.graph.has_edge(7, v)).collect();
        assert_eq!(blocked, vec![1]);
    }

    #[test]
    fn small_cases() {
        let p4 = recognize_and_reconstruct(&Graph::path(4)).unwrap();
        assert!(p4.points.all_collinear());
        assert!(recognize_and_reconstruct(&Graph::cycle(6)).is_none());
        assert!(matches!(classify(&Graph::empty(1)), PlanarClass::FamilyA { n: 1, .. }));
        assert!(!classify(&Graph::empty(2)).is_planar_pvg());
        assert!(!classify(&Graph::empty(0)).is_planar_pvg());
    }

    #[test]
    fn every_template_round_trips() {
        for n in 3..=14 {
            for t in templates_at(n) {
                let g = template_graph(&t).unwrap();
                let c = classify(&g);
                let e = reconstruct(&c).unwrap_or_else(|| panic!("{t:?} -> {c:?}"));
                assert_eq!(e.graph, g, "{t:?}");
                assert!(identifies(&c, &t), "{t:?} -> {c:?}");
            }
        }
    }

    fn identifies(c: &PlanarClass, t: &PlanarClass) -> bool {
        if let PlanarClass::Particular { id, .. } = c {
            return catalog::catalog().get(*id).unwrap().coincides_with == t.family();
        }
        c.family() == t.family() || graph_isomorphic(&template_graph(c).unwrap(), &template_graph(t).unwrap()).unwrap()
    }

    #[test]
    fn catalog_graphs_classify_as_particular() {
        for e in catalog::catalog().entries() {
            let perm: Vec<usize> = (0..e.graph.n()).rev().collect();
            let g = e.graph.relabel(&perm);
            assert!(matches!(classify(&g), PlanarClass::Particular { id, .. } if id == e.id));
            let r = recognize_and_reconstruct(&g).unwrap();
            assert_eq!(r.graph, g);
        }
        let first = &catalog::catalog().entries()[0];
        assert_eq!(recognize_and_reconstruct(&first.graph).unwrap(), first.embedding);
    }

    #[test]
    fn apex_degree_threshold() {
        for n in PARAMETRIC_MIN_N..=40 {
            for t in templates_at(n) {
                let g = template_graph(&t).unwrap();
                let apexes: Vec<usize> = (0..n).filter(|&v| g.degree(v) + 3 >= n).collect();
                assert_eq!(apexes.len(), t.family().unwrap().apexes(), "{t:?}");
                assert!((0..n).all(|v| apexes.contains(&v) || g.degree(v) <= 4));
            }
        }
    }
}
