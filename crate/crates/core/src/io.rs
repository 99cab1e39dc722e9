//! Plain-text point and graph formats.
//!
//! Points: one `x y` pair per line. Graphs: a header `n m` followed by `m`
//! lines `u v` with `u < v`. In both, lines starting with `#` are comments
//! and blank lines are skipped.

use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::geom::{Point, PointSet};
use crate::graph::Graph;

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn two_fields<T: std::str::FromStr>(line: usize, l: &str) -> Result<(T, T)> {
    let fields: Vec<&str> = l.split_whitespace().collect();
    if fields.len() != 2 {
        return Err(parse_err(line, format!("expected 2 fields, found {}", fields.len())));
    }
    let parse = |s: &str| {
        s.parse::<T>()
            .map_err(|_| parse_err(line, format!("not an integer: {s:?}")))
    };
    Ok((parse(fields[0])?, parse(fields[1])?))
}

pub fn parse_points(text: &str) -> Result<PointSet> {
    let mut pts = Vec::new();
    let mut seen = std::collections::HashMap::new();
    for (line, l) in content_lines(text) {
        let (x, y) = two_fields::<i64>(line, l)?;
        let p = Point::new(x, y).map_err(|e| parse_err(line, e.to_string()))?;
        if let Some(first) = seen.insert(p, line) {
            return Err(parse_err(line, format!("duplicate point {p} (first on line {first})")));
        }
        pts.push(p);
    }
    PointSet::new(pts)
}

pub fn write_points(points: &PointSet) -> String {
    let mut s = String::new();
    for p in points.points() {
        let _ = writeln!(s, "{} {}", p.x, p.y);
    }
    s
}

pub fn parse_graph(text: &str) -> Result<Graph> {
    let mut lines = content_lines(text);
    let (hline, header) = lines.next().ok_or_else(|| parse_err(1, "missing header \"n m\""))?;
    let (n, m) = two_fields::<usize>(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::new();
    for (line, l) in lines {
        let (u, v) = two_fields::<usize>(line, l)?;
        if u >= v {
            return Err(parse_err(line, format!("edge {u} {v} must satisfy u < v")));
        }
        if v >= n {
            return Err(parse_err(line, format!("vertex {v} out of range for n = {n}")));
        }
        if !seen.insert((u, v)) {
            return Err(parse_err(line, format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(parse_err(
            hline,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    Graph::from_edges(n, edges)
}

pub fn write_graph(g: &Graph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for (u, v) in g.edges() {
        let _ = writeln!(s, "{u} {v}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_roundtrip_and_comments() {
        let ps = parse_points("# grid\n0 0\n\n1 -2\n  3 4  \n").unwrap();
        assert_eq!(ps.len(), 3);
        assert_eq!(parse_points(&write_points(&ps)).unwrap(), ps);
    }

    #[test]
    fn point_errors_are_line_numbered() {
        let e = parse_points("0 0\n# c\n1 x\n").unwrap_err();
        assert_eq!(
            e,
            Error::Parse {
                line: 3,
                msg: "not an integer: \"x\"".into()
            }
        );
        let e = parse_points("0 0\n0 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 2, .. }));
        let e = parse_points("0 0 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
        let e = parse_points("2000000000 0\n").unwrap_err();
        assert!(matches!(e, Error::Parse { line: 1, .. }));
    }

    #[test]
    fn graph_roundtrip() {
        let g = Graph::cycle(5);
        let text = write_graph(&g);
        assert_eq!(text, "5 5\n0 1\n0 4\n1 2\n2 3\n3 4\n");
        assert_eq!(parse_graph(&text).unwrap(), g);
    }

    #[test]
    fn graph_errors() {
        assert!(matches!(parse_graph(""), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_graph("3 1\n1 0\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3 1\n0 3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_graph("3 2\n0 1\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_graph("3 2\n0 1\n0 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }
}
