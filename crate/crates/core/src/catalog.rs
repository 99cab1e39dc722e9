//! The five particular planar PVGs and the grid enumeration that finds them.
//!
//! [`build_catalog`] enumerates lattice point sets of a given size inside a
//! grid, deduplicates their visibility graphs by canonical form and keeps the
//! planar ones outside the infinite families. A graph counts as a family
//! graph when it matches a template whose path has at least five vertices,
//! or when `n <= 6` and every embedding found has four collinear points.
//! Two of the six-vertex particular graphs therefore coincide with the C and
//! F templates on a four-vertex path; entries record this in
//! [`CatalogEntry::coincides_with`].
//!
//! The output on the 7x7 grid is shipped as [`catalog`].

use std::collections::{BTreeMap, HashMap};
use std::path::Path;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::{self, Point, PointSet};
use crate::graph::Graph;
use crate::io;
use crate::iso::{canonical_form, find_isomorphism, CanonicalForm};
use crate::planar::{template_graph, templates_at, Family};
use crate::planarity::is_planar_small;
use crate::pvg::{build_pvg, maximal_gsps, Embedding};

/// Point sets of the shipped catalog, in id order (vertex count, then
/// canonical form).
const PARTICULAR: [&[(i64, i64)]; 5] = [
    &[(0, 0), (1, 0), (2, 0), (1, 1), (0, 2), (2, 2)],
    &[(0, 0), (0, 1), (1, 1), (3, 1), (2, 2), (0, 4)],
    &[(0, 0), (1, 1), (1, 2), (2, 2), (3, 2), (1, 3)],
    &[(0, 0), (2, 1), (1, 2), (2, 2), (4, 2), (3, 3), (2, 4)],
    &[(0, 0), (0, 1), (0, 2), (1, 2), (4, 2), (2, 4), (0, 6)],
];

/// Particular graphs per vertex count.
pub const EXPECTED_COUNTS: [(usize, usize); 2] = [(6, 3), (7, 2)];

/// Grid the shipped catalog was enumerated on.
pub const CATALOG_GRID: (usize, usize) = (7, 7);

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogEntry {
    /// 1-based identifier.
    pub id: usize,
    pub graph: Graph,
    pub canonical: CanonicalForm,
    pub embedding: Embedding,
    /// Longest collinear run in the stored embedding.
    pub longest_gsp: usize,
    /// Family whose short-path template is isomorphic to this graph.
    pub coincides_with: Option<Family>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Catalog {
    entries: Vec<CatalogEntry>,
}

impl Catalog {
    /// Builds entries from point sets; ids follow the given order.
    pub fn from_point_sets(sets: &[PointSet]) -> Result<Catalog> {
        let entries = sets
            .iter()
            .enumerate()
            .map(|(i, ps)| {
                let embedding = build_pvg(ps);
                Ok(CatalogEntry {
                    id: i + 1,
                    canonical: canonical_form(&embedding.graph)?,
                    longest_gsp: longest_gsp(ps),
                    coincides_with: coinciding_family(&embedding.graph),
                    graph: embedding.graph.clone(),
                    embedding,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Catalog { entries })
    }

    pub fn entries(&self) -> &[CatalogEntry] {
        &self.entries
    }

    pub fn get(&self, id: usize) -> Option<&CatalogEntry> {
        self.entries.iter().find(|e| e.id == id)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn count_with_n(&self, n: usize) -> usize {
        self.entries.iter().filter(|e| e.graph.n() == n).count()
    }

    /// Writes `particular_<id>.graph`, `particular_<id>.points` and
    /// `manifest.json` into `dir`.
    pub fn write_dir(&self, dir: &Path, grid: (usize, usize)) -> Result<()> {
        let io_err = |e: std::io::Error| Error::InvalidArgument(format!("{}: {e}", dir.display()));
        std::fs::create_dir_all(dir).map_err(io_err)?;
        let mut manifest = Manifest {
            grid: [grid.0, grid.1],
            entries: Vec::new(),
        };
        for e in &self.entries {
            let graph_file = format!("particular_{}.graph", e.id);
            let points_file = format!("particular_{}.points", e.id);
            std::fs::write(dir.join(&graph_file), io::write_graph(&e.graph)).map_err(io_err)?;
            std::fs::write(dir.join(&points_file), io::write_points(&e.embedding.points)).map_err(io_err)?;
            manifest.entries.push(ManifestEntry {
                id: e.id,
                n: e.graph.n(),
                m: e.graph.m(),
                canonical: e.canonical.to_hex(),
                longest_gsp: e.longest_gsp,
                coincides_with: e.coincides_with,
                graph_file,
                points_file,
            });
        }
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serializes");
        std::fs::write(dir.join("manifest.json"), json + "\n").map_err(io_err)
    }

    /// Reads a directory written by [`Catalog::write_dir`], checking that every
    /// stored graph is the PVG of its stored points.
    pub fn read_dir(dir: &Path) -> Result<(Catalog, (usize, usize))> {
        let read =
            |f: &str| std::fs::read_to_string(dir.join(f)).map_err(|e| Error::InvalidArgument(format!("{f}: {e}")));
        let manifest: Manifest = serde_json::from_str(&read("manifest.json")?)
            .map_err(|e| Error::InvalidArgument(format!("manifest.json: {e}")))?;
        let mut entries = Vec::new();
        for m in &manifest.entries {
            let graph = io::parse_graph(&read(&m.graph_file)?)?;
            let embedding = build_pvg(&io::parse_points(&read(&m.points_file)?)?);
            if embedding.graph != graph {
                return Err(Error::InvalidArgument(format!(
                    "{}: graph is not the PVG of the points",
                    m.graph_file
                )));
            }
            let canonical = canonical_form(&graph)?;
            if canonical.to_hex() != m.canonical {
                return Err(Error::InvalidArgument(format!(
                    "{}: canonical form mismatch",
                    m.graph_file
                )));
            }
            entries.push(CatalogEntry {
                id: m.id,
                longest_gsp: longest_gsp(&embedding.points),
                coincides_with: coinciding_family(&graph),
                graph,
                canonical,
                embedding,
            });
        }
        Ok((Catalog { entries }, (manifest.grid[0], manifest.grid[1])))
    }
}

#[derive(Serialize, Deserialize)]
struct Manifest {
    grid: [usize; 2],
    entries: Vec<ManifestEntry>,
}

#[derive(Serialize, Deserialize)]
struct ManifestEntry {
    id: usize,
    n: usize,
    m: usize,
    canonical: String,
    longest_gsp: usize,
    coincides_with: Option<Family>,
    graph_file: String,
    points_file: String,
}

/// Longest run of collinear points, at least 2 for two or more points.
pub fn longest_gsp(ps: &PointSet) -> usize {
    let runs = maximal_gsps(ps);
    runs.iter().map(Vec::len).max().unwrap_or(ps.len().min(2))
}

fn coinciding_family(g: &Graph) -> Option<Family> {
    templates_at(g.n())
        .into_iter()
        .find(|t| find_isomorphism(&template_graph(t).expect("template"), g).is_some())
        .and_then(|t| t.family())
}

/// True when `g` matches a template whose path has at least five vertices.
fn long_path_family(g: &Graph, forms: &[(usize, CanonicalForm)], cf: &CanonicalForm) -> bool {
    g.n() <= 5 || forms.iter().any(|(k, f)| *k >= 5 && f == cf)
}

/// The shipped catalog.
pub fn catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| {
        let sets: Vec<PointSet> = PARTICULAR
            .iter()
            .map(|c| PointSet::from_coords(c).expect("shipped catalog is valid"))
            .collect();
        Catalog::from_point_sets(&sets).expect("shipped catalog is valid")
    })
}

/// Outcome of [`build_catalog`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CatalogRun {
    pub catalog: Catalog,
    pub grid: (usize, usize),
    pub sizes: Vec<usize>,
    /// Point sets examined.
    pub subsets: u64,
    /// Distinct planar visibility graphs found, family graphs included.
    pub planar_classes: BTreeMap<usize, usize>,
    /// False when the time budget ran out; the catalog is then partial.
    pub complete: bool,
    pub elapsed: Duration,
}

/// Best point set per raw labelled graph seen by one worker.
type Found = HashMap<(usize, u64), Candidate>;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
struct Candidate {
    /// Longest collinear run, larger side of the bounding box, its area,
    /// then the cells.
    key: (usize, i64, i64, Vec<(i64, i64)>),
}

/// Enumerates point sets with the given sizes inside a `width x height`
/// grid (at most 64 cells). Sets are taken up to translation; other
/// symmetries are removed by canonical forms.
pub fn build_catalog(width: usize, height: usize, sizes: &[usize], time_limit: Option<Duration>) -> Result<CatalogRun> {
    let cells = width * height;
    if width == 0 || height == 0 || cells > 64 {
        return Err(Error::InvalidArgument(format!(
            "grid {width}x{height} must have 1..=64 cells"
        )));
    }
    if let Some(&k) = sizes.iter().find(|&&k| !(3..=10).contains(&k)) {
        return Err(Error::InvalidArgument(format!("catalog size {k} outside 3..=10")));
    }
    let started = Instant::now();
    let coord = |c: usize| coord(c, width);
    // between[a * cells + b]: cells strictly inside segment a-b.
    let mut between = vec![0u64; cells * cells];
    for a in 0..cells {
        for b in 0..cells {
            if a == b {
                continue;
            }
            for c in 0..cells {
                if c != a && c != b && geom::between(coord(a), coord(c), coord(b)) {
                    between[a * cells + b] |= 1 << c;
                }
            }
        }
    }
    let mut found: BTreeMap<CanonicalForm, Candidate> = BTreeMap::new();
    let mut subsets = 0u64;
    let mut complete = true;
    for &k in sizes {
        // Translation: the lowest cell lies in row 0 and some cell in column 0.
        let seeds: Vec<(usize, usize)> = (0..width.min(cells))
            .flat_map(|f| (f + 1..cells).map(move |s| (f, s)))
            .collect();
        let results: Vec<(Found, u64, bool)> = seeds
            .par_iter()
            .map(|&(f, s)| {
                let mut local = Found::new();
                let mut count = 0u64;
                let mut chosen = vec![f, s];
                let ok = extend(
                    &mut chosen,
                    k,
                    cells,
                    width,
                    &between,
                    &mut local,
                    &mut count,
                    started,
                    time_limit,
                );
                (local, count, ok)
            })
            .collect();
        let mut merged: HashMap<(usize, u64), Candidate> = HashMap::new();
        for (local, count, ok) in results {
            subsets += count;
            complete &= ok;
            for (key, cand) in local {
                match merged.get(&key) {
                    Some(c) if *c <= cand => {}
                    _ => {
                        merged.insert(key, cand);
                    }
                }
            }
        }
        for ((n, mask), cand) in merged {
            let g = graph_from_mask(n, mask);
            let cf = canonical_form(&g)?;
            match found.get(&cf) {
                Some(c) if *c <= cand => {}
                _ => {
                    found.insert(cf, cand);
                }
            }
        }
    }
    let mut planar_classes = BTreeMap::new();
    let mut particular: Vec<(CanonicalForm, Candidate)> = Vec::new();
    let mut family_forms: HashMap<usize, Vec<(usize, CanonicalForm)>> = HashMap::new();
    for (cf, cand) in found {
        let g = cf.to_graph();
        if !is_planar_small(&g)? {
            continue;
        }
        *planar_classes.entry(g.n()).or_insert(0) += 1;
        let forms = family_forms.entry(g.n()).or_insert_with(|| {
            templates_at(g.n())
                .iter()
                .map(|t| {
                    let k = g.n() - t.family().expect("template").apexes();
                    (k, canonical_form(&template_graph(t).expect("template")).expect("small"))
                })
                .collect()
        });
        let short_path_only = g.n() <= 6 && cand.key.0 >= 4;
        if !long_path_family(&g, forms, &cf) && !short_path_only {
            particular.push((cf, cand));
        }
    }
    // Ids by vertex count, then canonical form.
    particular.sort_by(|a, b| (a.0.n, &a.0).cmp(&(b.0.n, &b.0)));
    let sets: Vec<PointSet> = particular
        .into_iter()
        .map(|(_, c)| PointSet::from_coords(&c.key.3))
        .collect::<Result<_>>()?;
    Ok(CatalogRun {
        catalog: Catalog::from_point_sets(&sets)?,
        grid: (width, height),
        sizes: sizes.to_vec(),
        subsets,
        planar_classes,
        complete,
        elapsed: started.elapsed(),
    })
}

/// Runs [`build_catalog`] on square grids of growing side until the
/// expected counts are reached; the returned run names the smallest grid.
pub fn escalate_catalog(min_side: usize, max_side: usize, time_limit: Option<Duration>) -> Result<CatalogRun> {
    let started = Instant::now();
    let sizes: Vec<usize> = EXPECTED_COUNTS.iter().map(|&(n, _)| n).collect();
    let mut last = None;
    for side in min_side..=max_side {
        let remaining = time_limit.map(|t| t.saturating_sub(started.elapsed()));
        let run = build_catalog(side, side, &sizes, remaining)?;
        let done = EXPECTED_COUNTS.iter().all(|&(n, c)| run.catalog.count_with_n(n) == c);
        if done || !run.complete {
            return Ok(run);
        }
        last = Some(run);
    }
    last.ok_or_else(|| Error::InvalidArgument(format!("empty side range {min_side}..={max_side}")))
}

fn graph_from_mask(n: usize, mask: u64) -> Graph {
    let mut edges = Vec::new();
    let mut bit = 0;
    for i in 0..n {
        for j in i + 1..n {
            if mask >> bit & 1 == 1 {
                edges.push((i, j));
            }
            bit += 1;
        }
    }
    Graph::from_edges(n, edges).expect("in range")
}

#[allow(clippy::too_many_arguments)]
fn extend(
    chosen: &mut Vec<usize>,
    k: usize,
    cells: usize,
    width: usize,
    between: &[u64],
    found: &mut Found,
    count: &mut u64,
    started: Instant,
    time_limit: Option<Duration>,
) -> bool {
    if chosen.len() == k {
        *count += 1;
        if (*count).is_multiple_of(65536) && time_limit.is_some_and(|t| started.elapsed() >= t) {
            return false;
        }
        record(chosen, cells, width, between, found);
        return true;
    }
    let last = *chosen.last().expect("seeded");
    let need = k - chosen.len();
    for c in last + 1..=cells - need {
        chosen.push(c);
        let ok = extend(chosen, k, cells, width, between, found, count, started, time_limit);
        chosen.pop();
        if !ok {
            return false;
        }
    }
    true
}

fn coord(c: usize, width: usize) -> Point {
    Point {
        x: (c % width) as i64,
        y: (c / width) as i64,
    }
}

fn record(chosen: &[usize], cells: usize, width: usize, between: &[u64], found: &mut Found) {
    let k = chosen.len();
    if !chosen.iter().any(|&c| c % width == 0) {
        return;
    }
    let set = chosen.iter().fold(0u64, |m, &c| m | 1 << c);
    let mut mask = 0u64;
    let mut m = 0;
    let mut bit = 0;
    for i in 0..k {
        for j in i + 1..k {
            if between[chosen[i] * cells + chosen[j]] & set == 0 {
                mask |= 1 << bit;
                m += 1;
            }
            bit += 1;
        }
    }
    if m > 3 * k - 6 {
        return;
    }
    let pts: Vec<(i64, i64)> = chosen
        .iter()
        .map(|&c| ((c % width) as i64, (c / width) as i64))
        .collect();
    let w = pts.iter().map(|p| p.0).max().expect("nonempty") + 1;
    let h = pts.iter().map(|p| p.1).max().expect("nonempty") + 1;
    let mut longest = 2;
    for i in 0..k {
        for j in i + 1..k {
            let on = (0..k)
                .filter(|&l| {
                    geom::orient(
                        coord(chosen[i], width),
                        coord(chosen[j], width),
                        coord(chosen[l], width),
                    ) == geom::Orientation::Collinear
                })
                .count();
            longest = longest.max(on);
        }
    }
    let cand = Candidate {
        key: (longest, w.max(h), w * h, pts),
    };
    match found.get(&(k, mask)) {
        Some(c) if *c <= cand => {}
        _ => {
            found.insert((k, mask), cand);
        }
    }
}
