//! Lemma audits of a visibility embedding.
//!
//! Each check either passes or carries a witness (a pair, a GSP, a vertex,
//! or a blocker configuration) that can be re-checked on its own.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::graph::{brute_max_clique, diameter_at_most, edge_lower_bound, is_path_graph, min_degree_bound, Graph};
use crate::hamilton::{hamiltonian_cycle, is_hamiltonian_cycle};
use crate::nc::neighborhood_connected;
use crate::pvg::{build_pvg, maximal_gsps, Embedding};

/// Largest graph the clique bound is checked on.
pub const AUDIT_CLIQUE_MAX_N: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditCheck {
    pub name: String,
    pub status: CheckStatus,
    pub detail: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditReport {
    pub n: usize,
    pub m: usize,
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status != CheckStatus::Fail)
    }

    pub fn failures(&self) -> impl Iterator<Item = &AuditCheck> {
        self.checks.iter().filter(|c| c.status == CheckStatus::Fail)
    }

    pub fn get(&self, name: &str) -> Option<&AuditCheck> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_text(&self) -> String {
        let mut s = format!("audit: n={} m={}\n", self.n, self.m);
        for c in &self.checks {
            let tag = match c.status {
                CheckStatus::Pass => "PASS",
                CheckStatus::Fail => "FAIL",
                CheckStatus::Skipped => "SKIP",
            };
            s.push_str(&format!("{tag:4} {:24} {}", c.name, c.detail));
            if let Some(w) = &c.witness {
                s.push_str(&format!("  witness={w}"));
            }
            s.push('\n');
        }
        s
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AuditConfig {
    pub blocker_samples: usize,
    pub seed: u64,
}

impl Default for AuditConfig {
    fn default() -> Self {
        AuditConfig {
            blocker_samples: 200,
            seed: 0,
        }
    }
}

/// Result of one blocker-counting check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockerBound {
    pub blockers: Vec<usize>,
    pub bound: usize,
    pub pass: bool,
}

impl BlockerBound {
    pub fn count(&self) -> usize {
        self.blockers.len()
    }
}

/// Counts the union `B` of blockers over all pairs of `a x c` and compares
/// it with `|A| + |C| - 1`. Members of `A` or `C` may be blockers.
pub fn blocker_bound_check(e: &Embedding, a: &[usize], c: &[usize]) -> Result<BlockerBound> {
    let n = e.n();
    if a.is_empty() || c.is_empty() {
        return Err(Error::InvalidArgument("A and C must be nonempty".into()));
    }
    for &v in a.iter().chain(c) {
        if v >= n {
            return Err(Error::VertexOutOfRange(v, n));
        }
    }
    let aset: BTreeSet<usize> = a.iter().copied().collect();
    let cset: BTreeSet<usize> = c.iter().copied().collect();
    if aset.len() != a.len() || cset.len() != c.len() {
        return Err(Error::InvalidArgument("A and C must not repeat vertices".into()));
    }
    if let Some(v) = aset.intersection(&cset).next() {
        return Err(Error::InvalidArgument(format!("vertex {v} is in both A and C")));
    }
    let mut b = BTreeSet::new();
    for &x in a {
        for &y in c {
            if e.graph.has_edge(x, y) {
                return Err(Error::AdjacentPair(x, y));
            }
            b.extend(e.blockers.get(x, y));
        }
    }
    let bound = a.len() + c.len() - 1;
    Ok(BlockerBound {
        pass: b.len() >= bound,
        blockers: b.into_iter().collect(),
        bound,
    })
}

/// Random disjoint `A`, `C` with no edge between them, each of size at most
/// `max_side`. `None` when the graph is complete.
pub fn sample_blocker_sets<R: Rng>(g: &Graph, max_side: usize, rng: &mut R) -> Option<(Vec<usize>, Vec<usize>)> {
    let n = g.n();
    let invisible: Vec<(usize, usize)> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|&(u, v)| !g.has_edge(u, v))
        .collect();
    let &(a0, c0) = invisible.choose(rng)?;
    let (ta, tc) = (rng.gen_range(1..=max_side.max(1)), rng.gen_range(1..=max_side.max(1)));
    let (mut a, mut c) = (vec![a0], vec![c0]);
    let mut order: Vec<usize> = (0..n).filter(|&v| v != a0 && v != c0).collect();
    order.shuffle(rng);
    for v in order {
        if a.len() < ta && c.iter().all(|&y| !g.has_edge(v, y)) {
            a.push(v);
        } else if c.len() < tc && a.iter().all(|&x| !g.has_edge(v, x)) {
            c.push(v);
        }
    }
    Some((a, c))
}

pub fn audit_embedding(e: &Embedding) -> AuditReport {
    audit_embedding_with(e, &AuditConfig::default())
}

pub fn audit_embedding_with(e: &Embedding, cfg: &AuditConfig) -> AuditReport {
    let g = &e.graph;
    let path = is_path_graph(g);
    let gsps = maximal_gsps(&e.points);
    let lines = all_lines(e, &gsps);
    let mut checks = vec![round_trip(e)];
    checks.push(common_neighbor(g, &lines, path));
    checks.push(edge_bound(g, &lines));
    checks.push(off_gsp_degree(g, &gsps));
    checks.push(min_degree(g, &gsps));
    checks.extend(distance_checks(g, path));
    checks.push(clique_bound(g));
    checks.push(straight_iff_sparse(g, path));
    checks.push(hamiltonicity(e, path));
    checks.push(sampled_blockers(e, cfg));
    AuditReport {
        n: g.n(),
        m: g.m(),
        checks,
    }
}

fn pass(name: &str, detail: impl Into<String>) -> AuditCheck {
    AuditCheck {
        name: name.into(),
        status: CheckStatus::Pass,
        detail: detail.into(),
        witness: None,
    }
}

fn fail(name: &str, detail: impl Into<String>, witness: Value) -> AuditCheck {
    AuditCheck {
        name: name.into(),
        status: CheckStatus::Fail,
        detail: detail.into(),
        witness: Some(witness),
    }
}

fn skip(name: &str, detail: impl Into<String>) -> AuditCheck {
    AuditCheck {
        name: name.into(),
        status: CheckStatus::Skipped,
        detail: detail.into(),
        witness: None,
    }
}

fn round_trip(e: &Embedding) -> AuditCheck {
    const NAME: &str = "round_trip";
    let r = build_pvg(&e.points);
    let n = e.n();
    if e.graph.n() != n {
        return fail(
            NAME,
            "graph and point counts differ",
            json!({"graph_n": e.graph.n(), "points": n}),
        );
    }
    for u in 0..n {
        for v in u + 1..n {
            if r.graph.has_edge(u, v) != e.graph.has_edge(u, v) || r.blockers.get(u, v) != e.blockers.get(u, v) {
                return fail(
                    NAME,
                    "stored visibility differs from the points",
                    json!({"pair": [u, v], "visible": r.graph.has_edge(u, v), "blockers": r.blockers.get(u, v)}),
                );
            }
        }
    }
    pass(NAME, "graph and blockers match the points")
}

/// Every maximal GSP, including lines through exactly two points.
fn all_lines(e: &Embedding, gsps: &[Vec<usize>]) -> Vec<Vec<usize>> {
    let n = e.n();
    let mut covered = BTreeSet::new();
    for l in gsps {
        for (i, &u) in l.iter().enumerate() {
            for &v in &l[i + 1..] {
                covered.insert((u.min(v), u.max(v)));
            }
        }
    }
    let mut out = gsps.to_vec();
    for u in 0..n {
        for v in u + 1..n {
            if !covered.contains(&(u, v)) {
                out.push(vec![u, v]);
            }
        }
    }
    out
}

fn common_neighbor(g: &Graph, lines: &[Vec<usize>], path: bool) -> AuditCheck {
    const NAME: &str = "common_neighbor_of_gsp";
    if path {
        return skip(NAME, "path graph");
    }
    for l in lines {
        let found = (0..g.n()).any(|p| !l.contains(&p) && l.iter().all(|&q| g.has_edge(p, q)));
        if !found {
            return fail(NAME, "no point sees the whole GSP", json!({"gsp": l}));
        }
    }
    pass(NAME, format!("{} maximal GSPs", lines.len()))
}

fn longest(gsps: &[Vec<usize>], n: usize) -> usize {
    gsps.iter().map(Vec::len).max().unwrap_or(n.min(2))
}

fn edge_bound(g: &Graph, lines: &[Vec<usize>]) -> AuditCheck {
    const NAME: &str = "edge_lower_bound";
    let n = g.n();
    if n < 2 {
        return skip(NAME, "fewer than two points");
    }
    let ks: BTreeSet<usize> = lines.iter().map(Vec::len).collect();
    for &k in &ks {
        let bound = edge_lower_bound(k, n).expect("2 <= k <= n");
        if g.m() < bound {
            let gsp = lines.iter().find(|l| l.len() == k);
            return fail(
                NAME,
                format!("m={} < {bound}", g.m()),
                json!({"gsp": gsp, "k": k, "bound": bound}),
            );
        }
    }
    pass(NAME, format!("m={} for maximal GSP sizes {ks:?}", g.m()))
}

fn off_gsp_degree(g: &Graph, gsps: &[Vec<usize>]) -> AuditCheck {
    const NAME: &str = "off_gsp_degree";
    for l in gsps {
        for v in (0..g.n()).filter(|v| !l.contains(v)) {
            if g.degree(v) < l.len() {
                return fail(
                    NAME,
                    "vertex off a GSP has degree below its size",
                    json!({"vertex": v, "degree": g.degree(v), "gsp": l}),
                );
            }
        }
    }
    pass(NAME, format!("{} GSPs of size >= 3", gsps.len()))
}

fn min_degree(g: &Graph, gsps: &[Vec<usize>]) -> AuditCheck {
    const NAME: &str = "min_degree_bound";
    let n = g.n();
    if n < 2 {
        return skip(NAME, "fewer than two points");
    }
    let k = longest(gsps, n);
    let bound = min_degree_bound(n, k).expect("2 <= k <= n");
    let d = g.min_degree();
    if d < bound {
        let v = (0..n).min_by_key(|&v| g.degree(v)).expect("nonempty");
        return fail(
            NAME,
            format!("min degree {d} < {bound}"),
            json!({"vertex": v, "degree": d, "k": k}),
        );
    }
    pass(NAME, format!("min degree {d} >= {bound} (k={k})"))
}

fn distance_checks(g: &Graph, path: bool) -> Vec<AuditCheck> {
    const DIAM: &str = "diameter_two";
    const LEVELS: &str = "bfs_levels";
    const NBR: &str = "neighbor_connectivity";
    if path {
        return vec![
            skip(DIAM, "path graph"),
            skip(LEVELS, "path graph"),
            skip(NBR, "path graph"),
        ];
    }
    let n = g.n();
    let complete = g.m() == n * (n - 1) / 2;
    let diam = if complete {
        skip(DIAM, "no invisible pair")
    } else {
        match diameter_at_most(g, 2) {
            Ok(true) => pass(DIAM, "every invisible pair has a common neighbour"),
            _ => {
                let w = (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .find(|&(u, v)| !g.has_edge(u, v) && !g.neighbors(u).iter().any(|&x| g.has_edge(x, v)));
                fail(DIAM, "pair at distance > 2", json!({"pair": w}))
            }
        }
    };
    let levels = match (0..n).find(|&r| {
        let b = crate::graph::bfs_levels(g, r).expect("vertex in range");
        b.levels.len() > 3 || !b.unreached.is_empty()
    }) {
        None => pass(LEVELS, "every root has at most three levels"),
        Some(r) => fail(LEVELS, "more than three BFS levels", json!({"root": r})),
    };
    let nbr = match (0..n).find(|&v| !neighborhood_connected(g, v)) {
        None => pass(NBR, "every neighbourhood is connected"),
        Some(v) => fail(
            NBR,
            "disconnected neighbourhood",
            json!({"vertex": v, "neighbors": g.neighbors(v)}),
        ),
    };
    vec![diam, levels, nbr]
}

fn clique_bound(g: &Graph) -> AuditCheck {
    const NAME: &str = "clique_bound";
    if g.n() > AUDIT_CLIQUE_MAX_N {
        return skip(NAME, format!("n > {AUDIT_CLIQUE_MAX_N}"));
    }
    if g.n() < 2 {
        return skip(NAME, "fewer than two points");
    }
    let w = brute_max_clique(g).expect("within the optimum budget");
    let d = g.min_degree();
    if w > 2 * d {
        return fail(
            NAME,
            format!("clique {w} > 2*{d}"),
            json!({"clique": w, "min_degree": d}),
        );
    }
    pass(NAME, format!("clique {w} <= 2*{d}"))
}

fn straight_iff_sparse(g: &Graph, path: bool) -> AuditCheck {
    const NAME: &str = "bipartite_triangle_free";
    let (bip, tri_free) = (g.is_bipartite(), !g.has_triangle());
    if bip == path && tri_free == path {
        pass(NAME, format!("path={path} bipartite={bip} triangle_free={tri_free}"))
    } else {
        fail(
            NAME,
            "bipartite or triangle-free disagrees with being a path",
            json!({"path": path, "bipartite": bip, "triangle_free": tri_free}),
        )
    }
}

fn hamiltonicity(e: &Embedding, path: bool) -> AuditCheck {
    const NAME: &str = "hamiltonian_cycle";
    if path {
        return skip(NAME, "path graph");
    }
    match hamiltonian_cycle(e) {
        Ok(c) if is_hamiltonian_cycle(&e.graph, &c) => pass(NAME, "layer merge gives a valid cycle"),
        Ok(c) => fail(NAME, "cycle fails validation", json!({"cycle": c})),
        Err(err) => fail(NAME, err.to_string(), Value::Null),
    }
}

fn sampled_blockers(e: &Embedding, cfg: &AuditConfig) -> AuditCheck {
    const NAME: &str = "blocker_bound";
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut done = 0;
    for _ in 0..cfg.blocker_samples {
        let Some((a, c)) = sample_blocker_sets(&e.graph, 4, &mut rng) else {
            break;
        };
        match blocker_bound_check(e, &a, &c) {
            Ok(b) if b.pass => done += 1,
            Ok(b) => {
                return fail(
                    NAME,
                    format!("|B|={} < {}", b.count(), b.bound),
                    json!({"a": a, "c": c, "blockers": b.blockers}),
                )
            }
            Err(err) => return fail(NAME, err.to_string(), json!({"a": a, "c": c})),
        }
    }
    if done == 0 {
        skip(NAME, "no invisible pair")
    } else {
        pass(NAME, format!("{done} sampled configurations"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::PointSet;

    fn emb(c: &[(i64, i64)]) -> Embedding {
        build_pvg(&PointSet::from_coords(c).unwrap())
    }

    fn grid3() -> Embedding {
        let c: Vec<(i64, i64)> = (0..3).flat_map(|y| (0..3).map(move |x| (x, y))).collect();
        emb(&c)
    }

    #[test]
    fn grid_passes_everything() {
        let r = audit_embedding(&grid3());
        assert!(r.passed(), "{}", r.to_text());
        assert!(
            r.checks.iter().all(|c| c.status == CheckStatus::Pass),
            "{}",
            r.to_text()
        );
    }

    #[test]
    fn corrupted_embedding_fails_round_trip() {
        let mut e = grid3();
        e.graph = e.graph.toggle_edge(0, 1).unwrap();
        let r = audit_embedding(&e);
        let rt = r.get("round_trip").unwrap();
        assert_eq!(rt.status, CheckStatus::Fail);
        assert_eq!(rt.witness.as_ref().unwrap()["pair"], json!([0, 1]));
    }

    #[test]
    fn blocker_bound_examples() {
        let e = emb(&[(0, 0), (1, 0), (2, 0)]);
        let b = blocker_bound_check(&e, &[0], &[2]).unwrap();
        assert_eq!((b.count(), b.bound, b.pass), (1, 1, true));
        assert_eq!(blocker_bound_check(&e, &[0], &[1]), Err(Error::AdjacentPair(0, 1)));
        assert!(blocker_bound_check(&e, &[0], &[0]).is_err());
        assert!(blocker_bound_check(&e, &[], &[2]).is_err());

        // Three points on each of two vertical lines; the nine segments meet
        // the middle line at seven distinct points.
        let a = [(0, 0), (0, 4), (0, 16)];
        let c = [(2, 0), (2, 8), (2, 12)];
        let mut pts: Vec<(i64, i64)> = a.iter().chain(&c).copied().collect();
        pts.extend([0, 2, 4, 6, 8, 12, 14].map(|y| (1, y)));
        let e = emb(&pts);
        let b = blocker_bound_check(&e, &[0, 1, 2], &[3, 4, 5]).unwrap();
        assert_eq!((b.count(), b.bound, b.pass), (7, 5, true));
    }

    #[test]
    fn path_embedding_skips_non_path_lemmas() {
        let r = audit_embedding(&emb(&[(0, 0), (1, 1), (2, 2), (3, 3)]));
        assert!(r.passed(), "{}", r.to_text());
        assert_eq!(r.get("hamiltonian_cycle").unwrap().status, CheckStatus::Skipped);
    }
}
