//! Simple undirected graphs, straight-path (CSP) machinery and the closed-form
//! bounds that PVGs must satisfy.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Above this vertex count the pair bitset is not materialized and
/// adjacency queries fall back to binary search over neighbor lists.
pub const BITSET_MAX_N: usize = 4096;

/// Exhaustive optimum search works on `u64` vertex masks.
pub const OPTIMA_MAX_N: usize = 64;

/// Simple graph on vertices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Graph {
    n: usize,
    m: usize,
    /// Neighbours of `v` are `targets[offsets[v]..offsets[v + 1]]`, sorted.
    offsets: Vec<usize>,
    targets: Vec<usize>,
    /// Row-major `n x n` adjacency bits, present when `n <= BITSET_MAX_N`.
    bits: Option<Vec<u64>>,
    words: usize,
}

/// Unordered vertex pairs, each stored as `(lo, hi)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PairSet {
    pairs: Vec<(usize, usize)>,
}

impl PairSet {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }
    pub fn contains(&self, a: usize, b: usize) -> bool {
        let key = (a.min(b), a.max(b));
        self.pairs.binary_search(&key).is_ok()
    }
    pub fn as_slice(&self) -> &[(usize, usize)] {
        &self.pairs
    }
}

impl Graph {
    /// Builds a graph from an edge list; repeated edges are merged.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n {
                return Err(Error::VertexOutOfRange(u, n));
            }
            if v >= n {
                return Err(Error::VertexOutOfRange(v, n));
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Self::from_sorted_adjacency(adj))
    }

    /// `adj` must be symmetric, loop-free and sorted.
    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<usize>>) -> Self {
        let n = adj.len();
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        let words = n.div_ceil(64).max(1);
        let bits = (n <= BITSET_MAX_N).then(|| {
            let mut bits = vec![0u64; n * words];
            for (u, list) in adj.iter().enumerate() {
                for &v in list {
                    bits[u * words + v / 64] |= 1 << (v % 64);
                }
            }
            bits
        });
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        let mut targets = Vec::with_capacity(2 * m);
        for list in adj {
            targets.extend_from_slice(&list);
            offsets.push(targets.len());
        }
        Graph {
            n,
            m,
            offsets,
            targets,
            bits,
            words,
        }
    }

    pub fn empty(n: usize) -> Self {
        Self::from_sorted_adjacency(vec![Vec::new(); n])
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n).map(|u| (0..n).filter(|&v| v != u).collect()).collect();
        Self::from_sorted_adjacency(adj)
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|i| (i - 1, i))).expect("valid path")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3);
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n))).expect("valid cycle")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.targets[self.offsets[v]..self.offsets[v + 1]]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.offsets[v + 1] - self.offsets[v]
    }

    pub fn min_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match &self.bits {
            Some(bits) => bits[u * self.words + v / 64] >> (v % 64) & 1 == 1,
            None => self.neighbors(u).binary_search(&v).is_ok(),
        }
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.neighbors(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    pub(crate) fn check_vertex(&self, v: usize) -> Result<()> {
        if v >= self.n {
            Err(Error::VertexOutOfRange(v, self.n))
        } else {
            Ok(())
        }
    }

    /// Neighbor mask of `v`; only valid for `n <= 64`.
    pub(crate) fn mask(&self, v: usize) -> u64 {
        debug_assert!(self.n <= 64);
        self.neighbors(v).iter().fold(0u64, |acc, &u| acc | 1 << u)
    }

    /// Same graph with edge `{u, v}` added or removed.
    pub fn toggle_edge(&self, u: usize, v: usize) -> Result<Graph> {
        self.check_vertex(u)?;
        self.check_vertex(v)?;
        if u == v {
            return Err(Error::SelfLoop(u));
        }
        let mut adj = self.adjacency_lists();
        if self.has_edge(u, v) {
            adj[u].retain(|&w| w != v);
            adj[v].retain(|&w| w != u);
        } else {
            let pos = adj[u].binary_search(&v).unwrap_err();
            adj[u].insert(pos, v);
            let pos = adj[v].binary_search(&u).unwrap_err();
            adj[v].insert(pos, u);
        }
        Ok(Self::from_sorted_adjacency(adj))
    }

    /// Subgraph induced on `vertices`, relabelled `0..k` in the given order.
    pub fn induced(&self, vertices: &[usize]) -> Graph {
        let mut edges = Vec::new();
        for (a, &u) in vertices.iter().enumerate() {
            for (b, &v) in vertices.iter().enumerate().skip(a + 1) {
                if self.has_edge(u, v) {
                    edges.push((a, b));
                }
            }
        }
        Graph::from_edges(vertices.len(), edges).expect("induced subgraph")
    }

    /// Relabels vertex `v` as `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        Graph::from_edges(self.n, self.edges().map(|(u, v)| (perm[u], perm[v]))).expect("relabel is a bijection")
    }

    pub fn complement(&self) -> Graph {
        let adj = (0..self.n)
            .map(|u| (0..self.n).filter(|&v| v != u && !self.has_edge(u, v)).collect())
            .collect();
        Self::from_sorted_adjacency(adj)
    }

    pub fn is_connected(&self) -> bool {
        if self.n == 0 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut stack = vec![0];
        seen[0] = true;
        let mut count = 1;
        while let Some(u) = stack.pop() {
            for &v in self.neighbors(u) {
                if !seen[v] {
                    seen[v] = true;
                    count += 1;
                    stack.push(v);
                }
            }
        }
        count == self.n
    }

    fn adjacency_lists(&self) -> Vec<Vec<usize>> {
        (0..self.n).map(|v| self.neighbors(v).to_vec()).collect()
    }

    fn levels_from(&self, root: usize) -> (Vec<Vec<usize>>, Vec<usize>) {
        let mut dist = vec![usize::MAX; self.n];
        let mut levels: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::new();
        dist[root] = 0;
        queue.push_back(root);
        while let Some(u) = queue.pop_front() {
            let d = dist[u];
            if levels.len() <= d {
                levels.push(Vec::new());
            }
            levels[d].push(u);
            for &v in self.neighbors(u) {
                if dist[v] == usize::MAX {
                    dist[v] = d + 1;
                    queue.push_back(v);
                }
            }
        }
        for level in &mut levels {
            level.sort_unstable();
        }
        let rest = (0..self.n).filter(|&v| dist[v] == usize::MAX).collect();
        (levels, rest)
    }

    pub fn is_bipartite(&self) -> bool {
        let mut side = vec![u8::MAX; self.n];
        for s in 0..self.n {
            if side[s] != u8::MAX {
                continue;
            }
            side[s] = 0;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for &v in self.neighbors(u) {
                    if side[v] == u8::MAX {
                        side[v] = 1 - side[u];
                        stack.push(v);
                    } else if side[v] == side[u] {
                        return false;
                    }
                }
            }
        }
        true
    }

    pub fn has_triangle(&self) -> bool {
        self.edges().any(|(u, v)| {
            let (a, b) = (self.neighbors(u), self.neighbors(v));
            let (mut i, mut j) = (0, 0);
            while i < a.len() && j < b.len() {
                match a[i].cmp(&b[j]) {
                    std::cmp::Ordering::Less => i += 1,
                    std::cmp::Ordering::Greater => j += 1,
                    std::cmp::Ordering::Equal => return true,
                }
            }
            false
        })
    }
}

/// Serialized as `{ "n": .., "edges": [[u, v], ..] }`.
#[derive(Serialize, Deserialize)]
struct GraphRepr {
    n: usize,
    edges: Vec<(usize, usize)>,
}

impl Serialize for Graph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        GraphRepr {
            n: self.n,
            edges: self.edges().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Graph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = GraphRepr::deserialize(d)?;
        Graph::from_edges(r.n, r.edges).map_err(serde::de::Error::custom)
    }
}

/// All non-adjacent pairs `(u, v)`, `u < v`.
pub fn invisible_pairs(g: &Graph) -> PairSet {
    let mut pairs = Vec::with_capacity((g.n * g.n.saturating_sub(1) / 2).saturating_sub(g.m));
    for u in 0..g.n {
        for v in u + 1..g.n {
            if !g.has_edge(u, v) {
                pairs.push((u, v));
            }
        }
    }
    PairSet { pairs }
}

/// True iff `g` is a chordless path through all of its vertices.
pub fn is_path_graph(g: &Graph) -> bool {
    let n = g.n;
    if n <= 1 {
        return true;
    }
    if g.m != n - 1 {
        return false;
    }
    let mut ends = 0;
    for v in 0..n {
        match g.degree(v) {
            1 => ends += 1,
            2 => {}
            _ => return false,
        }
    }
    ends == 2 && g.is_connected()
}

/// Vertex order along a path graph, starting from its smaller endpoint.
pub fn path_order(g: &Graph) -> Option<Vec<usize>> {
    if !is_path_graph(g) {
        return None;
    }
    if g.n == 1 {
        return Some(vec![0]);
    }
    let start = (0..g.n).find(|&v| g.degree(v) == 1)?;
    let mut order = vec![start];
    let mut prev = usize::MAX;
    let mut cur = start;
    while order.len() < g.n {
        let next = *g.neighbors(cur).iter().find(|&&w| w != prev)?;
        prev = cur;
        cur = next;
        order.push(cur);
    }
    Some(order)
}

fn check_sequence(g: &Graph, seq: &[usize]) -> Result<()> {
    let mut seen = vec![false; g.n];
    for &v in seq {
        g.check_vertex(v)?;
        if std::mem::replace(&mut seen[v], true) {
            return Err(Error::DuplicateVertex(v));
        }
    }
    Ok(())
}

/// True iff consecutive entries of `seq` are adjacent and no other pair is.
pub fn is_csp(g: &Graph, seq: &[usize]) -> Result<bool> {
    check_sequence(g, seq)?;
    Ok(is_csp_unchecked(g, seq))
}

pub(crate) fn is_csp_unchecked(g: &Graph, seq: &[usize]) -> bool {
    for (a, &u) in seq.iter().enumerate() {
        for (b, &v) in seq.iter().enumerate().skip(a + 1) {
            if g.has_edge(u, v) != (b == a + 1) {
                return false;
            }
        }
    }
    true
}

/// True iff the subgraph induced on `vertices` is a chordless path, i.e. the
/// set admits an ordering passing [`is_csp`].
pub fn induces_path(g: &Graph, vertices: &[usize]) -> bool {
    let k = vertices.len();
    if k <= 1 {
        return true;
    }
    let mut edges = 0;
    let mut ends = 0;
    for &u in vertices {
        let d = vertices.iter().filter(|&&v| v != u && g.has_edge(u, v)).count();
        match d {
            1 => ends += 1,
            2 => {}
            _ => return false,
        }
        edges += d;
    }
    if edges / 2 != k - 1 || ends != 2 {
        return false;
    }
    is_path_graph(&g.induced(vertices))
}

/// Every chordless path `(u, b_1, .., b_t, w)` with `1 <= t <= max_interior`,
/// in lexicographic order.
pub fn chordless_paths(g: &Graph, u: usize, w: usize, max_interior: usize) -> Result<Vec<Vec<usize>>> {
    g.check_vertex(u)?;
    g.check_vertex(w)?;
    if u == w {
        return Err(Error::DuplicateVertex(u));
    }
    if g.has_edge(u, w) {
        return Err(Error::AdjacentPair(u, w));
    }
    let mut out = Vec::new();
    let mut path = vec![u];
    let mut on_path = vec![false; g.n];
    on_path[u] = true;
    extend_chordless(g, w, max_interior, &mut path, &mut on_path, &mut out);
    Ok(out)
}

fn extend_chordless(
    g: &Graph,
    w: usize,
    max_interior: usize,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    out: &mut Vec<Vec<usize>>,
) {
    let last = *path.last().expect("nonempty");
    let interior = path.len() - 1;
    if path.len() > 1 && g.has_edge(last, w) {
        let mut done = path.clone();
        done.push(w);
        out.push(done);
        return;
    }
    if interior == max_interior {
        return;
    }
    for &x in g.neighbors(last) {
        if x == w || on_path[x] {
            continue;
        }
        // x may only touch `last` among the vertices already on the path.
        if path[..path.len() - 1].iter().any(|&p| g.has_edge(p, x)) {
            continue;
        }
        path.push(x);
        on_path[x] = true;
        extend_chordless(g, w, max_interior, path, on_path, out);
        on_path[x] = false;
        path.pop();
    }
}

/// BFS level sets from `root`, plus the vertices it cannot reach.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BfsLevels {
    pub levels: Vec<Vec<usize>>,
    pub unreached: Vec<usize>,
}

pub fn bfs_levels(g: &Graph, root: usize) -> Result<BfsLevels> {
    g.check_vertex(root)?;
    let (levels, unreached) = g.levels_from(root);
    Ok(BfsLevels { levels, unreached })
}

/// True iff every pair of vertices is within distance `d`.
pub fn diameter_at_most(g: &Graph, d: usize) -> Result<bool> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    for v in 0..g.n {
        let (levels, _) = g.levels_from(v);
        if levels.len() > d + 1 {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Exact optima of a small graph.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Optima {
    pub vertex_cover: usize,
    pub independent_set: usize,
    pub clique: usize,
}

fn check_optima_budget(g: &Graph) -> Result<()> {
    if g.n > OPTIMA_MAX_N {
        return Err(Error::Budget {
            what: "exhaustive optimum search",
            got: g.n,
            limit: OPTIMA_MAX_N,
        });
    }
    Ok(())
}

/// Maximum clique size by branch and bound over vertex masks.
pub fn brute_max_clique(g: &Graph) -> Result<usize> {
    check_optima_budget(g)?;
    let masks: Vec<u64> = (0..g.n).map(|v| g.mask(v)).collect();
    let all = if g.n == 64 { u64::MAX } else { (1u64 << g.n) - 1 };
    let mut best = 0;
    clique_search(&masks, 0, all, &mut best);
    Ok(best)
}

fn clique_search(masks: &[u64], size: usize, mut cand: u64, best: &mut usize) {
    if cand == 0 {
        *best = (*best).max(size);
        return;
    }
    while cand != 0 {
        if size + cand.count_ones() as usize <= *best {
            return;
        }
        let v = cand.trailing_zeros() as usize;
        cand &= !(1 << v);
        clique_search(masks, size + 1, cand & masks[v], best);
    }
    *best = (*best).max(size);
}

/// Minimum vertex cover, maximum independent set and maximum clique sizes.
pub fn brute_optima(g: &Graph) -> Result<Optima> {
    let clique = brute_max_clique(g)?;
    let independent_set = brute_max_clique(&g.complement())?;
    Ok(Optima {
        vertex_cover: g.n - independent_set,
        independent_set,
        clique,
    })
}

/// Minimum edge count of a PVG on `n` points whose embedding has a `k`-GSP.
pub fn edge_lower_bound(k: usize, n: usize) -> Result<usize> {
    if k < 2 || n < k {
        return Err(Error::InvalidArgument(format!(
            "edge_lower_bound needs 2 <= k <= n, got k={k}, n={n}"
        )));
    }
    Ok((k - 1) + k * (n - k))
}

/// Largest vertex count of a planar PVG whose embedding has a `k`-GSP, `k >= 4`.
pub fn planar_vertex_bound(k: usize) -> Result<usize> {
    if k < 4 {
        return Err(Error::InvalidArgument(format!(
            "planar_vertex_bound needs k >= 4, got {k}"
        )));
    }
    Ok(k + (2 * k - 5) / (k - 3))
}

/// Minimum degree of a PVG on `n` points whose longest GSP has `k` points.
pub fn min_degree_bound(n: usize, k: usize) -> Result<usize> {
    if k < 2 || n < k {
        return Err(Error::InvalidArgument(format!(
            "min_degree_bound needs 2 <= k <= n, got n={n}, k={k}"
        )));
    }
    Ok((n - 1).div_ceil(k - 1))
}
