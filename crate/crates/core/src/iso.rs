//! Isomorphism and canonical forms for small graphs.
//!
//! Vertices are first partitioned by iterated degree refinement, which is
//! invariant under relabelling; the search then only matches vertices of
//! equal colour.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const ISO_MAX_N: usize = 12;

fn check_budget(g: &Graph) -> Result<()> {
    if g.n() > ISO_MAX_N {
        return Err(Error::Budget {
            what: "isomorphism",
            got: g.n(),
            limit: ISO_MAX_N,
        });
    }
    Ok(())
}

/// Stable colouring by iterated neighbourhood refinement. Colours are ranks
/// of label-independent signatures, so isomorphic graphs receive the same
/// colour multiset.
pub(crate) fn refine_colors(g: &Graph) -> Vec<usize> {
    let n = g.n();
    let mut color: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut classes = count_classes(&color);
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).iter().map(|&u| color[u]).collect();
                nb.sort_unstable();
                (color[v], nb)
            })
            .collect();
        let ranks: BTreeMap<&(usize, Vec<usize>), usize> = {
            let mut keys: Vec<&(usize, Vec<usize>)> = sigs.iter().collect();
            keys.sort();
            keys.dedup();
            keys.into_iter().enumerate().map(|(i, k)| (k, i)).collect()
        };
        let next: Vec<usize> = sigs.iter().map(|s| ranks[s]).collect();
        let next_classes = count_classes(&next);
        color = next;
        if next_classes == classes {
            return color;
        }
        classes = next_classes;
    }
}

fn count_classes(c: &[usize]) -> usize {
    let mut v = c.to_vec();
    v.sort_unstable();
    v.dedup();
    v.len()
}

/// Returns `Some(map)` with `map[v1] = v2` when `g1` and `g2` are isomorphic.
pub fn isomorphism(g1: &Graph, g2: &Graph) -> Result<Option<Vec<usize>>> {
    check_budget(g1)?;
    check_budget(g2)?;
    Ok(find_isomorphism(g1, g2))
}

pub fn graph_isomorphic(g1: &Graph, g2: &Graph) -> Result<bool> {
    Ok(isomorphism(g1, g2)?.is_some())
}

/// Unbudgeted search; callers guarantee small inputs.
pub(crate) fn find_isomorphism(g1: &Graph, g2: &Graph) -> Option<Vec<usize>> {
    if g1.n() != g2.n() || g1.m() != g2.m() {
        return None;
    }
    let c1 = refine_colors(g1);
    let c2 = refine_colors(g2);
    let mut s1 = c1.clone();
    let mut s2 = c2.clone();
    s1.sort_unstable();
    s2.sort_unstable();
    if s1 != s2 {
        return None;
    }
    // Colour classes are smallest-first so the branching stays narrow.
    let mut order: Vec<usize> = (0..g1.n()).collect();
    let class_size = |c: usize| c1.iter().filter(|&&x| x == c).count();
    order.sort_by_key(|&v| (class_size(c1[v]), c1[v], v));
    let mut map = vec![usize::MAX; g1.n()];
    let mut used = vec![false; g2.n()];
    if match_next(g1, g2, &c1, &c2, &order, 0, &mut map, &mut used) {
        Some(map)
    } else {
        None
    }
}

#[allow(clippy::too_many_arguments)]
fn match_next(
    g1: &Graph,
    g2: &Graph,
    c1: &[usize],
    c2: &[usize],
    order: &[usize],
    depth: usize,
    map: &mut [usize],
    used: &mut [bool],
) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..g2.n() {
        if used[w] || c2[w] != c1[v] {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| g1.has_edge(u, v) == g2.has_edge(map[u], w));
        if !consistent {
            continue;
        }
        map[v] = w;
        used[w] = true;
        if match_next(g1, g2, c1, c2, order, depth + 1, map, used) {
            return true;
        }
        used[w] = false;
        map[v] = usize::MAX;
    }
    false
}

/// Canonical form: the lexicographically greatest upper-triangle adjacency
/// string over all colour-respecting orderings, packed into a bit string.
///
/// Suitable for the small graphs of the planar catalog (n <= 10).
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalForm {
    pub n: usize,
    pub bits: u128,
}

impl CanonicalForm {
    pub fn to_hex(&self) -> String {
        format!("{}:{:x}", self.n, self.bits)
    }

    pub fn to_graph(&self) -> Graph {
        let mut edges = Vec::new();
        for v in 1..self.n {
            for u in 0..v {
                if self.bits >> (127 - tri_index(self.n, u, v)) & 1 == 1 {
                    edges.push((u, v));
                }
            }
        }
        Graph::from_edges(self.n, edges).expect("canonical form decodes")
    }
}

pub const CANON_MAX_N: usize = 10;

pub fn canonical_form(g: &Graph) -> Result<CanonicalForm> {
    if g.n() > CANON_MAX_N {
        return Err(Error::Budget {
            what: "canonical form",
            got: g.n(),
            limit: CANON_MAX_N,
        });
    }
    let color = refine_colors(g);
    // Positions are filled by colour class in increasing colour order.
    let mut slots: Vec<usize> = color.clone();
    slots.sort_unstable();
    let mut best: Option<u128> = None;
    let mut perm = Vec::with_capacity(g.n());
    let mut used = vec![false; g.n()];
    canon_search(g, &color, &slots, &mut perm, &mut used, 0, &mut best);
    Ok(CanonicalForm {
        n: g.n(),
        bits: best.unwrap_or(0),
    })
}

/// Pair `(i, j)` maps to bit `127 - tri_index(i, j)`; maximizing the packed
/// value puts edges first.
fn canon_search(
    g: &Graph,
    color: &[usize],
    slots: &[usize],
    perm: &mut Vec<usize>,
    used: &mut [bool],
    prefix: u128,
    best: &mut Option<u128>,
) {
    let n = g.n();
    let depth = perm.len();
    if depth == n {
        if best.is_none_or(|b| prefix > b) {
            *best = Some(prefix);
        }
        return;
    }
    for v in 0..n {
        if used[v] || color[v] != slots[depth] {
            continue;
        }
        // Row bits contributed by placing v at position `depth`.
        let mut bits = prefix;
        for (i, &u) in perm.iter().enumerate() {
            if g.has_edge(u, v) {
                let k = tri_index(n, i, depth);
                bits |= 1u128 << (127 - k);
            }
        }
        if let Some(b) = *best {
            // Every pair (i, j) with j <= depth is now fixed.
            let fixed = tri_prefix_mask(n, depth);
            if bits & fixed < b & fixed {
                continue;
            }
        }
        used[v] = true;
        perm.push(v);
        canon_search(g, color, slots, perm, used, bits, best);
        perm.pop();
        used[v] = false;
    }
}

/// Index of pair `(i, j)`, `i < j`, in a column-major upper triangle so that
/// placing the vertex at position `j` fixes a contiguous prefix.
fn tri_index(_n: usize, i: usize, j: usize) -> usize {
    j * (j - 1) / 2 + i
}

fn tri_prefix_mask(_n: usize, j: usize) -> u128 {
    let count = (j + 1) * j / 2;
    if count == 0 {
        0
    } else {
        !0u128 << (128 - count)
    }
}
