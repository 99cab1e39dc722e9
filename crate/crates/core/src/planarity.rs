//! Planarity of small graphs by minor search.
//!
//! A graph is non-planar iff some sequence of edge contractions produces a
//! graph containing K5 or K3,3 as a subgraph. Vertices of degree at most two
//! are removed or suppressed first, and Euler's bound rejects dense graphs
//! early.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::graph::Graph;

pub const PLANARITY_MAX_N: usize = 16;

pub fn is_planar_small(g: &Graph) -> Result<bool> {
    if g.n() > PLANARITY_MAX_N {
        return Err(Error::Budget {
            what: "planarity test",
            got: g.n(),
            limit: PLANARITY_MAX_N,
        });
    }
    let rows: Vec<u16> = (0..g.n())
        .map(|v| g.neighbors(v).iter().fold(0u16, |m, &u| m | 1 << u))
        .collect();
    let mut memo = HashSet::new();
    Ok(!nonplanar(rows, &mut memo))
}

fn edge_count(rows: &[u16]) -> usize {
    rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
}

fn remove_vertex(rows: &mut Vec<u16>, v: usize) {
    rows.remove(v);
    let low = (1u16 << v) - 1;
    for r in rows.iter_mut() {
        *r = (*r & low) | ((*r >> 1) & !low);
    }
}

/// Merges `v` into `u` (`u < v`) and drops `v`.
fn contract(rows: &[u16], u: usize, v: usize) -> Vec<u16> {
    let mut r = rows.to_vec();
    let merged = (r[u] | r[v]) & !(1 << u) & !(1 << v);
    for (w, row) in r.iter_mut().enumerate() {
        if merged >> w & 1 == 1 {
            *row |= 1 << u;
        }
    }
    r[u] = merged;
    remove_vertex(&mut r, v);
    r
}

fn reduce(rows: &mut Vec<u16>) {
    loop {
        let Some(v) = (0..rows.len()).find(|&v| rows[v].count_ones() <= 2) else {
            return;
        };
        if rows[v].count_ones() == 2 {
            let a = rows[v].trailing_zeros() as usize;
            let b = 15 - rows[v].leading_zeros() as usize;
            rows[a] |= 1 << b;
            rows[b] |= 1 << a;
        }
        for row in rows.iter_mut() {
            *row &= !(1 << v);
        }
        remove_vertex(rows, v);
    }
}

fn has_k5(rows: &[u16]) -> bool {
    let n = rows.len();
    subsets(n, 5).any(|s| {
        let mut rest = s;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if rows[v] & s != s & !(1 << v) {
                return false;
            }
        }
        true
    })
}

fn has_k33(rows: &[u16]) -> bool {
    let n = rows.len();
    subsets(n, 6).any(|s| {
        // Fix the lowest member on side one; choose the other two.
        let first = s.trailing_zeros();
        let others = s & !(1 << first);
        subsets_of(others, 2).any(|pair| {
            let side1 = pair | 1 << first;
            let side2 = s & !side1;
            let mut rest = side1;
            while rest != 0 {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                if rows[v] & side2 != side2 {
                    return false;
                }
            }
            true
        })
    })
}

fn subsets(n: usize, k: usize) -> impl Iterator<Item = u16> {
    subsets_of(((1u32 << n) - 1) as u16, k)
}

fn subsets_of(set: u16, k: usize) -> impl Iterator<Item = u16> {
    // Submask enumeration is fine at these sizes.
    let mut sub: u32 = set as u32;
    let mut done = false;
    std::iter::from_fn(move || loop {
        if done {
            return None;
        }
        let cur = sub as u16;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & set as u32;
        }
        if cur.count_ones() as usize == k {
            return Some(cur);
        }
    })
}

fn nonplanar(mut rows: Vec<u16>, memo: &mut HashSet<Vec<u16>>) -> bool {
    reduce(&mut rows);
    let n = rows.len();
    if n < 5 {
        return false;
    }
    if edge_count(&rows) > 3 * n - 6 || has_k5(&rows) || (n >= 6 && has_k33(&rows)) {
        return true;
    }
    if memo.contains(&rows) {
        return false;
    }
    for u in 0..n {
        let mut higher = rows[u] & !((2u16 << u) - 1);
        while higher != 0 {
            let v = higher.trailing_zeros() as usize;
            higher &= higher - 1;
            if nonplanar(contract(&rows, u, v), memo) {
                return true;
            }
        }
    }
    memo.insert(rows);
    false
}
