//! Small-graph isomorphism on adjacency bitmasks: canonical codes, a direct
//! isomorphism test, and exhaustive generation of non-isomorphic graphs.
//!
//! A graph on `k <= 16` vertices is a slice of `k` masks where bit `j` of
//! `adj[i]` is set iff `ij` is an edge.

use std::collections::BTreeMap;

/// Minimum upper-triangle adjacency bitstring over all vertex orders that
/// respect a degree-based vertex partition.
///
/// Pairs `(i, j)` with `i < j` are emitted column by column, so a prefix of
/// the code depends only on the first positions of the order; this lets the
/// search prune partial orders that already exceed the best code.
pub fn canonical_code(adj: &[u32]) -> u128 {
    let k = adj.len();
    assert!(k <= crate::config::HARD_PATTERN_CAP, "canonical_code: k = {k} too large");
    if k <= 1 {
        return 0;
    }
    let classes = refined_classes(adj);
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&v| (classes[v], v));
    // class of each position in the canonical order
    let pos_class: Vec<usize> = order.iter().map(|&v| classes[v]).collect();
    let total_bits = k * (k - 1) / 2;
    let mut search = CanonSearch {
        adj,
        pos_class: &pos_class,
        classes: &classes,
        total_bits,
        best: None,
        placed: Vec::with_capacity(k),
        used: 0,
    };
    search.run(0, 0);
    search.best.unwrap_or(0)
}

struct CanonSearch<'a> {
    adj: &'a [u32],
    pos_class: &'a [usize],
    classes: &'a [usize],
    total_bits: usize,
    best: Option<u128>,
    placed: Vec<usize>,
    used: u32,
}

impl CanonSearch<'_> {
    fn run(&mut self, pos: usize, code: u128) {
        let k = self.adj.len();
        if pos == k {
            if self.best.is_none_or(|b| code < b) {
                self.best = Some(code);
            }
            return;
        }
        for v in 0..k {
            if self.used & (1 << v) != 0 || self.classes[v] != self.pos_class[pos] {
                continue;
            }
            let mut next = code;
            for &u in &self.placed {
                next = (next << 1) | u128::from(self.adj[u] >> v & 1);
            }
            let len = pos * (pos + 1) / 2;
            if let Some(best) = self.best {
                let prefix = if len == 0 { 0 } else { best >> (self.total_bits - len) };
                if next > prefix {
                    continue;
                }
            }
            self.used |= 1 << v;
            self.placed.push(v);
            self.run(pos + 1, next);
            self.placed.pop();
            self.used &= !(1 << v);
        }
    }
}

/// Isomorphism-invariant vertex classes: degree, then the sorted multiset of
/// neighbour degrees, ranked so that the class ids themselves are invariant.
fn refined_classes(adj: &[u32]) -> Vec<usize> {
    let deg: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    let keys: Vec<(u32, Vec<u32>)> = adj
        .iter()
        .enumerate()
        .map(|(v, _)| {
            let mut nd: Vec<u32> = bits(adj[v]).map(|u| deg[u]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    let mut distinct: Vec<&(u32, Vec<u32>)> = keys.iter().collect();
    distinct.sort();
    distinct.dedup();
    keys.iter()
        .map(|key| distinct.binary_search(&key).expect("key present"))
        .collect()
}

/// Iterates over the set bits of a mask, lowest first.
pub fn bits(mut mask: u32) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let b = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(b)
        }
    })
}

pub fn edge_count(adj: &[u32]) -> usize {
    adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
}

fn sorted_degrees(adj: &[u32]) -> Vec<u32> {
    let mut d: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    d.sort_unstable();
    d
}

/// Exact isomorphism test by degree-guided backtracking.
pub fn isomorphic(a: &[u32], b: &[u32]) -> bool {
    if a.len() != b.len() || edge_count(a) != edge_count(b) {
        return false;
    }
    if sorted_degrees(a) != sorted_degrees(b) {
        return false;
    }
    let k = a.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(a[v].count_ones()));
    let mut image = vec![usize::MAX; k];
    extend_mapping(a, b, &order, 0, &mut image, 0)
}

fn extend_mapping(a: &[u32], b: &[u32], order: &[usize], depth: usize, image: &mut [usize], used: u32) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    let dv = a[v].count_ones();
    for w in 0..b.len() {
        if used & (1 << w) != 0 || b[w].count_ones() != dv {
            continue;
        }
        let consistent = order[..depth]
            .iter()
            .all(|&u| (a[v] >> u & 1) == (b[w] >> image[u] & 1));
        if !consistent {
            continue;
        }
        image[v] = w;
        if extend_mapping(a, b, order, depth + 1, image, used | (1 << w)) {
            return true;
        }
    }
    image[v] = usize::MAX;
    false
}

/// Does `host` contain `pattern` as a (not necessarily induced) spanning
/// subgraph? Both graphs must have the same order.
pub fn contains_spanning(host: &[u32], pattern: &[u32]) -> bool {
    if host.len() != pattern.len() || edge_count(host) < edge_count(pattern) {
        return false;
    }
    let k = pattern.len();
    let mut order: Vec<usize> = (0..k).collect();
    order.sort_by_key(|&v| std::cmp::Reverse(pattern[v].count_ones()));
    let mut image = vec![usize::MAX; k];
    embed(host, pattern, &order, 0, &mut image, 0)
}

fn embed(host: &[u32], pattern: &[u32], order: &[usize], depth: usize, image: &mut [usize], used: u32) -> bool {
    if depth == order.len() {
        return true;
    }
    let v = order[depth];
    for w in 0..host.len() {
        if used & (1 << w) != 0 || host[w].count_ones() < pattern[v].count_ones() {
            continue;
        }
        let ok = order[..depth]
            .iter()
            .all(|&u| pattern[v] >> u & 1 == 0 || host[w] >> image[u] & 1 == 1);
        if ok {
            image[v] = w;
            if embed(host, pattern, order, depth + 1, image, used | (1 << w)) {
                return true;
            }
        }
    }
    false
}

/// All graphs on `k` vertices up to isomorphism, ordered by canonical code.
/// Generated by adding one vertex in every possible way to each graph on
/// `k - 1` vertices.
pub fn all_graphs(k: usize) -> Vec<Vec<u32>> {
    assert!(k <= 10, "all_graphs is meant for tiny orders");
    let mut level: Vec<Vec<u32>> = vec![vec![]];
    for order in 1..=k {
        let mut seen: BTreeMap<u128, Vec<u32>> = BTreeMap::new();
        for g in &level {
            for nbrs in 0u32..(1 << (order - 1)) {
                let mut adj = g.clone();
                adj.push(nbrs);
                for u in bits(nbrs) {
                    adj[u] |= 1 << (order - 1);
                }
                seen.entry(canonical_code(&adj)).or_insert(adj);
            }
        }
        level = seen.into_values().collect();
    }
    level
}
