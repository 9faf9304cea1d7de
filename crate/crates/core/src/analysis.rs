//! The pattern parameter ρ, its S / N(S) / R partition, the saturating
//! matching between S and N(S), and edge/odd-cycle covers of the remainder.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Pattern;
use crate::iso::bits;

/// One component of a spanning edge/odd-cycle subgraph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum CoverComponent {
    Edge(usize, usize),
    /// Vertices in cyclic order; the length is odd and at least 3.
    OddCycle(Vec<usize>),
}

impl CoverComponent {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            CoverComponent::Edge(u, v) => vec![*u, *v],
            CoverComponent::OddCycle(c) => c.clone(),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            CoverComponent::Edge(..) => 2,
            CoverComponent::OddCycle(c) => c.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternDecomposition {
    pub s: Vec<usize>,
    pub ns: Vec<usize>,
    pub r: Vec<usize>,
    pub rho: i64,
    /// `(s-vertex, ns-vertex)` pairs saturating N(S).
    pub matching: Vec<(usize, usize)>,
    /// Cover of `P[R]` minus the isolated vertices of P.
    pub r_cover: Vec<CoverComponent>,
    /// For each non-isolated `x` in R, a cover of `P[R - x]` (again without
    /// the isolated vertices of P).
    pub r_cover_minus: BTreeMap<usize, Vec<CoverComponent>>,
    /// `max |S| - |N(S)|` over all vertex subsets, the related
    /// occurrence-count parameter; equals `rho` unless both are at most 0.
    pub delta: i64,
}

impl PatternDecomposition {
    pub fn s_mask(&self) -> u32 {
        to_mask(&self.s)
    }

    pub fn ns_mask(&self) -> u32 {
        to_mask(&self.ns)
    }

    pub fn r_mask(&self) -> u32 {
        to_mask(&self.r)
    }

    /// S-vertices not used by the matching.
    pub fn free_s(&self) -> Vec<usize> {
        let matched = self.matching.iter().fold(0u32, |acc, &(s, _)| acc | 1 << s);
        self.s.iter().copied().filter(|&v| matched >> v & 1 == 0).collect()
    }
}

pub(crate) fn to_mask(vertices: &[usize]) -> u32 {
    vertices.iter().fold(0, |acc, &v| acc | 1 << v)
}

/// The maximizing independent set S with ties broken by larger |S| and then
/// by the lexicographically smallest sorted vertex list.
pub fn choose_s(p: &Pattern) -> u32 {
    let k = p.k();
    let allowed = !p.isolated_mask() & low_bits(k);
    let mut best: Option<(i64, usize, Vec<usize>, u32)> = None;
    for set in 0u32..(1u32 << k) {
        if set & !allowed != 0 || !p.is_independent(set) {
            continue;
        }
        let size = set.count_ones() as usize;
        let value = size as i64 - p.open_neighborhood(set).count_ones() as i64;
        let list: Vec<usize> = bits(set).collect();
        let better = match &best {
            None => true,
            Some((bv, bs, bl, _)) => value > *bv || (value == *bv && (size > *bs || (size == *bs && list < *bl))),
        };
        if better {
            best = Some((value, size, list, set));
        }
    }
    best.map(|b| b.3).unwrap_or(0)
}

fn low_bits(k: usize) -> u32 {
    if k >= 32 {
        u32::MAX
    } else {
        (1u32 << k) - 1
    }
}

/// Computes ρ and the full decomposition.
pub fn compute_rho(p: &Pattern) -> Result<PatternDecomposition> {
    let k = p.k();
    let s_mask = choose_s(p);
    let ns_mask = p.open_neighborhood(s_mask);
    let r_mask = low_bits(k) & !s_mask & !ns_mask;
    let s: Vec<usize> = bits(s_mask).collect();
    let ns: Vec<usize> = bits(ns_mask).collect();
    let r: Vec<usize> = bits(r_mask).collect();
    let rho = if s.is_empty() { -1 } else { s.len() as i64 - ns.len() as i64 };
    let matching = hall_matching(p, &s, &ns)?;
    let core = r_mask & !p.isolated_mask();
    let core_list: Vec<usize> = bits(core).collect();
    let r_cover = edge_cycle_cover(p, &core_list, None)?;
    let mut r_cover_minus = BTreeMap::new();
    for &x in &core_list {
        r_cover_minus.insert(x, edge_cycle_cover(p, &core_list, Some(x))?);
    }
    Ok(PatternDecomposition { s, ns, r, rho, matching, r_cover, r_cover_minus, delta: compute_delta(p) })
}

/// `max_{S ⊆ V(P)} |S| - |N(S)|`, with the empty set contributing 0.
pub fn compute_delta(p: &Pattern) -> i64 {
    (0u32..(1u32 << p.k()))
        .map(|set| set.count_ones() as i64 - p.open_neighborhood(set).count_ones() as i64)
        .max()
        .unwrap_or(0)
}

/// A matching from S into N(S) saturating N(S), by augmenting paths.
pub fn hall_matching(p: &Pattern, s: &[usize], ns: &[usize]) -> Result<Vec<(usize, usize)>> {
    let k = p.k();
    let s_mask = to_mask(s);
    // partner[v] for v in S
    let mut partner_of_s: Vec<Option<usize>> = vec![None; k];
    let mut partner_of_ns: Vec<Option<usize>> = vec![None; k];
    for &y in ns {
        let mut seen = 0u32;
        if !augment(p, y, s_mask, &mut seen, &mut partner_of_s, &mut partner_of_ns) {
            return Err(Error::Invariant(format!(
                "no matching from S={s:?} saturates N(S)={ns:?} (vertex {y} unmatched)"
            )));
        }
    }
    let mut pairs: Vec<(usize, usize)> = ns.iter().map(|&y| (partner_of_ns[y].expect("matched"), y)).collect();
    pairs.sort_unstable();
    Ok(pairs)
}

fn augment(
    p: &Pattern,
    y: usize,
    s_mask: u32,
    seen: &mut u32,
    partner_of_s: &mut [Option<usize>],
    partner_of_ns: &mut [Option<usize>],
) -> bool {
    for x in bits(p.neighbors_mask(y) & s_mask) {
        if *seen >> x & 1 == 1 {
            continue;
        }
        *seen |= 1 << x;
        let free = match partner_of_s[x] {
            None => true,
            Some(other) => augment(p, other, s_mask, seen, partner_of_s, partner_of_ns),
        };
        if free {
            partner_of_s[x] = Some(y);
            partner_of_ns[y] = Some(x);
            return true;
        }
    }
    false
}

/// Vertex-disjoint edges and odd cycles of `p` covering `r` minus
/// `excluded` exactly. Searches components through the lowest uncovered
/// vertex, edges before cycles, shorter cycles first.
pub fn edge_cycle_cover(p: &Pattern, r: &[usize], excluded: Option<usize>) -> Result<Vec<CoverComponent>> {
    let mut target = to_mask(r);
    if let Some(x) = excluded {
        target &= !(1 << x);
    }
    let mut out = Vec::new();
    if cover_search(p, target, &mut out) {
        Ok(out)
    } else {
        Err(Error::Invariant(format!(
            "no edge/odd-cycle cover of {:?}",
            bits(target).collect::<Vec<_>>()
        )))
    }
}

fn cover_search(p: &Pattern, remaining: u32, out: &mut Vec<CoverComponent>) -> bool {
    if remaining == 0 {
        return true;
    }
    let v = remaining.trailing_zeros() as usize;
    let nbrs = p.neighbors_mask(v) & remaining;
    for w in bits(nbrs) {
        out.push(CoverComponent::Edge(v, w));
        if cover_search(p, remaining & !(1 << v) & !(1 << w), out) {
            return true;
        }
        out.pop();
    }
    let available = remaining.count_ones() as usize;
    let mut len = 3;
    while len <= available {
        let mut cycles = Vec::new();
        let mut path = vec![v];
        odd_cycles_from(p, remaining, len, &mut path, &mut cycles);
        for cycle in cycles {
            let used = to_mask(&cycle);
            out.push(CoverComponent::OddCycle(cycle));
            if cover_search(p, remaining & !used, out) {
                return true;
            }
            out.pop();
        }
        len += 2;
    }
    false
}

/// Cycles of length `len` through `path[0]` whose other vertices are larger
/// than `path[0]` (the start is the lowest remaining vertex anyway), each
/// listed once per direction pair.
fn odd_cycles_from(p: &Pattern, allowed: u32, len: usize, path: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
    let start = path[0];
    let last = *path.last().expect("nonempty");
    if path.len() == len {
        if p.has_edge(last, start) && path[1] < path[len - 1] {
            out.push(path.clone());
        }
        return;
    }
    let used = to_mask(path);
    for w in bits(p.neighbors_mask(last) & allowed & !used) {
        path.push(w);
        odd_cycles_from(p, allowed, len, path, out);
        path.pop();
    }
}

/// The budget `t_P(n, m) = n^rho * m^((k - rho) / 2)` with exact exponents.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budget {
    pub rho: i64,
    pub k: usize,
}

impl Budget {
    pub fn n_exp(&self) -> i64 {
        self.rho
    }

    /// Twice the exponent of m, so half-integers stay exact.
    pub fn m_exp_twice(&self) -> i64 {
        self.k as i64 - self.rho
    }

    pub fn m_exp(&self) -> f64 {
        self.m_exp_twice() as f64 / 2.0
    }

    pub fn value(&self, n: u64, m: u64) -> f64 {
        (n as f64).powi(self.rho as i32) * (m as f64).powf(self.m_exp())
    }
}

pub fn budget(p: &Pattern, n: u64, m: u64) -> Result<(f64, Budget)> {
    if n == 0 {
        return Err(Error::Invalid("budget needs n >= 1".into()));
    }
    let rho = compute_rho(p)?.rho;
    let b = Budget { rho, k: p.k() };
    Ok((b.value(n, m), b))
}
