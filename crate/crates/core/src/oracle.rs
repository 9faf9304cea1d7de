//! Brute-force reference implementations. They share no code paths with
//! the solvers beyond graph primitives.

use serde::{Deserialize, Serialize};

use crate::config::DEFAULT_ORACLE_CAP;
use crate::error::{Error, Result};
use crate::graph::{HostGraph, Pattern, Witness};
use crate::hardness::OVInstance;
use crate::solvers::{Route, SolveResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleBudgetGuard {
    pub max_subsets: u64,
}

impl Default for OracleBudgetGuard {
    fn default() -> Self {
        Self { max_subsets: DEFAULT_ORACLE_CAP }
    }
}

impl OracleBudgetGuard {
    pub fn new(max_subsets: u64) -> Self {
        Self { max_subsets }
    }

    fn check(&self, what: &str, count: u128) -> Result<()> {
        if count > self.max_subsets as u128 {
            return Err(Error::ResourceLimit { what: format!("{what} ({count} cases)"), limit: self.max_subsets });
        }
        Ok(())
    }
}

pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut c: u128 = 1;
    for i in 0..k {
        c = c.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    c
}

/// Calls `f` on every `k`-subset of `0..n` in lexicographic order until it
/// returns `true`.
fn subsets(n: usize, k: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if k > n {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if f(&idx) {
            return;
        }
        let Some(i) = (0..k).rev().find(|&i| idx[i] != i + n - k) else {
            return;
        };
        idx[i] += 1;
        for j in i + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

fn naive_dominates(g: &HostGraph, d: &[usize]) -> bool {
    (0..g.n()).all(|v| d.iter().any(|&u| u == v || g.has_edge(u, v)))
}

/// Whether `G[d]` and `p` are isomorphic, trying every vertex bijection.
fn naive_induces(g: &HostGraph, d: &[usize], p: &Pattern, induced: bool) -> bool {
    let k = p.k();
    if d.len() != k {
        return false;
    }
    let mut perm: Vec<usize> = (0..k).collect();
    let ok = |perm: &[usize]| {
        (0..k).all(|i| {
            (i + 1..k).all(|j| {
                let host = g.has_edge(d[perm[i]], d[perm[j]]);
                let pat = p.has_edge(i, j);
                if induced {
                    host == pat
                } else {
                    host || !pat
                }
            })
        })
    };
    // Heap's algorithm
    let mut c = vec![0; k];
    if ok(&perm) {
        return true;
    }
    let mut i = 0;
    while i < k {
        if c[i] < i {
            if i % 2 == 0 {
                perm.swap(0, i);
            } else {
                perm.swap(c[i], i);
            }
            if ok(&perm) {
                return true;
            }
            c[i] += 1;
            i = 0;
        } else {
            c[i] = 0;
            i += 1;
        }
    }
    false
}

/// The lexicographically first dominating `k`-subset inducing `p`.
pub fn oracle_solve(g: &HostGraph, p: &Pattern, guard: &OracleBudgetGuard) -> Result<SolveResult> {
    oracle_scan(g, p, guard, true)
}

/// The lexicographically first dominating `k`-subset whose induced graph
/// contains `p` as a subgraph.
pub fn oracle_solve_non_induced(g: &HostGraph, p: &Pattern, guard: &OracleBudgetGuard) -> Result<SolveResult> {
    oracle_scan(g, p, guard, false)
}

fn oracle_scan(g: &HostGraph, p: &Pattern, guard: &OracleBudgetGuard, induced: bool) -> Result<SolveResult> {
    guard.check("dominating set oracle", binomial(g.n(), p.k()))?;
    let mut result = SolveResult::new(Route::Oracle);
    subsets(g.n(), p.k(), |d| {
        if naive_dominates(g, d) && naive_induces(g, d, p, induced) {
            result.set_witness(Witness::new(d.to_vec()), "scan");
            true
        } else {
            false
        }
    });
    Ok(result)
}

/// Every dominating `k`-subset, in lexicographic order.
pub fn oracle_dominating_sets(g: &HostGraph, k: usize, guard: &OracleBudgetGuard) -> Result<Vec<Vec<usize>>> {
    guard.check("dominating set enumeration", binomial(g.n(), k))?;
    let mut out = Vec::new();
    subsets(g.n(), k, |d| {
        if naive_dominates(g, d) {
            out.push(d.to_vec());
        }
        false
    });
    Ok(out)
}

/// Exhaustive maximizer of `|S| - |N(S)|` over independent sets avoiding
/// the isolated vertices: larger value, then larger `S`, then the
/// lexicographically smallest sorted list. Returns `-1` and `[]` when only
/// the empty set is available or it wins.
pub fn oracle_rho(p: &Pattern) -> (i64, Vec<usize>) {
    let k = p.k();
    let mut best: Option<(i64, Vec<usize>)> = None;
    for mask in 1u32..(1 << k) {
        let set: Vec<usize> = (0..k).filter(|&v| mask >> v & 1 == 1).collect();
        if set.iter().any(|&v| p.degree(v) == 0) {
            continue;
        }
        if set.iter().enumerate().any(|(i, &u)| set[i + 1..].iter().any(|&v| p.has_edge(u, v))) {
            continue;
        }
        let nbrs = (0..k).filter(|&w| set.iter().any(|&u| p.has_edge(u, w))).count();
        let value = set.len() as i64 - nbrs as i64;
        let better = match &best {
            None => true,
            Some((bv, bs)) => value > *bv || (value == *bv && (set.len() > bs.len() || (set.len() == bs.len() && set < *bs))),
        };
        if better {
            best = Some((value, set));
        }
    }
    match best {
        Some((value, set)) if value >= 0 => (value, set),
        _ => (-1, Vec::new()),
    }
}

/// Number of triangles through each edge between parts 0 and 1, by
/// scanning every third vertex. Sorted by `(u, v)` with `u` in part 0.
pub fn oracle_edge_triangles(g: &HostGraph, part: &[u8]) -> Vec<(usize, usize, u32)> {
    let mut out = Vec::new();
    for u in 0..g.n() {
        for v in 0..g.n() {
            if part[u] == 0 && part[v] == 1 && g.has_edge(u, v) {
                let c = (0..g.n()).filter(|&w| part[w] == 2 && g.has_edge(u, w) && g.has_edge(v, w)).count();
                out.push((u, v, c as u32));
            }
        }
    }
    out
}

/// Number of 4-cliques.
pub fn oracle_k4_count(g: &HostGraph) -> u64 {
    let mut count = 0;
    subsets(g.n(), 4, |d| {
        if (0..4).all(|i| (i + 1..4).all(|j| g.has_edge(d[i], d[j]))) {
            count += 1;
        }
        false
    });
    count
}

/// One vector index per set whose coordinatewise product is zero, found by
/// scanning tuples in lexicographic order.
pub fn oracle_ov(inst: &OVInstance, guard: &OracleBudgetGuard) -> Result<Option<Vec<usize>>> {
    ov_scan(inst, guard, false)
}

/// As [`oracle_ov`], scanning tuples with the last set varying slowest and
/// indices descending. Used to cross-check the forward scan.
pub fn oracle_ov_reverse(inst: &OVInstance, guard: &OracleBudgetGuard) -> Result<Option<Vec<usize>>> {
    ov_scan(inst, guard, true)
}

fn ov_scan(inst: &OVInstance, guard: &OracleBudgetGuard, reverse: bool) -> Result<Option<Vec<usize>>> {
    let sizes: Vec<usize> = inst.sets.iter().map(Vec::len).collect();
    let total = sizes.iter().fold(1u128, |acc, &s| acc.saturating_mul(s as u128));
    guard.check("orthogonal vectors oracle", total)?;
    if total == 0 {
        return Ok(None);
    }
    let k = sizes.len();
    let mut idx = vec![0usize; k];
    for _ in 0..total {
        let tuple: Vec<usize> = if reverse { idx.iter().zip(&sizes).map(|(&i, &s)| s - 1 - i).collect() } else { idx.clone() };
        let orthogonal = (0..inst.d).all(|t| (0..k).any(|i| !inst.sets[i][tuple[i]][t]));
        if orthogonal {
            return Ok(Some(tuple));
        }
        // odometer: the forward scan advances the last set first
        let order: Vec<usize> = if reverse { (0..k).collect() } else { (0..k).rev().collect() };
        for i in order {
            idx[i] += 1;
            if idx[i] < sizes[i] {
                break;
            }
            idx[i] = 0;
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_pattern;

    fn g() -> OracleBudgetGuard {
        OracleBudgetGuard::default()
    }

    #[test]
    fn solve_examples() {
        let k3 = HostGraph::complete(3);
        let r = oracle_solve(&k3, &parse_pattern("clique:3").unwrap(), &g()).unwrap();
        assert_eq!(r.witness.unwrap().vertices, vec![0, 1, 2]);
        assert_eq!(r.route, Route::Oracle);
        let c6 = HostGraph::cycle(6);
        let r = oracle_solve(&c6, &parse_pattern("independent:3").unwrap(), &g()).unwrap();
        assert_eq!(r.witness.unwrap().vertices, vec![0, 2, 4]);
        let r = oracle_solve(&HostGraph::complete(4), &parse_pattern("independent:2").unwrap(), &g()).unwrap();
        assert!(!r.found);
        let tight = OracleBudgetGuard::new(10);
        assert!(oracle_solve(&c6, &parse_pattern("independent:3").unwrap(), &tight).unwrap_err().is_resource());
    }

    #[test]
    fn rho_examples() {
        assert_eq!(oracle_rho(&parse_pattern("clique:3").unwrap()).0, -1);
        assert_eq!(oracle_rho(&parse_pattern("star:4").unwrap()), (2, vec![1, 2, 3]));
        assert_eq!(oracle_rho(&parse_pattern("clique:1").unwrap()), (-1, vec![]));
    }

    #[test]
    fn ov_examples() {
        let yes = OVInstance::new(2, 2, vec![vec![vec![true, false]], vec![vec![false, true]]]).unwrap();
        assert_eq!(oracle_ov(&yes, &g()).unwrap(), Some(vec![0, 0]));
        let no = OVInstance::new(2, 2, vec![vec![vec![true, true]], vec![vec![true, true]]]).unwrap();
        assert_eq!(oracle_ov(&no, &g()).unwrap(), None);
        assert_eq!(oracle_ov_reverse(&no, &g()).unwrap(), None);
    }

    #[test]
    fn non_induced_scan() {
        let k3 = HostGraph::complete(3);
        let p3 = parse_pattern("path:3").unwrap();
        assert!(!oracle_solve(&k3, &p3, &g()).unwrap().found);
        assert!(oracle_solve_non_induced(&k3, &p3, &g()).unwrap().found);
        assert_eq!(oracle_k4_count(&HostGraph::complete(5)), 5);
        assert_eq!(binomial(20, 10), 184_756);
    }
}
