//! Dominance checks through one matrix product: pair up two candidate
//! families, keep the unions that dominate the targets, filter by a
//! predicate.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::graph::{HostGraph, Witness};
use crate::linalg::BitMatrix;

/// Vertex sets over the host graph, each sorted, without duplicates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CandidateFamily {
    pub members: Vec<Vec<usize>>,
    pub tag: String,
}

impl CandidateFamily {
    pub fn new(members: Vec<Vec<usize>>, tag: impl Into<String>, max_family: usize) -> Result<Self> {
        let mut members: Vec<Vec<usize>> = members
            .into_iter()
            .map(|mut m| {
                m.sort_unstable();
                m.dedup();
                m
            })
            .collect();
        members.sort_unstable();
        members.dedup();
        let tag = tag.into();
        if members.len() > max_family {
            return Err(family_limit(&tag, max_family));
        }
        Ok(Self { members, tag })
    }

    /// The family holding only the empty set.
    pub fn unit(tag: impl Into<String>) -> Self {
        Self { members: vec![Vec::new()], tag: tag.into() }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub(crate) fn family_limit(tag: &str, max_family: usize) -> Error {
    Error::ResourceLimit { what: format!("candidate family `{tag}`"), limit: max_family as u64 }
}

pub type Predicate<'a> = &'a (dyn Fn(&[usize]) -> bool + Sync);

pub struct DominationTask<'a> {
    /// Vertices the union must dominate.
    pub targets: &'a [usize],
    pub family_a: &'a CandidateFamily,
    pub family_b: &'a CandidateFamily,
    /// Receives the sorted union `A ∪ B`.
    pub predicate: Predicate<'a>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct TaskStats {
    pub rows: usize,
    pub inner: usize,
    pub cols: usize,
    /// Pairs whose union dominates the targets.
    pub dominating_pairs: usize,
}

/// `{v : k (deg(v) + 1) >= n}`; every dominating set of size `k` meets it.
pub fn heavy_vertices(g: &HostGraph, k: usize) -> Vec<usize> {
    (0..g.n()).filter(|&v| k * (g.degree(v) + 1) >= g.n()).collect()
}

/// All unions `A ∪ B` that dominate the targets and satisfy the predicate,
/// sorted and deduplicated.
pub fn solve_task(g: &HostGraph, task: &DominationTask<'_>) -> Result<Vec<Witness>> {
    Ok(run_task(g, task, false).0)
}

/// The first passing union in `(a, b)` order, if any.
pub fn find_first(g: &HostGraph, task: &DominationTask<'_>) -> Option<Witness> {
    run_task(g, task, true).0.into_iter().next()
}

const ROW_BLOCK: usize = 2048;

/// Rows of `M[i][y] = 1` iff target `y` is outside `N[member i]`.
fn uncovered_rows(g: &HostGraph, members: &[Vec<usize>], slot: &[usize], inner: usize) -> BitMatrix {
    let rows: Vec<Vec<usize>> = members
        .par_iter()
        .map(|member| {
            let mut covered = vec![false; inner];
            for &v in member {
                for &w in std::iter::once(&v).chain(g.neighbors(v)) {
                    if slot[w] != usize::MAX {
                        covered[slot[w]] = true;
                    }
                }
            }
            (0..inner).filter(|&y| !covered[y]).collect()
        })
        .collect();
    BitMatrix::from_rows(inner, rows)
}

fn union_sorted(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let next = match (a.get(i), b.get(j)) {
            (Some(&x), Some(&y)) if x == y => {
                i += 1;
                j += 1;
                x
            }
            (Some(&x), Some(&y)) if x < y => {
                i += 1;
                x
            }
            (Some(_), Some(&y)) => {
                j += 1;
                y
            }
            (Some(&x), None) => {
                i += 1;
                x
            }
            (None, Some(&y)) => {
                j += 1;
                y
            }
            (None, None) => unreachable!(),
        };
        out.push(next);
    }
    out
}

pub fn run_task(g: &HostGraph, task: &DominationTask<'_>, first_only: bool) -> (Vec<Witness>, TaskStats) {
    let inner = task.targets.len();
    let mut slot = vec![usize::MAX; g.n()];
    for (i, &y) in task.targets.iter().enumerate() {
        slot[y] = i;
    }
    let mut stats = TaskStats { rows: task.family_a.len(), inner, cols: task.family_b.len(), dominating_pairs: 0 };
    if task.family_a.is_empty() || task.family_b.is_empty() {
        return (Vec::new(), stats);
    }
    let right = uncovered_rows(g, &task.family_b.members, &slot, inner);
    let mut found = Vec::new();
    for block in task.family_a.members.chunks(ROW_BLOCK) {
        let left = uncovered_rows(g, block, &slot, inner);
        let scan_row = |i: usize| -> (usize, Vec<Witness>) {
            let a_row = left.row(i);
            let mut hits = 0;
            let mut out = Vec::new();
            for j in 0..right.rows() {
                if a_row.iter().zip(right.row(j)).all(|(x, y)| x & y == 0) {
                    hits += 1;
                    let union = union_sorted(&block[i], &task.family_b.members[j]);
                    if (task.predicate)(&union) {
                        out.push(Witness { vertices: union });
                        if first_only {
                            break;
                        }
                    }
                }
            }
            (hits, out)
        };
        if first_only {
            let hit = (0..block.len()).into_par_iter().map(scan_row).find_first(|(_, w)| !w.is_empty());
            if let Some((_, w)) = hit {
                stats.dominating_pairs += 1;
                return (w, stats);
            }
        } else {
            let results: Vec<(usize, Vec<Witness>)> = (0..block.len()).into_par_iter().map(scan_row).collect();
            for (hits, w) in results {
                stats.dominating_pairs += hits;
                found.extend(w);
            }
        }
    }
    found.sort_unstable();
    found.dedup();
    (found, stats)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::HostGraph;

    fn fam(members: &[&[usize]]) -> CandidateFamily {
        CandidateFamily::new(members.iter().map(|m| m.to_vec()).collect(), "t", 1000).unwrap()
    }

    #[test]
    fn heavy_examples() {
        let star = HostGraph::from_edges(10, (1..10).map(|v| (0, v))).unwrap();
        assert_eq!(heavy_vertices(&star, 3), vec![0]);
        assert_eq!(heavy_vertices(&HostGraph::complete(5), 5), vec![0, 1, 2, 3, 4]);
        assert!(heavy_vertices(&HostGraph::empty(4), 3).is_empty());
    }

    #[test]
    fn vacuous_targets() {
        let g = HostGraph::cycle(6);
        let a = fam(&[&[0], &[1]]);
        let b = fam(&[&[2], &[3]]);
        let all = |_: &[usize]| true;
        let task = DominationTask { targets: &[], family_a: &a, family_b: &b, predicate: &all };
        assert_eq!(solve_task(&g, &task).unwrap().len(), 4);
    }

    #[test]
    fn cycle_pair() {
        let g = HostGraph::cycle(6);
        let targets: Vec<usize> = (0..6).collect();
        let a = fam(&[&[0]]);
        let b = fam(&[&[3]]);
        let pred = |d: &[usize]| d.len() == 2 && !g.has_edge(d[0], d[1]);
        let task = DominationTask { targets: &targets, family_a: &a, family_b: &b, predicate: &pred };
        assert_eq!(solve_task(&g, &task).unwrap(), vec![Witness { vertices: vec![0, 3] }]);
    }

    #[test]
    fn triangle_edges() {
        let g = HostGraph::complete(3);
        let targets: Vec<usize> = (0..3).collect();
        let a = fam(&[&[0], &[1]]);
        let b = fam(&[&[1], &[2]]);
        let pred = |d: &[usize]| d.len() == 2 && g.has_edge(d[0], d[1]);
        let task = DominationTask { targets: &targets, family_a: &a, family_b: &b, predicate: &pred };
        let got: Vec<Vec<usize>> = solve_task(&g, &task).unwrap().into_iter().map(|w| w.vertices).collect();
        assert_eq!(got, vec![vec![0, 1], vec![0, 2], vec![1, 2]]);
        assert_eq!(find_first(&g, &task).unwrap().vertices, vec![0, 1]);
    }

    #[test]
    fn matches_brute_force_on_random_tasks() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..40 {
            let n = rng.gen_range(1..30);
            let edges: Vec<(usize, usize)> = (0..rng.gen_range(0..3 * n))
                .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n)))
                .filter(|(u, v)| u != v)
                .collect();
            let g = HostGraph::from_edges(n, edges).unwrap();
            let targets: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.7)).collect();
            let random_family = |rng: &mut rand_chacha::ChaCha8Rng, size: usize| {
                let members = (0..size)
                    .map(|_| (0..rng.gen_range(0..4)).map(|_| rng.gen_range(0..n)).collect())
                    .collect();
                CandidateFamily::new(members, "r", 100).unwrap()
            };
            let size = rng.gen_range(0..50);
            let a = random_family(&mut rng, size);
            let size = rng.gen_range(0..50);
            let b = random_family(&mut rng, size);
            let pred = |d: &[usize]| d.len() % 2 == 1;
            let task = DominationTask { targets: &targets, family_a: &a, family_b: &b, predicate: &pred };
            let got = solve_task(&g, &task).unwrap();
            let mut expect = Vec::new();
            for x in &a.members {
                for y in &b.members {
                    let u = union_sorted(x, y);
                    let covered = {
                        let mut c = vec![false; n];
                        for &v in &u {
                            c[v] = true;
                            for &w in g.neighbors(v) {
                                c[w] = true;
                            }
                        }
                        targets.iter().all(|&t| c[t])
                    };
                    if covered && pred(&u) {
                        expect.push(Witness { vertices: u });
                    }
                }
            }
            expect.sort();
            expect.dedup();
            assert_eq!(got, expect);
        }
    }
}
