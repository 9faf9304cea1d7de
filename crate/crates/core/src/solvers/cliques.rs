//! Dominating triangles and dominating K4s.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::dominance::{heavy_vertices, CandidateFamily};
use crate::enumeration::low_threshold;
use crate::error::{Error, Result};
use crate::graph::{HostGraph, Witness};
use crate::linalg::{max_entry_product, product_count_transposed, BitMatrix, MaxEntryMode};

use super::{first_dominating, Route, SolveOptions, SolveResult, SolveStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeTriangleCount {
    /// Endpoint in part 0.
    pub u: usize,
    /// Endpoint in part 1.
    pub v: usize,
    pub count: u32,
}

fn icbrt(m: usize) -> usize {
    let mut t = (m as f64).cbrt() as usize;
    while t * t * t > m {
        t -= 1;
    }
    while (t + 1) * (t + 1) * (t + 1) <= m {
        t += 1;
    }
    t
}

/// For every edge between parts 0 and 1 of a tripartite graph, the number
/// of triangles through it (equivalently, common neighbors in part 2).
/// Output is sorted by `(u, v)`.
pub fn all_edges_triangle_count(g: &HostGraph, part: &[u8]) -> Result<Vec<EdgeTriangleCount>> {
    all_edges_triangle_count_with(g, part, &mut SolveStats::default())
}

fn all_edges_triangle_count_with(g: &HostGraph, part: &[u8], stats: &mut SolveStats) -> Result<Vec<EdgeTriangleCount>> {
    if part.len() != g.n() {
        return Err(Error::SizeMismatch(format!("{} part labels for {} vertices", part.len(), g.n())));
    }
    if let Some(&bad) = part.iter().find(|&&p| p > 2) {
        return Err(Error::Invalid(format!("part label {bad} is not 0, 1 or 2")));
    }
    let mut cross = Vec::new();
    for (a, b) in g.edges() {
        match (part[a], part[b]) {
            (x, y) if x == y => return Err(Error::Invalid(format!("edge {a}-{b} lies inside part {x}"))),
            (0, 1) => cross.push((a, b)),
            (1, 0) => cross.push((b, a)),
            _ => {}
        }
    }
    cross.sort_unstable();
    let mut counts = vec![0u32; cross.len()];
    let delta = icbrt(g.m());
    let third: Vec<usize> = (0..g.n()).filter(|&w| part[w] == 2).collect();
    let (light, heavy): (Vec<usize>, Vec<usize>) = third.into_iter().partition(|&w| g.degree(w) <= delta);
    for w in light {
        let nb = g.neighbors(w);
        for &a in nb.iter().filter(|&&a| part[a] == 0) {
            for &b in nb.iter().filter(|&&b| part[b] == 1) {
                if let Ok(i) = cross.binary_search(&(a, b)) {
                    counts[i] += 1;
                }
            }
        }
    }
    if !heavy.is_empty() && !cross.is_empty() {
        let mut index = vec![usize::MAX; g.n()];
        let mut sides = [Vec::new(), Vec::new()];
        for v in 0..g.n() {
            if part[v] < 2 {
                index[v] = sides[part[v] as usize].len();
                sides[part[v] as usize].push(v);
            }
        }
        let incidence = |side: &[usize]| BitMatrix::from_fn(side.len(), heavy.len(), |i, j| g.has_edge(side[i], heavy[j]));
        let (m0, m1) = (incidence(&sides[0]), incidence(&sides[1]));
        stats.product(m0.rows(), heavy.len(), m1.rows());
        let common = product_count_transposed(&m0, &m1);
        for (i, &(a, b)) in cross.iter().enumerate() {
            counts[i] += common.get(index[a], index[b]);
        }
    }
    Ok(cross.into_iter().zip(counts).map(|((u, v), count)| EdgeTriangleCount { u, v, count }).collect())
}

/// Neighbors of `h` and vertices at distance two, or `None` when some
/// vertex lies farther away.
fn layers(g: &HostGraph, h: usize) -> Option<(Vec<usize>, Vec<usize>)> {
    let mut dist = vec![usize::MAX; g.n()];
    dist[h] = 0;
    let mut queue = VecDeque::from([h]);
    while let Some(u) = queue.pop_front() {
        if dist[u] == 2 {
            continue;
        }
        for &w in g.neighbors(u) {
            if dist[w] == usize::MAX {
                dist[w] = dist[u] + 1;
                queue.push_back(w);
            }
        }
    }
    if dist.contains(&usize::MAX) {
        return None;
    }
    let x1 = (0..g.n()).filter(|&v| dist[v] == 1).collect();
    let x2 = (0..g.n()).filter(|&v| dist[v] == 2).collect();
    Some((x1, x2))
}

pub fn solve_triangle(g: &HostGraph, _options: &SolveOptions) -> Result<SolveResult> {
    let mut result = SolveResult::new(Route::Triangle);
    if g.n() < 3 {
        return Ok(result);
    }
    for h in heavy_vertices(g, 3) {
        let Some((x1, x2)) = layers(g, h) else {
            result.stats.hit("far-vertex");
            continue;
        };
        result.stats.hit("layers");
        let a = x1.len();
        let mut pos = vec![usize::MAX; g.n()];
        for (i, &u) in x1.iter().enumerate() {
            pos[u] = i;
        }
        for (t, &x) in x2.iter().enumerate() {
            pos[x] = 2 * a + t;
        }
        let mut edges = Vec::new();
        let mut n2 = vec![0u32; a];
        for (i, &u) in x1.iter().enumerate() {
            for &w in g.neighbors(u) {
                if w == h {
                    continue;
                }
                if pos[w] < a {
                    edges.push((i, a + pos[w]));
                } else {
                    n2[i] += 1;
                    edges.push((i, pos[w]));
                    edges.push((a + i, pos[w]));
                }
            }
        }
        let t = HostGraph::from_edges(2 * a + x2.len(), edges)?;
        let part: Vec<u8> = (0..t.n()).map(|v| (v / a).min(2) as u8).collect();
        for c in all_edges_triangle_count_with(&t, &part, &mut result.stats)? {
            let (i, j) = (c.u, c.v - a);
            if i < j && n2[i] + n2[j] - c.count == x2.len() as u32 {
                result.set_witness(Witness::new(vec![h, x1[i], x1[j]]), "layers");
                return Ok(result);
            }
        }
    }
    Ok(result)
}

struct K4Context<'a> {
    g: &'a HostGraph,
    v: usize,
    x1: Vec<usize>,
    x2: Vec<usize>,
    /// `N(u) ∩ X2` for each `u` in `X1`, rows indexed like `x1`.
    n2: BitMatrix,
    n2_count: Vec<usize>,
    high: Vec<usize>,
    low: Vec<usize>,
    s: usize,
    mode: MaxEntryMode,
    calls: u64,
    max_family: usize,
}

impl K4Context<'_> {
    fn covers_third(&self, i: usize) -> bool {
        3 * self.n2_count[i] >= self.x2.len()
    }

    fn witness(&self, rest: [usize; 3]) -> Witness {
        Witness::new(vec![self.v, self.x1[rest[0]], self.x1[rest[1]], self.x1[rest[2]]])
    }

    fn adjacent(&self, i: usize, j: usize) -> bool {
        self.g.has_edge(self.x1[i], self.x1[j])
    }

    fn max_entry(&mut self, b: &BitMatrix, c: &BitMatrix, stats: &mut SolveStats) -> Result<Vec<(usize, usize)>> {
        self.calls += 1;
        stats.product(b.rows(), b.cols(), c.cols());
        max_entry_product(b, c, self.mode.reseeded(self.calls))
    }

    /// `N <= 3s`: either some vertex is high, or a low vertex covering a
    /// third of X2 has the other two among its low neighbors.
    fn case_small(&mut self, stats: &mut SolveStats) -> Result<Option<Witness>> {
        let g = self.g;
        stats.hit("small-high");
        let a = CandidateFamily::new(self.high.iter().map(|&i| vec![self.x1[i]]).collect(), "high", self.max_family)?;
        let mut edges = Vec::new();
        for i in 0..self.x1.len() {
            for j in i + 1..self.x1.len() {
                if self.adjacent(i, j) {
                    edges.push(vec![self.x1[i], self.x1[j]]);
                }
            }
        }
        let b = CandidateFamily::new(edges, "x1-edges", self.max_family)?;
        let clique = |d: &[usize]| d.len() == 3 && d.iter().enumerate().all(|(i, &x)| d[i + 1..].iter().all(|&y| g.has_edge(x, y)));
        if let Some(w) = first_dominating(g, &self.x2, &a, &b, &clique, stats) {
            let mut d = w.vertices;
            d.push(self.v);
            return Ok(Some(Witness::new(d)));
        }
        let edge = |d: &[usize]| d.len() == 2 && g.has_edge(d[0], d[1]);
        for &u in &self.low {
            if !self.covers_third(u) {
                continue;
            }
            stats.hit("small-low");
            let nb: Vec<Vec<usize>> = self.low.iter().filter(|&&j| self.adjacent(u, j)).map(|&j| vec![self.x1[j]]).collect();
            let fam = CandidateFamily::new(nb, "low-neighbors", self.max_family)?;
            let targets: Vec<usize> = self.x2.iter().copied().filter(|&x| !g.has_edge(self.x1[u], x)).collect();
            if let Some(w) = first_dominating(g, &targets, &fam, &fam, &edge, stats) {
                let mut d = w.vertices;
                d.extend([self.v, self.x1[u]]);
                return Ok(Some(Witness::new(d)));
            }
        }
        Ok(None)
    }

    /// All three remaining vertices are high.
    fn case_all_high(&mut self, stats: &mut SolveStats) -> Result<Option<Witness>> {
        stats.hit("all-high");
        let n = self.x2.len();
        let hv = &self.high;
        let rows = self.n2.select_rows(hv);
        stats.product(hv.len(), n, hv.len());
        let pair = product_count_transposed(&rows, &rows);
        let mut hedges = Vec::new();
        for a in 0..hv.len() {
            for b in a + 1..hv.len() {
                if self.adjacent(hv[a], hv[b]) {
                    hedges.push((a, b));
                }
            }
        }
        let cand: Vec<usize> = (0..hv.len()).filter(|&c| self.covers_third(hv[c])).collect();
        if hedges.is_empty() || cand.is_empty() {
            return Ok(None);
        }
        let both = self.n2.and_rows(&hedges.iter().map(|&(a, b)| (hv[a], hv[b])).collect::<Vec<_>>());
        let cols = self.n2.select_rows(&cand.iter().map(|&c| hv[c]).collect::<Vec<_>>());
        stats.product(hedges.len(), n, cand.len());
        let triple = product_count_transposed(&both, &cols);
        for (e, &(a, b)) in hedges.iter().enumerate() {
            for (j, &c) in cand.iter().enumerate() {
                if c == a || c == b || !self.adjacent(hv[a], hv[c]) || !self.adjacent(hv[b], hv[c]) {
                    continue;
                }
                let size = self.n2_count[hv[a]] + self.n2_count[hv[b]] + self.n2_count[hv[c]]
                    - pair.get(a, b) as usize
                    - pair.get(a, c) as usize
                    - pair.get(b, c) as usize
                    + triple.get(e, j) as usize;
                if size == n {
                    return Ok(Some(self.witness([hv[a], hv[b], hv[c]])));
                }
            }
        }
        Ok(None)
    }

    /// `C[x][j]`: X2 vertex `x` is adjacent to `x1[cols[j]]`.
    fn hit_matrix(&self, cols: &[usize]) -> BitMatrix {
        BitMatrix::from_fn(self.x2.len(), cols.len(), |x, j| self.n2.get(cols[j], x))
    }

    /// One low vertex and two high ones.
    fn case_one_low(&mut self, stats: &mut SolveStats) -> Result<Option<Witness>> {
        let n = self.x2.len();
        let two_m = 2 * self.g.m();
        let (dense, sparse): (Vec<usize>, Vec<usize>) =
            self.low.iter().copied().partition(|&u| self.g.degree(self.x1[u]) * n >= two_m);
        if !dense.is_empty() {
            stats.hit("one-low-dense");
            let mut pairs = Vec::new();
            for (ai, &a) in self.high.iter().enumerate() {
                for &b in &self.high[ai + 1..] {
                    if self.adjacent(a, b) && (self.covers_third(a) || self.covers_third(b)) {
                        pairs.push((a, b));
                    }
                }
            }
            let bm = BitMatrix::from_fn(pairs.len(), n, |e, x| !self.n2.get(pairs[e].0, x) && !self.n2.get(pairs[e].1, x));
            let cm = self.hit_matrix(&dense);
            for (e, j) in self.max_entry(&bm, &cm, stats)? {
                let (a, b) = pairs[e];
                let u = dense[j];
                if self.adjacent(u, a) && self.adjacent(u, b) {
                    return Ok(Some(self.witness([a, b, u])));
                }
            }
        }
        if sparse.is_empty() {
            return Ok(None);
        }
        let mut is_sparse = vec![false; self.x1.len()];
        for &u in &sparse {
            is_sparse[u] = true;
        }
        let top = self.g.n();
        let mut t = self.s.max(1);
        while t <= top {
            let last = 2 * t > top;
            let ws: Vec<usize> = self
                .high
                .iter()
                .copied()
                .filter(|&w| {
                    let d = self.g.degree(self.x1[w]);
                    d >= t && (last || d < 2 * t) && self.covers_third(w)
                })
                .collect();
            for w in ws {
                stats.hit("one-low-sparse");
                let rest: Vec<usize> = (0..n).filter(|&x| !self.n2.get(w, x)).collect();
                let rows: Vec<usize> = self.high.iter().copied().filter(|&b| b != w && self.adjacent(w, b)).collect();
                let cols: Vec<usize> = (0..self.x1.len()).filter(|&u| is_sparse[u] && self.adjacent(w, u)).collect();
                if rows.is_empty() || cols.is_empty() {
                    continue;
                }
                let bm = BitMatrix::from_fn(rows.len(), rest.len(), |r, x| !self.n2.get(rows[r], rest[x]));
                let cm = BitMatrix::from_fn(rest.len(), cols.len(), |x, j| self.n2.get(cols[j], rest[x]));
                for (r, j) in self.max_entry(&bm, &cm, stats)? {
                    if self.adjacent(rows[r], cols[j]) {
                        return Ok(Some(self.witness([w, rows[r], cols[j]])));
                    }
                }
            }
            if last {
                break;
            }
            t *= 2;
        }
        Ok(None)
    }

    /// One high vertex and two low ones.
    fn case_two_low(&mut self, stats: &mut SolveStats) -> Result<Option<Witness>> {
        stats.hit("two-low");
        let n = self.x2.len();
        let mut pairs = Vec::new();
        for (ai, &a) in self.low.iter().enumerate() {
            for &b in &self.low[ai + 1..] {
                if self.adjacent(a, b) {
                    pairs.push((a, b));
                }
            }
        }
        if pairs.is_empty() || self.high.is_empty() {
            return Ok(None);
        }
        let bm = BitMatrix::from_fn(self.high.len(), n, |r, x| !self.n2.get(self.high[r], x));
        let cm = BitMatrix::from_fn(n, pairs.len(), |x, e| self.n2.get(pairs[e].0, x) || self.n2.get(pairs[e].1, x));
        for (r, e) in self.max_entry(&bm, &cm, stats)? {
            let w = self.high[r];
            let (a, b) = pairs[e];
            if self.adjacent(w, a) && self.adjacent(w, b) {
                return Ok(Some(self.witness([w, a, b])));
            }
        }
        Ok(None)
    }
}

pub fn solve_k4(g: &HostGraph, options: &SolveOptions) -> Result<SolveResult> {
    let mut result = SolveResult::new(Route::K4);
    if g.n() < 4 {
        return Ok(result);
    }
    let s = low_threshold(g);
    for v in heavy_vertices(g, 4) {
        let Some((x1, x2)) = layers(g, v) else {
            result.stats.hit("far-vertex");
            continue;
        };
        let mut pos2 = vec![usize::MAX; g.n()];
        for (t, &x) in x2.iter().enumerate() {
            pos2[x] = t;
        }
        let mut n2 = BitMatrix::zeros(x1.len(), x2.len());
        for (i, &u) in x1.iter().enumerate() {
            for &w in g.neighbors(u) {
                if pos2[w] != usize::MAX {
                    n2.set(i, pos2[w], true);
                }
            }
        }
        let n2_count = (0..x1.len()).map(|i| n2.row_popcount(i) as usize).collect();
        let (high, low): (Vec<usize>, Vec<usize>) = (0..x1.len()).partition(|&i| g.degree(x1[i]) > s);
        let mut ctx = K4Context {
            g,
            v,
            x1,
            x2,
            n2,
            n2_count,
            high,
            low,
            s,
            mode: options.mode.reseeded(v as u64),
            calls: 0,
            max_family: options.limits.max_family,
        };
        let stats = &mut result.stats;
        let found = if ctx.x2.len() <= 3 * s {
            ctx.case_small(stats)?.map(|w| (w, "small"))
        } else if let Some(w) = ctx.case_all_high(stats)? {
            Some((w, "all-high"))
        } else if let Some(w) = ctx.case_one_low(stats)? {
            Some((w, "one-low"))
        } else {
            ctx.case_two_low(stats)?.map(|w| (w, "two-low"))
        };
        if let Some((w, branch)) = found {
            result.set_witness(w, branch);
            return Ok(result);
        }
    }
    Ok(result)
}
