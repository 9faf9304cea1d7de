//! Patterns with isolated vertices.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;

use crate::analysis::{compute_rho, CoverComponent, PatternDecomposition};
use crate::dominance::{heavy_vertices, CandidateFamily};
use crate::enumeration::{
    combine, enumerate_copies, enumerate_odd_cycles, enumerate_pattern_candidates, low_threshold, CoverUnit, CycleSplit,
    DegreeConstraint, UnitKind,
};
use crate::error::Result;
use crate::graph::{HostGraph, Pattern, Witness};
use crate::linalg::{max_entry_product, BitMatrix, MaxEntryMode};

use super::{first_dominating, undominated, Route, SolveOptions, SolveResult, SolveStats};

/// Triples `(a, b, w)` where `ab` is an edge, `w` is a low-degree vertex of
/// `y` not adjacent to or equal to `a` or `b`, and `N[a] ∪ N[b] ∪ N[w]`
/// contains `y`.
pub fn isolated_plus_edge(g: &HostGraph, y: &[usize], mode: MaxEntryMode) -> Result<Vec<(usize, usize, usize)>> {
    let edges: Vec<Vec<usize>> = g.edges().map(|(a, b)| vec![a, b]).collect();
    Ok(isolated_plus_sets(g, y, &edges, mode, &mut SolveStats::default())?
        .into_iter()
        .map(|(e, w)| (edges[e][0], edges[e][1], w))
        .collect())
}

/// Like [`isolated_plus_edge`] with vertex sets hosting an odd cycle of
/// length `len` in place of the edge.
pub fn isolated_plus_cycle(
    g: &HostGraph,
    y: &[usize],
    len: usize,
    mode: MaxEntryMode,
    max_family: usize,
) -> Result<Vec<(Vec<usize>, usize)>> {
    let cycles = enumerate_odd_cycles(g, len, CycleSplit::Any, max_family)?.members;
    Ok(isolated_plus_sets(g, y, &cycles, mode, &mut SolveStats::default())?
        .into_iter()
        .map(|(c, w)| (cycles[c].clone(), w))
        .collect())
}

fn isolated_plus_sets(
    g: &HostGraph,
    y: &[usize],
    sets: &[Vec<usize>],
    mode: MaxEntryMode,
    stats: &mut SolveStats,
) -> Result<Vec<(usize, usize)>> {
    let s = low_threshold(g);
    let ws: Vec<usize> = y.iter().copied().filter(|&w| g.degree(w) <= s).collect();
    if ws.is_empty() || sets.is_empty() {
        return Ok(Vec::new());
    }
    let mut pos = vec![usize::MAX; g.n()];
    for (t, &v) in y.iter().enumerate() {
        pos[v] = t;
    }
    let mut b = BitMatrix::ones(sets.len(), y.len());
    for (i, set) in sets.iter().enumerate() {
        for &v in set {
            for &x in std::iter::once(&v).chain(g.neighbors(v)) {
                if pos[x] != usize::MAX {
                    b.set(i, pos[x], false);
                }
            }
        }
    }
    let mut c = BitMatrix::zeros(y.len(), ws.len());
    for (j, &w) in ws.iter().enumerate() {
        for &x in std::iter::once(&w).chain(g.neighbors(w)) {
            if pos[x] != usize::MAX {
                c.set(pos[x], j, true);
            }
        }
    }
    stats.product(sets.len(), y.len(), ws.len());
    let pairs = max_entry_product(&b, &c, mode)?;
    Ok(pairs
        .into_iter()
        .filter(|&(i, j)| {
            let w = ws[j];
            sets[i].iter().all(|&v| v != w && !g.has_edge(v, w))
        })
        .map(|(i, j)| (i, ws[j]))
        .collect())
}

/// Independent `size`-subsets of `pool` (sorted).
fn independent_subsets(g: &HostGraph, pool: &[usize], size: usize, max: usize) -> Result<Vec<Vec<usize>>> {
    fn rec(g: &HostGraph, pool: &[usize], from: usize, size: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>, max: usize) -> Result<()> {
        if cur.len() == size {
            out.push(cur.clone());
            if out.len() > max {
                return Err(crate::dominance::family_limit("independent-sets", max));
            }
            return Ok(());
        }
        for i in from..pool.len() {
            let v = pool[i];
            if cur.iter().all(|&u| !g.has_edge(u, v)) {
                cur.push(v);
                rec(g, pool, i + 1, size, cur, out, max)?;
                cur.pop();
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    rec(g, pool, 0, size, &mut Vec::new(), &mut out, max)?;
    Ok(out)
}

/// An independent set of size `r` dominating the vertices marked in
/// `allowed`, drawn from them and containing one of `anchors`.
fn dominating_independent_set(
    g: &HostGraph,
    allowed: &[bool],
    r: usize,
    anchors: &[usize],
    max: usize,
    stats: &mut SolveStats,
) -> Result<Option<Witness>> {
    let lo = (r - 1) / 2;
    let hi = r - 1 - lo;
    let predicate = |d: &[usize]| d.len() == r && d.iter().enumerate().all(|(i, &u)| d[i + 1..].iter().all(|&v| !g.has_edge(u, v)));
    for &a in anchors {
        if !allowed[a] {
            continue;
        }
        let rest: Vec<usize> = (0..g.n()).filter(|&v| allowed[v] && v != a && !g.has_edge(a, v)).collect();
        let fa = independent_subsets(g, &rest, lo, max)?
            .into_iter()
            .map(|mut m| {
                m.push(a);
                m
            })
            .collect();
        let fa = CandidateFamily::new(fa, "independent+anchor", max)?;
        let fb = CandidateFamily::new(independent_subsets(g, &rest, hi, max)?, "independent", max)?;
        if let Some(w) = first_dominating(g, &rest, &fa, &fb, &predicate, stats) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

/// Vertices of the graph outside `N[d]` that are heavy there for order `r`.
fn local_heavy(g: &HostGraph, allowed: &[bool], r: usize) -> Vec<usize> {
    let n = allowed.iter().filter(|&&a| a).count();
    (0..g.n())
        .filter(|&v| allowed[v] && r * (g.neighbors(v).iter().filter(|&&w| allowed[w]).count() + 1) >= n)
        .collect()
}

fn outside_closed(g: &HostGraph, d: &[usize]) -> Vec<bool> {
    let mut allowed = vec![false; g.n()];
    for v in undominated(g, d) {
        allowed[v] = true;
    }
    allowed
}

pub fn solve_isolated(g: &HostGraph, p: &Pattern, dec: &PatternDecomposition, options: &SolveOptions) -> Result<SolveResult> {
    let k = p.k();
    let isolated = p.isolated();
    let r = isolated.len();
    let mut result = SolveResult::new(if r == 1 { Route::IsolatedOne } else { Route::IsolatedMany });
    if k > g.n() {
        return Ok(result);
    }
    let max = options.limits.max_family;
    if r == k {
        result.stats.hit("independent");
        let allowed = vec![true; g.n()];
        if let Some(w) = dominating_independent_set(g, &allowed, k, &heavy_vertices(g, k), max, &mut result.stats)? {
            result.set_witness(w, "independent");
        }
        return Ok(result);
    }
    let xs: Vec<usize> = (0..k).filter(|v| !isolated.contains(v)).collect();
    let px = p.induced(&xs);
    let found = if r >= 2 {
        solve_many(g, p, &px, r, options, &mut result.stats)?
    } else {
        solve_one(g, p, &px, dec, options, &mut result.stats)?
    };
    if let Some((w, branch)) = found {
        result.set_witness(w, branch);
    }
    Ok(result)
}

type Found = Option<(Witness, &'static str)>;

fn solve_many(g: &HostGraph, p: &Pattern, px: &Pattern, r: usize, options: &SolveOptions, stats: &mut SolveStats) -> Result<Found> {
    let max = options.limits.max_family;
    let dec_x = compute_rho(px)?;
    let heavy = heavy_vertices(g, p.k());
    let mut is_heavy = vec![false; g.n()];
    for &h in &heavy {
        is_heavy[h] = true;
    }
    let extend = |dx: &[usize], global: bool, branch: &'static str, stats: &mut SolveStats| -> Result<Found> {
        stats.hit(branch);
        let allowed = outside_closed(g, dx);
        let anchors = if global { heavy.clone() } else { local_heavy(g, &allowed, r) };
        Ok(dominating_independent_set(g, &allowed, r, &anchors, max, stats)?.map(|w| {
            let mut d = w.vertices;
            d.extend_from_slice(dx);
            (Witness::new(d), branch)
        }))
    };
    if !dec_x.s.is_empty() {
        for dx in enumerate_copies(g, px, max)? {
            if let Some(f) = extend(&dx, false, "copy-then-independent", stats)? {
                return Ok(Some(f));
            }
        }
        return Ok(None);
    }
    let with_heavy = enumerate_pattern_candidates(g, px, &dec_x, true, p.k(), max)?;
    for dx in with_heavy.members.iter().filter(|d| d.len() == px.k() && px.matches_induced(g, d)) {
        if let Some(f) = extend(dx, false, "heavy-in-copy", stats)? {
            return Ok(Some(f));
        }
    }
    for dx in enumerate_copies(g, px, max)? {
        if dx.iter().any(|&v| is_heavy[v]) {
            continue;
        }
        if let Some(f) = extend(&dx, true, "heavy-in-independent", stats)? {
            return Ok(Some(f));
        }
    }
    Ok(None)
}

fn component_unit(c: &CoverComponent) -> CoverUnit {
    match c {
        CoverComponent::Edge(..) => CoverUnit::new(UnitKind::Edge, DegreeConstraint::Any),
        CoverComponent::OddCycle(v) => CoverUnit::new(UnitKind::OddCycle(v.len()), DegreeConstraint::Any),
    }
}

fn solve_one(
    g: &HostGraph,
    p: &Pattern,
    px: &Pattern,
    dec: &PatternDecomposition,
    options: &SolveOptions,
    stats: &mut SolveStats,
) -> Result<Found> {
    let k = p.k();
    let max = options.limits.max_family;
    let s = low_threshold(g);
    let heavy = heavy_vertices(g, k);
    let predicate = |d: &[usize]| d.len() == k && p.matches_induced(g, d);
    let all: Vec<usize> = (0..g.n()).collect();

    // the isolated vertex is high or heavy: join copies of the rest with it
    stats.hit("x-high");
    let copies = CandidateFamily::new(enumerate_copies(g, px, max)?, "copies", max)?;
    let mut is_heavy = vec![false; g.n()];
    for &h in &heavy {
        is_heavy[h] = true;
    }
    let singles = (0..g.n()).filter(|&w| g.degree(w) > s || is_heavy[w]).map(|w| vec![w]).collect();
    let singles = CandidateFamily::new(singles, "high-or-heavy", max)?;
    if let Some(w) = first_dominating(g, &all, &copies, &singles, &predicate, stats) {
        return Ok(Some((w, "x-high")));
    }

    let mut salt = 0u64;
    let mut mode = || {
        salt += 1;
        options.mode.reseeded(salt)
    };
    let try_sets = |dq: &[usize], sets: &[Vec<usize>], mode: MaxEntryMode, stats: &mut SolveStats| -> Result<Option<Witness>> {
        let y = undominated(g, dq);
        for (i, w) in isolated_plus_sets(g, &y, sets, mode, stats)? {
            let mut d = dq.to_vec();
            d.extend_from_slice(&sets[i]);
            d.push(w);
            let d = Witness::new(d);
            if predicate(&d.vertices) {
                return Ok(Some(d));
            }
        }
        Ok(None)
    };

    if !dec.s.is_empty() {
        stats.hit("x-low-s-nonempty");
        let (u, v) = dec.matching[0];
        let x = p.isolated()[0];
        let qv: Vec<usize> = (0..k).filter(|&t| t != u && t != v && t != x).collect();
        let q = p.induced(&qv);
        let edges: Vec<Vec<usize>> = g.edges().map(|(a, b)| vec![a, b]).collect();
        for dq in enumerate_copies(g, &q, max)? {
            if let Some(w) = try_sets(&dq, &edges, mode(), stats)? {
                return Ok(Some((w, "x-low-s-nonempty")));
            }
        }
        return Ok(None);
    }

    let mut roles: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (&y, cover) in &dec.r_cover_minus {
        let mut sig: Vec<usize> = cover.iter().map(CoverComponent::len).collect();
        sig.sort_unstable();
        roles.entry(sig).or_insert(y);
    }
    let edges: Vec<Vec<usize>> = g.edges().map(|(a, b)| vec![a, b]).collect();
    let mut cycles: BTreeMap<usize, Vec<Vec<usize>>> = BTreeMap::new();
    for &h in &heavy {
        for &y in roles.values() {
            let cover = &dec.r_cover_minus[&y];
            let fixed = cover.iter().position(|c| matches!(c, CoverComponent::Edge(..))).unwrap_or(0);
            let mut units: Vec<CoverUnit> =
                cover.iter().enumerate().filter(|&(i, _)| i != fixed).map(|(_, c)| component_unit(c)).collect();
            units.sort();
            let (branch, sets) = match &cover[fixed] {
                CoverComponent::Edge(..) => ("x-low-s-empty-edge", &edges),
                CoverComponent::OddCycle(c) => {
                    let len = c.len();
                    if let Entry::Vacant(slot) = cycles.entry(len) {
                        slot.insert(enumerate_odd_cycles(g, len, CycleSplit::Any, max)?.members);
                    }
                    ("x-low-s-empty-cycle", &cycles[&len])
                }
            };
            stats.hit(branch);
            for mut dq in combine(g, &units, &[h], "rest", max)?.members {
                dq.push(h);
                if let Some(w) = try_sets(&dq, sets, mode(), stats)? {
                    return Ok(Some((w, branch)));
                }
            }
        }
    }
    Ok(None)
}
