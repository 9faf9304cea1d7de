//! Patterns without isolated vertices, outside the two clique routes.

use std::collections::BTreeMap;

use crate::analysis::{CoverComponent, PatternDecomposition};
use crate::dominance::{heavy_vertices, CandidateFamily};
use crate::enumeration::{combine, low_threshold, plan_split, plan_split_with_high, Scenario};
use crate::error::Result;
use crate::graph::{HostGraph, Pattern};

use super::{first_dominating, SolveOptions, SolveResult, Route};

pub fn solve_basic(g: &HostGraph, p: &Pattern, dec: &PatternDecomposition, options: &SolveOptions) -> Result<SolveResult> {
    if dec.s.is_empty() {
        solve_s_empty(g, p, dec, options)
    } else {
        solve_s_nonempty(g, p, dec, options)
    }
}

fn solve_s_nonempty(g: &HostGraph, p: &Pattern, dec: &PatternDecomposition, options: &SolveOptions) -> Result<SolveResult> {
    let mut result = SolveResult::new(Route::BasicSNonEmpty);
    if p.k() > g.n() {
        return Ok(result);
    }
    let max = options.limits.max_family;
    let plan = plan_split(dec, Scenario::SNonEmpty, None)?;
    let a = combine(g, &plan.b1_units, &[], "b1", max)?;
    let b = combine(g, &plan.b2_units, &[], "b2", max)?;
    let targets: Vec<usize> = (0..g.n()).collect();
    let k = p.k();
    let predicate = |d: &[usize]| d.len() == k && p.matches_induced(g, d);
    result.stats.hit("s-nonempty");
    if let Some(w) = first_dominating(g, &targets, &a, &b, &predicate, &mut result.stats) {
        result.set_witness(w, "s-nonempty");
    }
    Ok(result)
}

/// Cover roles that differ in their multiset of component sizes, with one
/// representative pattern vertex each.
fn distinct_roles(dec: &PatternDecomposition) -> Vec<usize> {
    let mut seen: BTreeMap<Vec<usize>, usize> = BTreeMap::new();
    for (&x, cover) in &dec.r_cover_minus {
        let mut sig: Vec<usize> = cover.iter().map(CoverComponent::len).collect();
        sig.sort_unstable();
        seen.entry(sig).or_insert(x);
    }
    seen.into_values().collect()
}

/// Every way of marking some cycles as containing a high-degree vertex, up
/// to cycles of equal length being interchangeable.
fn high_markings(cover: &[CoverComponent]) -> Vec<Vec<bool>> {
    let mut by_len: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, c) in cover.iter().enumerate() {
        if let CoverComponent::OddCycle(v) = c {
            by_len.entry(v.len()).or_default().push(i);
        }
    }
    let mut out = vec![vec![false; cover.len()]];
    for indices in by_len.values() {
        let mut next = Vec::new();
        for flags in &out {
            for count in 0..=indices.len() {
                let mut f = flags.clone();
                for &i in &indices[..count] {
                    f[i] = true;
                }
                next.push(f);
            }
        }
        out = next;
    }
    out
}

fn solve_s_empty(g: &HostGraph, p: &Pattern, dec: &PatternDecomposition, options: &SolveOptions) -> Result<SolveResult> {
    let mut result = SolveResult::new(Route::BasicSEmpty);
    let k = p.k();
    if k > g.n() {
        return Ok(result);
    }
    let max = options.limits.max_family;
    let s = low_threshold(g);
    let roles = distinct_roles(dec);
    let predicate = |d: &[usize]| d.len() == k && p.matches_induced(g, d);
    for h in heavy_vertices(g, k) {
        let targets = super::undominated(g, &[h]);
        for &x in &roles {
            let cover = &dec.r_cover_minus[&x];
            let has_edge = cover.iter().any(|c| matches!(c, CoverComponent::Edge(..)));
            for flags in high_markings(cover) {
                let branch = if has_edge {
                    "with-edges"
                } else if flags.iter().any(|&f| f) {
                    "high-cycle"
                } else {
                    "low-cycles"
                };
                // k - 1 low vertices dominate at most (k - 1)(s + 1) targets
                if branch == "low-cycles" && targets.len() > (k - 1) * (s + 1) {
                    result.stats.hit("low-cycles-skipped");
                    continue;
                }
                result.stats.hit(branch);
                let plan = plan_split_with_high(dec, Some(x), &flags)?;
                let a = combine(g, &plan.b1_units, &[h], "b1", max)?;
                let a = CandidateFamily::new(
                    a.members.into_iter().map(|mut m| {
                        m.push(h);
                        m
                    }).collect(),
                    "b1+h",
                    max,
                )?;
                let b = combine(g, &plan.b2_units, &[h], "b2", max)?;
                if let Some(w) = first_dominating(g, &targets, &a, &b, &predicate, &mut result.stats) {
                    result.set_witness(w, branch);
                    return Ok(result);
                }
            }
        }
    }
    Ok(result)
}
