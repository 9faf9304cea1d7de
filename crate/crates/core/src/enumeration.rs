//! Candidate families for the guessing framework: host realizations of
//! small cover units (edges, odd cycles, two-edge paths, single vertices),
//! their vertex-disjoint combinations, and the split of a pattern's units
//! into two balanced sides.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::analysis::{CoverComponent, PatternDecomposition};
use crate::dominance::{family_limit, heavy_vertices, CandidateFamily};
use crate::error::{Error, Result};
use crate::graph::{HostGraph, Pattern};

/// Degrees up to this value count as low: `isqrt(m)`.
pub fn low_threshold(g: &HostGraph) -> usize {
    g.m().isqrt()
}

#[inline]
pub fn is_low(g: &HostGraph, v: usize, threshold: usize) -> bool {
    g.degree(v) <= threshold
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum UnitKind {
    Edge,
    OddCycle(usize),
    /// Path on three vertices.
    P3,
    SingleVertex,
    IsolatedVertex,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum DegreeConstraint {
    Any,
    /// Every vertex has low degree.
    AllLow,
    /// The first vertex (the endpoint of a path, or the single vertex) has
    /// high degree; the others are unconstrained.
    EndpointHigh,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct CoverUnit {
    pub kind: UnitKind,
    pub constraint: DegreeConstraint,
}

impl CoverUnit {
    pub const fn new(kind: UnitKind, constraint: DegreeConstraint) -> Self {
        Self { kind, constraint }
    }

    pub fn size(&self) -> usize {
        match self.kind {
            UnitKind::Edge => 2,
            UnitKind::OddCycle(len) => len,
            UnitKind::P3 => 3,
            UnitKind::SingleVertex | UnitKind::IsolatedVertex => 1,
        }
    }
}

fn units_size(units: &[CoverUnit]) -> usize {
    units.iter().map(CoverUnit::size).sum()
}

/// All `r`-tuples of pairwise vertex-disjoint edges meeting the degree
/// filter, flattened to vertex sets.
pub fn enumerate_edges(g: &HostGraph, r: usize, constraint: DegreeConstraint, max_family: usize) -> Result<CandidateFamily> {
    let units = vec![CoverUnit::new(UnitKind::Edge, constraint); r];
    combine(g, &units, &[], &format!("edges-{r}"), max_family)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CycleSplit {
    /// Every cycle vertex has low degree.
    AllLow,
    /// At least one cycle vertex has high degree.
    WithHigh,
    Any,
}

/// Vertex sets hosting a (not necessarily induced) cycle of length `len`.
pub fn enumerate_odd_cycles(g: &HostGraph, len: usize, split: CycleSplit, max_family: usize) -> Result<CandidateFamily> {
    if len < 3 || len.is_multiple_of(2) {
        return Err(Error::Invalid(format!("odd cycle length must be odd and at least 3, got {len}")));
    }
    let sets = cycle_sets(g, len, split, &[], max_family)?;
    CandidateFamily::new(sets, format!("odd-cycle-{len}"), max_family)
}

fn cycle_sets(g: &HostGraph, len: usize, split: CycleSplit, exclude: &[usize], max: usize) -> Result<Vec<Vec<usize>>> {
    let threshold = low_threshold(g);
    let mut blocked = vec![false; g.n()];
    for &v in exclude {
        blocked[v] = true;
    }
    let mut found = BTreeSet::new();
    let mut path = Vec::with_capacity(len);
    let mut on_path = vec![false; g.n()];
    let tag = format!("odd-cycle-{len}");
    for start in 0..g.n() {
        if blocked[start] {
            continue;
        }
        let start_low = is_low(g, start, threshold);
        // the start is the smallest vertex (all-low) or the smallest high vertex
        let admissible = |w: usize| -> bool {
            if blocked[w] {
                return false;
            }
            let low = is_low(g, w, threshold);
            match split {
                CycleSplit::AllLow => low && w > start,
                CycleSplit::WithHigh => low || w > start,
                CycleSplit::Any => w > start,
            }
        };
        match split {
            CycleSplit::AllLow if !start_low => continue,
            CycleSplit::WithHigh if start_low => continue,
            _ => {}
        }
        path.push(start);
        on_path[start] = true;
        cycle_dfs(g, len, &admissible, &mut path, &mut on_path, &mut found, max, &tag)?;
        on_path[start] = false;
        path.pop();
    }
    Ok(found.into_iter().collect())
}

#[allow(clippy::too_many_arguments)]
fn cycle_dfs(
    g: &HostGraph,
    len: usize,
    admissible: &dyn Fn(usize) -> bool,
    path: &mut Vec<usize>,
    on_path: &mut [bool],
    found: &mut BTreeSet<Vec<usize>>,
    max: usize,
    tag: &str,
) -> Result<()> {
    let last = *path.last().expect("nonempty");
    if path.len() == len {
        if g.has_edge(last, path[0]) && path[1] < path[len - 1] {
            let mut set = path.clone();
            set.sort_unstable();
            found.insert(set);
            if found.len() > max {
                return Err(family_limit(tag, max));
            }
        }
        return Ok(());
    }
    for &w in g.neighbors(last) {
        if on_path[w] || !admissible(w) {
            continue;
        }
        path.push(w);
        on_path[w] = true;
        cycle_dfs(g, len, admissible, path, on_path, found, max, tag)?;
        on_path[w] = false;
        path.pop();
    }
    Ok(())
}

/// Host vertex sets realizing one unit, avoiding `exclude`, sorted.
pub fn realizations(g: &HostGraph, unit: CoverUnit, exclude: &[usize], max: usize) -> Result<Vec<Vec<usize>>> {
    let threshold = low_threshold(g);
    let mut blocked = vec![false; g.n()];
    for &v in exclude {
        blocked[v] = true;
    }
    let low = |v: usize| is_low(g, v, threshold);
    let usable = |v: usize| !blocked[v];
    let tag = format!("{:?}", unit.kind);
    let mut out: Vec<Vec<usize>> = Vec::new();
    let push = |set: Vec<usize>, out: &mut Vec<Vec<usize>>| -> Result<()> {
        out.push(set);
        if out.len() > max {
            return Err(family_limit(&tag, max));
        }
        Ok(())
    };
    match unit.kind {
        UnitKind::SingleVertex | UnitKind::IsolatedVertex => {
            for v in (0..g.n()).filter(|&v| usable(v)) {
                let ok = match unit.constraint {
                    DegreeConstraint::Any => true,
                    DegreeConstraint::AllLow => low(v),
                    DegreeConstraint::EndpointHigh => !low(v),
                };
                if ok {
                    push(vec![v], &mut out)?;
                }
            }
        }
        UnitKind::Edge => {
            for (u, v) in g.edges().filter(|&(u, v)| usable(u) && usable(v)) {
                let ok = match unit.constraint {
                    DegreeConstraint::Any => true,
                    DegreeConstraint::AllLow => low(u) && low(v),
                    DegreeConstraint::EndpointHigh => !low(u) || !low(v),
                };
                if ok {
                    push(vec![u, v], &mut out)?;
                }
            }
        }
        UnitKind::P3 => {
            let mut seen = BTreeSet::new();
            for center in (0..g.n()).filter(|&c| usable(c)) {
                if unit.constraint == DegreeConstraint::AllLow && !low(center) {
                    continue;
                }
                let nbrs: Vec<usize> = g.neighbors(center).iter().copied().filter(|&w| usable(w)).collect();
                for (i, &a) in nbrs.iter().enumerate() {
                    for &b in &nbrs[i + 1..] {
                        let ok = match unit.constraint {
                            DegreeConstraint::Any => true,
                            DegreeConstraint::AllLow => low(a) && low(b),
                            DegreeConstraint::EndpointHigh => !low(a) || !low(b),
                        };
                        if ok {
                            let mut set = vec![a, b, center];
                            set.sort_unstable();
                            if seen.insert(set.clone()) {
                                push(set, &mut out)?;
                            }
                        }
                    }
                }
            }
        }
        UnitKind::OddCycle(len) => {
            let split = match unit.constraint {
                DegreeConstraint::Any => CycleSplit::Any,
                DegreeConstraint::AllLow => CycleSplit::AllLow,
                DegreeConstraint::EndpointHigh => CycleSplit::WithHigh,
            };
            out = cycle_sets(g, len, split, exclude, max)?;
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Unions of pairwise vertex-disjoint realizations, one per unit. Adjacent
/// identical units take realizations in increasing order, so each unordered
/// choice appears once.
pub fn combine(g: &HostGraph, units: &[CoverUnit], exclude: &[usize], tag: &str, max: usize) -> Result<CandidateFamily> {
    let mut real: Vec<std::rc::Rc<Vec<Vec<usize>>>> = Vec::with_capacity(units.len());
    for (i, unit) in units.iter().enumerate() {
        if i > 0 && units[i - 1] == *unit {
            let prev = real[i - 1].clone();
            real.push(prev);
        } else {
            real.push(std::rc::Rc::new(realizations(g, *unit, exclude, max)?));
        }
    }
    let mut members = Vec::new();
    let mut used = vec![false; g.n()];
    let mut current = Vec::new();
    combine_rec(units, &real, 0, 0, &mut used, &mut current, &mut members, tag, max)?;
    CandidateFamily::new(members, tag, max)
}

#[allow(clippy::too_many_arguments)]
fn combine_rec(
    units: &[CoverUnit],
    real: &[std::rc::Rc<Vec<Vec<usize>>>],
    index: usize,
    min_choice: usize,
    used: &mut [bool],
    current: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
    tag: &str,
    max: usize,
) -> Result<()> {
    if index == units.len() {
        let mut set = current.clone();
        set.sort_unstable();
        out.push(set);
        if out.len() > max {
            return Err(family_limit(tag, max));
        }
        return Ok(());
    }
    let start = if index > 0 && units[index - 1] == units[index] { min_choice } else { 0 };
    for (choice, set) in real[index].iter().enumerate().skip(start) {
        if set.iter().any(|&v| used[v]) {
            continue;
        }
        for &v in set {
            used[v] = true;
        }
        current.extend_from_slice(set);
        combine_rec(units, real, index + 1, choice + 1, used, current, out, tag, max)?;
        current.truncate(current.len() - set.len());
        for &v in set {
            used[v] = false;
        }
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scenario {
    /// S is empty and the cover keeps at least one edge.
    SEmptyWithBeta,
    /// S is empty and the cover consists of odd cycles only.
    SEmptyCyclesOnly,
    SNonEmpty,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SplitPlan {
    pub b1_units: Vec<CoverUnit>,
    pub b2_units: Vec<CoverUnit>,
    /// Side (1 or 2) whose members also receive the guessed heavy vertex.
    pub heavy_slot: Option<u8>,
}

impl SplitPlan {
    pub fn b1_size(&self) -> usize {
        units_size(&self.b1_units)
    }

    pub fn b2_size(&self) -> usize {
        units_size(&self.b2_units)
    }

    /// `|V(B1)| - |V(B2)|` over the units; never negative.
    pub fn gap(&self) -> usize {
        self.b1_size() - self.b2_size()
    }
}

/// Largest units first, each onto the currently lighter side; the heavier
/// side ends up as side 1.
fn greedy_split(mut units: Vec<CoverUnit>) -> (Vec<CoverUnit>, Vec<CoverUnit>) {
    units.sort_by(|a, b| b.size().cmp(&a.size()).then(a.cmp(b)));
    let (mut b1, mut b2) = (Vec::new(), Vec::new());
    let (mut s1, mut s2) = (0, 0);
    for unit in units {
        if s1 <= s2 {
            s1 += unit.size();
            b1.push(unit);
        } else {
            s2 += unit.size();
            b2.push(unit);
        }
    }
    if s1 < s2 {
        (b2, b1)
    } else {
        (b1, b2)
    }
}

fn normalize(mut b1: Vec<CoverUnit>, mut b2: Vec<CoverUnit>, heavy_slot: Option<u8>) -> SplitPlan {
    if units_size(&b1) < units_size(&b2) {
        std::mem::swap(&mut b1, &mut b2);
    }
    b1.sort();
    b2.sort();
    SplitPlan { b1_units: b1, b2_units: b2, heavy_slot }
}

/// A cycle of length `2r + 1` whose vertices are all low becomes one
/// all-low P3 and `r - 1` all-low edges.
fn low_cycle_units(len: usize) -> Vec<CoverUnit> {
    let mut units = vec![CoverUnit::new(UnitKind::P3, DegreeConstraint::AllLow)];
    units.extend(vec![CoverUnit::new(UnitKind::Edge, DegreeConstraint::AllLow); (len - 3) / 2]);
    units
}

/// A cycle with a high vertex becomes that vertex plus `r` edges.
fn high_cycle_units(len: usize) -> Vec<CoverUnit> {
    let mut units = vec![CoverUnit::new(UnitKind::SingleVertex, DegreeConstraint::EndpointHigh)];
    units.extend(vec![CoverUnit::new(UnitKind::Edge, DegreeConstraint::Any); (len - 1) / 2]);
    units
}

fn cover_for(dec: &PatternDecomposition, excluded: Option<usize>) -> Result<&[CoverComponent]> {
    match excluded {
        None => Ok(&dec.r_cover),
        Some(x) => dec
            .r_cover_minus
            .get(&x)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::Invalid(format!("vertex {x} is not a non-isolated remainder vertex"))),
    }
}

/// Splits the cover units of `dec` (after removing `heavy_excluded` from
/// the remainder, when given) into two balanced sides.
pub fn plan_split(dec: &PatternDecomposition, scenario: Scenario, heavy_excluded: Option<usize>) -> Result<SplitPlan> {
    let cover = cover_for(dec, heavy_excluded)?;
    let edges = cover.iter().filter(|c| matches!(c, CoverComponent::Edge(..))).count();
    match scenario {
        Scenario::SEmptyWithBeta | Scenario::SEmptyCyclesOnly => {
            if !dec.s.is_empty() {
                return Err(Error::Invalid("scenario needs an empty S".into()));
            }
            if (scenario == Scenario::SEmptyWithBeta) != (edges > 0) {
                return Err(Error::Invalid(format!("scenario {scenario:?} does not fit a cover with {edges} edges")));
            }
            plan_split_with_high(dec, heavy_excluded, &vec![false; cover.len()])
        }
        Scenario::SNonEmpty => {
            if dec.s.is_empty() {
                return Err(Error::Invalid("scenario needs a nonempty S".into()));
            }
            let mut units = Vec::new();
            for component in cover {
                match component {
                    CoverComponent::Edge(..) => units.push(CoverUnit::new(UnitKind::Edge, DegreeConstraint::Any)),
                    CoverComponent::OddCycle(c) => {
                        units.push(CoverUnit::new(UnitKind::P3, DegreeConstraint::Any));
                        units.extend(vec![CoverUnit::new(UnitKind::Edge, DegreeConstraint::Any); (c.len() - 3) / 2]);
                    }
                }
            }
            units.extend(vec![CoverUnit::new(UnitKind::Edge, DegreeConstraint::Any); dec.matching.len()]);
            let (mut b1, mut b2) = greedy_split(units);
            let free = dec.free_s().len();
            let single = CoverUnit::new(UnitKind::IsolatedVertex, DegreeConstraint::Any);
            b1.extend(vec![single; free / 2]);
            b2.extend(vec![single; free - free / 2]);
            Ok(normalize(b1, b2, None))
        }
    }
}

/// S-empty split where the cycles flagged in `high_cycles` (indexed like
/// the cover's components) contain a high-degree host vertex and the other
/// cycles are all-low. Cover edges are unconstrained.
pub fn plan_split_with_high(dec: &PatternDecomposition, excluded: Option<usize>, high_cycles: &[bool]) -> Result<SplitPlan> {
    let cover = cover_for(dec, excluded)?;
    if high_cycles.len() != cover.len() {
        return Err(Error::SizeMismatch(format!("{} flags for {} cover components", high_cycles.len(), cover.len())));
    }
    let mut units = Vec::new();
    for (component, &high) in cover.iter().zip(high_cycles) {
        match component {
            CoverComponent::Edge(..) => units.push(CoverUnit::new(UnitKind::Edge, DegreeConstraint::Any)),
            CoverComponent::OddCycle(c) if high => units.extend(high_cycle_units(c.len())),
            CoverComponent::OddCycle(c) => units.extend(low_cycle_units(c.len())),
        }
    }
    let (b1, b2) = greedy_split(units);
    Ok(normalize(b1, b2, Some(1)))
}

/// Units hosting the whole pattern: matching edges, the free S-vertices,
/// the remainder cover and the isolated vertices.
pub fn pattern_units(p: &Pattern, dec: &PatternDecomposition, cover: &[CoverComponent], skip_isolated: usize) -> Vec<CoverUnit> {
    let any = DegreeConstraint::Any;
    let mut units = vec![CoverUnit::new(UnitKind::Edge, any); dec.matching.len()];
    units.extend(vec![CoverUnit::new(UnitKind::IsolatedVertex, any); dec.free_s().len()]);
    for component in cover {
        units.push(match component {
            CoverComponent::Edge(..) => CoverUnit::new(UnitKind::Edge, any),
            CoverComponent::OddCycle(c) => CoverUnit::new(UnitKind::OddCycle(c.len()), any),
        });
    }
    let isolated = p.isolated().len().saturating_sub(skip_isolated);
    units.extend(vec![CoverUnit::new(UnitKind::IsolatedVertex, any); isolated]);
    units.sort();
    units
}

/// Vertex sets hosting the spanning cover structure of `p`. With
/// `require_heavy`, only sets containing a vertex that is heavy for order
/// `k_heavy`: for an empty S one unit is re-rooted at each heavy vertex
/// using the cover of the remainder minus that role; otherwise the full
/// family is filtered.
pub fn enumerate_pattern_candidates(
    g: &HostGraph,
    p: &Pattern,
    dec: &PatternDecomposition,
    require_heavy: bool,
    k_heavy: usize,
    max_family: usize,
) -> Result<CandidateFamily> {
    let tag = format!("copies-of-{}", p.name());
    if !require_heavy {
        return combine(g, &pattern_units(p, dec, &dec.r_cover, 0), &[], &tag, max_family);
    }
    let heavy = heavy_vertices(g, k_heavy);
    if !dec.s.is_empty() {
        let all = combine(g, &pattern_units(p, dec, &dec.r_cover, 0), &[], &tag, max_family)?;
        let mut is_heavy = vec![false; g.n()];
        for &h in &heavy {
            is_heavy[h] = true;
        }
        let members = all.members.into_iter().filter(|m| m.iter().any(|&v| is_heavy[v])).collect();
        return CandidateFamily::new(members, tag, max_family);
    }
    // each role the heavy vertex may play, up to identical unit lists
    let mut role_units: BTreeSet<Vec<CoverUnit>> = BTreeSet::new();
    for cover in dec.r_cover_minus.values() {
        role_units.insert(pattern_units(p, dec, cover, 0));
    }
    if !p.isolated().is_empty() {
        role_units.insert(pattern_units(p, dec, &dec.r_cover, 1));
    }
    let mut members = Vec::new();
    for &h in &heavy {
        for units in &role_units {
            let family = combine(g, units, &[h], &tag, max_family)?;
            members.extend(family.members.into_iter().map(|mut m| {
                m.push(h);
                m
            }));
            if members.len() > max_family {
                return Err(family_limit(&tag, max_family));
            }
        }
    }
    CandidateFamily::new(members, tag, max_family)
}

/// Every vertex set inducing a copy of `q` (any small pattern, possibly
/// with isolated vertices, possibly empty).
pub fn enumerate_copies(g: &HostGraph, q: &Pattern, max_family: usize) -> Result<Vec<Vec<usize>>> {
    if q.k() == 0 {
        return Ok(vec![Vec::new()]);
    }
    if q.k() > g.n() {
        return Ok(Vec::new());
    }
    let dec = crate::analysis::compute_rho(q)?;
    let family = enumerate_pattern_candidates(g, q, &dec, false, q.k(), max_family)?;
    Ok(family.members.into_iter().filter(|d| d.len() == q.k() && q.matches_induced(g, d)).collect())
}
