//! Finding a dominating set inducing any member of a pattern family.

use std::collections::{HashSet, VecDeque};

use crate::analysis::budget;
use crate::error::{Error, Result};
use crate::graph::{HostGraph, Pattern};

use super::{solve, Route, SolveOptions, SolveResult};

#[derive(Clone, Debug)]
pub struct PatternSet {
    members: Vec<Pattern>,
}

impl PatternSet {
    pub fn new(members: Vec<Pattern>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Invalid("pattern set is empty".into()));
        }
        if let Some(q) = members.iter().find(|q| q.k() != members[0].k()) {
            return Err(Error::Invalid(format!("pattern set mixes orders {} and {}", members[0].k(), q.k())));
        }
        Ok(Self { members })
    }

    pub fn members(&self) -> &[Pattern] {
        &self.members
    }

    /// Members sorted by their running-time budget on an `n`-vertex,
    /// `m`-edge host, cheapest first. Ties keep the given order.
    pub fn by_budget(&self, n: usize, m: usize) -> Result<Vec<&Pattern>> {
        let mut keyed = Vec::with_capacity(self.members.len());
        for p in &self.members {
            keyed.push((budget(p, n as u64, m as u64)?.0, p));
        }
        keyed.sort_by(|a, b| a.0.total_cmp(&b.0));
        Ok(keyed.into_iter().map(|(_, p)| p).collect())
    }
}

/// Tries each member, cheapest first, and reports the first witness along
/// with the member it induces.
pub fn solve_pattern_set(g: &HostGraph, set: &PatternSet, options: &SolveOptions) -> Result<SolveResult> {
    let mut result = SolveResult::new(Route::PatternSet);
    for p in set.by_budget(g.n(), g.m())? {
        let r = solve(g, p, options)?;
        result.stats.products += r.stats.products;
        result.stats.candidates_a += r.stats.candidates_a;
        result.stats.candidates_b += r.stats.candidates_b;
        for (branch, count) in r.stats.branches {
            *result.stats.branches.entry(format!("{}:{}:{branch}", p.name(), r.route.label())).or_default() += count;
        }
        result.stats.elapsed += r.stats.elapsed;
        if let Some(w) = r.witness {
            let branch = format!("{}:{}", p.name(), r.stats.found_by.unwrap_or_default());
            result.set_witness(w, &branch);
            result.matched = Some(p.name().to_string());
            return Ok(result);
        }
    }
    Ok(result)
}

/// Every graph on the vertices of `p` containing all its edges, one per
/// isomorphism class. A dominating set containing `p` as a (not
/// necessarily induced) subgraph induces exactly one of these.
pub fn non_induced_closure(p: &Pattern, max_members: usize) -> Result<PatternSet> {
    let mut seen = HashSet::from([p.canonical_code()]);
    let mut queue = VecDeque::from([p.masks().to_vec()]);
    let mut members = vec![p.clone()];
    let k = p.k();
    while let Some(adj) = queue.pop_front() {
        for u in 0..k {
            for v in u + 1..k {
                if adj[u] >> v & 1 == 1 {
                    continue;
                }
                let mut next = adj.clone();
                next[u] |= 1 << v;
                next[v] |= 1 << u;
                let q = Pattern::from_masks(next.clone());
                if seen.insert(q.canonical_code()) {
                    if members.len() >= max_members {
                        return Err(Error::ResourceLimit { what: "non-induced closure".into(), limit: max_members as u64 });
                    }
                    members.push(q);
                    queue.push_back(next);
                }
            }
        }
    }
    PatternSet::new(members)
}
