//! End-to-end solvers and the dispatcher that picks one per pattern.

mod basic;
mod cliques;
mod isolated;
mod pattern_set;

use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::analysis::compute_rho;
use crate::config::Limits;
use crate::dominance::{run_task, CandidateFamily, DominationTask, Predicate};
use crate::error::{Error, Result};
use crate::graph::{dominates, HostGraph, Pattern, Witness};
use crate::linalg::MaxEntryMode;

pub use basic::solve_basic;
pub use cliques::{all_edges_triangle_count, solve_k4, solve_triangle, EdgeTriangleCount};
pub use isolated::{isolated_plus_cycle, isolated_plus_edge, solve_isolated};
pub use pattern_set::{non_induced_closure, solve_pattern_set, PatternSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveOptions {
    pub mode: MaxEntryMode,
    pub limits: Limits,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self { mode: MaxEntryMode::Exact, limits: Limits::default() }
    }
}

impl SolveOptions {
    pub fn hashed(seed: u64) -> Self {
        Self { mode: MaxEntryMode::Hashed { seed, repetitions: None }, ..Self::default() }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Route {
    #[serde(rename = "basic-S-empty")]
    BasicSEmpty,
    #[serde(rename = "basic-S-nonempty")]
    BasicSNonEmpty,
    #[serde(rename = "triangle")]
    Triangle,
    #[serde(rename = "k4")]
    K4,
    #[serde(rename = "isolated-r>=2")]
    IsolatedMany,
    #[serde(rename = "isolated-r=1")]
    IsolatedOne,
    #[serde(rename = "oracle-fallback")]
    Oracle,
    #[serde(rename = "pattern-set")]
    PatternSet,
}

impl Route {
    pub fn label(&self) -> &'static str {
        match self {
            Route::BasicSEmpty => "basic-S-empty",
            Route::BasicSNonEmpty => "basic-S-nonempty",
            Route::Triangle => "triangle",
            Route::K4 => "k4",
            Route::IsolatedMany => "isolated-r>=2",
            Route::IsolatedOne => "isolated-r=1",
            Route::Oracle => "oracle-fallback",
            Route::PatternSet => "pattern-set",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveStats {
    /// Dominance products run through the guessing framework or the
    /// max-entry product.
    pub products: usize,
    /// Largest product seen, as `[rows, inner, cols]`.
    pub largest_product: [usize; 3],
    pub candidates_a: usize,
    pub candidates_b: usize,
    /// How often each branch of the route ran.
    pub branches: BTreeMap<String, usize>,
    /// Branch that produced the witness.
    pub found_by: Option<String>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SolveStats {
    pub(crate) fn hit(&mut self, branch: &str) {
        *self.branches.entry(branch.to_string()).or_default() += 1;
    }

    pub(crate) fn product(&mut self, rows: usize, inner: usize, cols: usize) {
        self.products += 1;
        self.candidates_a += rows;
        self.candidates_b += cols;
        if rows * inner * cols >= self.largest_product.iter().product::<usize>() {
            self.largest_product = [rows, inner, cols];
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveResult {
    pub found: bool,
    pub witness: Option<Witness>,
    pub route: Route,
    /// Pattern-set member the witness induces.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub matched: Option<String>,
    pub stats: SolveStats,
}

impl SolveResult {
    pub(crate) fn new(route: Route) -> Self {
        Self { found: false, witness: None, route, matched: None, stats: SolveStats::default() }
    }

    pub(crate) fn set_witness(&mut self, witness: Witness, branch: &str) {
        self.found = true;
        self.witness = Some(witness);
        self.stats.found_by = Some(branch.to_string());
    }
}

/// Runs one dominance task, recording its shape, and returns the first
/// passing union.
pub(crate) fn first_dominating(
    g: &HostGraph,
    targets: &[usize],
    a: &CandidateFamily,
    b: &CandidateFamily,
    predicate: Predicate<'_>,
    stats: &mut SolveStats,
) -> Option<Witness> {
    let task = DominationTask { targets, family_a: a, family_b: b, predicate };
    let (found, shape) = run_task(g, &task, true);
    stats.product(shape.rows, shape.inner, shape.cols);
    found.into_iter().next()
}

/// Vertices outside `N[d]`.
pub(crate) fn undominated(g: &HostGraph, d: &[usize]) -> Vec<usize> {
    let mut covered = vec![false; g.n()];
    for &v in d {
        covered[v] = true;
        for &w in g.neighbors(v) {
            covered[w] = true;
        }
    }
    (0..g.n()).filter(|&v| !covered[v]).collect()
}

/// Finds a vertex set that dominates `g` and induces `p`, choosing the
/// solver by the shape of `p`.
pub fn solve(g: &HostGraph, p: &Pattern, options: &SolveOptions) -> Result<SolveResult> {
    if g.n() == 0 {
        return Err(Error::Invalid("host graph has no vertices".into()));
    }
    let start = Instant::now();
    let dec = compute_rho(p)?;
    let k = p.k();
    let mut result = if !p.isolated().is_empty() {
        solve_isolated(g, p, &dec, options)?
    } else if k == 3 && p.is_clique() {
        solve_triangle(g, options)?
    } else if k == 4 && p.is_clique() {
        solve_k4(g, options)?
    } else {
        solve_basic(g, p, &dec, options)?
    };
    result.stats.elapsed = start.elapsed();
    check_witness(g, p, &result)?;
    Ok(result)
}

pub(crate) fn check_witness(g: &HostGraph, p: &Pattern, result: &SolveResult) -> Result<()> {
    if let Some(w) = &result.witness {
        let d = &w.vertices;
        if d.len() != p.k() || !dominates(g, d) || !p.matches_induced(g, d) {
            return Err(Error::Invariant(format!("route {} returned a non-witness {d:?}", result.route.label())));
        }
    } else if result.found {
        return Err(Error::Invariant("found without a witness".into()));
    }
    Ok(())
}
