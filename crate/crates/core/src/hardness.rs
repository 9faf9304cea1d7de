//! Orthogonal-vectors instances compiled into dominating-pattern
//! instances, with size accounting and an equivalence checker.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::analysis::compute_rho;
use crate::error::{Error, Result};
use crate::graph::{HostGraph, Pattern};
use crate::oracle::{oracle_ov, oracle_solve, OracleBudgetGuard};

/// `k` sets of `d`-dimensional 0/1 vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OVInstance {
    pub k: usize,
    pub d: usize,
    pub sets: Vec<Vec<Vec<bool>>>,
}

impl OVInstance {
    pub fn new(k: usize, d: usize, sets: Vec<Vec<Vec<bool>>>) -> Result<Self> {
        if k < 2 || d < 1 {
            return Err(Error::Invalid(format!("need k >= 2 and d >= 1, got k={k}, d={d}")));
        }
        if sets.len() != k {
            return Err(Error::SizeMismatch(format!("{} vector sets for k={k}", sets.len())));
        }
        if let Some(v) = sets.iter().flatten().find(|v| v.len() != d) {
            return Err(Error::SizeMismatch(format!("vector of length {} in dimension {d}", v.len())));
        }
        Ok(Self { k, d, sets })
    }

    /// Each bit is 1 with probability `density`.
    pub fn random<R: Rng>(sizes: &[usize], d: usize, density: f64, rng: &mut R) -> Result<Self> {
        let sets = sizes.iter().map(|&s| (0..s).map(|_| (0..d).map(|_| rng.gen_bool(density)).collect()).collect()).collect();
        Self::new(sizes.len(), d, sets)
    }

    /// Random vectors, then one random tuple is made orthogonal by clearing,
    /// for every coordinate, the bit of one randomly chosen member.
    pub fn planted<R: Rng>(sizes: &[usize], d: usize, density: f64, rng: &mut R) -> Result<Self> {
        let mut inst = Self::random(sizes, d, density, rng)?;
        if sizes.contains(&0) {
            return Ok(inst);
        }
        let tuple: Vec<usize> = sizes.iter().map(|&s| rng.gen_range(0..s)).collect();
        for t in 0..d {
            let i = rng.gen_range(0..inst.k);
            inst.sets[i][tuple[i]][t] = false;
        }
        Ok(inst)
    }

    pub fn zeros(sizes: &[usize], d: usize) -> Result<Self> {
        Self::new(sizes.len(), d, sizes.iter().map(|&s| vec![vec![false; d]; s]).collect())
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.sets.iter().map(Vec::len).collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReductionLayout {
    pub pattern: String,
    /// Pattern vertex played by group `i`.
    pub roles: Vec<usize>,
    /// Target `|A_i|`.
    pub group_sizes: Vec<usize>,
    /// `|R_i|`.
    pub guard_sizes: Vec<usize>,
    pub n: usize,
    pub m: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Block {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockMap {
    pub pattern: String,
    pub roles: Vec<usize>,
    pub d: usize,
    pub blocks: Vec<Block>,
}

impl BlockMap {
    pub fn block(&self, name: &str) -> Option<&Block> {
        self.blocks.iter().find(|b| b.name == name)
    }
}

#[derive(Clone, Debug)]
pub struct ReducedInstance {
    pub graph: HostGraph,
    pub blocks: BlockMap,
}

/// Chooses one vector-set size per pattern vertex for an `n`-vertex,
/// `m`-edge target graph. Groups are ordered `S`, `N(S)`, then the rest.
pub fn plan_reduction(p: &Pattern, n: usize, m: usize) -> Result<ReductionLayout> {
    let k = p.k();
    if n < k {
        return Err(Error::Invalid(format!("n = {n} is smaller than the pattern order {k}")));
    }
    if m < 1 || m > n * n {
        return Err(Error::Invalid(format!("m = {m} must lie in [1, n^2] = [1, {}]", n * n)));
    }
    let dec = compute_rho(p)?;
    let mut roles = dec.s.clone();
    roles.extend(&dec.ns);
    roles.extend(&dec.r);
    let sqrt = m.isqrt();
    let group_sizes: Vec<usize> = if dec.s.is_empty() {
        (0..k).map(|i| if i == 0 { m / n } else { sqrt }).collect()
    } else {
        let (s, ns) = (dec.s.len(), dec.ns.len());
        (0..k).map(|i| if i < s { n } else if i < s + ns { m / n } else { sqrt }).collect()
    };
    if let Some(i) = group_sizes.iter().position(|&s| s == 0) {
        return Err(Error::Invalid(format!(
            "group {i} (pattern vertex {}) rounds down to zero vectors for n = {n}, m = {m}",
            roles[i]
        )));
    }
    let guard_sizes = group_sizes.iter().map(|&s| 2.max(m.div_ceil(s))).collect();
    Ok(ReductionLayout { pattern: p.name().to_string(), roles, group_sizes, guard_sizes, n, m })
}

/// Builds the host graph: vector groups `V_i`, guard blocks `R_i` joined to
/// `V_i`, coordinate vertices `X` adjacent to vectors with a 0 there, and
/// bicliques (or internal cliques for isolated roles) following `p`.
pub fn reduce(inst: &OVInstance, p: &Pattern, layout: &ReductionLayout) -> Result<ReducedInstance> {
    let k = p.k();
    if inst.k != k || layout.roles.len() != k {
        return Err(Error::SizeMismatch(format!("instance has {} sets, pattern has {k} vertices", inst.k)));
    }
    if inst.sizes() != layout.group_sizes {
        return Err(Error::SizeMismatch(format!("set sizes {:?} differ from layout {:?}", inst.sizes(), layout.group_sizes)));
    }
    let mut blocks = Vec::new();
    let mut next = 0;
    let mut push = |name: String, len: usize| {
        blocks.push(Block { name, start: next, len });
        next += len;
        next - len
    };
    let v_start: Vec<usize> = (0..k).map(|i| push(format!("V{}", i + 1), layout.group_sizes[i])).collect();
    let r_start: Vec<usize> = (0..k).map(|i| push(format!("R{}", i + 1), layout.guard_sizes[i])).collect();
    let x_start = push("X".into(), inst.d);
    let total = next;
    let mut edges = Vec::new();
    for i in 0..k {
        let vi = v_start[i]..v_start[i] + layout.group_sizes[i];
        for v in vi.clone() {
            edges.extend((r_start[i]..r_start[i] + layout.guard_sizes[i]).map(|r| (v, r)));
        }
        for (j, vector) in inst.sets[i].iter().enumerate() {
            edges.extend((0..inst.d).filter(|&t| !vector[t]).map(|t| (v_start[i] + j, x_start + t)));
        }
        if p.degree(layout.roles[i]) == 0 {
            for a in vi.clone() {
                edges.extend((a + 1..vi.end).map(|b| (a, b)));
            }
        }
        for j in i + 1..k {
            if p.has_edge(layout.roles[i], layout.roles[j]) {
                for a in vi.clone() {
                    edges.extend((v_start[j]..v_start[j] + layout.group_sizes[j]).map(|b| (a, b)));
                }
            }
        }
    }
    let graph = HostGraph::from_edges(total, edges)?;
    Ok(ReducedInstance {
        graph,
        blocks: BlockMap { pattern: layout.pattern.clone(), roles: layout.roles.clone(), d: inst.d, blocks },
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeAudit {
    pub vertices: usize,
    pub edges: usize,
    pub vertex_bounds: (usize, usize),
    pub edge_bounds: (usize, usize),
    pub ok: bool,
}

/// Checks `d + n <= |V| <= 2kn + d` and
/// `m <= |E| <= k (m + n d + (k - 1) m / 2)`.
pub fn audit_sizes(g: &HostGraph, layout: &ReductionLayout, d: usize) -> Result<SizeAudit> {
    let (n, m, k) = (layout.n, layout.m, layout.roles.len());
    let vertex_bounds = (d + n, 2 * k * n + d);
    // k (m + n d) + k (k - 1) m / 2, kept integral by doubling
    let edge_upper_twice = 2 * k * (m + n * d) + k * (k - 1) * m;
    let edge_bounds = (m, edge_upper_twice / 2);
    let audit = SizeAudit {
        vertices: g.n(),
        edges: g.m(),
        vertex_bounds,
        edge_bounds,
        ok: vertex_bounds.0 <= g.n() && g.n() <= vertex_bounds.1 && m <= g.m() && 2 * g.m() <= edge_upper_twice,
    };
    if !audit.ok {
        return Err(Error::Invariant(format!(
            "size bounds violated for n = {n}, m = {m}, d = {d}, groups {:?}: |V| = {} not in [{}, {}] or |E| = {} not in [{}, {}]",
            layout.group_sizes, audit.vertices, vertex_bounds.0, vertex_bounds.1, audit.edges, edge_bounds.0, edge_bounds.1
        )));
    }
    Ok(audit)
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pattern: String,
    pub trials: usize,
    pub equivalent: usize,
    /// Trials whose instance had an orthogonal tuple.
    pub yes_instances: usize,
    pub failures: Vec<String>,
}

/// Whether every group size divides `m` and no guard block is clamped, so
/// that each `V_i`-`R_i` join has exactly `m` edges.
fn exact_sizes(layout: &ReductionLayout) -> bool {
    layout.group_sizes.iter().all(|&s| layout.m.is_multiple_of(s) && layout.m / s >= 2)
}

/// Checks, on `trials` seeded random instances, that the OV instance has a
/// solution iff the reduced graph has a dominating copy of `p`, and that
/// every generated graph passes [`audit_sizes`]. Targets `(n, m)` are drawn
/// so that all group sizes divide `m`, and instances with
/// `prod |A_i| <= max_product`.
pub fn verify_reduction(p: &Pattern, trials: usize, seed: u64, max_product: usize, guard: &OracleBudgetGuard) -> Result<VerifyReport> {
    let k = p.k();
    if k < 2 {
        return Err(Error::Invalid("the reduction needs a pattern with at least two vertices".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = VerifyReport { pattern: p.name().to_string(), trials, ..Default::default() };
    for trial in 0..trials {
        let (layout, d) = loop {
            let n = rng.gen_range(k.max(2)..=k + 4);
            let m = n * rng.gen_range(2..=n);
            let Ok(layout) = plan_reduction(p, n, m) else { continue };
            if exact_sizes(&layout) && layout.group_sizes.iter().product::<usize>() <= max_product {
                break (layout, rng.gen_range(2..=10));
            }
        };
        let density = rng.gen_range(0.6..0.95);
        let inst = if rng.gen_bool(0.5) {
            OVInstance::planted(&layout.group_sizes, d, density, &mut rng)?
        } else {
            OVInstance::random(&layout.group_sizes, d, density, &mut rng)?
        };
        let reduced = reduce(&inst, p, &layout)?;
        let expected = oracle_ov(&inst, guard)?.is_some();
        let got = oracle_solve(&reduced.graph, p, guard)?;
        let audit = audit_sizes(&reduced.graph, &layout, d);
        report.yes_instances += usize::from(expected);
        match (got.found == expected, audit) {
            (true, Ok(_)) => report.equivalent += 1,
            (false, _) => report.failures.push(format!(
                "trial {trial}: OV {expected}, pattern {} (n={}, m={}, d={d}, groups {:?})",
                got.found, layout.n, layout.m, layout.group_sizes
            )),
            (true, Err(e)) => report.failures.push(format!("trial {trial}: {e}")),
        }
    }
    Ok(report)
}

/// Vectors for `gen-ov`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorKind {
    Random,
    PlantedOrthogonal,
    /// All-zero vectors, so every tuple is orthogonal.
    None,
}

pub fn generate_instance(sizes: &[usize], d: usize, kind: VectorKind, seed: u64) -> Result<OVInstance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    match kind {
        VectorKind::Random => OVInstance::random(sizes, d, 0.5, &mut rng),
        VectorKind::PlantedOrthogonal => OVInstance::planted(sizes, d, 0.5, &mut rng),
        VectorKind::None => OVInstance::zeros(sizes, d),
    }
}

/// Shuffled copy of `0..n`, for tests that relabel hosts.
pub fn random_permutation(n: usize, seed: u64) -> Vec<usize> {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    perm
}
