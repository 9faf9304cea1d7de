//! Host graphs, patterns, witnesses, and the elementary queries every solver
//! relies on.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::config::{DEFAULT_PATTERN_CAP, HARD_PATTERN_CAP};
use crate::error::{Error, Result};
use crate::iso;

/// Simple undirected graph on vertices `0..n` with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HostGraph {
    adj: Vec<Vec<usize>>,
    m: usize,
}

impl HostGraph {
    /// Builds a graph, collapsing duplicate edges. Self-loops and vertex ids
    /// `>= n` are rejected.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u == v {
                return Err(Error::Invalid(format!("self-loop at vertex {u}")));
            }
            for w in [u, v] {
                if w >= n {
                    return Err(Error::VertexOutOfRange { vertex: w, n });
                }
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        let mut m2 = 0;
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
            m2 += list.len();
        }
        Ok(Self { adj, m: m2 / 2 })
    }

    pub fn empty(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n], m: 0 }
    }

    pub fn complete(n: usize) -> Self {
        let edges = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)));
        Self::from_edges(n, edges).expect("valid")
    }

    pub fn path(n: usize) -> Self {
        Self::from_edges(n, (1..n).map(|v| (v - 1, v))).expect("valid")
    }

    pub fn cycle(n: usize) -> Self {
        assert!(n >= 3, "cycle needs at least three vertices");
        Self::from_edges(n, (0..n).map(|v| (v, (v + 1) % n))).expect("valid")
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.adj.len()
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = if self.adj[u].len() <= self.adj[v].len() { (u, v) } else { (v, u) };
        self.adj[a].binary_search(&b).is_ok()
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is
    /// `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> HostGraph {
        let mut index = vec![usize::MAX; self.n()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<usize> =
                    self.adj[v].iter().map(|&w| index[w]).filter(|&i| i != usize::MAX).collect();
                list.sort_unstable();
                list
            })
            .collect::<Vec<_>>();
        let m = adj.iter().map(Vec::len).sum::<usize>() / 2;
        HostGraph { adj, m }
    }

    /// Adjacency masks of `G[d]` in the order of `d` (at most 32 vertices).
    pub fn induced_masks(&self, d: &[usize]) -> Vec<u32> {
        debug_assert!(d.len() <= 32);
        let mut masks = vec![0u32; d.len()];
        for i in 0..d.len() {
            for j in i + 1..d.len() {
                if self.has_edge(d[i], d[j]) {
                    masks[i] |= 1 << j;
                    masks[j] |= 1 << i;
                }
            }
        }
        masks
    }

    /// Uniformly random graph with exactly `m` edges (capped at all pairs).
    pub fn random_gnm<R: rand::Rng>(n: usize, m: usize, rng: &mut R) -> Self {
        let pairs = n * n.saturating_sub(1) / 2;
        let picks = rand::seq::index::sample(rng, pairs, m.min(pairs));
        let mut edges = Vec::with_capacity(picks.len());
        for idx in picks.into_iter() {
            // row u holds the pairs (u, u+1..n)
            let (mut u, mut rest) = (0, idx);
            while rest >= n - 1 - u {
                rest -= n - 1 - u;
                u += 1;
            }
            edges.push((u, u + 1 + rest));
        }
        Self::from_edges(n, edges).expect("pairs are in range")
    }

    /// Edge-list text: an `n m` header then one `u v` line per edge.
    pub fn to_edge_list(&self) -> String {
        let mut out = format!("{} {}\n", self.n(), self.m());
        for (u, v) in self.edges() {
            out.push_str(&format!("{u} {v}\n"));
        }
        out
    }

    fn check_vertices(&self, d: &[usize]) -> Result<()> {
        match d.iter().find(|&&v| v >= self.n()) {
            Some(&vertex) => Err(Error::VertexOutOfRange { vertex, n: self.n() }),
            None => Ok(()),
        }
    }
}

/// Parses the edge-list format: `u v` lines, `#` comments, and an optional
/// leading `n m` header. The first line is read as a header when every
/// later vertex id is below its first number (and, for a file with no other
/// lines, when its second number is 0).
pub fn parse_host_graph(text: &str) -> Result<HostGraph> {
    let mut rows: Vec<(usize, usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: idx + 1,
                message: format!("expected two integers, found {} tokens", tokens.len()),
            });
        }
        let parse = |t: &str| {
            t.parse::<usize>().map_err(|_| Error::Parse {
                line: idx + 1,
                message: format!("`{t}` is not a nonnegative integer"),
            })
        };
        rows.push((idx + 1, parse(tokens[0])?, parse(tokens[1])?));
    }
    let header = match rows.first() {
        Some(&(_, n, m)) => {
            let rest = &rows[1..];
            if rest.is_empty() {
                m == 0
            } else {
                rest.iter().all(|&(_, u, v)| u < n && v < n)
            }
        }
        None => false,
    };
    let (n, body) = if header {
        (rows[0].1, &rows[1..])
    } else {
        let n = rows.iter().map(|&(_, u, v)| u.max(v) + 1).max().unwrap_or(0);
        (n, &rows[..])
    };
    if let Some(&(line, u, _)) = body.iter().find(|&&(_, u, v)| u == v) {
        return Err(Error::Parse { line, message: format!("self-loop at vertex {u}") });
    }
    HostGraph::from_edges(n, body.iter().map(|&(_, u, v)| (u, v)))
}

/// True iff every vertex of `g` is in `d` or adjacent to a vertex of `d`.
pub fn is_dominating(g: &HostGraph, d: &[usize]) -> Result<bool> {
    g.check_vertices(d)?;
    Ok(dominates(g, d))
}

pub(crate) fn dominates(g: &HostGraph, d: &[usize]) -> bool {
    let mut covered = vec![false; g.n()];
    let mut count = 0;
    for &v in d {
        for &w in std::iter::once(&v).chain(g.neighbors(v)) {
            if !covered[w] {
                covered[w] = true;
                count += 1;
            }
        }
    }
    count == g.n()
}

/// True iff `G[d]` is isomorphic to `p`.
pub fn induces_pattern(g: &HostGraph, d: &[usize], p: &Pattern) -> Result<bool> {
    g.check_vertices(d)?;
    if d.len() != p.k() {
        return Err(Error::SizeMismatch(format!("vertex set has {} vertices, pattern has {}", d.len(), p.k())));
    }
    let mut sorted = d.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != d.len() {
        return Err(Error::Invalid("vertex set contains duplicates".into()));
    }
    Ok(p.matches_induced(g, d))
}

/// A small pattern graph on `k <= 16` vertices held as adjacency masks.
#[derive(Clone)]
pub struct Pattern {
    name: String,
    adj: Vec<u32>,
    canon: OnceLock<u128>,
}

impl fmt::Debug for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Pattern({})", self.name)
    }
}

impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

impl PartialEq for Pattern {
    fn eq(&self, other: &Self) -> bool {
        self.adj == other.adj
    }
}
impl Eq for Pattern {}

impl Pattern {
    pub fn from_masks(adj: Vec<u32>) -> Self {
        let name = edges_spec(&adj);
        Self { name, adj, canon: OnceLock::new() }
    }

    pub fn from_edges(k: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let spec = format!("edges:{k}:[..]");
        if k > HARD_PATTERN_CAP {
            return Err(Error::Pattern { spec, message: format!("order {k} exceeds {HARD_PATTERN_CAP}") });
        }
        let mut adj = vec![0u32; k];
        for &(u, v) in edges {
            if u >= k || v >= k || u == v {
                return Err(Error::Pattern { spec, message: format!("bad edge {u}-{v}") });
            }
            adj[u] |= 1 << v;
            adj[v] |= 1 << u;
        }
        Ok(Self::from_masks(adj))
    }

    fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.adj.len()
    }

    pub fn masks(&self) -> &[u32] {
        &self.adj
    }

    #[inline]
    pub fn neighbors_mask(&self, v: usize) -> u32 {
        self.adj[v]
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        iso::edge_count(&self.adj)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (0..self.k())
            .flat_map(|u| iso::bits(self.adj[u]).filter(move |&v| v > u).map(move |v| (u, v)))
            .collect()
    }

    /// Mask of the isolated vertices I(P).
    pub fn isolated_mask(&self) -> u32 {
        self.adj
            .iter()
            .enumerate()
            .filter(|(_, m)| **m == 0)
            .fold(0, |acc, (v, _)| acc | 1 << v)
    }

    pub fn isolated(&self) -> Vec<usize> {
        iso::bits(self.isolated_mask()).collect()
    }

    /// Open neighbourhood of a vertex set given as a mask.
    pub fn open_neighborhood(&self, set: u32) -> u32 {
        iso::bits(set).fold(0, |acc, v| acc | self.adj[v])
    }

    pub fn is_independent(&self, set: u32) -> bool {
        self.open_neighborhood(set) & set == 0
    }

    /// The pattern induced by `vertices`, relabelled to `0..len` in order.
    pub fn induced(&self, vertices: &[usize]) -> Pattern {
        let adj = vertices
            .iter()
            .map(|&v| {
                vertices
                    .iter()
                    .enumerate()
                    .filter(|&(_, &w)| self.has_edge(v, w))
                    .fold(0u32, |acc, (j, _)| acc | 1 << j)
            })
            .collect();
        Pattern::from_masks(adj)
    }

    pub fn is_clique(&self) -> bool {
        let k = self.k();
        self.edge_count() == k * k.saturating_sub(1) / 2
    }

    pub fn canonical_code(&self) -> u128 {
        *self.canon.get_or_init(|| iso::canonical_code(&self.adj))
    }

    pub fn is_isomorphic(&self, other: &Pattern) -> bool {
        iso::isomorphic(&self.adj, &other.adj)
    }

    /// `G[d] ≅ P` for a vertex list already known to be valid and distinct.
    pub fn matches_induced(&self, g: &HostGraph, d: &[usize]) -> bool {
        d.len() == self.k() && iso::isomorphic(&g.induced_masks(d), &self.adj)
    }

    /// `P ⊆ G[d]` as a spanning (not necessarily induced) subgraph.
    pub fn embeds_in(&self, g: &HostGraph, d: &[usize]) -> bool {
        d.len() == self.k() && iso::contains_spanning(&g.induced_masks(d), &self.adj)
    }

    pub fn clique(k: usize) -> Pattern {
        let full = if k == 32 { u32::MAX } else { (1u32 << k) - 1 };
        Pattern::from_masks((0..k).map(|v| full & !(1 << v)).collect()).named(format!("clique:{k}"))
    }

    pub fn independent(k: usize) -> Pattern {
        Pattern::from_masks(vec![0; k]).named(format!("independent:{k}"))
    }
}

fn edges_spec(adj: &[u32]) -> String {
    let edges: Vec<String> = (0..adj.len())
        .flat_map(|u| iso::bits(adj[u]).filter(move |&v| v > u).map(move |v| format!("{u}-{v}")))
        .collect();
    format!("edges:{}:[{}]", adj.len(), edges.join(","))
}

/// Parses the pattern mini-language with the default order cap.
pub fn parse_pattern(spec: &str) -> Result<Pattern> {
    parse_pattern_with_cap(spec, DEFAULT_PATTERN_CAP)
}

/// `clique:k | independent:k | star:k | path:k | cycle:k | matching:k |
/// edges:k:[u-v,...]`.
pub fn parse_pattern_with_cap(spec: &str, cap: usize) -> Result<Pattern> {
    let cap = cap.min(HARD_PATTERN_CAP);
    let spec = spec.trim();
    let err = |message: String| Error::Pattern { spec: spec.to_string(), message };
    let (family, rest) = spec.split_once(':').ok_or_else(|| err("expected `family:k`".into()))?;
    let (k_text, tail) = match rest.split_once(':') {
        Some((k, tail)) => (k, Some(tail)),
        None => (rest, None),
    };
    let k: usize = k_text.trim().parse().map_err(|_| err(format!("`{k_text}` is not an order")))?;
    if k == 0 {
        return Err(err("order must be at least 1".into()));
    }
    if k > cap {
        return Err(err(format!("order {k} exceeds the cap of {cap}")));
    }
    if tail.is_some() && family != "edges" {
        return Err(err("only `edges` takes an edge list".into()));
    }
    let edges: Vec<(usize, usize)> = match family.trim() {
        "clique" => return Ok(Pattern::clique(k)),
        "independent" => return Ok(Pattern::independent(k)),
        "star" => (1..k).map(|v| (0, v)).collect(),
        "path" => (1..k).map(|v| (v - 1, v)).collect(),
        "cycle" => {
            if k < 3 {
                return Err(err("a cycle needs at least 3 vertices".into()));
            }
            (0..k).map(|v| (v, (v + 1) % k)).collect()
        }
        "matching" => {
            if k % 2 == 1 {
                return Err(err("a perfect matching needs an even order".into()));
            }
            (0..k / 2).map(|i| (2 * i, 2 * i + 1)).collect()
        }
        "edges" => {
            let list = tail.ok_or_else(|| err("missing edge list".into()))?.trim();
            let inner = list
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| err("edge list must be bracketed".into()))?;
            let mut edges = Vec::new();
            for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
                let (a, b) = item.split_once('-').ok_or_else(|| err(format!("bad edge `{item}`")))?;
                let a: usize = a.trim().parse().map_err(|_| err(format!("bad edge `{item}`")))?;
                let b: usize = b.trim().parse().map_err(|_| err(format!("bad edge `{item}`")))?;
                if a >= k || b >= k {
                    return Err(err(format!("edge `{item}` leaves 0..{k}")));
                }
                if a == b {
                    return Err(err(format!("self-loop `{item}`")));
                }
                edges.push((a, b));
            }
            edges
        }
        other => return Err(err(format!("unknown family `{other}`"))),
    };
    Ok(Pattern::from_edges(k, &edges)?.named(spec))
}

/// A vertex set certifying a yes answer, strictly increasing.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Witness {
    pub vertices: Vec<usize>,
}

impl Witness {
    pub fn new(mut vertices: Vec<usize>) -> Self {
        vertices.sort_unstable();
        vertices.dedup();
        Self { vertices }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }
}
