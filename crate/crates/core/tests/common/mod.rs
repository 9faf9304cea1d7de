#![allow(dead_code)]

use dompat::graph::HostGraph;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn gnp(n: usize, p: f64, rng: &mut Rng8) -> HostGraph {
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    HostGraph::from_edges(n, edges).unwrap()
}

/// Random labelled tree plus `extra` random edges.
pub fn tree_plus(n: usize, extra: usize, rng: &mut Rng8) -> HostGraph {
    let mut edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    for _ in 0..extra {
        if n >= 2 {
            let a = rng.gen_range(0..n);
            let b = rng.gen_range(0..n);
            if a != b {
                edges.push((a, b));
            }
        }
    }
    HostGraph::from_edges(n, edges).unwrap()
}

/// Density levels from tree-sparse to complete, indexed by `level`.
pub fn swept_graph(n: usize, level: usize, rng: &mut Rng8) -> HostGraph {
    const LEVELS: [f64; 9] = [0.05, 0.1, 0.2, 0.3, 0.45, 0.6, 0.75, 0.9, 1.0];
    match level % (LEVELS.len() + 1) {
        0 => tree_plus(n, rng.gen_range(0..3), rng),
        i => gnp(n, LEVELS[i - 1], rng),
    }
}

pub fn random_bipartite(n: usize, p: f64, rng: &mut Rng8) -> HostGraph {
    let side: Vec<bool> = (0..n).map(|_| rng.gen_bool(0.5)).collect();
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if side[a] != side[b] && rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    HostGraph::from_edges(n, edges).unwrap()
}

/// Random graph with a planted `size`-clique that dominates everything.
pub fn planted_dominating_clique(n: usize, size: usize, p: f64, rng: &mut Rng8) -> HostGraph {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let clique = &order[..size];
    let mut edges: Vec<(usize, usize)> = gnp(n, p, rng).edges().collect();
    for (i, &a) in clique.iter().enumerate() {
        for &b in &clique[i + 1..] {
            edges.push((a, b));
        }
    }
    for &v in &order[size..] {
        let c = clique[rng.gen_range(0..size)];
        edges.push((c, v));
    }
    HostGraph::from_edges(n, edges).unwrap()
}

pub fn relabel(g: &HostGraph, rng: &mut Rng8) -> HostGraph {
    let mut perm: Vec<usize> = (0..g.n()).collect();
    perm.shuffle(rng);
    HostGraph::from_edges(g.n(), g.edges().map(|(a, b)| (perm[a], perm[b]))).unwrap()
}

/// Which members of the dominating K4 `{0, 1, 2, 3}` have high degree.
#[derive(Clone, Copy, Debug)]
pub enum K4Shape {
    AllHigh,
    OneLow,
    TwoLow,
}

/// A K4 on `0..4` whose members `1, 2, 3` dominate a large second layer
/// `X2`, with pendants on `0` so that vertex 0 is heavy. The second layer
/// exceeds three times the low-degree threshold, and `shape` fixes how
/// many of `1, 2, 3` are low.
pub fn k4_ladder(shape: K4Shape, rng: &mut Rng8) -> HostGraph {
    let layer: usize = rng.gen_range(28..40);
    let pendants = (layer - 12).div_ceil(3) + rng.gen_range(0..2);
    let n = 4 + pendants + layer;
    let mut edges = Vec::new();
    for a in 0..4 {
        for b in a + 1..4 {
            edges.push((a, b));
        }
    }
    edges.extend((0..pendants).map(|i| (0, 4 + i)));
    let x2: Vec<usize> = (4 + pendants..n).collect();
    let low_count = match shape {
        K4Shape::AllHigh => 0,
        K4Shape::OneLow => 1,
        K4Shape::TwoLow => 2,
    };
    // low members (the last `low_count` of 1, 2, 3) take one or two layer vertices each
    let mut next = 0;
    for low in (4 - low_count)..4 {
        for _ in 0..rng.gen_range(1..=2) {
            edges.push((low, x2[next]));
            next += 1;
        }
    }
    let high: Vec<usize> = (1..4 - low_count).collect();
    for &x in &x2[next..] {
        let h = high[rng.gen_range(0..high.len())];
        edges.push((h, x));
        if high.len() > 1 && rng.gen_bool(0.2) {
            edges.push((high[rng.gen_range(0..high.len())], x));
        }
    }
    // a little noise inside the layer
    for _ in 0..layer / 5 {
        let a = x2[rng.gen_range(0..layer)];
        let b = x2[rng.gen_range(0..layer)];
        if a != b {
            edges.push((a, b));
        }
    }
    HostGraph::from_edges(n, edges).unwrap()
}

/// Random graph whose vertex set splits into three parts with no edge
/// inside a part.
pub fn random_tripartite(rng: &mut Rng8, max_part: usize, p: f64) -> (HostGraph, Vec<u8>) {
    let sizes: Vec<usize> = (0..3).map(|_| rng.gen_range(1..=max_part)).collect();
    let n: usize = sizes.iter().sum();
    let mut part: Vec<u8> = sizes.iter().enumerate().flat_map(|(i, &s)| vec![i as u8; s]).collect();
    part.shuffle(rng);
    let mut edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if part[a] != part[b] && rng.gen_bool(p) {
                edges.push((a, b));
            }
        }
    }
    (HostGraph::from_edges(n, edges).unwrap(), part)
}
