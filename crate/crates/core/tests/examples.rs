//! Worked solver examples on hand-checkable hosts.

use dompat::analysis::compute_rho;
use dompat::graph::{parse_pattern, HostGraph, Pattern};
use dompat::oracle::{oracle_solve, OracleBudgetGuard};
use dompat::solvers::{
    non_induced_closure, solve, solve_basic, solve_isolated, solve_k4, solve_pattern_set, solve_triangle, PatternSet, Route,
    SolveOptions, SolveResult,
};

fn pat(spec: &str) -> Pattern {
    parse_pattern(spec).unwrap()
}

fn witness(r: &SolveResult) -> Vec<usize> {
    assert!(r.found);
    r.witness.as_ref().unwrap().vertices.clone()
}

fn opts() -> SolveOptions {
    SolveOptions::default()
}

fn star(leaves: usize) -> HostGraph {
    HostGraph::from_edges(leaves + 1, (1..=leaves).map(|l| (0, l))).unwrap()
}

#[test]
fn dispatch_examples() {
    let r = solve(&HostGraph::complete(3), &pat("clique:3"), &opts()).unwrap();
    assert_eq!(witness(&r), vec![0, 1, 2]);
    assert_eq!(r.route, Route::Triangle);

    let r = solve(&HostGraph::cycle(6), &pat("independent:2"), &opts()).unwrap();
    assert_eq!(witness(&r), vec![0, 3]);

    let r = solve(&HostGraph::path(5), &pat("clique:3"), &opts()).unwrap();
    assert!(!r.found && r.witness.is_none());
}

#[test]
fn basic_route_examples() {
    let p = pat("cycle:5");
    let dec = compute_rho(&p).unwrap();
    let r = solve_basic(&HostGraph::cycle(5), &p, &dec, &opts()).unwrap();
    assert_eq!(witness(&r), vec![0, 1, 2, 3, 4]);
    assert_eq!(r.route, Route::BasicSEmpty);

    let p = pat("star:5");
    let dec = compute_rho(&p).unwrap();
    let r = solve_basic(&star(4), &p, &dec, &opts()).unwrap();
    assert_eq!(witness(&r), vec![0, 1, 2, 3, 4]);
    assert_eq!(r.route, Route::BasicSNonEmpty);
}

#[test]
fn triangle_examples() {
    assert!(solve_triangle(&HostGraph::complete(3), &opts()).unwrap().found);
    // hub 0 over the rim 1..=5
    let mut edges: Vec<(usize, usize)> = (1..=5).map(|v| (0, v)).collect();
    edges.extend((1..=5).map(|v| (v, v % 5 + 1)));
    let wheel = HostGraph::from_edges(6, edges).unwrap();
    let w = witness(&solve_triangle(&wheel, &opts()).unwrap());
    assert_eq!(w.len(), 3);
    assert!(w.contains(&0));
    assert!(wheel.has_edge(w[1], w[2]));
    assert!(!solve_triangle(&HostGraph::cycle(6), &opts()).unwrap().found);
}

#[test]
fn k4_examples() {
    assert_eq!(witness(&solve_k4(&HostGraph::complete(4), &opts()).unwrap()), vec![0, 1, 2, 3]);
    let mut edges: Vec<(usize, usize)> = HostGraph::complete(4).edges().collect();
    edges.push((0, 4));
    let pendant = HostGraph::from_edges(5, edges).unwrap();
    assert_eq!(witness(&solve_k4(&pendant, &opts()).unwrap()), vec![0, 1, 2, 3]);
    assert!(!solve_k4(&HostGraph::cycle(8), &opts()).unwrap().found);
}

#[test]
fn isolated_examples() {
    let p = pat("independent:2");
    let dec = compute_rho(&p).unwrap();
    assert_eq!(witness(&solve_isolated(&HostGraph::cycle(6), &p, &dec, &opts()).unwrap()), vec![0, 3]);
    assert!(!solve_isolated(&HostGraph::complete(4), &p, &dec, &opts()).unwrap().found);

    let p = pat("edges:3:[0-1]");
    let dec = compute_rho(&p).unwrap();
    let two_edges = HostGraph::from_edges(4, [(0, 1), (2, 3)]).unwrap();
    let r = solve_isolated(&two_edges, &p, &dec, &opts()).unwrap();
    let w = witness(&r);
    assert!(p.matches_induced(&two_edges, &w));
    let oracle = oracle_solve(&two_edges, &p, &OracleBudgetGuard::default()).unwrap();
    assert_eq!(oracle.witness.unwrap().vertices, vec![0, 1, 2]);
}

#[test]
fn pattern_set_examples() {
    let k2 = non_induced_closure(&pat("clique:2"), 100).unwrap();
    assert_eq!(k2.members().len(), 1);
    let g = HostGraph::path(3);
    assert_eq!(
        solve_pattern_set(&g, &k2, &opts()).unwrap().found,
        solve(&g, &pat("clique:2"), &opts()).unwrap().found
    );

    let p3 = non_induced_closure(&pat("path:3"), 100).unwrap();
    assert_eq!(p3.members().len(), 2);
    let r = solve_pattern_set(&HostGraph::complete(3), &p3, &opts()).unwrap();
    assert_eq!(witness(&r), vec![0, 1, 2]);
    assert!(HostGraph::complete(3).has_edge(0, 2));

    let set = PatternSet::new(vec![pat("clique:3"), pat("independent:3")]).unwrap();
    let r = solve_pattern_set(&HostGraph::cycle(6), &set, &opts()).unwrap();
    assert_eq!(witness(&r), vec![0, 2, 4]);
    assert_eq!(r.matched.as_deref(), Some(pat("independent:3").name()));
}

#[test]
fn empty_pattern_set_rejected() {
    assert!(PatternSet::new(Vec::new()).is_err());
}

#[test]
fn empty_host_rejected() {
    assert!(solve(&HostGraph::empty(0), &pat("clique:2"), &opts()).is_err());
}
