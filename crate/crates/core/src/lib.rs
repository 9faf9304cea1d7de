//! Detection of dominating induced patterns in host graphs.
//!
//! Given a host graph `G` and a small pattern `P`, find a vertex set `D`
//! that dominates `G` and induces a copy of `P`. The crate provides the
//! pattern parameter that governs the running time, solvers built on
//! bit-packed matrix products, brute-force oracles, and a generator of hard
//! instances from orthogonal-vectors instances.

pub mod analysis;
pub mod cli;
pub mod config;
pub mod dominance;
pub mod enumeration;
pub mod error;
pub mod graph;
pub mod iso;
pub mod hardness;
pub mod linalg;
pub mod oracle;
pub mod solvers;

pub use error::{Error, Result};
pub use graph::{HostGraph, Pattern, Witness};
