//! Deterministic threshold opinion dynamics on large graphs.
//!
//! The crate covers graph construction and loading ([`graph`], [`ingest`]),
//! seeded random graph families ([`generators`]), the synchronous update
//! engine ([`dynamics`]), experiment procedures such as elite winning-set
//! scans and density sweeps ([`analysis`]), and an exact checker for the
//! `4m*` stabilization bound of the (ψ,ψ)-majority model ([`potential`]).

pub mod analysis;
pub mod dynamics;
pub mod error;
pub mod generators;
pub mod graph;
pub mod ingest;
pub mod potential;
pub mod report;
pub mod seed;

pub use error::{Error, Result};
pub use graph::{DegreeStats, Graph, NodeId, NodeSet};
