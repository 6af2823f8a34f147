//! Synchronous threshold dynamics: the majority model, the (ψ₁,ψ₂)-majority
//! model, influence and stubbornness factors, and run-to-cycle detection.
//!
//! All threshold comparisons are exact integer arithmetic.

mod coloring;
mod engine;
mod model;
mod outcome;

pub use coloring::{count_bichromatic, random_coloring, Coloring};
pub use engine::{
    default_max_rounds, run, step, trajectory, weighted_tally, write_trajectory_csv, RunResult,
    TrajectoryRow,
};
pub(crate) use engine::{run_compiled, step_compiled};
pub use model::{fraction_to_f64, parse_fraction, Fraction, ModelConfig, Stubbornness, Variant};
pub(crate) use model::CompiledRule;
pub use outcome::{classify_counts, classify_outcome, OutcomeLabel, Tolerances};
