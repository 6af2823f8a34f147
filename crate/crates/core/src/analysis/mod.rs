//! Experiment-level procedures built on the dynamics engine.

mod countermeasures;
mod cycle;
mod elites;
mod mixing;
mod sweep;

pub use countermeasures::{
    apply_cm1, apply_cm2, cm1_degree, cm2_gamma, stubbornness_bound, StubbornBound,
};
pub use cycle::{alternating_path_bound, cycle_order, AlternatingPath};
pub use elites::{
    default_resolution, grid_step, min_winning_elite_fraction, scan_elites, EliteQuery, EliteScan,
    ScanStrategy, WinCriterion,
};
pub use mixing::{mixing_sides, verify_mixing, MixingReport, MixingViolation};
pub use sweep::{
    conjecture_experiment, density_sweep, uniform_grid, PhaseReport, PhaseRow, SweepSpec,
};
