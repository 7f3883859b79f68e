//! Comparative studies: dependence-ordering sweeps on stars, trajectory
//! dominance between dependence models, and the regression approximation of
//! equilibrium probabilities from the closed-form bounds.
//!
//! Cells of a sweep or grid are independent and run on the rayon pool;
//! results are always collected in input order.

mod approx;
mod dominance;
pub mod stats;
mod sweep;

pub use approx::{fit_approximation, study_grid, ApproxModel, ApproxRow, MIN_SAMPLES};
pub use dominance::{
    condition16_sampled, condition18, dominance_check, find_dominance_counterexample,
    Condition18, Counterexample, DominanceReport, COND16_BUDGET, COND16_GRID, COND16_QUASI_POINTS,
    DOMINANCE_SLACK,
};
pub use sweep::{classify_dependence, dependence_sweep, repro_table, Dependence, ReproTable, SweepResult, SweepRow};
