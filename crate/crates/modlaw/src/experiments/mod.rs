//! Monte Carlo checks: equidistribution of copy counts and frequency
//! vectors, and convergence of satisfaction probabilities to their limits.
//!
//! Every experiment splits its samples over a fixed number of tasks with
//! derived random streams and merges integer tallies, so reports depend only
//! on the parameters and the seed.

mod convergence;
mod equidist;
mod stats;

pub use convergence::{convergence_experiment, ConvergenceReport, ConvergenceRow};
pub use equidist::{equidist_copies, freq_distribution, labelled_equidist, ExperimentReport, LabelledSetup};
pub use stats::{
    chi_square, distance_between, full_space, statistical_distance, ChiCell, EmpiricalDistribution, TASKS,
};
