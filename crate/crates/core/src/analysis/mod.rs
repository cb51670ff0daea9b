//! Statistical experiments built on the solver, the estimators and the
//! covariance oracle.
//!
//! Experiments never assume the constants of the inequalities they probe;
//! they measure them and judge their stability across resolution, ensemble
//! size or perturbation size.

pub mod deterministic;
pub mod ensemble;
pub mod lemmas;
pub mod oracle_compare;
pub mod regression;
pub mod report;
pub mod scaling;
pub mod sensitivity;
pub mod stats;

pub use deterministic::{verify_p3, verify_p4, verify_p5, DeterministicSetup};
pub use ensemble::{run_ensemble, run_replicas, Experiment, SampleTable, StationaryExperiment, Statistic};
pub use lemmas::shift_inequality_check;
pub use oracle_compare::linear_oracle_comparison;
pub use regression::{holder_exponent_regression, HolderFit};
pub use report::{EnsembleSummary, StationarySetup, VerificationReport};
pub use scaling::{scaling_invariance_test, ScalingReport};
pub use sensitivity::{sensitivity_experiment, SensitivitySetup};
pub use stats::{exp_moment_certificate, tail_exponent_fit};
