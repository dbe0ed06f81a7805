//! Simulation and inference toolkit for the horizon-aware UCB bandit algorithm.
//!
//! * [`bandit`]: arms, instances, rewards and pseudo-regret.
//! * [`policy`]: UCB with known horizon and the epsilon-greedy baseline.
//! * [`stability`]: the deterministic pull-count limit `n*`, predicted pulls,
//!   near-optimal arm sets and sub-Gaussian deviation envelopes.
//! * [`inference`]: variance estimates, studentized means, normal intervals.
//! * [`harness`]: replicated Monte Carlo experiments and their exports.
//! * [`config`]: the experiment configuration file.

pub mod bandit;
pub mod config;
pub mod error;
pub mod harness;
pub mod inference;
pub mod policy;
pub mod rng;
pub mod stability;

pub use bandit::{compute_gaps, regret, sample_reward, ArmSpec, BanditInstance, Family, TrajectorySummary};
pub use config::ConfigFile;
pub use error::{Error, Result};
pub use harness::{
    growing_k_suite, horizon_sweep, run_experiment, ExperimentConfig, ExperimentReport, GapProfile,
    GrowingKConfig, GrowingKPoint,
};
pub use inference::{
    confidence_interval, normal_cdf, normal_quantile, standardized_statistic, variance_estimate, CiFormula,
    ConfidenceInterval, InferenceResult,
};
pub use policy::{run_trajectory, PolicyKind, PolicyState};
pub use stability::{
    characteristic_residual, near_optimal_set, predicted_pulls, solve_n_star, NearOptimalSet, StabilityPrediction,
};
