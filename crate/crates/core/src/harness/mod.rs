//! Monte Carlo experiment engine.
//!
//! A run executes `R` independent trajectories, one derived seed each, and
//! reduces them into stability ratios, normality diagnostics, interval
//! coverage and regret. Replications run on the rayon pool; results are
//! collected in replication order, so reports do not depend on the number of
//! workers.

pub mod export;
pub mod growing;
pub mod stats;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bandit::{regret, BanditInstance, TrajectorySummary};
use crate::error::{Error, Result};
use crate::inference::{confidence_interval_with, CiFormula, ConfidenceInterval, InferenceResult};
use crate::policy::{run_trajectory, PolicyKind};
use crate::rng::derive_seed;
use crate::stability::{solve_n_star, StabilityPrediction};

pub use growing::{arms_for_horizon, growing_k_suite, GrowingKPoint};
pub use stats::{coverage_rate, ks_distance, SpreadSummary};

/// Mean profile of the arms in a growing-K instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize, Default)]
pub enum GapProfile {
    /// Every arm shares the template mean.
    #[default]
    Equal,
    /// Arm `a` of `K` has gap `max_gap · a / (K - 1)`.
    Linear { max_gap: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowingKConfig {
    /// `δ` in `K = round(exp((ln T)^(1-δ)))`.
    pub delta_exponent: f64,
    pub horizons: Vec<u64>,
    /// Required near-optimal fraction `|S_B|/K` for some threshold on the grid.
    pub min_fraction: f64,
    pub gap_profile: GapProfile,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentConfig {
    pub instance: BanditInstance,
    pub policy: PolicyKind,
    pub replications: usize,
    pub root_seed: u64,
    /// Contrast `u` for the interval experiment.
    pub direction: Vec<f64>,
    pub alpha: f64,
    pub ci_formula: CiFormula,
    pub solver_tolerance: f64,
    pub growing_k: Option<GrowingKConfig>,
}

impl ExperimentConfig {
    /// Defaults: `α = 0.05`, contrast on the last arm, standard-error intervals.
    pub fn new(instance: BanditInstance, policy: PolicyKind, replications: usize, root_seed: u64) -> Self {
        let k = instance.num_arms();
        let mut direction = vec![0.0; k];
        direction[k - 1] = 1.0;
        ExperimentConfig {
            instance,
            policy,
            replications,
            root_seed,
            direction,
            alpha: 0.05,
            ci_formula: CiFormula::StandardError,
            solver_tolerance: crate::stability::DEFAULT_TOLERANCE,
            growing_k: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.policy.validate()?;
        if self.replications == 0 {
            return Err(Error::config("experiment.replications", "must be at least 1"));
        }
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(Error::config("experiment.alpha", "must lie in (0, 1)"));
        }
        if self.direction.len() != self.instance.num_arms() {
            return Err(Error::config(
                "experiment.direction",
                format!(
                    "has {} entries but the instance has {} arms",
                    self.direction.len(),
                    self.instance.num_arms()
                ),
            ));
        }
        if self.direction.iter().any(|u| !u.is_finite()) {
            return Err(Error::config("experiment.direction", "entries must be finite"));
        }
        if !(self.solver_tolerance > 0.0) {
            return Err(Error::config("experiment.solver_tolerance", "must be > 0"));
        }
        if let Some(g) = &self.growing_k {
            if !(g.delta_exponent > 0.0 && g.delta_exponent < 1.0) {
                return Err(Error::config("growing_k.delta_exponent", "must lie in (0, 1)"));
            }
            if g.horizons.is_empty() {
                return Err(Error::config("growing_k.horizons", "must not be empty"));
            }
            if g.horizons.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::config("growing_k.horizons", "must be strictly increasing"));
            }
            if g.horizons[0] < 3 {
                return Err(Error::config("growing_k.horizons", "horizons must be at least 3"));
            }
            if !(g.min_fraction > 0.0 && g.min_fraction <= 1.0) {
                return Err(Error::config("growing_k.min_fraction", "must lie in (0, 1]"));
            }
            if let GapProfile::Linear { max_gap } = g.gap_profile {
                if !(max_gap >= 0.0 && max_gap.is_finite()) {
                    return Err(Error::config("growing_k.max_gap", "must be finite and >= 0"));
                }
            }
        }
        Ok(())
    }
}

/// Everything recorded about one replication.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReplicationRecord {
    pub replication: usize,
    pub summary: TrajectorySummary,
    pub standardized: Vec<Option<f64>>,
    /// `None` when an arm weighted by the contrast had zero estimated variance.
    pub interval: Option<ConfidenceInterval>,
    pub regret: f64,
}

impl ReplicationRecord {
    pub fn covers(&self, truth: f64) -> Option<bool> {
        self.interval.as_ref().map(|ci| ci.contains(truth))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub horizon: u64,
    pub num_arms: usize,
    pub policy: PolicyKind,
    pub root_seed: u64,
    pub prediction: StabilityPrediction,
    /// `u · μ`, the target of the intervals.
    pub contrast_truth: f64,
    /// `[arm][replication]` of `n_{a,T} / predicted_pulls[a]`.
    pub stability_ratios: Vec<Vec<f64>>,
    /// Per arm, over replications with a finite standardized statistic.
    pub ks_distance: Vec<Option<f64>>,
    /// Per arm, replications whose variance estimate was zero.
    pub degenerate_counts: Vec<usize>,
    pub coverage_rate: Option<f64>,
    /// Replications with a usable interval.
    pub coverage_evaluated: usize,
    pub mean_regret: f64,
    pub rows: Vec<ReplicationRecord>,
}

impl ExperimentReport {
    pub fn replications(&self) -> usize {
        self.rows.len()
    }

    pub fn ratio_summary(&self, arm: usize) -> SpreadSummary {
        SpreadSummary::of(&self.stability_ratios[arm]).expect("at least one replication")
    }

    /// Finite standardized statistics of `arm`, in replication order.
    pub fn standardized_sample(&self, arm: usize) -> Vec<f64> {
        self.rows.iter().filter_map(|r| r.standardized[arm]).collect()
    }

    pub fn variance_estimates(&self, arm: usize) -> Vec<f64> {
        self.rows.iter().map(|r| r.summary.sample_vars[arm]).collect()
    }

    /// Binomial standard error of the coverage estimate.
    pub fn coverage_standard_error(&self) -> Option<f64> {
        let p = self.coverage_rate?;
        Some((p * (1.0 - p) / self.coverage_evaluated as f64).sqrt())
    }

    /// `max_a |median ratio_a - 1|`.
    pub fn max_median_ratio_deviation(&self) -> f64 {
        (0..self.num_arms)
            .map(|a| (self.ratio_summary(a).median - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Run `config.replications` trajectories and aggregate them.
pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentReport> {
    config.validate()?;
    let instance = &config.instance;
    let prediction = solve_n_star(instance, config.solver_tolerance)?;
    let mu = instance.means();
    let contrast_truth: f64 = config.direction.iter().zip(&mu).map(|(u, m)| u * m).sum();

    let rows: Vec<ReplicationRecord> = (0..config.replications)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.root_seed, i as u64);
            let summary = run_trajectory(instance, config.policy, seed)?;
            let inference = InferenceResult::from_summary(&summary, &mu)?;
            let interval =
                match confidence_interval_with(&inference, &config.direction, config.alpha, config.ci_formula) {
                    Ok(ci) => Some(ci),
                    Err(Error::DegenerateSample { .. }) => None,
                    Err(e) => return Err(e),
                };
            Ok(ReplicationRecord {
                replication: i,
                regret: regret(instance, &summary),
                standardized: inference.standardized,
                summary,
                interval,
            })
        })
        .collect::<Result<_>>()?;

    let k = instance.num_arms();
    let stability_ratios: Vec<Vec<f64>> = (0..k)
        .map(|a| {
            rows.iter()
                .map(|r| r.summary.pull_counts[a] as f64 / prediction.predicted_pulls[a])
                .collect()
        })
        .collect();

    let mut ks = Vec::with_capacity(k);
    let mut degenerate_counts = Vec::with_capacity(k);
    for a in 0..k {
        let sample: Vec<f64> = rows.iter().filter_map(|r| r.standardized[a]).collect();
        degenerate_counts.push(rows.len() - sample.len());
        ks.push(if sample.is_empty() { None } else { Some(ks_distance(&sample)?) });
    }

    let intervals: Vec<ConfidenceInterval> = rows.iter().filter_map(|r| r.interval.clone()).collect();
    let coverage = if intervals.is_empty() {
        None
    } else {
        Some(coverage_rate(&intervals, contrast_truth)?)
    };
    let mean_regret = rows.iter().map(|r| r.regret).sum::<f64>() / rows.len() as f64;

    Ok(ExperimentReport {
        horizon: instance.horizon(),
        num_arms: k,
        policy: config.policy,
        root_seed: config.root_seed,
        prediction,
        contrast_truth,
        stability_ratios,
        ks_distance: ks,
        degenerate_counts,
        coverage_rate: coverage,
        coverage_evaluated: intervals.len(),
        mean_regret,
        rows,
    })
}

/// Run the same experiment at each horizon in `horizons`.
pub fn horizon_sweep(config: &ExperimentConfig, horizons: &[u64]) -> Result<Vec<ExperimentReport>> {
    horizons
        .iter()
        .map(|&t| {
            let mut c = config.clone();
            c.instance = config.instance.with_horizon(t)?;
            run_experiment(&c)
        })
        .collect()
}
