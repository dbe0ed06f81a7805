//! Experiments where the number of arms grows with the horizon,
//! `K = round(exp((ln T)^(1-δ)))`.

use serde::Serialize;

use super::{run_experiment, ExperimentConfig, ExperimentReport, GapProfile, GrowingKConfig};
use crate::bandit::{ArmSpec, BanditInstance};
use crate::error::{Error, Result};
use crate::stability::{near_optimal_set, solve_n_star};

/// Thresholds `B` tried when checking the near-optimal fraction condition.
pub const NEAR_OPTIMAL_GRID: [f64; 6] = [0.25, 0.5, 1.0, 2.0, 4.0, 8.0];

/// `round(exp((ln T)^(1-δ)))`, at least 1 and at most `T`.
pub fn arms_for_horizon(horizon: u64, delta_exponent: f64) -> usize {
    let k = (horizon as f64).ln().powf(1.0 - delta_exponent).exp().round();
    (k.max(1.0) as u64).min(horizon) as usize
}

fn build_instance(template: &ArmSpec, arms: usize, horizon: u64, profile: GapProfile) -> Result<BanditInstance> {
    let top = template.mean();
    let specs = (0..arms)
        .map(|a| {
            let gap = match profile {
                GapProfile::Equal => 0.0,
                GapProfile::Linear { max_gap } if arms > 1 => max_gap * a as f64 / (arms - 1) as f64,
                GapProfile::Linear { .. } => 0.0,
            };
            template.with_mean(top - gap)
        })
        .collect::<Result<Vec<_>>>()?;
    BanditInstance::new(specs, horizon)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GrowingKPoint {
    pub horizon: u64,
    pub num_arms: usize,
    /// Largest `|S_B|/K` over the threshold grid.
    pub near_optimal_fraction: f64,
    /// `max_a |median(n_{a,T} / predicted_a) - 1|`.
    pub max_ratio_deviation: f64,
    pub report: ExperimentReport,
}

/// Build each instance in the schedule, check the near-optimal fraction
/// condition for all of them, then run one experiment per horizon.
///
/// The first arm of `config.instance` is the template for every arm. The
/// contrast is the first arm's mean.
pub fn growing_k_suite(config: &ExperimentConfig) -> Result<Vec<GrowingKPoint>> {
    config.validate()?;
    let growing: &GrowingKConfig = config.growing_k.as_ref().ok_or_else(|| {
        Error::config("growing_k", "section is required for the growing-K suite")
    })?;
    let template = config.instance.arms()[0];

    let mut planned = Vec::with_capacity(growing.horizons.len());
    for &horizon in &growing.horizons {
        let k = arms_for_horizon(horizon, growing.delta_exponent);
        let instance = build_instance(&template, k, horizon, growing.gap_profile)?;
        let prediction = solve_n_star(&instance, config.solver_tolerance)?;
        let mut best = 0.0f64;
        for b in NEAR_OPTIMAL_GRID {
            best = best.max(near_optimal_set(&prediction, b)?.fraction);
        }
        if best < growing.min_fraction {
            return Err(Error::config(
                "growing_k",
                format!(
                    "near-optimal arm condition |S_B|/K >= {} fails at T = {} (K = {}): \
                     best fraction over B in {:?} is {:.4}",
                    growing.min_fraction, horizon, k, NEAR_OPTIMAL_GRID, best
                ),
            ));
        }
        planned.push((horizon, k, instance, best));
    }

    planned
        .into_iter()
        .map(|(horizon, k, instance, fraction)| {
            let mut direction = vec![0.0; k];
            direction[0] = 1.0;
            let point_config = ExperimentConfig {
                instance,
                direction,
                growing_k: None,
                ..config.clone()
            };
            let report = run_experiment(&point_config)?;
            Ok(GrowingKPoint {
                horizon,
                num_arms: k,
                near_optimal_fraction: fraction,
                max_ratio_deviation: report.max_median_ratio_deviation(),
                report,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::policy::PolicyKind;

    fn base(growing_k: Option<GrowingKConfig>) -> ExperimentConfig {
        let arm = ArmSpec::gaussian(0.3, 1.0).unwrap();
        let mut c = ExperimentConfig::new(BanditInstance::new(vec![arm], 10).unwrap(), PolicyKind::Ucb, 4, 1);
        c.growing_k = growing_k;
        c
    }

    fn schedule(horizons: Vec<u64>, profile: GapProfile) -> GrowingKConfig {
        GrowingKConfig {
            delta_exponent: 0.5,
            horizons,
            min_fraction: 0.5,
            gap_profile: profile,
        }
    }

    #[test]
    fn arm_count_examples() {
        assert_eq!(arms_for_horizon(10_000, 0.5), 21);
        assert_eq!(arms_for_horizon(1_000, 0.5), 14);
        assert_eq!(arms_for_horizon(100_000, 0.5), 30);
        assert_eq!(arms_for_horizon(3, 0.99), 3);
        assert_eq!(arms_for_horizon(3, 0.5), 3);
        assert_eq!(arms_for_horizon(2, 0.001), 2);
    }

    #[test]
    fn equal_means_run_one_report_per_horizon() {
        let points = growing_k_suite(&base(Some(schedule(vec![100, 400], GapProfile::Equal)))).unwrap();
        assert_eq!(points.len(), 2);
        assert_eq!(points[0].num_arms, arms_for_horizon(100, 0.5));
        assert!(points.iter().all(|p| p.near_optimal_fraction == 1.0));
        assert_eq!(points[1].report.horizon, 400);
    }

    #[test]
    fn missing_schedule_is_refused() {
        let err = growing_k_suite(&base(None)).unwrap_err();
        assert!(matches!(err, Error::InvalidConfig { ref key, .. } if key == "growing_k"));
    }

    #[test]
    fn wide_gap_profile_fails_near_optimal_gate() {
        let g = schedule(vec![1_000], GapProfile::Linear { max_gap: 50.0 });
        let err = growing_k_suite(&base(Some(g))).unwrap_err();
        match err {
            Error::InvalidConfig { message, .. } => assert!(message.contains("near-optimal"), "{message}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn non_increasing_schedule_rejected() {
        let g = schedule(vec![1_000, 1_000], GapProfile::Equal);
        assert!(growing_k_suite(&base(Some(g))).unwrap_err().is_config_error());
    }
}
