//! Bandit instances, reward distributions and per-trajectory bookkeeping.

use std::f64::consts::TAU;

use rand::RngCore;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Reward distribution family of an arm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Family {
    Gaussian,
    Bernoulli,
    BoundedUniform { low: f64, high: f64 },
}

/// One arm: its reward law and the moments derived from it.
///
/// Fields are private so the moments always agree with the family.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ArmSpec {
    mean: f64,
    variance: f64,
    sub_gaussian_param: f64,
    family: Family,
}

impl ArmSpec {
    /// Gaussian arm; the sub-Gaussian parameter equals `std_dev`.
    pub fn gaussian(mean: f64, std_dev: f64) -> Result<Self> {
        if !mean.is_finite() {
            return Err(Error::config("mean", "must be finite"));
        }
        if !(std_dev.is_finite() && std_dev > 0.0) {
            return Err(Error::config("std_dev", "must be finite and > 0"));
        }
        Ok(ArmSpec {
            mean,
            variance: std_dev * std_dev,
            sub_gaussian_param: std_dev,
            family: Family::Gaussian,
        })
    }

    /// Bernoulli(p) arm; 1/2-sub-Gaussian for every p.
    pub fn bernoulli(p: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::config("p", "must lie in [0, 1]"));
        }
        Ok(ArmSpec {
            mean: p,
            variance: p * (1.0 - p),
            sub_gaussian_param: 0.5,
            family: Family::Bernoulli,
        })
    }

    /// Uniform arm on `[low, high]`; (high - low)/2-sub-Gaussian.
    pub fn bounded_uniform(low: f64, high: f64) -> Result<Self> {
        if !(low.is_finite() && high.is_finite() && low < high) {
            return Err(Error::config("low/high", "need finite bounds with low < high"));
        }
        let width = high - low;
        Ok(ArmSpec {
            mean: 0.5 * (low + high),
            variance: width * width / 12.0,
            sub_gaussian_param: 0.5 * width,
            family: Family::BoundedUniform { low, high },
        })
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    pub fn variance(&self) -> f64 {
        self.variance
    }

    pub fn sub_gaussian_param(&self) -> f64 {
        self.sub_gaussian_param
    }

    pub fn family(&self) -> Family {
        self.family
    }

    /// The same arm with its mean moved to `mean` (uniform arms keep their width).
    pub fn with_mean(&self, mean: f64) -> Result<Self> {
        match self.family {
            Family::Gaussian => ArmSpec::gaussian(mean, self.sub_gaussian_param),
            Family::Bernoulli => ArmSpec::bernoulli(mean),
            Family::BoundedUniform { low, high } => {
                let half = 0.5 * (high - low);
                ArmSpec::bounded_uniform(mean - half, mean + half)
            }
        }
    }
}

/// Uniform draw in `[0, 1)` from the top 53 bits of one `u64`.
#[inline]
fn unit_f64<R: RngCore + ?Sized>(rng: &mut R) -> f64 {
    (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
}

/// Draw one reward from `arm`.
///
/// Consumes a fixed number of `u64`s per call: two for Gaussian arms
/// (Box-Muller, cosine branch only) and one otherwise.
pub fn sample_reward<R: RngCore + ?Sized>(arm: &ArmSpec, rng: &mut R) -> f64 {
    match arm.family {
        Family::Gaussian => {
            let u1 = 1.0 - unit_f64(rng); // (0, 1]
            let u2 = unit_f64(rng);
            let z = (-2.0 * u1.ln()).sqrt() * (TAU * u2).cos();
            arm.mean + arm.sub_gaussian_param * z
        }
        Family::Bernoulli => {
            if unit_f64(rng) < arm.mean {
                1.0
            } else {
                0.0
            }
        }
        Family::BoundedUniform { low, high } => low + (high - low) * unit_f64(rng),
    }
}

/// Gaps `max_k mu_k - mu_a`.
pub fn compute_gaps(means: &[f64]) -> Vec<f64> {
    let best = means.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    means.iter().map(|&m| best - m).collect()
}

/// A K-armed bandit with a known horizon T.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BanditInstance {
    arms: Vec<ArmSpec>,
    horizon: u64,
    optimal_index: usize,
    gaps: Vec<f64>,
}

impl BanditInstance {
    pub fn new(arms: Vec<ArmSpec>, horizon: u64) -> Result<Self> {
        if arms.is_empty() {
            return Err(Error::config("instance.arms", "need at least one arm"));
        }
        if horizon < arms.len() as u64 {
            return Err(Error::config(
                "instance.horizon",
                format!("horizon {} is smaller than the number of arms {}", horizon, arms.len()),
            ));
        }
        let means: Vec<f64> = arms.iter().map(ArmSpec::mean).collect();
        let gaps = compute_gaps(&means);
        // Lowest index among the maximizers.
        let optimal_index = gaps.iter().position(|&g| g == 0.0).unwrap_or(0);
        Ok(BanditInstance {
            arms,
            horizon,
            optimal_index,
            gaps,
        })
    }

    /// Check that every arm is `bound`-sub-Gaussian.
    pub fn check_sub_gaussian_bound(&self, bound: f64) -> Result<()> {
        match self
            .arms
            .iter()
            .position(|arm| arm.sub_gaussian_param() > bound)
        {
            Some(a) => Err(Error::config(
                "instance.sub_gaussian_bound",
                format!(
                    "arm {} has sub-Gaussian parameter {} above the bound {}",
                    a,
                    self.arms[a].sub_gaussian_param(),
                    bound
                ),
            )),
            None => Ok(()),
        }
    }

    pub fn arms(&self) -> &[ArmSpec] {
        &self.arms
    }

    pub fn num_arms(&self) -> usize {
        self.arms.len()
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn optimal_index(&self) -> usize {
        self.optimal_index
    }

    pub fn gaps(&self) -> &[f64] {
        &self.gaps
    }

    pub fn means(&self) -> Vec<f64> {
        self.arms.iter().map(ArmSpec::mean).collect()
    }

    /// Same arms, different horizon.
    pub fn with_horizon(&self, horizon: u64) -> Result<Self> {
        BanditInstance::new(self.arms.clone(), horizon)
    }
}

/// Outcome of a single trajectory of `T` pulls.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectorySummary {
    pub pull_counts: Vec<u64>,
    pub sample_means: Vec<f64>,
    /// Divide-by-n variance of each arm's rewards.
    pub sample_vars: Vec<f64>,
    pub total_reward: f64,
    pub seed: u64,
}

impl TrajectorySummary {
    pub fn total_pulls(&self) -> u64 {
        self.pull_counts.iter().sum()
    }
}

/// Pseudo-regret `sum_a n_{a,T} * gap_a`.
pub fn regret(instance: &BanditInstance, summary: &TrajectorySummary) -> f64 {
    instance
        .gaps()
        .iter()
        .zip(&summary.pull_counts)
        .map(|(&gap, &n)| n as f64 * gap)
        .sum()
}
