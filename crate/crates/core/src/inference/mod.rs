//! Post-trajectory inference: plug-in variances, studentized arm means and
//! normal confidence intervals for linear contrasts `u · μ`.

pub mod normal;

use serde::{Deserialize, Serialize};

use crate::bandit::TrajectorySummary;
use crate::error::{Error, Result};

pub use normal::{normal_cdf, normal_quantile};

/// Divide-by-n variance of one arm's rewards.
pub fn variance_estimate(rewards: &[f64]) -> Result<f64> {
    if rewards.is_empty() {
        return Err(Error::ContractViolation(
            "variance estimate of an arm that was never pulled".into(),
        ));
    }
    let n = rewards.len() as f64;
    let mean = rewards.iter().sum::<f64>() / n;
    Ok(rewards.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n)
}

/// `sqrt(n) (mean - true_mean) / sqrt(var_hat)`.
pub fn standardized_statistic(mean: f64, true_mean: f64, var_hat: f64, n: u64) -> Result<f64> {
    if n == 0 {
        return Err(Error::ContractViolation("standardized statistic with n = 0".into()));
    }
    if !(var_hat > 0.0) {
        return Err(Error::DegenerateSample { arm: None });
    }
    Ok((n as f64).sqrt() * (mean - true_mean) / var_hat.sqrt())
}

/// Per-arm inference quantities from one trajectory.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct InferenceResult {
    pub means: Vec<f64>,
    pub variances: Vec<f64>,
    /// `None` where the arm's variance estimate is zero.
    pub standardized: Vec<Option<f64>>,
    pub pull_counts: Vec<u64>,
}

impl InferenceResult {
    /// Studentize each arm mean against the true means `mu`.
    pub fn from_summary(summary: &TrajectorySummary, mu: &[f64]) -> Result<Self> {
        if mu.len() != summary.pull_counts.len() {
            return Err(Error::ContractViolation(format!(
                "{} true means for {} arms",
                mu.len(),
                summary.pull_counts.len()
            )));
        }
        let standardized = summary
            .sample_means
            .iter()
            .zip(&summary.sample_vars)
            .zip(&summary.pull_counts)
            .zip(mu)
            .map(|(((&mean, &var), &n), &m)| match standardized_statistic(mean, m, var, n) {
                Ok(z) => Ok(Some(z)),
                Err(Error::DegenerateSample { .. }) => Ok(None),
                Err(e) => Err(e),
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(InferenceResult {
            means: summary.sample_means.clone(),
            variances: summary.sample_vars.clone(),
            standardized,
            pull_counts: summary.pull_counts.clone(),
        })
    }

    pub fn num_arms(&self) -> usize {
        self.means.len()
    }
}

/// How the half-width of the linear-contrast interval is formed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CiFormula {
    /// `z · sqrt(Σ σ̂_a² u_a² / n_a)`, the standard error of `u · X̄`.
    #[default]
    StandardError,
    /// `z · Σ σ̂_a u_a² / n_a` with `σ̂_a` the estimated standard deviation.
    /// Kept only to compare against the corrected form; it is not a valid interval.
    Unrooted,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConfidenceInterval {
    pub lower: f64,
    pub upper: f64,
    pub direction: Vec<f64>,
    /// Nominal coverage `1 - α`.
    pub level: f64,
}

impl ConfidenceInterval {
    pub fn contains(&self, value: f64) -> bool {
        self.lower <= value && value <= self.upper
    }

    pub fn center(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }

    pub fn half_width(&self) -> f64 {
        0.5 * (self.upper - self.lower)
    }
}

/// Level `1 - alpha` interval for `u · μ` centred at `u · X̄_T`.
pub fn confidence_interval(result: &InferenceResult, u: &[f64], alpha: f64) -> Result<ConfidenceInterval> {
    confidence_interval_with(result, u, alpha, CiFormula::StandardError)
}

pub fn confidence_interval_with(
    result: &InferenceResult,
    u: &[f64],
    alpha: f64,
    formula: CiFormula,
) -> Result<ConfidenceInterval> {
    if u.len() != result.num_arms() {
        return Err(Error::ContractViolation(format!(
            "direction has {} entries for {} arms",
            u.len(),
            result.num_arms()
        )));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha must lie in (0, 1), got {alpha}")));
    }

    let mut center = 0.0;
    let mut spread = 0.0;
    for (a, &ua) in u.iter().enumerate() {
        if ua == 0.0 {
            continue;
        }
        let n = result.pull_counts[a];
        if n == 0 {
            return Err(Error::ContractViolation(format!("arm {a} was never pulled")));
        }
        let var = result.variances[a];
        if !(var > 0.0) {
            return Err(Error::DegenerateSample { arm: Some(a) });
        }
        center += ua * result.means[a];
        spread += match formula {
            CiFormula::StandardError => var * ua * ua / n as f64,
            CiFormula::Unrooted => var.sqrt() * ua * ua / n as f64,
        };
    }
    let z = normal_quantile(1.0 - 0.5 * alpha)?;
    let half = match formula {
        CiFormula::StandardError => z * spread.sqrt(),
        CiFormula::Unrooted => z * spread,
    };
    Ok(ConfidenceInterval {
        lower: center - half,
        upper: center + half,
        direction: u.to_vec(),
        level: 1.0 - alpha,
    })
}
