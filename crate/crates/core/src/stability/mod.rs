//! Deterministic arm-pull limits for UCB.
//!
//! For horizon `T` and gaps `Δ_a`, the optimal-arm pull limit `n*` is the
//! unique root in `[T/K, T]` of
//!
//! ```text
//! Σ_a ( sqrt(T/n) + sqrt(T Δ_a² / (2 ln T)) )^-2 = 1
//! ```
//!
//! and arm `a` is predicted to be pulled `(1/sqrt(n*) + sqrt(Δ_a² / (2 ln T)))^-2`
//! times. All logarithms are natural.

pub mod concentration;

use serde::Serialize;

use crate::bandit::BanditInstance;
use crate::error::{Error, Result};

/// Default residual tolerance for [`solve_n_star`].
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

const MAX_BISECTION_STEPS: usize = 2_000;

/// `sqrt(Δ² / (2 ln T))`, taken as zero when `Δ = 0` so that `T = 1` stays finite.
#[inline]
fn gap_scale(gap: f64, log_horizon: f64) -> f64 {
    if gap == 0.0 {
        0.0
    } else {
        (gap * gap / (2.0 * log_horizon)).sqrt()
    }
}

/// Residual of the characteristic equation for explicit gaps.
///
/// Evaluated as `Σ_a (n/T) / (1 + sqrt(n) * s_a)^2 - 1` with `s_a = sqrt(Δ_a²/(2 ln T))`,
/// which is algebraically the same sum and avoids the `T/n` blow-up.
pub fn residual_for_gaps(n: f64, gaps: &[f64], horizon: f64) -> Result<f64> {
    if !(n > 0.0) {
        return Err(Error::Domain(format!("characteristic residual needs n > 0, got {n}")));
    }
    let log_horizon = horizon.ln();
    let root_n = n.sqrt();
    let frac = n / horizon;
    let sum: f64 = gaps
        .iter()
        .map(|&gap| {
            let d = 1.0 + root_n * gap_scale(gap, log_horizon);
            frac / (d * d)
        })
        .sum();
    Ok(sum - 1.0)
}

/// Residual of the characteristic equation at `n` for `instance`.
///
/// Strictly increasing in `n`; zero at `n*`.
pub fn characteristic_residual(n: f64, instance: &BanditInstance) -> Result<f64> {
    residual_for_gaps(n, instance.gaps(), instance.horizon() as f64)
}

/// Predicted pull counts `(1/sqrt(n*) + sqrt(Δ_a²/(2 ln T)))^-2`.
pub fn predicted_pulls(n_star: f64, gaps: &[f64], horizon: u64) -> Vec<f64> {
    let log_horizon = (horizon as f64).ln();
    let inv_root = 1.0 / n_star.sqrt();
    gaps.iter()
        .map(|&gap| {
            if gap == 0.0 {
                n_star
            } else {
                let d = inv_root + gap_scale(gap, log_horizon);
                1.0 / (d * d)
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StabilityPrediction {
    pub n_star: f64,
    pub predicted_pulls: Vec<f64>,
    pub horizon: u64,
    pub gaps: Vec<f64>,
    /// Residual of the characteristic equation at `n_star`.
    pub residual: f64,
}

/// Solve for `n*` by bisection on `[T/K, T]` until `|residual| <= tol`.
pub fn solve_n_star(instance: &BanditInstance, tol: f64) -> Result<StabilityPrediction> {
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tolerance must be > 0, got {tol}")));
    }
    let horizon = instance.horizon() as f64;
    let gaps = instance.gaps();
    let k = gaps.len() as f64;
    let residual = |n: f64| residual_for_gaps(n, gaps, horizon);

    let mut lo = horizon / k;
    let mut hi = horizon;
    let r_lo = residual(lo)?;
    let r_hi = residual(hi)?;

    let finish = |n_star: f64, r: f64| StabilityPrediction {
        n_star,
        predicted_pulls: predicted_pulls(n_star, gaps, instance.horizon()),
        horizon: instance.horizon(),
        gaps: gaps.to_vec(),
        residual: r,
    };

    if r_lo.abs() <= tol {
        return Ok(finish(lo, r_lo));
    }
    if r_hi.abs() <= tol {
        return Ok(finish(hi, r_hi));
    }
    if r_lo > 0.0 || r_hi < 0.0 {
        return Err(Error::Internal(format!(
            "bracket [{lo}, {hi}] does not contain a root: residuals {r_lo}, {r_hi}"
        )));
    }

    for _ in 0..MAX_BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        let r = residual(mid)?;
        if r.abs() <= tol {
            return Ok(finish(mid, r));
        }
        if mid <= lo || mid >= hi {
            // Bracket exhausted at floating-point resolution.
            return Err(Error::Internal(format!(
                "tolerance {tol} not reachable; best residual {r} at n = {mid}"
            )));
        }
        if r < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::Internal("bisection did not converge".into()))
}

/// Arms whose scaled gap `sqrt(n* Δ_a² / (2 ln T))` is at most `threshold`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NearOptimalSet {
    pub threshold: f64,
    pub members: Vec<usize>,
    /// `|members| / K`
    pub fraction: f64,
}

impl NearOptimalSet {
    pub fn contains(&self, arm: usize) -> bool {
        self.members.binary_search(&arm).is_ok()
    }
}

pub fn near_optimal_set(prediction: &StabilityPrediction, threshold: f64) -> Result<NearOptimalSet> {
    if !(threshold > 0.0) {
        return Err(Error::Domain(format!("near-optimal threshold must be > 0, got {threshold}")));
    }
    let log_horizon = (prediction.horizon as f64).ln();
    let root_n = prediction.n_star.sqrt();
    let members: Vec<usize> = prediction
        .gaps
        .iter()
        .enumerate()
        .filter(|&(_, &gap)| root_n * gap_scale(gap, log_horizon) <= threshold)
        .map(|(a, _)| a)
        .collect();
    let fraction = members.len() as f64 / prediction.gaps.len() as f64;
    Ok(NearOptimalSet {
        threshold,
        members,
        fraction,
    })
}
