//! Uniform-in-time deviation bounds for sub-Gaussian sample means.

use crate::error::{Error, Result};

/// Weight of `ln ln T` inside the good-event envelope.
pub const LOG_LOG_HORIZON_WEIGHT: f64 = 7.0;
/// Weight of `ln K` inside the good-event envelope.
pub const LOG_ARMS_WEIGHT: f64 = 3.0;

/// Iterated-logarithm boundary `λ sqrt( 9/(4t) · ln( (log2 4t)² / δ ) )`.
///
/// With probability at least `1 - 2δ` the running mean of i.i.d. zero-mean
/// λ-sub-Gaussian variables stays inside this boundary for every `t >= 1`.
pub fn lil_boundary(t: u64, delta: f64, lambda: f64) -> Result<f64> {
    if t == 0 {
        return Err(Error::Domain("lil boundary needs t >= 1".into()));
    }
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::Domain(format!("delta must lie in (0, 1), got {delta}")));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    let t = t as f64;
    let log2_4t = (4.0 * t).log2();
    Ok(lambda * (9.0 / (4.0 * t) * (log2_4t * log2_4t / delta).ln()).sqrt())
}

/// `g_T = sqrt(7 ln ln T + 3 ln K)`.
pub fn good_event_width(horizon: f64, num_arms: usize) -> Result<f64> {
    if !(horizon > std::f64::consts::E) {
        return Err(Error::Domain(format!(
            "good event needs T > e so that ln ln T > 0, got T = {horizon}"
        )));
    }
    if num_arms == 0 {
        return Err(Error::Domain("good event needs K >= 1".into()));
    }
    Ok((LOG_LOG_HORIZON_WEIGHT * horizon.ln().ln() + LOG_ARMS_WEIGHT * (num_arms as f64).ln()).sqrt())
}

/// Envelope `λ g_T / sqrt(t)` of the good event at sample size `t`.
pub fn good_event_envelope(horizon: f64, num_arms: usize, lambda: f64, t: u64) -> Result<f64> {
    if t == 0 {
        return Err(Error::Domain("good event envelope needs t >= 1".into()));
    }
    if !(lambda > 0.0) {
        return Err(Error::Domain(format!("lambda must be > 0, got {lambda}")));
    }
    Ok(lambda * good_event_width(horizon, num_arms)? / (t as f64).sqrt())
}
