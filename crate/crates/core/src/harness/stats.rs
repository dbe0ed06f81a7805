use serde::Serialize;

use crate::error::{Error, Result};
use crate::inference::{normal_cdf, ConfidenceInterval};

/// Kolmogorov-Smirnov distance `sup_x |F_n(x) - Φ(x)|` to the standard normal.
pub fn ks_distance(sample: &[f64]) -> Result<f64> {
    if sample.is_empty() {
        return Err(Error::Domain("KS distance of an empty sample".into()));
    }
    if sample.iter().any(|x| !x.is_finite()) {
        return Err(Error::Domain("KS distance needs finite values".into()));
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let cdf = normal_cdf(x);
            let above = (i + 1) as f64 / n - cdf;
            let below = cdf - i as f64 / n;
            above.max(below)
        })
        .fold(0.0, f64::max))
}

/// Fraction of intervals containing `truth`.
pub fn coverage_rate(intervals: &[ConfidenceInterval], truth: f64) -> Result<f64> {
    if intervals.is_empty() {
        return Err(Error::Domain("coverage of an empty list of intervals".into()));
    }
    let hits = intervals.iter().filter(|ci| ci.contains(truth)).count();
    Ok(hits as f64 / intervals.len() as f64)
}

/// Sample quantile with linear interpolation between order statistics.
pub fn quantile(sorted: &[f64], q: f64) -> f64 {
    debug_assert!(!sorted.is_empty());
    let pos = q.clamp(0.0, 1.0) * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    sorted[lo] + frac * (sorted[hi] - sorted[lo])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpreadSummary {
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
}

impl SpreadSummary {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mut sorted = values.to_vec();
        sorted.sort_by(f64::total_cmp);
        Some(SpreadSummary {
            q1: quantile(&sorted, 0.25),
            median: quantile(&sorted, 0.5),
            q3: quantile(&sorted, 0.75),
        })
    }

    pub fn iqr(&self) -> f64 {
        self.q3 - self.q1
    }
}
