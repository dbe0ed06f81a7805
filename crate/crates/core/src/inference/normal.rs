//! Standard normal CDF and quantile.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use crate::error::{Error, Result};

/// `Φ(x)`.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x * FRAC_1_SQRT_2)
}

// Rational approximation coefficients (relative error about 1.15e-9).
const A: [f64; 6] = [
    -3.969683028665376e+01,
    2.209460984245205e+02,
    -2.759285104469687e+02,
    1.383577518672690e+02,
    -3.066479806614716e+01,
    2.506628277459239e+00,
];
const B: [f64; 5] = [
    -5.447609879822406e+01,
    1.615858368580409e+02,
    -1.556989798598866e+02,
    6.680131188771972e+01,
    -1.328068155288572e+01,
];
const C: [f64; 6] = [
    -7.784894002430293e-03,
    -3.223964580411365e-01,
    -2.400758277161838e+00,
    -2.549732539343734e+00,
    4.374664141464968e+00,
    2.938163982698783e+00,
];
const D: [f64; 4] = [
    7.784695709041462e-03,
    3.224671290700398e-01,
    2.445134137142996e+00,
    3.754408661907416e+00,
];
const P_LOW: f64 = 0.02425;

fn tail(q: f64) -> f64 {
    (((((C[0] * q + C[1]) * q + C[2]) * q + C[3]) * q + C[4]) * q + C[5])
        / ((((D[0] * q + D[1]) * q + D[2]) * q + D[3]) * q + 1.0)
}

fn rational_quantile(p: f64) -> f64 {
    if p < P_LOW {
        tail((-2.0 * p.ln()).sqrt())
    } else if p <= 1.0 - P_LOW {
        let q = p - 0.5;
        let r = q * q;
        (((((A[0] * r + A[1]) * r + A[2]) * r + A[3]) * r + A[4]) * r + A[5]) * q
            / (((((B[0] * r + B[1]) * r + B[2]) * r + B[3]) * r + B[4]) * r + 1.0)
    } else {
        -tail((-2.0 * (1.0 - p).ln()).sqrt())
    }
}

/// Inverse of `Φ`: a rational first guess followed by one Halley step.
pub fn normal_quantile(p: f64) -> Result<f64> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::Domain(format!("normal quantile needs p in (0, 1), got {p}")));
    }
    let x = rational_quantile(p);
    let e = normal_cdf(x) - p;
    let u = e * (2.0 * PI).sqrt() * (0.5 * x * x).exp();
    Ok(x - u / (1.0 + 0.5 * x * u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;
    use statrs::distribution::{ContinuousCDF, Normal};

    #[test]
    fn quantile_examples() {
        assert_eq!(normal_quantile(0.5).unwrap(), 0.0);
        assert_abs_diff_eq!(normal_quantile(0.975).unwrap(), 1.959963984540054, epsilon = 1e-12);
        assert!(normal_quantile(0.0).is_err());
        assert!(normal_quantile(1.0).is_err());
        assert!(normal_quantile(f64::NAN).is_err());
    }

    #[test]
    fn cdf_known_values() {
        assert_eq!(normal_cdf(0.0), 0.5);
        assert_abs_diff_eq!(normal_cdf(1.959963984540054), 0.975, epsilon = 1e-15);
        assert_abs_diff_eq!(normal_cdf(-1.0), 0.15865525393145707, epsilon = 1e-15);
    }

    #[test]
    fn quantile_matches_independent_inverse() {
        let reference = Normal::standard();
        let mut p = 1e-10;
        while p < 1.0 {
            let ours = normal_quantile(p).unwrap();
            let theirs = reference.inverse_cdf(p);
            assert!((ours - theirs).abs() < 1e-8, "p = {p}: {ours} vs {theirs}");
            p = if p < 0.01 { p * 1.7 } else { p + 0.003 };
        }
    }

    proptest! {
        #[test]
        fn quantile_antisymmetric(p in 1e-9f64..0.5) {
            let lo = normal_quantile(p).unwrap();
            let hi = normal_quantile(1.0 - p).unwrap();
            prop_assert!((lo + hi).abs() < 1e-8);
        }

        #[test]
        fn quantile_inverts_cdf(x in -8.0f64..4.0) {
            // Above 4 the spacing of doubles near 1 limits the round trip.
            let p = normal_cdf(x);
            let back = normal_quantile(p).unwrap();
            prop_assert!((back - x).abs() < 1e-9, "{} -> {} -> {}", x, p, back);
        }
    }
}
