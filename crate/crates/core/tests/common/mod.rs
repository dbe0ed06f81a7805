//! Test-only oracles. Nothing here calls into the solver under test.
#![allow(dead_code)]

use banditlab::{ArmSpec, BanditInstance};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Characteristic sum written out term by term:
/// `Σ_a (sqrt(T/n) + sqrt(T Δ_a² / (2 ln T)))^-2 - 1`.
pub fn textbook_residual(n: f64, gaps: &[f64], horizon: f64) -> f64 {
    gaps.iter()
        .map(|&g| {
            let gap_term = if g == 0.0 {
                0.0
            } else {
                (horizon * g * g / (2.0 * horizon.ln())).sqrt()
            };
            let d = (horizon / n).sqrt() + gap_term;
            1.0 / (d * d)
        })
        .sum::<f64>()
        - 1.0
}

fn argmin_on_grid(lo: f64, hi: f64, step: f64, gaps: &[f64], horizon: f64) -> f64 {
    let steps = ((hi - lo) / step).floor() as u64;
    let mut best = (lo, f64::INFINITY);
    for i in 0..=steps + 1 {
        let n = (lo + i as f64 * step).min(hi);
        let r = textbook_residual(n, gaps, horizon).abs();
        if r < best.1 {
            best = (n, r);
        }
    }
    best.0
}

/// Grid search for `n*` over `[T/K, T]`: every point at spacing 1, then every
/// point at spacing 1e-3 within one unit of the coarse minimizer of |residual|.
/// Equivalent to a full 1e-3 scan whenever the root lies between adjacent
/// coarse points, which holds for any monotone residual.
pub fn grid_n_star(gaps: &[f64], horizon: u64) -> f64 {
    let t = horizon as f64;
    let lo = t / gaps.len() as f64;
    let coarse = argmin_on_grid(lo, t, 1.0, gaps, t);
    argmin_on_grid((coarse - 1.0).max(lo), (coarse + 1.0).min(t), 1e-3, gaps, t)
}

/// Random instance with K <= max_arms, T <= max_horizon and gaps in [0, 1].
pub fn random_instance(rng: &mut ChaCha8Rng, max_arms: usize, max_horizon: u64) -> BanditInstance {
    let k = rng.random_range(1..=max_arms);
    let horizon = rng.random_range((k as u64).max(2)..=max_horizon);
    let mut means: Vec<f64> = (0..k).map(|_| 1.0 - rng.random_range(0.0..1.0)).collect();
    means[0] = 1.0;
    let arms = means.iter().map(|&m| ArmSpec::gaussian(m, 1.0).unwrap()).collect();
    BanditInstance::new(arms, horizon).unwrap()
}

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn gaussian_instance(means: &[f64], std_dev: f64, horizon: u64) -> BanditInstance {
    let arms = means.iter().map(|&m| ArmSpec::gaussian(m, std_dev).unwrap()).collect();
    BanditInstance::new(arms, horizon).unwrap()
}
