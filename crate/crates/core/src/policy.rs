//! Horizon-aware UCB and the epsilon-greedy baseline.
//!
//! Both policies pull every arm once in index order, then choose by argmax.
//! Ties go to the lowest index. The UCB bonus uses `ln T` of the known
//! horizon, not of the current round.

use rand::{Rng, RngCore};
use serde::{Deserialize, Serialize};

use crate::bandit::{sample_reward, BanditInstance, TrajectorySummary};
use crate::error::{Error, Result};
use crate::rng::ReplicationStreams;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PolicyKind {
    Ucb,
    EpsilonGreedy { epsilon: f64 },
}

impl PolicyKind {
    pub fn validate(&self) -> Result<()> {
        match *self {
            PolicyKind::Ucb => Ok(()),
            PolicyKind::EpsilonGreedy { epsilon } if (0.0..=1.0).contains(&epsilon) => Ok(()),
            PolicyKind::EpsilonGreedy { .. } => {
                Err(Error::config("policy.epsilon", "must lie in [0, 1]"))
            }
        }
    }
}

#[inline]
fn ucb_value(sum: f64, n: u64, two_log_horizon: f64) -> f64 {
    let n = n as f64;
    sum / n + (two_log_horizon / n).sqrt()
}

/// Index of the largest value; the first one wins ties.
#[inline]
fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}

/// Evolving state of one policy run.
#[derive(Debug, Clone, PartialEq)]
pub struct PolicyState {
    round: u64,
    pull_counts: Vec<u64>,
    reward_sums: Vec<f64>,
    horizon: u64,
    kind: PolicyKind,
    two_log_horizon: f64,
    // Per-arm score used by argmax: UCB index or sample mean. Only the pulled
    // arm's entry changes per round.
    scores: Vec<f64>,
}

impl PolicyState {
    pub fn new(num_arms: usize, horizon: u64, kind: PolicyKind) -> Result<Self> {
        kind.validate()?;
        if num_arms == 0 {
            return Err(Error::config("instance.arms", "need at least one arm"));
        }
        if horizon < num_arms as u64 {
            return Err(Error::config("instance.horizon", "horizon must be at least K"));
        }
        Ok(PolicyState {
            round: 0,
            pull_counts: vec![0; num_arms],
            reward_sums: vec![0.0; num_arms],
            horizon,
            kind,
            two_log_horizon: 2.0 * (horizon as f64).ln(),
            scores: vec![f64::NEG_INFINITY; num_arms],
        })
    }

    /// Build a state from raw counters, e.g. to inspect a decision in isolation.
    pub fn from_counts(
        pull_counts: Vec<u64>,
        reward_sums: Vec<f64>,
        horizon: u64,
        kind: PolicyKind,
    ) -> Result<Self> {
        if pull_counts.len() != reward_sums.len() {
            return Err(Error::ContractViolation(
                "pull_counts and reward_sums differ in length".into(),
            ));
        }
        let mut state = PolicyState::new(pull_counts.len(), horizon, kind)?;
        state.round = pull_counts.iter().sum();
        if state.round > horizon {
            return Err(Error::ContractViolation("more pulls than the horizon".into()));
        }
        state.pull_counts = pull_counts;
        state.reward_sums = reward_sums;
        for arm in 0..state.num_arms() {
            state.refresh_score(arm);
        }
        Ok(state)
    }

    pub fn num_arms(&self) -> usize {
        self.pull_counts.len()
    }

    pub fn round(&self) -> u64 {
        self.round
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn kind(&self) -> PolicyKind {
        self.kind
    }

    pub fn pull_counts(&self) -> &[u64] {
        &self.pull_counts
    }

    pub fn reward_sums(&self) -> &[f64] {
        &self.reward_sums
    }

    pub fn initialized(&self) -> bool {
        self.round >= self.num_arms() as u64
    }

    fn refresh_score(&mut self, arm: usize) {
        let n = self.pull_counts[arm];
        self.scores[arm] = if n == 0 {
            f64::NEG_INFINITY
        } else {
            match self.kind {
                PolicyKind::Ucb => ucb_value(self.reward_sums[arm], n, self.two_log_horizon),
                PolicyKind::EpsilonGreedy { .. } => self.reward_sums[arm] / n as f64,
            }
        };
    }

    /// `mean_a + sqrt(2 ln T / n_a)`.
    pub fn ucb_index(&self, arm: usize) -> Result<f64> {
        if arm >= self.num_arms() {
            return Err(Error::ContractViolation(format!("arm {arm} out of range")));
        }
        if !self.initialized() || self.pull_counts[arm] == 0 {
            return Err(Error::ContractViolation(
                "UCB index queried before every arm was pulled once".into(),
            ));
        }
        Ok(ucb_value(
            self.reward_sums[arm],
            self.pull_counts[arm],
            self.two_log_horizon,
        ))
    }

    /// Arm to pull in the next round.
    pub fn select_arm<R: RngCore + ?Sized>(&self, rng: &mut R) -> Result<usize> {
        if self.round >= self.horizon {
            return Err(Error::ContractViolation(format!(
                "select_arm called after the horizon T = {}",
                self.horizon
            )));
        }
        if !self.initialized() {
            return Ok(self.round as usize);
        }
        match self.kind {
            PolicyKind::Ucb => Ok(argmax(&self.scores)),
            PolicyKind::EpsilonGreedy { epsilon } => {
                if rng.random::<f64>() < epsilon {
                    Ok(rng.random_range(0..self.num_arms()))
                } else {
                    Ok(argmax(&self.scores))
                }
            }
        }
    }

    pub fn update(&mut self, arm: usize, reward: f64) -> Result<()> {
        if arm >= self.num_arms() {
            return Err(Error::ContractViolation(format!("arm {arm} out of range")));
        }
        if self.round >= self.horizon {
            return Err(Error::ContractViolation("update past the horizon".into()));
        }
        self.pull_counts[arm] += 1;
        self.reward_sums[arm] += reward;
        self.round += 1;
        self.refresh_score(arm);
        Ok(())
    }
}

/// Welford accumulator for one arm's rewards.
#[derive(Debug, Clone, Copy, Default)]
struct RunningMoments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl RunningMoments {
    #[inline]
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn population_variance(&self) -> f64 {
        if self.n == 0 {
            0.0
        } else {
            (self.m2 / self.n as f64).max(0.0)
        }
    }
}

/// Run `kind` on `instance` for exactly `T` pulls.
pub fn run_trajectory(
    instance: &BanditInstance,
    kind: PolicyKind,
    seed: u64,
) -> Result<TrajectorySummary> {
    let k = instance.num_arms();
    let mut state = PolicyState::new(k, instance.horizon(), kind)?;
    let mut streams = ReplicationStreams::new(seed, k);
    let mut moments = vec![RunningMoments::default(); k];
    let mut total_reward = 0.0;

    while state.round() < state.horizon() {
        let arm = state.select_arm(&mut streams.policy)?;
        let reward = sample_reward(&instance.arms()[arm], &mut streams.arms[arm]);
        state.update(arm, reward)?;
        moments[arm].push(reward);
        total_reward += reward;
    }

    Ok(TrajectorySummary {
        pull_counts: state.pull_counts.clone(),
        sample_means: moments.iter().map(|m| m.mean).collect(),
        sample_vars: moments.iter().map(RunningMoments::population_variance).collect(),
        total_reward,
        seed,
    })
}
