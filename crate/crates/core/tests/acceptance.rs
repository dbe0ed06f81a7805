//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails.
//!
//! Replication counts and the root seed are fixed here once. They are not
//! tuned to make any criterion pass.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::Instant;

use banditlab::harness::stats::SpreadSummary;
use banditlab::stability::concentration::lil_boundary;
use banditlab::stability::DEFAULT_TOLERANCE;
use banditlab::{
    characteristic_residual, confidence_interval, growing_k_suite, horizon_sweep, run_experiment, run_trajectory,
    solve_n_star, BanditInstance, ExperimentConfig, ExperimentReport, GapProfile, GrowingKConfig,
    InferenceResult, PolicyKind, PolicyState,
};
use common::{gaussian_instance, grid_n_star, random_instance, seeded};
use proptest::prelude::*;
use proptest::test_runner::{Config as RunnerConfig, TestCaseError, TestRunner};

const ROOT_SEED: u64 = 20_240_601;
const MU: [f64; 2] = [0.3, 0.3];
/// Arm whose statistics the two-arm criteria inspect (the second arm).
const ARM: usize = 1;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn two_arm_config(horizon: u64, policy: PolicyKind, replications: usize) -> ExperimentConfig {
    ExperimentConfig::new(gaussian_instance(&MU, 1.0, horizon), policy, replications, ROOT_SEED)
}

fn analytic_n_star() -> Outcome {
    let mut worst = 0.0f64;
    let mut exact = true;
    for (k, t) in [(2usize, 10_000u64), (3, 9_000), (7, 70_000), (10, 100_000), (5, 12)] {
        let p = solve_n_star(&gaussian_instance(&vec![0.3; k], 1.0, t), DEFAULT_TOLERANCE).unwrap();
        exact &= p.n_star == t as f64 / k as f64;
        worst = worst.max(p.residual.abs());
    }
    for t in [1u64, 2, 1_000, 100_000] {
        let p = solve_n_star(&gaussian_instance(&[0.3], 1.0, t), DEFAULT_TOLERANCE).unwrap();
        exact &= p.n_star == t as f64;
        worst = worst.max(p.residual.abs());
    }
    outcome(exact && worst < 1e-10, format!("n* = T/K and K=1 -> T exact: {exact}, max |residual| = {worst:.2e}"))
}

fn solver_oracle() -> Outcome {
    let mut rng = seeded(ROOT_SEED);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let inst = random_instance(&mut rng, 10, 100_000);
        let solved = solve_n_star(&inst, DEFAULT_TOLERANCE).unwrap().n_star;
        worst = worst.max((solved - grid_n_star(inst.gaps(), inst.horizon())).abs());
    }
    outcome(worst <= 1e-2, format!("100 instances, max |bisection - grid| = {worst:.3e} (tol 1e-2)"))
}

fn stability() -> Outcome {
    let horizons = [1_000, 10_000, 100_000];
    let reports = horizon_sweep(&two_arm_config(100, PolicyKind::Ucb, 2_000), &horizons).unwrap();
    let s: Vec<SpreadSummary> = reports.iter().map(|r| r.ratio_summary(ARM)).collect();
    let shrinking = s.windows(2).all(|w| w[1].iqr() < w[0].iqr());
    let pass = (0.9..=1.1).contains(&s[1].median) && (0.95..=1.05).contains(&s[2].median) && shrinking;
    outcome(
        pass,
        format!(
            "R=2000 medians {:.4}/{:.4}/{:.4}, IQR {:.4}/{:.4}/{:.4} at T=1e3/1e4/1e5",
            s[0].median,
            s[1].median,
            s[2].median,
            s[0].iqr(),
            s[1].iqr(),
            s[2].iqr()
        ),
    )
}

fn figure_contrast(ucb: &ExperimentReport) -> Outcome {
    let greedy = run_experiment(&two_arm_config(10_000, PolicyKind::EpsilonGreedy { epsilon: 0.1 }, 5_000)).unwrap();
    let ks_ucb = ucb.ks_distance[ARM].unwrap();
    let ks_greedy = greedy.ks_distance[ARM].unwrap();
    outcome(
        ks_ucb < 0.03 && ks_greedy > ks_ucb,
        format!("R=5000 T=1e4 KS ucb = {ks_ucb:.4} (< 0.03), eps-greedy = {ks_greedy:.4} (> ucb)"),
    )
}

fn coverage(ucb: &ExperimentReport) -> Outcome {
    let rate = ucb.coverage_rate.unwrap();
    outcome(
        (0.935..=0.965).contains(&rate),
        format!(
            "u=(0,1) alpha=0.05 R=5000: coverage = {rate:.4} +/- {:.4} over {} intervals, band [0.935, 0.965]",
            ucb.coverage_standard_error().unwrap(),
            ucb.coverage_evaluated
        ),
    )
}

fn consistency() -> Outcome {
    let report = run_experiment(&two_arm_config(100_000, PolicyKind::Ucb, 500)).unwrap();
    let fractions: Vec<f64> = (0..2)
        .map(|a| {
            let v = report.variance_estimates(a);
            v.iter().filter(|&&s| (s - 1.0).abs() <= 0.05).count() as f64 / v.len() as f64
        })
        .collect();
    outcome(
        fractions.iter().all(|&f| f >= 0.95),
        format!("T=1e5 R=500: share with |var_hat - 1| <= 5%: arm0 {:.3}, arm1 {:.3}", fractions[0], fractions[1]),
    )
}

fn growing_k() -> Outcome {
    let mut config = ExperimentConfig::new(gaussian_instance(&[0.3], 1.0, 10), PolicyKind::Ucb, 1_000, ROOT_SEED);
    config.growing_k = Some(GrowingKConfig {
        delta_exponent: 0.5,
        horizons: vec![1_000, 10_000, 100_000],
        min_fraction: 0.5,
        gap_profile: GapProfile::Equal,
    });
    let points = growing_k_suite(&config).unwrap();
    let dev: Vec<f64> = points.iter().map(|p| p.max_ratio_deviation).collect();
    let decreasing = dev.windows(2).all(|w| w[1] < w[0]);
    outcome(
        decreasing && dev[2] < 0.15,
        format!(
            "R=1000 K={}/{}/{}: max |median ratio - 1| = {:.4}/{:.4}/{:.4}",
            points[0].num_arms, points[1].num_arms, points[2].num_arms, dev[0], dev[1], dev[2]
        ),
    )
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> Result<(), TestCaseError> {
    if cond {
        Ok(())
    } else {
        Err(TestCaseError::fail(msg()))
    }
}

fn small_instance() -> impl Strategy<Value = BanditInstance> {
    (prop::collection::vec(-1.0f64..1.0, 1..6), 0u64..500).prop_map(|(means, extra)| {
        let t = means.len() as u64 + extra;
        gaussian_instance(&means, 1.0, t.max(2))
    })
}

fn invariants() -> Outcome {
    let mut runner = TestRunner::new(RunnerConfig { cases: 256, failure_persistence: None, ..RunnerConfig::default() });
    let mut failures = Vec::new();
    let mut record = |name: &str, r: Result<(), String>| {
        if let Err(e) = r {
            failures.push(format!("{name}: {e}"));
        }
    };

    record(
        "pull conservation",
        runner
            .run(&(small_instance(), any::<u64>(), 0.0f64..=1.0), |(inst, seed, eps)| {
                for kind in [PolicyKind::Ucb, PolicyKind::EpsilonGreedy { epsilon: eps }] {
                    let s = run_trajectory(&inst, kind, seed).unwrap();
                    check(s.total_pulls() == inst.horizon(), || format!("{:?}", s.pull_counts))?;
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    );

    record(
        "argmax tie determinism",
        runner
            .run(&(2usize..8, 1u64..50, -2.0f64..2.0, any::<prop::sample::Index>()), |(k, n, mean, first)| {
                let first = first.index(k);
                let sums: Vec<f64> =
                    (0..k).map(|a| if a >= first { mean * n as f64 } else { (mean - 1.0) * n as f64 }).collect();
                let state = PolicyState::from_counts(vec![n; k], sums, n * k as u64 + 1, PolicyKind::Ucb).unwrap();
                let mut rng = seeded(0);
                check(state.select_arm(&mut rng).unwrap() == first, || format!("expected arm {first}"))
            })
            .map_err(|e| e.to_string()),
    );

    record(
        "residual monotonicity",
        runner
            .run(&(small_instance(), 0.001f64..1.0, 0.001f64..1.0), |(inst, x, y)| {
                let t = inst.horizon() as f64;
                let (lo, hi) = if x < y { (x * t, y * t) } else { (y * t, x * t) };
                if lo == hi {
                    return Ok(());
                }
                let (rl, rh) =
                    (characteristic_residual(lo, &inst).unwrap(), characteristic_residual(hi, &inst).unwrap());
                check(rl < rh, || format!("r({lo}) = {rl} >= r({hi}) = {rh}"))
            })
            .map_err(|e| e.to_string()),
    );

    let inference = (1usize..5).prop_flat_map(|k| {
        (
            prop::collection::vec(-3.0f64..3.0, k),
            prop::collection::vec(0.01f64..4.0, k),
            prop::collection::vec(2u64..10_000, k),
            prop::collection::vec(-2.0f64..2.0, k),
            0usize..k,
        )
    });
    record(
        "CI symmetry and width monotonicity",
        runner
            .run(&(inference, 0.001f64..0.5), |((means, vars, counts, u, bump), alpha)| {
                let k = means.len();
                let result = InferenceResult {
                    means: means.clone(),
                    variances: vars.clone(),
                    standardized: vec![None; k],
                    pull_counts: counts.clone(),
                };
                let ci = confidence_interval(&result, &u, alpha).unwrap();
                let center: f64 = u.iter().zip(&means).map(|(a, b)| a * b).sum();
                let tol = 1e-9 * (1.0 + center.abs() + ci.half_width());
                check((ci.center() - center).abs() < tol, || "interval not centred on u . mean".into())?;
                check(((ci.upper - center) - (center - ci.lower)).abs() < tol, || "asymmetric".into())?;

                let mut more = result.clone();
                more.pull_counts[bump] *= 2;
                let narrower = confidence_interval(&more, &u, alpha).unwrap();
                check(narrower.half_width() <= ci.half_width() * (1.0 + 1e-12), || "width grew with n".into())?;
                let stricter = confidence_interval(&result, &u, alpha / 2.0).unwrap();
                check(stricter.half_width() >= ci.half_width(), || "width shrank as alpha fell".into())
            })
            .map_err(|e| e.to_string()),
    );

    record(
        "LIL boundary lambda-linearity",
        runner
            .run(&(1u64..10_000_000, 0.001f64..0.5, 0.01f64..10.0, 0.01f64..10.0), |(t, delta, lambda, c)| {
                let base = lil_boundary(t, delta, lambda).unwrap();
                let scaled = lil_boundary(t, delta, c * lambda).unwrap();
                check((scaled - c * base).abs() <= 1e-12 * scaled.abs().max(1.0), || {
                    format!("{scaled} vs {}", c * base)
                })
            })
            .map_err(|e| e.to_string()),
    );

    let detail = if failures.is_empty() {
        "5 properties x 256 cases: pull conservation, tie determinism, residual monotonicity, CI symmetry/width, LIL linearity".to_string()
    } else {
        failures.join("; ")
    };
    outcome(failures.is_empty(), detail)
}

fn run(name: &str, f: impl FnOnce() -> Outcome) -> bool {
    let start = Instant::now();
    let result = panic::catch_unwind(AssertUnwindSafe(f));
    let secs = start.elapsed().as_secs_f64();
    let (pass, detail) = match result {
        Ok(o) => (o.pass, o.detail),
        Err(e) => {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            (false, format!("panicked: {msg}"))
        }
    };
    println!("{} {name:<24} {detail} [{secs:.1}s]", if pass { "PASS" } else { "FAIL" });
    pass
}

fn main() -> ExitCode {
    // Shared by the normality and coverage criteria: same instance, same seed.
    let ucb = run_experiment(&two_arm_config(10_000, PolicyKind::Ucb, 5_000)).expect("UCB reference run");

    let results = [
        run("n*-analytic", analytic_n_star),
        run("solver-oracle", solver_oracle),
        run("stability", stability),
        run("normality-contrast", || figure_contrast(&ucb)),
        run("coverage", || coverage(&ucb)),
        run("variance-consistency", consistency),
        run("growing-k", growing_k),
        run("invariants", invariants),
    ];
    let passed = results.iter().filter(|&&p| p).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed == results.len() {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

