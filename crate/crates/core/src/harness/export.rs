//! CSV and JSON exports of experiment reports.
//!
//! Replication CSV (one row per replication per arm):
//!
//! ```text
//! # schema: banditlab-report/1
//! # config_hash: <sha256 hex>
//! # root_seed: <u64>
//! replication,arm,n_aT,mean,var_hat,standardized,in_ci
//! ```
//!
//! `standardized` is empty when the arm's variance estimate is zero and
//! `in_ci` (1 or 0) is empty when no interval could be formed. Floats use the
//! shortest representation that round-trips. The column order is fixed.

use std::io::{self, Write};

use serde::Serialize;
use serde_json::{json, Value};

use super::{ExperimentReport, GrowingKPoint};

pub const SCHEMA_VERSION: &str = "banditlab-report/1";

pub const REPLICATION_COLUMNS: [&str; 7] =
    ["replication", "arm", "n_aT", "mean", "var_hat", "standardized", "in_ci"];

pub const STABILITY_COLUMNS: [&str; 8] =
    ["horizon", "arm", "predicted_pulls", "q1", "median", "q3", "iqr", "ks_distance"];

/// Provenance stamped on every output file.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReportHeader {
    pub config_hash: String,
    pub root_seed: u64,
}

fn write_header<W: Write>(out: &mut W, header: &ReportHeader) -> io::Result<()> {
    writeln!(out, "# schema: {SCHEMA_VERSION}")?;
    writeln!(out, "# config_hash: {}", header.config_hash)?;
    writeln!(out, "# root_seed: {}", header.root_seed)
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

pub fn write_replications_csv<W: Write>(
    out: &mut W,
    report: &ExperimentReport,
    header: &ReportHeader,
) -> io::Result<()> {
    write_header(out, header)?;
    writeln!(out, "{}", REPLICATION_COLUMNS.join(","))?;
    for row in &report.rows {
        let in_ci = row.covers(report.contrast_truth).map(u8::from);
        let s = &row.summary;
        for arm in 0..report.num_arms {
            writeln!(
                out,
                "{},{},{},{},{},{},{}",
                row.replication,
                arm,
                s.pull_counts[arm],
                s.sample_means[arm],
                s.sample_vars[arm],
                opt(row.standardized[arm]),
                opt(in_ci),
            )?;
        }
    }
    Ok(())
}

/// Per-horizon, per-arm quartiles of the stability ratio.
pub fn write_stability_csv<W: Write>(
    out: &mut W,
    reports: &[ExperimentReport],
    header: &ReportHeader,
) -> io::Result<()> {
    write_header(out, header)?;
    writeln!(out, "{}", STABILITY_COLUMNS.join(","))?;
    for report in reports {
        for arm in 0..report.num_arms {
            let s = report.ratio_summary(arm);
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                report.horizon,
                arm,
                report.prediction.predicted_pulls[arm],
                s.q1,
                s.median,
                s.q3,
                s.iqr(),
                opt(report.ks_distance[arm]),
            )?;
        }
    }
    Ok(())
}

/// Aggregates of one report, without per-replication rows.
pub fn report_aggregates(report: &ExperimentReport) -> Value {
    let arms: Vec<Value> = (0..report.num_arms)
        .map(|a| {
            let s = report.ratio_summary(a);
            json!({
                "arm": a,
                "predicted_pulls": report.prediction.predicted_pulls[a],
                "stability_ratio": { "q1": s.q1, "median": s.median, "q3": s.q3, "iqr": s.iqr() },
                "ks_distance": report.ks_distance[a],
                "degenerate": report.degenerate_counts[a],
            })
        })
        .collect();
    json!({
        "horizon": report.horizon,
        "num_arms": report.num_arms,
        "replications": report.replications(),
        "policy": report.policy,
        "n_star": report.prediction.n_star,
        "residual": report.prediction.residual,
        "contrast_truth": report.contrast_truth,
        "coverage": {
            "rate": report.coverage_rate,
            "evaluated": report.coverage_evaluated,
            "standard_error": report.coverage_standard_error(),
        },
        "mean_regret": report.mean_regret,
        "arms": arms,
    })
}

/// JSON summary document: provenance, config echo and aggregates.
pub fn summary_json(header: &ReportHeader, config: &Value, aggregates: Value) -> Value {
    json!({
        "schema": SCHEMA_VERSION,
        "config_hash": header.config_hash,
        "root_seed": header.root_seed,
        "config": config,
        "results": aggregates,
    })
}

pub fn growing_aggregates(points: &[GrowingKPoint]) -> Value {
    Value::Array(
        points
            .iter()
            .map(|p| {
                json!({
                    "horizon": p.horizon,
                    "num_arms": p.num_arms,
                    "near_optimal_fraction": p.near_optimal_fraction,
                    "max_ratio_deviation": p.max_ratio_deviation,
                    "report": report_aggregates(&p.report),
                })
            })
            .collect(),
    )
}
