//! `banditlab` command line: run experiments described by a TOML config and
//! write reports stamped with the config hash and root seed.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use banditlab::config::TEMPLATE;
use banditlab::harness::export::{
    growing_aggregates, report_aggregates, summary_json, write_replications_csv, write_stability_csv, ReportHeader,
};
use banditlab::harness::growing::NEAR_OPTIMAL_GRID;
use banditlab::{
    growing_k_suite, horizon_sweep, near_optimal_set, run_experiment, solve_n_star, ConfigFile, ExperimentReport,
};
use clap::{Args, Parser, Subcommand};

/// Environment variable holding the number of worker threads.
const WORKERS_ENV: &str = "BANDITLAB_WORKERS";

#[derive(Parser)]
#[command(name = "banditlab", version, about = "UCB stability and inference experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured experiment; writes replications.csv and summary.json.
    Run(Common),
    /// Solve for n* and print predicted pulls and near-optimal sets.
    Nstar(Common),
    /// Run the interval experiment and print empirical coverage.
    Ci(Common),
    /// Stability ratio quartiles across `experiment.stability_horizons`.
    Stability(Common),
    /// Growing number of arms, one report per horizon in `[growing_k]`.
    GrowingK(Common),
    /// Print a documented configuration template.
    ExportSchema,
}

#[derive(Args)]
struct Common {
    /// Path to the TOML configuration.
    #[arg(short, long)]
    config: PathBuf,
    /// Directory for output files (created if missing).
    #[arg(short, long, default_value = ".")]
    out: PathBuf,
    /// Replace `experiment.root_seed`.
    #[arg(long)]
    seed: Option<u64>,
}

enum Failure {
    Config(String),
    Runtime(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Config(_) => 2,
            Failure::Runtime(_) => 3,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(m) => write!(f, "configuration error: {m}"),
            Failure::Runtime(m) => write!(f, "error: {m}"),
        }
    }
}

impl From<banditlab::Error> for Failure {
    fn from(e: banditlab::Error) -> Self {
        if e.is_config_error() {
            Failure::Config(e.to_string())
        } else {
            Failure::Runtime(e.to_string())
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Runtime(e.to_string())
    }
}

type CliResult<T = ()> = Result<T, Failure>;

struct Loaded {
    file: ConfigFile,
    header: ReportHeader,
    out: PathBuf,
}

fn load(args: &Common) -> CliResult<Loaded> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| Failure::Config(format!("cannot read {}: {e}", args.config.display())))?;
    let mut file = ConfigFile::parse(&text)?;
    if let Some(seed) = args.seed {
        file.experiment.root_seed = seed;
    }
    let header = ReportHeader {
        config_hash: file.hash(),
        root_seed: file.experiment.root_seed,
    };
    Ok(Loaded {
        file,
        header,
        out: args.out.clone(),
    })
}

impl Loaded {
    fn create(&self, name: &str) -> CliResult<io::BufWriter<fs::File>> {
        fs::create_dir_all(&self.out)?;
        let path = self.out.join(name);
        let file = fs::File::create(&path).map_err(|e| Failure::Runtime(format!("{}: {e}", path.display())))?;
        Ok(io::BufWriter::new(file))
    }

    fn write_json(&self, name: &str, aggregates: serde_json::Value) -> CliResult {
        let doc = summary_json(&self.header, &self.file.to_json(), aggregates);
        let mut w = self.create(name)?;
        serde_json::to_writer_pretty(&mut w, &doc).map_err(|e| Failure::Runtime(e.to_string()))?;
        writeln!(w)?;
        w.flush()?;
        Ok(())
    }

    fn print_header(&self) {
        println!("config_hash: {}", self.header.config_hash);
        println!("root_seed: {}", self.header.root_seed);
    }
}

fn cmd_run(args: &Common) -> CliResult {
    let cfg = load(args)?;
    let report = run_experiment(&cfg.file.experiment()?)?;
    let mut w = cfg.create("replications.csv")?;
    write_replications_csv(&mut w, &report, &cfg.header)?;
    w.flush()?;
    cfg.write_json("summary.json", report_aggregates(&report))?;
    cfg.print_header();
    print_report_line(&report);
    println!("wrote replications.csv and summary.json to {}", cfg.out.display());
    Ok(())
}

fn print_report_line(report: &ExperimentReport) {
    println!(
        "T = {}, K = {}, R = {}, n* = {}, mean regret = {}",
        report.horizon,
        report.num_arms,
        report.replications(),
        report.prediction.n_star,
        report.mean_regret
    );
}

fn cmd_nstar(args: &Common) -> CliResult {
    let cfg = load(args)?;
    let instance = cfg.file.instance()?;
    let prediction = solve_n_star(&instance, cfg.file.experiment.solver_tolerance)?;
    println!("T = {}, K = {}", instance.horizon(), instance.num_arms());
    println!("n* = {}", prediction.n_star);
    println!("residual = {:e}", prediction.residual);
    println!("arm\tgap\tpredicted_pulls");
    for (a, (gap, pulls)) in prediction.gaps.iter().zip(&prediction.predicted_pulls).enumerate() {
        println!("{a}\t{gap}\t{pulls}");
    }
    println!("B\t|S_B|/K\tS_B");
    for b in NEAR_OPTIMAL_GRID {
        let set = near_optimal_set(&prediction, b)?;
        let members: Vec<String> = set.members.iter().map(|m| m.to_string()).collect();
        println!("{b}\t{}\t{{{}}}", set.fraction, members.join(","));
    }
    Ok(())
}

fn cmd_ci(args: &Common) -> CliResult {
    let cfg = load(args)?;
    let config = cfg.file.experiment()?;
    let report = run_experiment(&config)?;
    cfg.write_json("ci.json", report_aggregates(&report))?;
    cfg.print_header();
    println!("direction = {:?}, truth u.mu = {}", config.direction, report.contrast_truth);
    match (report.coverage_rate, report.coverage_standard_error()) {
        (Some(rate), Some(se)) => println!(
            "coverage = {rate:.4} (se {se:.4}) at nominal {}, {} of {} replications evaluated",
            1.0 - config.alpha,
            report.coverage_evaluated,
            report.replications()
        ),
        _ => println!("coverage = n/a: every replication had a zero variance estimate on a weighted arm"),
    }
    Ok(())
}

fn cmd_stability(args: &Common) -> CliResult {
    let cfg = load(args)?;
    let horizons = cfg.file.stability_horizons()?;
    let reports = horizon_sweep(&cfg.file.experiment()?, &horizons)?;
    let mut w = cfg.create("stability.csv")?;
    write_stability_csv(&mut w, &reports, &cfg.header)?;
    w.flush()?;
    cfg.write_json(
        "stability.json",
        serde_json::Value::Array(reports.iter().map(report_aggregates).collect()),
    )?;
    cfg.print_header();
    println!("T\tarm\tpredicted\tmedian\tiqr");
    for r in &reports {
        for a in 0..r.num_arms {
            let s = r.ratio_summary(a);
            println!("{}\t{a}\t{:.2}\t{:.4}\t{:.4}", r.horizon, r.prediction.predicted_pulls[a], s.median, s.iqr());
        }
    }
    Ok(())
}

fn cmd_growing_k(args: &Common) -> CliResult {
    let cfg = load(args)?;
    let points = growing_k_suite(&cfg.file.experiment()?)?;
    for p in &points {
        let mut w = cfg.create(&format!("growing_k_T{}.csv", p.horizon))?;
        write_replications_csv(&mut w, &p.report, &cfg.header)?;
        w.flush()?;
    }
    let reports: Vec<ExperimentReport> = points.iter().map(|p| p.report.clone()).collect();
    let mut w = cfg.create("growing_k_stability.csv")?;
    write_stability_csv(&mut w, &reports, &cfg.header)?;
    w.flush()?;
    cfg.write_json("growing_k.json", growing_aggregates(&points))?;
    cfg.print_header();
    println!("T\tK\tnear_optimal_fraction\tmax_median_deviation");
    for p in &points {
        println!("{}\t{}\t{}\t{:.4}", p.horizon, p.num_arms, p.near_optimal_fraction, p.max_ratio_deviation);
    }
    Ok(())
}

fn configure_workers() -> CliResult {
    let Ok(raw) = std::env::var(WORKERS_ENV) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| Failure::Config(format!("{WORKERS_ENV} must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| Failure::Runtime(e.to_string()))
}

fn dispatch(command: Command) -> CliResult {
    configure_workers()?;
    match command {
        Command::Run(a) => cmd_run(&a),
        Command::Nstar(a) => cmd_nstar(&a),
        Command::Ci(a) => cmd_ci(&a),
        Command::Stability(a) => cmd_stability(&a),
        Command::GrowingK(a) => cmd_growing_k(&a),
        Command::ExportSchema => {
            print!("{TEMPLATE}");
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("banditlab: {f}");
            ExitCode::from(f.exit_code())
        }
    }
}
