//! `kelly`: solve, certify, dominance, simulate, and backtest subcommands
//! over JSON scenario models and CSV price histories.
//!
//! Exit codes: 0 on success (a failed certificate is still a successful
//! query), 1 when a computation cannot proceed on valid inputs, 2 for
//! unreadable or invalid inputs.

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use kelly_core::asymptotics::{check_asymptotic_bound, simulate_relative_paths};
use kelly_core::backtest::{
    load_prices, run_backtest, write_result_csv, BacktestConfig, FallbackPolicy,
};
use kelly_core::certificates::{
    find_dominant, kkt_certify, DominanceReport, OptimalityCertificate, DEFAULT_CERT_TOL,
    DEFAULT_SUPPORT_EPS,
};
use kelly_core::returns_model::{JointReturnDistribution, PortfolioWeights, ScenarioDocument};
use kelly_core::solver::{solve, OptimizationResult, SolveOptions};

#[derive(Parser)]
#[command(
    name = "kelly",
    version,
    about = "Frequency-based Kelly portfolio tools"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Maximize expected log growth for a scenario model and period.
    Solve {
        /// Scenario model JSON.
        #[arg(long)]
        dist: PathBuf,
        /// Rebalancing period in steps.
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1e-8)]
        kkt_tol: f64,
        #[arg(long, default_value_t = 10_000)]
        max_iters: usize,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check the optimality conditions for explicit weights.
    Certify {
        #[arg(long)]
        dist: PathBuf,
        /// Comma-separated weights, e.g. "0.5,0.5".
        #[arg(long)]
        weights: String,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = DEFAULT_CERT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pairwise dominance ratios and the dominant asset, if any.
    Dominance {
        #[arg(long)]
        dist: PathBuf,
        #[arg(long, default_value_t = DEFAULT_CERT_TOL)]
        tol: f64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Simulate relative log growth of K against K* and the (2 log n)/n
    /// bound; emits per-step CSV.
    Simulate {
        #[arg(long)]
        dist: PathBuf,
        /// Comma-separated weights of the portfolio under test.
        #[arg(long)]
        k: String,
        /// Comma-separated weights of the reference (optimal) portfolio.
        #[arg(long)]
        kstar: String,
        #[arg(long)]
        horizon: usize,
        #[arg(long)]
        paths: usize,
        /// Seed is mandatory: runs are reproducible by construction.
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the dominant-ratio strategy over a price CSV.
    Backtest {
        #[arg(long)]
        prices: PathBuf,
        /// Sliding window M in steps.
        #[arg(long)]
        window: usize,
        #[arg(long, value_enum, default_value_t = FallbackArg::Hold)]
        fallback: FallbackArg,
        #[arg(long)]
        riskless_index: Option<usize>,
        /// Initial account value.
        #[arg(long, default_value_t = 1.0)]
        v0: f64,
        /// Output directory for result.csv and summary.json.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FallbackArg {
    Hold,
    Riskless,
    Flat,
}

impl From<FallbackArg> for FallbackPolicy {
    fn from(arg: FallbackArg) -> Self {
        match arg {
            FallbackArg::Hold => FallbackPolicy::HoldPrevious,
            FallbackArg::Riskless => FallbackPolicy::AllRiskless,
            FallbackArg::Flat => FallbackPolicy::FlatPreviousSignal,
        }
    }
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            message: message.into(),
            code: 2,
        }
    }
}

impl From<kelly_core::Error> for Failure {
    fn from(err: kelly_core::Error) -> Self {
        use kelly_core::Error::*;
        // Computations that cannot proceed on otherwise valid inputs exit 1;
        // everything else is an input problem and exits 2.
        let code = match err {
            EnumerationCapExceeded { .. }
            | CompoundValueOutOfRange { .. }
            | ModeMismatch { .. }
            | NonPositiveWealthArgument { .. }
            | NonFiniteObjective
            | GridTooLarge { .. }
            | InsufficientHistory { .. } => 1,
            _ => 2,
        };
        Self {
            message: err.to_string(),
            code,
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(err: std::io::Error) -> Self {
        Failure::input(err.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            ExitCode::from(failure.code)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct SolveReport {
    assets: Vec<String>,
    period: usize,
    #[serde(flatten)]
    result: OptimizationResult,
    certificate: OptimalityCertificate,
}

#[derive(Serialize, Deserialize)]
struct CertifyReport {
    assets: Vec<String>,
    period: usize,
    weights: PortfolioWeights,
    certificate: OptimalityCertificate,
}

#[derive(Serialize, Deserialize)]
struct DominanceOutput {
    assets: Vec<String>,
    #[serde(flatten)]
    report: DominanceReport,
    dominant_asset: Option<String>,
}

fn run(command: Command) -> Result<(), Failure> {
    match command {
        Command::Solve {
            dist,
            n,
            kkt_tol,
            max_iters,
            out,
        } => {
            let (assets, model) = load_model(&dist)?;
            let opts = SolveOptions {
                kkt_tol,
                max_iters,
                ..SolveOptions::default()
            };
            let result = solve(&model, n, &opts)?;
            let compound = model.compound_exact(n)?;
            let certificate = kkt_certify(
                &compound,
                &result.weights,
                DEFAULT_CERT_TOL,
                DEFAULT_SUPPORT_EPS,
            )?;
            let report = SolveReport {
                assets,
                period: n,
                result,
                certificate,
            };
            emit(out.as_deref(), &to_json(&report)?)
        }
        Command::Certify {
            dist,
            weights,
            n,
            tol,
            out,
        } => {
            let (assets, model) = load_model(&dist)?;
            let weights = parse_weights(&weights, "--weights")?;
            let compound = model.compound_exact(n)?;
            let certificate = kkt_certify(&compound, &weights, tol, DEFAULT_SUPPORT_EPS)?;
            let report = CertifyReport {
                assets,
                period: n,
                weights,
                certificate,
            };
            emit(out.as_deref(), &to_json(&report)?)
        }
        Command::Dominance { dist, tol, out } => {
            let (assets, model) = load_model(&dist)?;
            let report = find_dominant(&model, tol);
            let dominant_asset = report.dominant.map(|j| assets[j].clone());
            let output = DominanceOutput {
                assets,
                report,
                dominant_asset,
            };
            emit(out.as_deref(), &to_json(&output)?)
        }
        Command::Simulate {
            dist,
            k,
            kstar,
            horizon,
            paths,
            seed,
            out,
        } => {
            let (_, model) = load_model(&dist)?;
            let k = parse_weights(&k, "--k")?;
            let kstar = parse_weights(&kstar, "--kstar")?;
            let ensemble = simulate_relative_paths(&model, &k, &kstar, horizon, paths, seed)?;
            let check = check_asymptotic_bound(&ensemble);
            let mut buffer = Vec::new();
            check.write_csv(&mut buffer)?;
            let text = String::from_utf8(buffer).expect("csv output is utf-8");
            emit(out.as_deref(), &text)
        }
        Command::Backtest {
            prices,
            window,
            fallback,
            riskless_index,
            v0,
            out,
        } => {
            let series = load_prices(&prices)?;
            let config = BacktestConfig {
                window,
                initial_value: v0,
                fallback: fallback.into(),
                riskless_index,
            };
            let result = run_backtest(&series, &config)?;

            let mut csv_buffer = Vec::new();
            write_result_csv(&result, &mut csv_buffer)?;
            let summary = to_json(&result.summary)?;

            std::fs::create_dir_all(&out)?;
            write_atomic(&out.join("result.csv"), &csv_buffer)?;
            write_atomic(&out.join("summary.json"), summary.as_bytes())?;
            Ok(())
        }
    }
}

fn load_model(path: &Path) -> Result<(Vec<String>, JointReturnDistribution), Failure> {
    let document = ScenarioDocument::from_path(path)
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    let model = document
        .to_distribution()
        .map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    Ok((document.asset_names(), model))
}

fn parse_weights(text: &str, flag: &str) -> Result<PortfolioWeights, Failure> {
    let values: Result<Vec<f64>, _> = text.split(',').map(|part| part.trim().parse()).collect();
    let values = values.map_err(|e| Failure::input(format!("{flag}: unparsable weight ({e})")))?;
    PortfolioWeights::new(values).map_err(|e| Failure::input(format!("{flag}: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    let mut text = serde_json::to_string_pretty(value)
        .map_err(|e| Failure::input(format!("serialization failed: {e}")))?;
    text.push('\n');
    Ok(text)
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => write_atomic(path, content.as_bytes()),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

/// Write to a temp file in the destination directory, then rename: readers
/// never observe partial output.
fn write_atomic(path: &Path, content: &[u8]) -> Result<(), Failure> {
    let dir = match path.parent() {
        Some(parent) if !parent.as_os_str().is_empty() => parent,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(content)?;
    tmp.persist(path)
        .map_err(|e| Failure::input(format!("{}: {}", path.display(), e.error)))?;
    Ok(())
}
