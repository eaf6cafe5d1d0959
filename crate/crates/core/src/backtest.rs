//! Dominant-ratio trading over historical prices.
//!
//! The strategy estimates the pairwise expected ratios
//! `R_ij(k) = (1/M) * sum_{l<M} (1 + x_i(k-l)) / (1 + x_j(k-l))` over a
//! sliding window of realized returns and moves the whole account into asset
//! `j` whenever its column satisfies `R_ij <= 1` for every `i != j` — the
//! empirical counterpart of the dominant asset condition. Steps with no
//! dominant asset fall back to a configurable policy, and buy-and-hold
//! baselines are produced for comparison.
//!
//! Signals are causal: the window used for the trade at step `k` ends at
//! `x(k-1)`, and the resulting weights apply to the return realized over
//! `(k, k+1)`.

use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::asymptotics::AccountTrajectory;
use crate::error::{Error, Result};
use crate::returns_model::PortfolioWeights;

/// A validated price history: strictly increasing date labels and strictly
/// positive prices, one column per asset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    asset_names: Vec<String>,
    dates: Vec<String>,
    prices: Vec<Vec<f64>>,
}

impl PriceSeries {
    /// Dates are opaque ordered labels compared lexicographically, which
    /// matches ISO-style date strings; no calendar arithmetic happens here.
    pub fn new(
        asset_names: Vec<String>,
        dates: Vec<String>,
        prices: Vec<Vec<f64>>,
    ) -> Result<Self> {
        if asset_names.is_empty() {
            return Err(Error::DimensionMismatch {
                context: "asset names",
                expected: 1,
                got: 0,
            });
        }
        if dates.len() != prices.len() {
            return Err(Error::DimensionMismatch {
                context: "price rows",
                expected: dates.len(),
                got: prices.len(),
            });
        }
        for (row_index, row) in prices.iter().enumerate() {
            if row.len() != asset_names.len() {
                return Err(Error::DimensionMismatch {
                    context: "price row",
                    expected: asset_names.len(),
                    got: row.len(),
                });
            }
            for &value in row {
                if !value.is_finite() || value <= 0.0 {
                    return Err(Error::NonPositivePrice {
                        index: row_index,
                        value,
                    });
                }
            }
        }
        for (row, pair) in dates.windows(2).enumerate() {
            if pair[1] <= pair[0] {
                return Err(Error::NonIncreasingDates {
                    row: row + 1,
                    previous: pair[0].clone(),
                    current: pair[1].clone(),
                });
            }
        }
        Ok(Self {
            asset_names,
            dates,
            prices,
        })
    }

    pub fn asset_count(&self) -> usize {
        self.asset_names.len()
    }

    /// Number of price rows.
    pub fn len(&self) -> usize {
        self.dates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.dates.is_empty()
    }

    pub fn asset_names(&self) -> &[String] {
        &self.asset_names
    }

    pub fn dates(&self) -> &[String] {
        &self.dates
    }

    /// Rows are time, columns are assets.
    pub fn prices(&self) -> &[Vec<f64>] {
        &self.prices
    }

    /// Realized per-step returns; row `k` holds `x(k)` over `(k, k+1)`.
    pub fn returns(&self) -> Vec<Vec<f64>> {
        self.prices
            .windows(2)
            .map(|pair| {
                pair[0]
                    .iter()
                    .zip(&pair[1])
                    .map(|(&prev, &next)| (next - prev) / prev)
                    .collect()
            })
            .collect()
    }
}

/// Loads a price CSV: header `date,<asset>,...`, one label plus one decimal
/// price per asset on every row.
pub fn load_prices(path: impl AsRef<Path>) -> Result<PriceSeries> {
    let file = std::fs::File::open(path)?;
    read_prices(file)
}

/// CSV parsing against any reader; see [`load_prices`].
pub fn read_prices<R: std::io::Read>(reader: R) -> Result<PriceSeries> {
    let mut csv_reader = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_reader(reader);

    let headers = csv_reader.headers()?.clone();
    if headers.len() < 2 || !headers[0].eq_ignore_ascii_case("date") {
        return Err(Error::MalformedCsv {
            line: 1,
            message: "header must be `date` followed by one column per asset".to_string(),
        });
    }
    let asset_names: Vec<String> = headers.iter().skip(1).map(str::to_string).collect();

    let mut dates = Vec::new();
    let mut prices = Vec::new();
    for record in csv_reader.records() {
        let record = record?;
        let line = record
            .position()
            .map_or(dates.len() + 2, |p| p.line() as usize);
        if record.len() != headers.len() {
            return Err(Error::MalformedCsv {
                line,
                message: format!("expected {} cells, found {}", headers.len(), record.len()),
            });
        }
        let date = record[0].to_string();
        if date.is_empty() {
            return Err(Error::MalformedCsv {
                line,
                message: "empty date label".to_string(),
            });
        }
        let mut row = Vec::with_capacity(asset_names.len());
        for (name, cell) in asset_names.iter().zip(record.iter().skip(1)) {
            let value: f64 = cell.parse().map_err(|_| Error::MalformedCsv {
                line,
                message: format!("missing or unparsable price for {name}: {cell:?}"),
            })?;
            row.push(value);
        }
        dates.push(date);
        prices.push(row);
    }
    PriceSeries::new(asset_names, dates, prices)
}

/// What to hold on steps where no asset passes the dominance test.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FallbackPolicy {
    /// Keep the previous step's weights (hold nothing before the first
    /// trade). The default.
    #[serde(rename = "hold-previous")]
    HoldPrevious,
    /// Park the whole account in the configured riskless asset.
    #[serde(rename = "all-riskless")]
    AllRiskless,
    /// Go flat: zero every weight and leave the account unallocated for the
    /// step, the literal reading of "otherwise K_j = 0".
    #[serde(rename = "flat-previous-signal")]
    FlatPreviousSignal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BacktestConfig {
    /// Sliding window length M in steps.
    pub window: usize,
    /// Starting account value V(0).
    pub initial_value: f64,
    pub fallback: FallbackPolicy,
    /// Required when `fallback` is `AllRiskless`. Ties in the dominance test
    /// always resolve to the smallest asset index.
    pub riskless_index: Option<usize>,
}

impl Default for BacktestConfig {
    fn default() -> Self {
        Self {
            window: 20,
            initial_value: 1.0,
            fallback: FallbackPolicy::HoldPrevious,
            riskless_index: None,
        }
    }
}

/// The position held over one step: either a simplex point or nothing at
/// all (warmup, or the flat fallback).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Signal {
    Unallocated,
    Invested(PortfolioWeights),
}

impl Signal {
    pub fn weight_vec(&self, asset_count: usize) -> Vec<f64> {
        match self {
            Signal::Unallocated => vec![0.0; asset_count],
            Signal::Invested(weights) => weights.as_slice().to_vec(),
        }
    }

    fn growth_factor(&self, returns: &[f64]) -> f64 {
        match self {
            Signal::Unallocated => 1.0,
            Signal::Invested(weights) => 1.0 + weights.dot(returns),
        }
    }
}

/// `R_ij(k)`: the window average of `(1 + x_i) / (1 + x_j)` over the M
/// returns ending at step `k`.
pub fn sliding_expected_ratio(
    returns: &[Vec<f64>],
    numerator_asset: usize,
    denominator_asset: usize,
    step: usize,
    window: usize,
) -> Result<f64> {
    validate_window(window)?;
    if step >= returns.len() || step + 1 < window {
        return Err(Error::InsufficientHistory { step, window });
    }
    let asset_count = returns[0].len();
    for index in [numerator_asset, denominator_asset] {
        if index >= asset_count {
            return Err(Error::AssetIndexOutOfRange {
                index,
                count: asset_count,
            });
        }
    }
    let mut sum = 0.0;
    for offset in 0..window {
        let row = &returns[step - offset];
        sum += (1.0 + row[numerator_asset]) / (1.0 + row[denominator_asset]);
    }
    Ok(sum / window as f64)
}

/// All pairwise window ratios at `step`; entry `[i][j]` is `R_ij`.
pub fn window_ratio_matrix(
    returns: &[Vec<f64>],
    step: usize,
    window: usize,
) -> Result<Vec<Vec<f64>>> {
    validate_window(window)?;
    if step >= returns.len() || step + 1 < window {
        return Err(Error::InsufficientHistory { step, window });
    }
    let asset_count = returns[0].len();
    let mut matrix = vec![vec![1.0; asset_count]; asset_count];
    for (i, row) in matrix.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j {
                *cell = sliding_expected_ratio(returns, i, j, step, window)?;
            }
        }
    }
    Ok(matrix)
}

/// The smallest `j` with `R_ij <= 1` for every `i != j`, if any.
pub fn dominant_in_window(matrix: &[Vec<f64>]) -> Option<usize> {
    let m = matrix.len();
    (0..m).find(|&j| (0..m).all(|i| i == j || matrix[i][j] <= 1.0))
}

fn validate_window(window: usize) -> Result<()> {
    if window == 0 {
        return Err(Error::InvalidParameter {
            name: "window",
            message: "window must be at least 1 step".to_string(),
        });
    }
    Ok(())
}

fn fallback_signal(
    config: &BacktestConfig,
    previous: &Signal,
    asset_count: usize,
) -> Result<Signal> {
    match config.fallback {
        FallbackPolicy::HoldPrevious => Ok(previous.clone()),
        FallbackPolicy::FlatPreviousSignal => Ok(Signal::Unallocated),
        FallbackPolicy::AllRiskless => {
            let index = config.riskless_index.ok_or(Error::InvalidParameter {
                name: "riskless_index",
                message: "the all-riskless fallback needs a riskless asset index".to_string(),
            })?;
            Ok(Signal::Invested(PortfolioWeights::vertex(
                asset_count,
                index,
            )?))
        }
    }
}

/// The trading signal for step `k`, whose window ends at return `x(k)`:
/// the dominant asset's vertex, or the fallback when no asset dominates.
pub fn dominant_ratio_signal(
    returns: &[Vec<f64>],
    step: usize,
    config: &BacktestConfig,
    previous: &Signal,
) -> Result<Signal> {
    let matrix = window_ratio_matrix(returns, step, config.window)?;
    match dominant_in_window(&matrix) {
        Some(j) => Ok(Signal::Invested(PortfolioWeights::vertex(
            returns[0].len(),
            j,
        )?)),
        None => fallback_signal(config, previous, returns[0].len()),
    }
}

/// Run-level aggregates written to `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestSummary {
    /// `V(end) / V(0) - 1`.
    pub total_return: f64,
    /// Mean log growth per step after warmup.
    pub mean_log_growth: f64,
    pub window: usize,
    pub fallback: FallbackPolicy,
    /// Steps spent holding V(0) before the first trade (equals the window).
    pub warmup: usize,
}

/// One comparison trajectory, e.g. buy-and-hold of a single asset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Baseline {
    pub name: String,
    pub values: Vec<f64>,
}

/// Account, signal, and dominance-ratio trajectories of one backtest run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestResult {
    pub dates: Vec<String>,
    pub asset_names: Vec<String>,
    /// `account[k] = V(k)`, one entry per price row.
    pub account: Vec<f64>,
    /// Weights in force leaving each date; all-zero rows are unallocated
    /// steps (warmup or flat fallback). The final row repeats the terminal
    /// holdings.
    pub signals: Vec<Vec<f64>>,
    /// `Some` on dates where a trade decision was made.
    pub ratio_matrices: Vec<Option<Vec<Vec<f64>>>>,
    pub baselines: Vec<Baseline>,
    pub summary: BacktestSummary,
}

/// Runs the dominant-ratio strategy over a price series.
///
/// The account holds `V(0)` with no position through the first `window`
/// steps; from then on each step's signal applies to that step's realized
/// return: `V(k+1) = (1 + K(k)^T x(k)) V(k)`.
pub fn run_backtest(series: &PriceSeries, config: &BacktestConfig) -> Result<BacktestResult> {
    validate_window(config.window)?;
    if !config.initial_value.is_finite() || config.initial_value <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "initial_value",
            message: format!(
                "initial account value must be positive, got {}",
                config.initial_value
            ),
        });
    }
    let asset_count = series.asset_count();
    if let Some(index) = config.riskless_index {
        if index >= asset_count {
            return Err(Error::AssetIndexOutOfRange {
                index,
                count: asset_count,
            });
        }
    }
    if config.fallback == FallbackPolicy::AllRiskless && config.riskless_index.is_none() {
        return Err(Error::InvalidParameter {
            name: "riskless_index",
            message: "the all-riskless fallback needs a riskless asset index".to_string(),
        });
    }
    let rows = series.len();
    // One full window of returns plus at least one tradable step.
    let minimum = config.window + 2;
    if rows < minimum {
        return Err(Error::SeriesTooShort {
            rows,
            window: config.window,
            minimum,
        });
    }

    let returns = series.returns();
    let mut account = Vec::with_capacity(rows);
    account.push(config.initial_value);
    let mut signals: Vec<Vec<f64>> = Vec::with_capacity(rows);
    let mut ratio_matrices: Vec<Option<Vec<Vec<f64>>>> = vec![None; rows];
    let mut signal = Signal::Unallocated;
    for (k, step_returns) in returns.iter().enumerate() {
        if k >= config.window {
            let matrix = window_ratio_matrix(&returns, k - 1, config.window)?;
            signal = match dominant_in_window(&matrix) {
                Some(j) => Signal::Invested(PortfolioWeights::vertex(asset_count, j)?),
                None => fallback_signal(config, &signal, asset_count)?,
            };
            ratio_matrices[k] = Some(matrix);
        }
        signals.push(signal.weight_vec(asset_count));
        account.push(account[k] * signal.growth_factor(step_returns));
    }
    // Terminal holdings against the last date.
    signals.push(signals[rows - 2].clone());

    let mut baselines = Vec::with_capacity(asset_count + 1);
    for j in 0..asset_count {
        let weights = PortfolioWeights::vertex(asset_count, j)?;
        let trajectory = buy_and_hold(series, &weights, config.initial_value)?;
        baselines.push(Baseline {
            name: format!("bh_{}", series.asset_names()[j]),
            values: trajectory.values,
        });
    }
    let equal = buy_and_hold(
        series,
        &PortfolioWeights::uniform(asset_count)?,
        config.initial_value,
    )?;
    baselines.push(Baseline {
        name: "bh_equal".to_string(),
        values: equal.values,
    });

    let traded_steps = rows - 1 - config.window;
    let summary = BacktestSummary {
        total_return: account[rows - 1] / config.initial_value - 1.0,
        mean_log_growth: (account[rows - 1] / account[config.window]).ln() / traded_steps as f64,
        window: config.window,
        fallback: config.fallback,
        warmup: config.window,
    };

    Ok(BacktestResult {
        dates: series.dates().to_vec(),
        asset_names: series.asset_names().to_vec(),
        account,
        signals,
        ratio_matrices,
        baselines,
        summary,
    })
}

/// Allocates `V(0) * K_i` to each asset at the first price and never
/// rebalances: `V(k) = V(0) * sum_i K_i * s_i(k) / s_i(0)`.
pub fn buy_and_hold(
    series: &PriceSeries,
    weights: &PortfolioWeights,
    initial_value: f64,
) -> Result<AccountTrajectory> {
    if weights.len() != series.asset_count() {
        return Err(Error::DimensionMismatch {
            context: "portfolio weights",
            expected: series.asset_count(),
            got: weights.len(),
        });
    }
    if !initial_value.is_finite() || initial_value <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "initial_value",
            message: format!("initial account value must be positive, got {initial_value}"),
        });
    }
    let first = &series.prices()[0];
    let values = series
        .prices()
        .iter()
        .map(|row| {
            let factor: f64 = weights
                .as_slice()
                .iter()
                .zip(row.iter().zip(first))
                .map(|(&w, (&price, &base))| w * price / base)
                .sum();
            initial_value * factor
        })
        .collect();
    Ok(AccountTrajectory {
        initial_value,
        values,
        weights: weights.clone(),
    })
}

/// Writes `result.csv`: `date,V,K_1..K_m`, then one column per baseline.
pub fn write_result_csv<W: Write>(result: &BacktestResult, writer: W) -> Result<()> {
    let mut csv_writer = csv::Writer::from_writer(writer);
    let mut header = vec!["date".to_string(), "V".to_string()];
    header.extend((1..=result.asset_names.len()).map(|i| format!("K_{i}")));
    header.extend(result.baselines.iter().map(|b| b.name.clone()));
    csv_writer.write_record(&header)?;
    for (k, date) in result.dates.iter().enumerate() {
        let mut record = vec![date.clone(), result.account[k].to_string()];
        record.extend(result.signals[k].iter().map(f64::to_string));
        record.extend(result.baselines.iter().map(|b| b.values[k].to_string()));
        csv_writer.write_record(&record)?;
    }
    csv_writer.flush()?;
    Ok(())
}
