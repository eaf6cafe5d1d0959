use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors across distribution construction, evaluation, solving, and backtesting.
#[derive(Debug, Error)]
pub enum Error {
    #[error("scenario list is empty")]
    EmptyScenarios,

    #[error("dimension mismatch in {context}: expected {expected}, got {got}")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("probability {value} at index {index} is not in (0, 1]")]
    InvalidProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, must equal 1 within {tolerance}")]
    ProbabilitySum { sum: f64, tolerance: f64 },

    #[error("return {value} for asset {asset} in scenario {scenario} must be a finite rate > -1")]
    ReturnOutOfRange {
        scenario: usize,
        asset: usize,
        value: f64,
    },

    #[error("riskless rate {rate} is negative")]
    NegativeRisklessRate { rate: f64 },

    #[error(
        "{scenarios}^{period} compound scenarios exceed the enumeration cap {cap}; use sampling"
    )]
    EnumerationCapExceeded {
        scenarios: usize,
        period: usize,
        cap: usize,
    },

    #[error("compound return for asset {asset} over period {period} left the representable range")]
    CompoundValueOutOfRange { asset: usize, period: usize },

    #[error("need at least {minimum} samples, got {got}")]
    InsufficientSamples { got: usize, minimum: usize },

    #[error("weight vector is empty")]
    EmptyWeights,

    #[error("weight {value} at index {index} is negative")]
    NegativeWeight { index: usize, value: f64 },

    #[error("weights sum to {sum}, must equal 1 within {tolerance}")]
    WeightSum { sum: f64, tolerance: f64 },

    #[error("non-finite value in {context}")]
    NonFiniteInput { context: &'static str },

    #[error("expected an {expected}-mode compound distribution")]
    ModeMismatch { expected: &'static str },

    #[error("asset index {index} out of range for {count} assets")]
    AssetIndexOutOfRange { index: usize, count: usize },

    #[error("1 + K^T x = {value} is not positive; the return vector lies outside the model")]
    NonPositiveWealthArgument { value: f64 },

    #[error("objective became non-finite; the distribution is invalid for this portfolio")]
    NonFiniteObjective,

    #[error("grid with {assets} assets at resolution {resolution} exceeds the supported size (m <= {max_assets}, resolution <= {max_resolution})")]
    GridTooLarge {
        assets: usize,
        resolution: usize,
        max_assets: usize,
        max_resolution: usize,
    },

    #[error("invalid {name}: {message}")]
    InvalidParameter { name: &'static str, message: String },

    #[error("price {value} at position {index} is not strictly positive")]
    NonPositivePrice { index: usize, value: f64 },

    #[error("need at least {minimum} prices, got {got}")]
    TooFewPrices { got: usize, minimum: usize },

    #[error("malformed price CSV at line {line}: {message}")]
    MalformedCsv { line: usize, message: String },

    #[error("date label {current:?} at row {row} does not increase over {previous:?}")]
    NonIncreasingDates {
        row: usize,
        previous: String,
        current: String,
    },

    #[error("price series has {rows} rows; a window of {window} needs at least {minimum}")]
    SeriesTooShort {
        rows: usize,
        window: usize,
        minimum: usize,
    },

    #[error("window of {window} steps not yet populated at step {step}")]
    InsufficientHistory { step: usize, window: usize },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
