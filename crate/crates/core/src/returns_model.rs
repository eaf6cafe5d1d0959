//! Finite scenario models for one-step joint returns and their n-step
//! compound products.
//!
//! A [`JointReturnDistribution`] holds `S` joint scenarios for the per-step
//! return vector of `m` assets together with their probabilities. The
//! compound return of asset `i` over a rebalancing period of `n` steps is
//! `prod_{k<n} (1 + X_i(k)) - 1`; [`JointReturnDistribution::compound_exact`]
//! enumerates its full product distribution and
//! [`JointReturnDistribution::compound_sample`] draws from it. Scenarios may
//! be arbitrarily correlated across assets; steps are i.i.d.

use std::collections::HashMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::sampling::{stream_rng, ScenarioSampler};

/// Tolerance for validating that input probabilities sum to one.
pub const PROBABILITY_SUM_TOL: f64 = 1e-9;
/// Tolerance for validating that portfolio weights sum to one.
pub const WEIGHT_SUM_TOL: f64 = 1e-10;
/// Default cap on the number of enumerated compound scenarios (`S^n`).
pub const DEFAULT_ENUMERATION_CAP: usize = 1_000_000;

/// A finite joint distribution of one-step rates of return for `m` assets.
///
/// Probabilities are strictly positive and renormalized to sum to one at
/// construction. Every return is a finite rate strictly greater than -1: a
/// price cannot drop to zero in one step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointReturnDistribution {
    asset_count: usize,
    scenarios: Vec<Vec<f64>>,
    probabilities: Vec<f64>,
    bounds: Vec<(f64, f64)>,
}

impl JointReturnDistribution {
    /// Validates and builds a distribution from scenario rows and their
    /// probabilities. Per-asset bounds are the min/max over scenarios.
    pub fn new(scenarios: Vec<Vec<f64>>, probabilities: Vec<f64>) -> Result<Self> {
        if scenarios.is_empty() {
            return Err(Error::EmptyScenarios);
        }
        let asset_count = scenarios[0].len();
        if asset_count == 0 {
            return Err(Error::DimensionMismatch {
                context: "scenario row",
                expected: 1,
                got: 0,
            });
        }
        for row in &scenarios {
            if row.len() != asset_count {
                return Err(Error::DimensionMismatch {
                    context: "scenario row",
                    expected: asset_count,
                    got: row.len(),
                });
            }
        }
        if probabilities.len() != scenarios.len() {
            return Err(Error::DimensionMismatch {
                context: "probabilities",
                expected: scenarios.len(),
                got: probabilities.len(),
            });
        }
        for (index, &p) in probabilities.iter().enumerate() {
            if !p.is_finite() || p <= 0.0 || p > 1.0 + PROBABILITY_SUM_TOL {
                return Err(Error::InvalidProbability { index, value: p });
            }
        }
        let sum: f64 = probabilities.iter().sum();
        if (sum - 1.0).abs() > PROBABILITY_SUM_TOL {
            return Err(Error::ProbabilitySum {
                sum,
                tolerance: PROBABILITY_SUM_TOL,
            });
        }
        for (s, row) in scenarios.iter().enumerate() {
            for (a, &x) in row.iter().enumerate() {
                if !x.is_finite() || x <= -1.0 {
                    return Err(Error::ReturnOutOfRange {
                        scenario: s,
                        asset: a,
                        value: x,
                    });
                }
            }
        }

        // Renormalize to an exact unit total.
        let probabilities: Vec<f64> = probabilities.iter().map(|p| p / sum).collect();

        let bounds = (0..asset_count)
            .map(|a| {
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for row in &scenarios {
                    lo = lo.min(row[a]);
                    hi = hi.max(row[a]);
                }
                (lo, hi)
            })
            .collect();

        Ok(Self {
            asset_count,
            scenarios,
            probabilities,
            bounds,
        })
    }

    pub fn asset_count(&self) -> usize {
        self.asset_count
    }

    pub fn scenario_count(&self) -> usize {
        self.scenarios.len()
    }

    /// Scenario rows; entry `(s, i)` is the rate of return of asset `i`.
    pub fn scenarios(&self) -> &[Vec<f64>] {
        &self.scenarios
    }

    pub fn probabilities(&self) -> &[f64] {
        &self.probabilities
    }

    /// Per-asset `(X_min, X_max)` over scenarios.
    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    /// Appends a riskless asset returning `rate` in every scenario.
    pub fn with_riskless(&self, rate: f64) -> Result<Self> {
        if !rate.is_finite() || rate < 0.0 {
            return Err(Error::NegativeRisklessRate { rate });
        }
        let scenarios = self
            .scenarios
            .iter()
            .map(|row| {
                let mut extended = row.clone();
                extended.push(rate);
                extended
            })
            .collect();
        Self::new(scenarios, self.probabilities.clone())
    }

    /// Exact compound return distribution over `period` steps, enumerating
    /// all `S^period` products under the default cap.
    pub fn compound_exact(&self, period: usize) -> Result<CompoundReturnDistribution> {
        self.compound_exact_capped(period, DEFAULT_ENUMERATION_CAP)
    }

    /// Exact compounding with an explicit enumeration cap. Identical outcome
    /// vectors are merged by summing probabilities, which keeps degenerate
    /// (e.g. riskless) components from multiplying the outcome count.
    pub fn compound_exact_capped(
        &self,
        period: usize,
        cap: usize,
    ) -> Result<CompoundReturnDistribution> {
        validate_period(period)?;
        let scenario_count = self.scenarios.len();
        let mut total: u128 = 1;
        for _ in 0..period {
            total = total.saturating_mul(scenario_count as u128);
            if total > cap as u128 {
                return Err(Error::EnumerationCapExceeded {
                    scenarios: scenario_count,
                    period,
                    cap,
                });
            }
        }

        if period == 1 {
            // Pass through verbatim so the one-step distribution is
            // reproduced exactly, duplicates included.
            return Ok(CompoundReturnDistribution {
                period: 1,
                asset_count: self.asset_count,
                kind: CompoundKind::Exact {
                    outcomes: self.scenarios.clone(),
                    probabilities: self.probabilities.clone(),
                },
            });
        }

        // Level-by-level product expansion over (1 + X) factors, merging
        // bit-identical states as they appear. Merging early is exact: equal
        // product states have equal continuations.
        let mut products: Vec<Vec<f64>> = vec![vec![1.0; self.asset_count]];
        let mut probabilities: Vec<f64> = vec![1.0];
        for _ in 0..period {
            let mut next_products: Vec<Vec<f64>> = Vec::with_capacity(products.len());
            let mut next_probabilities: Vec<f64> = Vec::with_capacity(products.len());
            let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
            for (state, &p) in products.iter().zip(&probabilities) {
                for (row, &sp) in self.scenarios.iter().zip(&self.probabilities) {
                    let grown: Vec<f64> = state
                        .iter()
                        .zip(row)
                        .map(|(&acc, &x)| acc * (1.0 + x))
                        .collect();
                    let key: Vec<u64> = grown.iter().map(|v| v.to_bits()).collect();
                    match seen.entry(key) {
                        std::collections::hash_map::Entry::Occupied(e) => {
                            next_probabilities[*e.get()] += p * sp;
                        }
                        std::collections::hash_map::Entry::Vacant(e) => {
                            e.insert(next_products.len());
                            next_products.push(grown);
                            next_probabilities.push(p * sp);
                        }
                    }
                }
            }
            products = next_products;
            probabilities = next_probabilities;
        }

        let outcomes = finish_products(products, period)?;
        Ok(CompoundReturnDistribution {
            period,
            asset_count: self.asset_count,
            kind: CompoundKind::Exact {
                outcomes,
                probabilities,
            },
        })
    }

    /// Draws `count` i.i.d. compound return vectors over `period` steps.
    ///
    /// Each draw composes `period` independent scenario draws on its own
    /// `(seed, draw index)` stream, so output is bit-reproducible for a fixed
    /// seed and count regardless of scheduling.
    pub fn compound_sample(
        &self,
        period: usize,
        count: usize,
        seed: u64,
    ) -> Result<CompoundReturnDistribution> {
        validate_period(period)?;
        if count < 1 {
            return Err(Error::InsufficientSamples {
                got: count,
                minimum: 1,
            });
        }
        let sampler = ScenarioSampler::new(&self.probabilities);
        let mut products = Vec::with_capacity(count);
        for draw in 0..count {
            let mut rng = stream_rng(seed, draw as u64);
            let mut state = vec![1.0; self.asset_count];
            for _ in 0..period {
                let row = &self.scenarios[sampler.draw(&mut rng)];
                for (acc, &x) in state.iter_mut().zip(row) {
                    *acc *= 1.0 + x;
                }
            }
            products.push(state);
        }
        let outcomes = finish_products(products, period)?;
        Ok(CompoundReturnDistribution {
            period,
            asset_count: self.asset_count,
            kind: CompoundKind::Sampled { outcomes, seed },
        })
    }
}

fn validate_period(period: usize) -> Result<()> {
    if period == 0 {
        return Err(Error::InvalidParameter {
            name: "period",
            message: "rebalancing period must be at least 1".to_string(),
        });
    }
    Ok(())
}

/// Converts `(1 + X)` product states into compound returns, rejecting values
/// that collapsed onto -1 or escaped to infinity.
fn finish_products(products: Vec<Vec<f64>>, period: usize) -> Result<Vec<Vec<f64>>> {
    let mut outcomes = Vec::with_capacity(products.len());
    for state in products {
        let mut row = Vec::with_capacity(state.len());
        for (asset, &value) in state.iter().enumerate() {
            let compound = value - 1.0;
            if !compound.is_finite() || compound <= -1.0 {
                return Err(Error::CompoundValueOutOfRange { asset, period });
            }
            row.push(compound);
        }
        outcomes.push(row);
    }
    Ok(outcomes)
}

/// Distribution of the n-step compound return vector, either fully
/// enumerated or sampled.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompoundReturnDistribution {
    period: usize,
    asset_count: usize,
    kind: CompoundKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "mode")]
enum CompoundKind {
    Exact {
        outcomes: Vec<Vec<f64>>,
        probabilities: Vec<f64>,
    },
    Sampled {
        outcomes: Vec<Vec<f64>>,
        seed: u64,
    },
}

impl CompoundReturnDistribution {
    pub fn period(&self) -> usize {
        self.period
    }

    pub fn asset_count(&self) -> usize {
        self.asset_count
    }

    pub fn is_exact(&self) -> bool {
        matches!(self.kind, CompoundKind::Exact { .. })
    }

    pub fn outcome_count(&self) -> usize {
        self.outcomes().len()
    }

    /// Compound return vectors, one row per enumerated or sampled outcome.
    pub fn outcomes(&self) -> &[Vec<f64>] {
        match &self.kind {
            CompoundKind::Exact { outcomes, .. } => outcomes,
            CompoundKind::Sampled { outcomes, .. } => outcomes,
        }
    }

    /// Outcome probabilities in exact mode; `None` for sampled draws.
    pub fn probabilities(&self) -> Option<&[f64]> {
        match &self.kind {
            CompoundKind::Exact { probabilities, .. } => Some(probabilities),
            CompoundKind::Sampled { .. } => None,
        }
    }

    pub fn seed(&self) -> Option<u64> {
        match &self.kind {
            CompoundKind::Exact { .. } => None,
            CompoundKind::Sampled { seed, .. } => Some(*seed),
        }
    }

    pub(crate) fn require_exact(&self) -> Result<(&[Vec<f64>], &[f64])> {
        match &self.kind {
            CompoundKind::Exact {
                outcomes,
                probabilities,
            } => Ok((outcomes, probabilities)),
            CompoundKind::Sampled { .. } => Err(Error::ModeMismatch { expected: "exact" }),
        }
    }

    pub(crate) fn require_sampled(&self) -> Result<&[Vec<f64>]> {
        match &self.kind {
            CompoundKind::Exact { .. } => Err(Error::ModeMismatch {
                expected: "sampled",
            }),
            CompoundKind::Sampled { outcomes, .. } => Ok(outcomes),
        }
    }
}

/// A point of the unit simplex: long-only weights that invest the whole
/// account.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct PortfolioWeights(Vec<f64>);

impl PortfolioWeights {
    /// Validates membership of the unit simplex: finite, nonnegative entries
    /// summing to one within [`WEIGHT_SUM_TOL`].
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::EmptyWeights);
        }
        for (index, &w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFiniteInput {
                    context: "portfolio weights",
                });
            }
            if w < 0.0 {
                return Err(Error::NegativeWeight { index, value: w });
            }
        }
        let sum: f64 = weights.iter().sum();
        if (sum - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::WeightSum {
                sum,
                tolerance: WEIGHT_SUM_TOL,
            });
        }
        Ok(Self(weights))
    }

    /// The uniform interior point `(1/m, ..., 1/m)`.
    pub fn uniform(asset_count: usize) -> Result<Self> {
        if asset_count == 0 {
            return Err(Error::EmptyWeights);
        }
        Self::new(vec![1.0 / asset_count as f64; asset_count])
    }

    /// The vertex `e_j`: everything on asset `j`.
    pub fn vertex(asset_count: usize, asset: usize) -> Result<Self> {
        if asset >= asset_count {
            return Err(Error::AssetIndexOutOfRange {
                index: asset,
                count: asset_count,
            });
        }
        let mut weights = vec![0.0; asset_count];
        weights[asset] = 1.0;
        Self::new(weights)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// `K^T x`, accumulated left to right for bit-stable results.
    pub fn dot(&self, returns: &[f64]) -> f64 {
        debug_assert_eq!(self.0.len(), returns.len());
        self.0.iter().zip(returns).map(|(&w, &x)| w * x).sum()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl AsRef<[f64]> for PortfolioWeights {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

/// Realized per-step returns from a strictly positive price path.
pub fn returns_from_prices(prices: &[f64]) -> Result<Vec<f64>> {
    if prices.len() < 2 {
        return Err(Error::TooFewPrices {
            got: prices.len(),
            minimum: 2,
        });
    }
    for (index, &p) in prices.iter().enumerate() {
        if !p.is_finite() || p <= 0.0 {
            return Err(Error::NonPositivePrice { index, value: p });
        }
    }
    Ok(prices
        .windows(2)
        .map(|pair| (pair[1] - pair[0]) / pair[0])
        .collect())
}

/// JSON document form of a scenario model:
/// `{"assets": [...], "scenarios": [[...], ...], "probabilities": [...]}`.
///
/// Asset names are optional; `asset_1..asset_m` are supplied when absent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub assets: Option<Vec<String>>,
    pub scenarios: Vec<Vec<f64>>,
    pub probabilities: Vec<f64>,
}

impl ScenarioDocument {
    pub fn from_json_str(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn from_path(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_json_str(&text)
    }

    /// Names for reporting, defaulting to `asset_1..asset_m`.
    pub fn asset_names(&self) -> Vec<String> {
        let width = self.scenarios.first().map_or(0, Vec::len);
        match &self.assets {
            Some(names) => names.clone(),
            None => (1..=width).map(|i| format!("asset_{i}")).collect(),
        }
    }

    /// Validates the document into a distribution.
    pub fn to_distribution(&self) -> Result<JointReturnDistribution> {
        let dist =
            JointReturnDistribution::new(self.scenarios.clone(), self.probabilities.clone())?;
        if let Some(names) = &self.assets {
            if names.len() != dist.asset_count() {
                return Err(Error::DimensionMismatch {
                    context: "asset names",
                    expected: dist.asset_count(),
                    got: names.len(),
                });
            }
        }
        Ok(dist)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_point_stock() -> JointReturnDistribution {
        JointReturnDistribution::new(vec![vec![0.5], vec![-0.3]], vec![0.5, 0.5]).unwrap()
    }

    pub(crate) fn stock_and_cash() -> JointReturnDistribution {
        two_point_stock().with_riskless(0.0).unwrap()
    }

    #[test]
    fn builds_two_point_distribution_with_bounds() {
        let dist = two_point_stock();
        assert_eq!(dist.asset_count(), 1);
        assert_eq!(dist.scenario_count(), 2);
        assert_eq!(dist.bounds(), &[(-0.3, 0.5)]);
    }

    #[test]
    fn builds_degenerate_single_scenario_distribution() {
        let dist = JointReturnDistribution::new(vec![vec![0.1, 0.0]], vec![1.0]).unwrap();
        assert_eq!(dist.asset_count(), 2);
        assert_eq!(dist.bounds(), &[(0.1, 0.1), (0.0, 0.0)]);
    }

    #[test]
    fn rejects_total_loss_return() {
        let err = JointReturnDistribution::new(vec![vec![-1.0]], vec![1.0]).unwrap_err();
        assert!(matches!(err, Error::ReturnOutOfRange { .. }));
    }

    #[test]
    fn rejects_zero_probability_scenarios() {
        let err =
            JointReturnDistribution::new(vec![vec![0.1], vec![0.2]], vec![1.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::InvalidProbability { index: 1, .. }));
    }

    #[test]
    fn rejects_bad_probability_sum_and_ragged_rows() {
        let err =
            JointReturnDistribution::new(vec![vec![0.1], vec![0.2]], vec![0.5, 0.6]).unwrap_err();
        assert!(matches!(err, Error::ProbabilitySum { .. }));

        let err = JointReturnDistribution::new(vec![vec![0.1, 0.2], vec![0.2]], vec![0.5, 0.5])
            .unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn renormalizes_probabilities_within_input_tolerance() {
        let dist = JointReturnDistribution::new(
            vec![vec![0.1], vec![0.2]],
            vec![0.5 + 4e-10, 0.5 + 4e-10],
        )
        .unwrap();
        let sum: f64 = dist.probabilities().iter().sum();
        assert!((sum - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn with_riskless_appends_degenerate_column() {
        let cash = two_point_stock().with_riskless(0.0).unwrap();
        assert_eq!(cash.asset_count(), 2);
        assert!(cash.scenarios().iter().all(|row| row[1] == 0.0));

        let bonds = two_point_stock().with_riskless(0.01).unwrap();
        assert!(bonds.scenarios().iter().all(|row| row[1] == 0.01));
        assert_eq!(bonds.bounds()[1], (0.01, 0.01));

        let err = two_point_stock().with_riskless(-0.1).unwrap_err();
        assert!(matches!(err, Error::NegativeRisklessRate { .. }));
    }

    #[test]
    fn compound_exact_two_steps_matches_hand_enumeration() {
        let compound = two_point_stock().compound_exact(2).unwrap();
        assert!(compound.is_exact());
        // Merged outcomes of {1.5, 0.7}^2: 1.25, 0.05, -0.51.
        let mut pairs: Vec<(f64, f64)> = compound
            .outcomes()
            .iter()
            .zip(compound.probabilities().unwrap())
            .map(|(row, &p)| (row[0], p))
            .collect();
        pairs.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
        assert_eq!(pairs.len(), 3);
        assert!((pairs[0].0 - (-0.51)).abs() < 1e-15 && (pairs[0].1 - 0.25).abs() < 1e-15);
        assert!((pairs[1].0 - 0.05).abs() < 1e-15 && (pairs[1].1 - 0.5).abs() < 1e-15);
        assert!((pairs[2].0 - 1.25).abs() < 1e-15 && (pairs[2].1 - 0.25).abs() < 1e-15);
    }

    #[test]
    fn compound_exact_period_one_is_identity() {
        let dist = stock_and_cash();
        let compound = dist.compound_exact(1).unwrap();
        assert_eq!(compound.outcomes(), dist.scenarios());
        assert_eq!(compound.probabilities().unwrap(), dist.probabilities());
    }

    #[test]
    fn compound_exact_deterministic_asset_collapses() {
        let dist = JointReturnDistribution::new(vec![vec![0.1]], vec![1.0]).unwrap();
        let compound = dist.compound_exact(3).unwrap();
        assert_eq!(compound.outcome_count(), 1);
        assert!((compound.outcomes()[0][0] - 0.331).abs() < 1e-12);
    }

    #[test]
    fn compound_exact_enforces_cap() {
        let dist = two_point_stock();
        let err = dist.compound_exact_capped(21, 1 << 20).unwrap_err();
        assert!(matches!(err, Error::EnumerationCapExceeded { .. }));
        assert!(dist.compound_exact_capped(20, 1 << 20).is_ok());
    }

    #[test]
    fn compound_outcomes_respect_survival_floor() {
        let dist = stock_and_cash();
        for n in 1..=6 {
            let compound = dist.compound_exact(n).unwrap();
            let probs_sum: f64 = compound.probabilities().unwrap().iter().sum();
            assert!((probs_sum - 1.0).abs() <= 1e-10);
            for row in compound.outcomes() {
                for (asset, &x) in row.iter().enumerate() {
                    let (lo, _) = dist.bounds()[asset];
                    // n = 1 passes scenarios through verbatim; the compound
                    // floor applies from the first real product onward.
                    let floor = if n == 1 {
                        lo
                    } else {
                        let mut product = 1.0;
                        for _ in 0..n {
                            product *= 1.0 + lo;
                        }
                        product - 1.0
                    };
                    assert!(x > -1.0);
                    assert!(x >= floor);
                }
            }
        }
    }

    #[test]
    fn compound_sample_is_reproducible() {
        let dist = stock_and_cash();
        let a = dist.compound_sample(3, 4, 7).unwrap();
        let b = dist.compound_sample(3, 4, 7).unwrap();
        assert_eq!(a.outcomes(), b.outcomes());
        assert_eq!(a.seed(), Some(7));

        // A prefix of a longer run sees the same draws: streams are keyed by
        // draw index, not by position in a shared sequence.
        let longer = dist.compound_sample(3, 9, 7).unwrap();
        assert_eq!(&longer.outcomes()[..4], a.outcomes());
    }

    #[test]
    fn compound_sample_degenerate_matches_exact_value() {
        let dist = JointReturnDistribution::new(vec![vec![0.1]], vec![1.0]).unwrap();
        let sampled = dist.compound_sample(3, 5, 99).unwrap();
        let exact = dist.compound_exact(3).unwrap();
        for row in sampled.outcomes() {
            assert_eq!(row[0], exact.outcomes()[0][0]);
        }
    }

    #[test]
    fn compound_sample_mean_matches_one_step_expectation() {
        // E[X] = 0.5*0.5 + 0.5*(-0.3) = 0.1, sd = 0.4.
        let dist = two_point_stock();
        let sampled = dist.compound_sample(1, 1_000_000, 1).unwrap();
        let mean: f64 = sampled.outcomes().iter().map(|row| row[0]).sum::<f64>() / 1_000_000.0;
        let stderr = 0.4 / 1000.0;
        assert!(
            (mean - 0.1).abs() <= 3.0 * stderr,
            "mean {mean} too far from 0.1"
        );
    }

    #[test]
    fn returns_from_prices_examples() {
        let r = returns_from_prices(&[100.0, 110.0, 99.0]).unwrap();
        assert!((r[0] - 0.10).abs() < 1e-12);
        assert!((r[1] - (-0.10)).abs() < 1e-12);

        assert_eq!(
            returns_from_prices(&[50.0, 50.0, 50.0]).unwrap(),
            vec![0.0, 0.0]
        );

        let err = returns_from_prices(&[100.0, 0.0]).unwrap_err();
        assert!(matches!(err, Error::NonPositivePrice { index: 1, .. }));
        let err = returns_from_prices(&[100.0]).unwrap_err();
        assert!(matches!(err, Error::TooFewPrices { .. }));
    }

    #[test]
    fn weights_validate_simplex_membership() {
        assert!(PortfolioWeights::new(vec![0.5, 0.5]).is_ok());
        assert!(matches!(
            PortfolioWeights::new(vec![0.6, 0.5]).unwrap_err(),
            Error::WeightSum { .. }
        ));
        assert!(matches!(
            PortfolioWeights::new(vec![1.1, -0.1]).unwrap_err(),
            Error::NegativeWeight { .. }
        ));
        assert!(matches!(
            PortfolioWeights::new(vec![]).unwrap_err(),
            Error::EmptyWeights
        ));

        let uniform = PortfolioWeights::uniform(3).unwrap();
        assert_eq!(uniform.len(), 3);
        let vertex = PortfolioWeights::vertex(3, 1).unwrap();
        assert_eq!(vertex.as_slice(), &[0.0, 1.0, 0.0]);
    }

    #[test]
    fn scenario_document_round_trips() {
        let text = r#"{"assets": ["stock", "cash"],
                       "scenarios": [[0.5, 0.0], [-0.3, 0.0]],
                       "probabilities": [0.5, 0.5]}"#;
        let doc = ScenarioDocument::from_json_str(text).unwrap();
        assert_eq!(doc.asset_names(), vec!["stock", "cash"]);
        let dist = doc.to_distribution().unwrap();
        assert_eq!(dist, stock_and_cash());

        let unnamed = ScenarioDocument {
            assets: None,
            scenarios: vec![vec![0.1, 0.2]],
            probabilities: vec![1.0],
        };
        assert_eq!(unnamed.asset_names(), vec!["asset_1", "asset_2"]);

        let mismatched = ScenarioDocument {
            assets: Some(vec!["a".into()]),
            scenarios: vec![vec![0.1, 0.2]],
            probabilities: vec![1.0],
        };
        assert!(mismatched.to_distribution().is_err());
    }
}
