//! Optimality certificates for candidate portfolios.
//!
//! A weight vector `K` on the unit simplex maximizes `g_n` if and only if the
//! expected ratio `E[(1 + X_{n,i}) / (1 + K^T X_n)]` equals 1 for every
//! supported asset (`K_i > 0`) and is at most 1 for every unsupported one.
//! These conditions are checkable to machine precision over finite scenario
//! models, so a solver output can be certified rather than trusted.
//!
//! The same ratio at `n = 1` drives the dominant-asset test: asset `j` is
//! dominant — and the optimum is the vertex `e_j` — exactly when
//! `E[(1 + X_i) / (1 + X_j)] <= 1` for every other asset `i`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::returns_model::{CompoundReturnDistribution, JointReturnDistribution, PortfolioWeights};

/// Default pass/fail tolerance for certification; two orders looser than
/// the solver's residual target.
pub const DEFAULT_CERT_TOL: f64 = 1e-6;
/// Weights below this threshold count as unsupported (`K_i = 0`); solver
/// outputs are floating point and never land on exact zero.
pub const DEFAULT_SUPPORT_EPS: f64 = 1e-9;

/// Which branch of the optimality conditions applies to an asset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RatioRequirement {
    /// Supported asset: the expected ratio must equal 1.
    Equality,
    /// Unsupported asset: the expected ratio must not exceed 1.
    Inequality,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssetVerdict {
    pub asset: usize,
    pub requirement: RatioRequirement,
    pub ratio: f64,
    pub residual: f64,
    pub ok: bool,
}

/// Per-asset expected ratios and the overall optimality verdict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimalityCertificate {
    pub ratios: Vec<f64>,
    pub verdicts: Vec<AssetVerdict>,
    pub max_residual: f64,
    pub pass: bool,
    pub tolerance: f64,
}

/// Pairwise one-step expected ratios, with the dominant asset when one
/// exists. `ratios[i][j] = E[(1 + X_i) / (1 + X_j)]`; the diagonal is
/// exactly 1.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DominanceReport {
    pub ratios: Vec<Vec<f64>>,
    pub dominant: Option<usize>,
    pub tolerance: f64,
}

/// `E[(1 + X_{n,i}) / (1 + K^T X_n)]` for one asset, exactly over the
/// enumerated compound distribution.
pub fn expected_ratio_asset(
    compound: &CompoundReturnDistribution,
    weights: &PortfolioWeights,
    asset: usize,
) -> Result<f64> {
    if asset >= compound.asset_count() {
        return Err(Error::AssetIndexOutOfRange {
            index: asset,
            count: compound.asset_count(),
        });
    }
    Ok(expected_ratios(compound, weights)?[asset])
}

/// All per-asset expected ratios in one pass over the outcomes.
pub fn expected_ratios(
    compound: &CompoundReturnDistribution,
    weights: &PortfolioWeights,
) -> Result<Vec<f64>> {
    if weights.len() != compound.asset_count() {
        return Err(Error::DimensionMismatch {
            context: "portfolio weights",
            expected: compound.asset_count(),
            got: weights.len(),
        });
    }
    let (outcomes, probabilities) = compound.require_exact()?;
    let mut ratios = vec![0.0; compound.asset_count()];
    for (row, &p) in outcomes.iter().zip(probabilities) {
        let wealth_factor = 1.0 + weights.dot(row);
        if !wealth_factor.is_finite() || wealth_factor <= 0.0 {
            return Err(Error::NonPositiveWealthArgument {
                value: wealth_factor,
            });
        }
        let scale = p / wealth_factor;
        for (r, &x) in ratios.iter_mut().zip(row) {
            *r += scale * (1.0 + x);
        }
    }
    Ok(ratios)
}

/// Residual of the optimality conditions: for supported assets the distance
/// of the ratio from 1, for unsupported ones only the excess above 1.
pub fn residual_from_ratios(ratios: &[f64], weights: &PortfolioWeights, support_eps: f64) -> f64 {
    ratios
        .iter()
        .zip(weights.as_slice())
        .map(|(&ratio, &w)| {
            if w > support_eps {
                (ratio - 1.0).abs()
            } else {
                (ratio - 1.0).max(0.0)
            }
        })
        .fold(0.0, f64::max)
}

/// Certifies a candidate against the necessary-and-sufficient expected-ratio
/// conditions at the given tolerance.
pub fn kkt_certify(
    compound: &CompoundReturnDistribution,
    weights: &PortfolioWeights,
    tolerance: f64,
    support_eps: f64,
) -> Result<OptimalityCertificate> {
    let ratios = expected_ratios(compound, weights)?;
    let verdicts: Vec<AssetVerdict> = ratios
        .iter()
        .zip(weights.as_slice())
        .enumerate()
        .map(|(asset, (&ratio, &w))| {
            let supported = w > support_eps;
            let residual = if supported {
                (ratio - 1.0).abs()
            } else {
                (ratio - 1.0).max(0.0)
            };
            AssetVerdict {
                asset,
                requirement: if supported {
                    RatioRequirement::Equality
                } else {
                    RatioRequirement::Inequality
                },
                ratio,
                residual,
                ok: residual <= tolerance,
            }
        })
        .collect();
    let max_residual = verdicts.iter().map(|v| v.residual).fold(0.0, f64::max);
    let pass = verdicts.iter().all(|v| v.ok);
    Ok(OptimalityCertificate {
        ratios,
        verdicts,
        max_residual,
        pass,
        tolerance,
    })
}

/// One-step pairwise ratio `E[(1 + X_i) / (1 + X_j)]`. At most 1 means asset
/// `j` weakly beats asset `i` in the sense that matters for log growth.
pub fn dominance_condition(
    dist: &JointReturnDistribution,
    numerator_asset: usize,
    denominator_asset: usize,
) -> Result<f64> {
    let m = dist.asset_count();
    for index in [numerator_asset, denominator_asset] {
        if index >= m {
            return Err(Error::AssetIndexOutOfRange { index, count: m });
        }
    }
    if numerator_asset == denominator_asset {
        return Ok(1.0);
    }
    let mut acc = 0.0;
    for (row, &p) in dist.scenarios().iter().zip(dist.probabilities()) {
        acc += p * (1.0 + row[numerator_asset]) / (1.0 + row[denominator_asset]);
    }
    Ok(acc)
}

/// Scans for a dominant asset: the smallest `j` whose column ratios all stay
/// within `1 + tolerance`. Ties between identical assets resolve to the
/// smallest index.
pub fn find_dominant(dist: &JointReturnDistribution, tolerance: f64) -> DominanceReport {
    let m = dist.asset_count();
    let mut ratios = vec![vec![1.0; m]; m];
    for (i, row) in ratios.iter_mut().enumerate() {
        for (j, cell) in row.iter_mut().enumerate() {
            if i != j {
                // Indices are in range by construction; unwrap is safe.
                *cell = dominance_condition(dist, i, j).unwrap();
            }
        }
    }
    let dominant = (0..m).find(|&j| (0..m).all(|i| i == j || ratios[i][j] <= 1.0 + tolerance));
    DominanceReport {
        ratios,
        dominant,
        tolerance,
    }
}

/// `E[(1 + K^T X_n) / (1 + K*^T X_n)]`: at most 1 whenever `K*` is optimal,
/// for every `K` on the simplex.
pub fn expected_relative_wealth(
    compound: &CompoundReturnDistribution,
    weights: &PortfolioWeights,
    optimal_weights: &PortfolioWeights,
) -> Result<f64> {
    for w in [weights, optimal_weights] {
        if w.len() != compound.asset_count() {
            return Err(Error::DimensionMismatch {
                context: "portfolio weights",
                expected: compound.asset_count(),
                got: w.len(),
            });
        }
    }
    let (outcomes, probabilities) = compound.require_exact()?;
    let mut acc = 0.0;
    for (row, &p) in outcomes.iter().zip(probabilities) {
        let denominator = 1.0 + optimal_weights.dot(row);
        if !denominator.is_finite() || denominator <= 0.0 {
            return Err(Error::NonPositiveWealthArgument { value: denominator });
        }
        acc += p * (1.0 + weights.dot(row)) / denominator;
    }
    Ok(acc)
}
