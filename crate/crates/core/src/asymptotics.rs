//! Simulation checks of long-run behavior: relative log growth of a
//! portfolio against the optimum, the almost-sure `(2 log n)/n` bound that
//! the optimum satisfies, and strict account positivity (no bankruptcy) for
//! simplex weights.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::returns_model::{JointReturnDistribution, PortfolioWeights};
use crate::sampling::{stream_rng, ScenarioSampler};

/// Per-path relative log-growth trajectories
/// `(1/n) * (log W_K(n) - log W_K*(n))` for `n = 1..=horizon`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PathEnsemble {
    horizon: usize,
    seed: u64,
    values: Vec<Vec<f64>>,
}

impl PathEnsemble {
    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn path_count(&self) -> usize {
        self.values.len()
    }

    /// Row per path, entry `n - 1` holding the value at step `n`.
    pub fn values(&self) -> &[Vec<f64>] {
        &self.values
    }
}

fn check_weights(dist: &JointReturnDistribution, weights: &PortfolioWeights) -> Result<()> {
    if weights.len() != dist.asset_count() {
        return Err(Error::DimensionMismatch {
            context: "portfolio weights",
            expected: dist.asset_count(),
            got: weights.len(),
        });
    }
    Ok(())
}

/// Simulates i.i.d. return paths and records the per-step relative log
/// growth of `weights` against `optimal_weights`.
///
/// Paths live on independent `(seed, path index)` streams, so the ensemble
/// is bit-reproducible and paths may be generated in any order.
pub fn simulate_relative_paths(
    dist: &JointReturnDistribution,
    weights: &PortfolioWeights,
    optimal_weights: &PortfolioWeights,
    horizon: usize,
    paths: usize,
    seed: u64,
) -> Result<PathEnsemble> {
    check_weights(dist, weights)?;
    check_weights(dist, optimal_weights)?;
    if horizon < 2 {
        return Err(Error::InvalidParameter {
            name: "horizon",
            message: format!("horizon must be at least 2, got {horizon}"),
        });
    }
    if paths < 1 {
        return Err(Error::InsufficientSamples {
            got: paths,
            minimum: 1,
        });
    }

    let sampler = ScenarioSampler::new(dist.probabilities());
    let mut values = Vec::with_capacity(paths);
    for path in 0..paths {
        let mut rng = stream_rng(seed, path as u64);
        let mut log_wealth = 0.0;
        let mut log_wealth_star = 0.0;
        let mut row = Vec::with_capacity(horizon);
        for n in 1..=horizon {
            let scenario = &dist.scenarios()[sampler.draw(&mut rng)];
            // Simplex weights and returns > -1 keep both arguments positive.
            log_wealth += (1.0 + weights.dot(scenario)).ln();
            log_wealth_star += (1.0 + optimal_weights.dot(scenario)).ln();
            row.push((log_wealth - log_wealth_star) / n as f64);
        }
        values.push(row);
    }
    Ok(PathEnsemble {
        horizon,
        seed,
        values,
    })
}

/// Summary of one step of the ensemble against the `(2 log n)/n` bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StepStats {
    pub n: usize,
    pub mean: f64,
    pub max: f64,
    pub violation_fraction: f64,
}

/// Violation statistics of the almost-sure bound across an ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub steps: Vec<StepStats>,
    /// Largest `n` at which any path exceeded the bound.
    pub last_violation: Option<usize>,
    /// Violation fraction at the final step.
    pub tail_violation_fraction: f64,
}

/// Per step `n`, the fraction of paths whose relative log growth exceeds
/// `(2 log n)/n`. Violations are counted with integers so the result does
/// not depend on aggregation order.
pub fn check_asymptotic_bound(ensemble: &PathEnsemble) -> BoundCheck {
    let paths = ensemble.path_count();
    let mut steps = Vec::with_capacity(ensemble.horizon());
    let mut last_violation = None;
    for n in 1..=ensemble.horizon() {
        let bound = 2.0 * (n as f64).ln() / n as f64;
        let mut violations = 0usize;
        let mut sum = 0.0;
        let mut max = f64::NEG_INFINITY;
        for row in ensemble.values() {
            let value = row[n - 1];
            sum += value;
            max = max.max(value);
            if value > bound {
                violations += 1;
            }
        }
        if violations > 0 {
            last_violation = Some(n);
        }
        steps.push(StepStats {
            n,
            mean: sum / paths as f64,
            max,
            violation_fraction: violations as f64 / paths as f64,
        });
    }
    BoundCheck {
        tail_violation_fraction: steps.last().map_or(0.0, |s| s.violation_fraction),
        steps,
        last_violation,
    }
}

impl BoundCheck {
    /// CSV with columns `n,mean,max,violation_fraction`, one row per step.
    pub fn write_csv<W: Write>(&self, mut writer: W) -> Result<()> {
        writeln!(writer, "n,mean,max,violation_fraction")?;
        for step in &self.steps {
            writeln!(
                writer,
                "{},{},{},{}",
                step.n, step.mean, step.max, step.violation_fraction
            )?;
        }
        Ok(())
    }
}

/// A simulated account path under buy-and-hold-within-period semantics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AccountTrajectory {
    pub initial_value: f64,
    /// `values[k] = V(k)`, including `V(0)`.
    pub values: Vec<f64>,
    pub weights: PortfolioWeights,
}

/// Simulates `V(k) = V(0) * sum_i K_i * prod_{j<k}(1 + X_i(j))`: the initial
/// allocation rides without rebalancing, so each intermediate value follows
/// the compound-return recursion.
pub fn account_trajectory(
    dist: &JointReturnDistribution,
    weights: &PortfolioWeights,
    initial_value: f64,
    horizon: usize,
    seed: u64,
) -> Result<AccountTrajectory> {
    check_weights(dist, weights)?;
    if !initial_value.is_finite() || initial_value <= 0.0 {
        return Err(Error::InvalidParameter {
            name: "initial_value",
            message: format!("initial account value must be positive, got {initial_value}"),
        });
    }

    let sampler = ScenarioSampler::new(dist.probabilities());
    let mut rng = stream_rng(seed, 0);
    let mut compounded = vec![1.0; dist.asset_count()];
    let mut values = Vec::with_capacity(horizon + 1);
    values.push(initial_value);
    for _ in 0..horizon {
        let scenario = &dist.scenarios()[sampler.draw(&mut rng)];
        for (acc, &x) in compounded.iter_mut().zip(scenario) {
            *acc *= 1.0 + x;
        }
        let factor: f64 = weights
            .as_slice()
            .iter()
            .zip(&compounded)
            .map(|(&w, &c)| w * c)
            .sum();
        values.push(initial_value * factor);
    }
    Ok(AccountTrajectory {
        initial_value,
        values,
        weights: weights.clone(),
    })
}

/// The worst-case multiplier `1 + min_i ((1 + X_min_i)^n - 1)`: every
/// realization of `V(n) / V(0)` stays at or above it for simplex weights.
///
/// The power is accumulated as a sequential product, matching the order in
/// which trajectories compound, so the bound holds realization by
/// realization in floating point as well.
pub fn survival_lower_bound(
    dist: &JointReturnDistribution,
    weights: &PortfolioWeights,
    period: usize,
) -> Result<f64> {
    check_weights(dist, weights)?;
    if period == 0 {
        return Err(Error::InvalidParameter {
            name: "period",
            message: "rebalancing period must be at least 1".to_string(),
        });
    }
    let worst = dist
        .bounds()
        .iter()
        .map(|&(lo, _)| {
            let mut product = 1.0;
            for _ in 0..period {
                product *= 1.0 + lo;
            }
            product - 1.0
        })
        .fold(f64::INFINITY, f64::min);
    Ok(1.0 + worst)
}
