//! Maximizes `g_n` over the unit simplex.
//!
//! The objective is smooth and concave on a compact convex set, so projected
//! gradient ascent with an Armijo backtracking line search converges from the
//! uniform starting point. The stopping rule is not a gradient norm but the
//! expected-ratio residual from the certificate module, which is exactly the
//! quantity the optimality conditions bound.

use serde::{Deserialize, Serialize};

use crate::certificates::{expected_ratios, residual_from_ratios, DEFAULT_SUPPORT_EPS};
use crate::elg::{elg_exact, elg_gradient};
use crate::error::{Error, Result};
use crate::returns_model::{
    CompoundReturnDistribution, JointReturnDistribution, PortfolioWeights, DEFAULT_ENUMERATION_CAP,
};

const ARMIJO_SLOPE: f64 = 1e-4;
const BACKTRACK_SHRINK: f64 = 0.5;
const INITIAL_STEP: f64 = 1.0;
const MAX_BACKTRACKS: usize = 60;

/// Tolerances and limits for [`solve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SolveOptions {
    /// Stop once the expected-ratio residual falls below this.
    pub kkt_tol: f64,
    pub max_iters: usize,
    /// Support threshold separating the two optimality branches.
    pub support_eps: f64,
    /// Cap on enumerated compound scenarios.
    pub enumeration_cap: usize,
}

impl Default for SolveOptions {
    fn default() -> Self {
        Self {
            kkt_tol: 1e-8,
            max_iters: 10_000,
            support_eps: DEFAULT_SUPPORT_EPS,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

/// A candidate optimum with the data needed to certify it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub weights: PortfolioWeights,
    /// Per-step log growth at the returned weights.
    pub optimal_value: f64,
    pub iterations: usize,
    /// Max violation of the expected-ratio optimality conditions.
    pub kkt_residual: f64,
    pub converged: bool,
}

/// Maximizes `g_n(K)` for the given rebalancing period.
///
/// Multiple optima are possible for degenerate models; the returned point is
/// whichever the ascent converges to, and the certificate — not uniqueness —
/// is the contract.
pub fn solve(
    dist: &JointReturnDistribution,
    period: usize,
    opts: &SolveOptions,
) -> Result<OptimizationResult> {
    let compound = dist.compound_exact_capped(period, opts.enumeration_cap)?;
    solve_compound(&compound, opts)
}

/// Runs the ascent on a pre-enumerated compound distribution.
pub fn solve_compound(
    compound: &CompoundReturnDistribution,
    opts: &SolveOptions,
) -> Result<OptimizationResult> {
    let (result, _) = solve_traced(compound, opts)?;
    Ok(result)
}

/// Objective values of the accepted iterates, in order. Used by tests to
/// check monotone ascent and iterate feasibility.
pub(crate) struct AscentTrace {
    pub objectives: Vec<f64>,
    pub iterates: Vec<PortfolioWeights>,
}

pub(crate) fn solve_traced(
    compound: &CompoundReturnDistribution,
    opts: &SolveOptions,
) -> Result<(OptimizationResult, AscentTrace)> {
    let mut weights = PortfolioWeights::uniform(compound.asset_count())?;
    let mut objective = elg_exact(compound, &weights)?.value;
    if !objective.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    let mut trace = AscentTrace {
        objectives: vec![objective],
        iterates: vec![weights.clone()],
    };

    let mut iterations = 0;
    let mut residual = residual_from_ratios(
        &expected_ratios(compound, &weights)?,
        &weights,
        opts.support_eps,
    );

    while residual > opts.kkt_tol && iterations < opts.max_iters {
        let gradient = elg_gradient(compound, &weights)?;

        let mut step = INITIAL_STEP;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let raw: Vec<f64> = weights
                .as_slice()
                .iter()
                .zip(&gradient)
                .map(|(&w, &g)| w + step * g)
                .collect();
            let candidate = project_to_simplex(&raw)?;
            let direction: Vec<f64> = candidate
                .as_slice()
                .iter()
                .zip(weights.as_slice())
                .map(|(&c, &w)| c - w)
                .collect();
            if direction.iter().all(|d| d.abs() < 1e-18) {
                // Projection fixed point: stationary to float precision.
                break;
            }
            let slope: f64 = gradient.iter().zip(&direction).map(|(&g, &d)| g * d).sum();
            let candidate_objective = elg_exact(compound, &candidate)?.value;
            if candidate_objective.is_finite()
                && candidate_objective >= objective + ARMIJO_SLOPE * slope
            {
                accepted = Some((candidate, candidate_objective));
                break;
            }
            step *= BACKTRACK_SHRINK;
        }

        let Some((next_weights, next_objective)) = accepted else {
            break;
        };
        weights = next_weights;
        objective = next_objective;
        iterations += 1;
        trace.objectives.push(objective);
        trace.iterates.push(weights.clone());
        residual = residual_from_ratios(
            &expected_ratios(compound, &weights)?,
            &weights,
            opts.support_eps,
        );
    }

    let result = OptimizationResult {
        converged: residual <= opts.kkt_tol,
        weights,
        optimal_value: objective,
        iterations,
        kkt_residual: residual,
    };
    Ok((result, trace))
}

/// Euclidean projection onto the unit simplex via sort-and-threshold.
pub fn project_to_simplex(v: &[f64]) -> Result<PortfolioWeights> {
    if v.is_empty() {
        return Err(Error::EmptyWeights);
    }
    if v.iter().any(|x| !x.is_finite()) {
        return Err(Error::NonFiniteInput {
            context: "simplex projection",
        });
    }
    let mut sorted = v.to_vec();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut prefix = 0.0;
    let mut threshold = f64::NEG_INFINITY;
    for (j, &u) in sorted.iter().enumerate() {
        prefix += u;
        let candidate = (prefix - 1.0) / (j + 1) as f64;
        if u - candidate > 0.0 {
            threshold = candidate;
        }
    }
    let projected: Vec<f64> = v.iter().map(|&x| (x - threshold).max(0.0)).collect();
    PortfolioWeights::new(projected)
}

/// Best point of the regular simplex lattice `{K : K_i = k_i / resolution}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GridBest {
    pub weights: PortfolioWeights,
    pub value: f64,
}

const GRID_MAX_ASSETS: usize = 4;
const GRID_MAX_RESOLUTION: usize = 200;

/// Brute-force oracle: exhaustive evaluation of `g_n` on the simplex lattice.
/// Ties go to the lexicographically smallest grid point.
pub fn grid_oracle(
    dist: &JointReturnDistribution,
    period: usize,
    resolution: usize,
) -> Result<GridBest> {
    let assets = dist.asset_count();
    if assets > GRID_MAX_ASSETS || resolution > GRID_MAX_RESOLUTION {
        return Err(Error::GridTooLarge {
            assets,
            resolution,
            max_assets: GRID_MAX_ASSETS,
            max_resolution: GRID_MAX_RESOLUTION,
        });
    }
    if resolution == 0 {
        return Err(Error::InvalidParameter {
            name: "resolution",
            message: "grid resolution must be at least 1".to_string(),
        });
    }
    let compound = dist.compound_exact(period)?;

    let mut best: Option<GridBest> = None;
    let mut counts = vec![0usize; assets];
    visit_compositions(&mut counts, 0, resolution, &mut |counts| {
        let weights = PortfolioWeights::new(
            counts
                .iter()
                .map(|&c| c as f64 / resolution as f64)
                .collect(),
        )?;
        let value = elg_exact(&compound, &weights)?.value;
        // Strict improvement keeps the first (lexicographically smallest)
        // maximizer on ties.
        if best.as_ref().is_none_or(|b| value > b.value) {
            best = Some(GridBest { weights, value });
        }
        Ok(())
    })?;
    Ok(best.expect("grid has at least one point"))
}

/// Enumerates `counts` summing to `remaining` across positions `from..`, in
/// lexicographic order of the resulting weight vector.
fn visit_compositions(
    counts: &mut Vec<usize>,
    from: usize,
    remaining: usize,
    visit: &mut impl FnMut(&[usize]) -> Result<()>,
) -> Result<()> {
    if from + 1 == counts.len() {
        counts[from] = remaining;
        return visit(counts);
    }
    for taken in 0..=remaining {
        counts[from] = taken;
        visit_compositions(counts, from + 1, remaining - taken, visit)?;
    }
    Ok(())
}
