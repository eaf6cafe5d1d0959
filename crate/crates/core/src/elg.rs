//! The frequency-dependent objective: expected logarithmic growth
//! `g_n(K) = E[log(1 + K^T X_n)] / n`, evaluated exactly over enumerated
//! compound scenarios or estimated from sampled draws. Values are per step;
//! multiply by `n` for the growth of a whole rebalancing period.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::returns_model::{CompoundReturnDistribution, PortfolioWeights};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ElgMode {
    Exact,
    Sampled,
}

/// A per-step expected log growth value with its standard error (zero in
/// exact mode).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElgValue {
    pub value: f64,
    pub stderr: f64,
    pub mode: ElgMode,
}

/// `log(1 + K^T x)` for one realized compound return vector.
pub fn log_growth_realized(weights: &PortfolioWeights, compound_returns: &[f64]) -> Result<f64> {
    if weights.len() != compound_returns.len() {
        return Err(Error::DimensionMismatch {
            context: "log growth",
            expected: weights.len(),
            got: compound_returns.len(),
        });
    }
    let wealth_factor = 1.0 + weights.dot(compound_returns);
    if !wealth_factor.is_finite() || wealth_factor <= 0.0 {
        return Err(Error::NonPositiveWealthArgument {
            value: wealth_factor,
        });
    }
    Ok(wealth_factor.ln())
}

fn check_dims(compound: &CompoundReturnDistribution, weights: &PortfolioWeights) -> Result<()> {
    if weights.len() != compound.asset_count() {
        return Err(Error::DimensionMismatch {
            context: "portfolio weights",
            expected: compound.asset_count(),
            got: weights.len(),
        });
    }
    Ok(())
}

/// Exact `g_n(K)` over an enumerated compound distribution.
///
/// Accumulation is sequential in outcome order so repeated calls are
/// bit-identical.
pub fn elg_exact(
    compound: &CompoundReturnDistribution,
    weights: &PortfolioWeights,
) -> Result<ElgValue> {
    check_dims(compound, weights)?;
    let (outcomes, probabilities) = compound.require_exact()?;
    let mut acc = 0.0;
    for (row, &p) in outcomes.iter().zip(probabilities) {
        acc += p * log_growth_realized(weights, row)?;
    }
    let value = acc / compound.period() as f64;
    if !value.is_finite() {
        return Err(Error::NonFiniteObjective);
    }
    Ok(ElgValue {
        value,
        stderr: 0.0,
        mode: ElgMode::Exact,
    })
}

/// Monte Carlo estimate of `g_n(K)` from sampled compound draws, with the
/// standard error of the mean.
pub fn elg_mc(
    compound: &CompoundReturnDistribution,
    weights: &PortfolioWeights,
) -> Result<ElgValue> {
    check_dims(compound, weights)?;
    let outcomes = compound.require_sampled()?;
    let count = outcomes.len();
    if count < 2 {
        return Err(Error::InsufficientSamples {
            got: count,
            minimum: 2,
        });
    }
    let mut growths = Vec::with_capacity(count);
    for row in outcomes {
        growths.push(log_growth_realized(weights, row)?);
    }
    let mean = growths.iter().sum::<f64>() / count as f64;
    let variance =
        growths.iter().map(|g| (g - mean) * (g - mean)).sum::<f64>() / (count - 1) as f64;
    let period = compound.period() as f64;
    Ok(ElgValue {
        value: mean / period,
        stderr: (variance / count as f64).sqrt() / period,
        mode: ElgMode::Sampled,
    })
}

/// Exact gradient of `g_n` at `K`: component `i` is
/// `E[X_{n,i} / (1 + K^T X_n)] / n`. Differentiation under the expectation
/// is valid because compound returns are bounded.
pub fn elg_gradient(
    compound: &CompoundReturnDistribution,
    weights: &PortfolioWeights,
) -> Result<Vec<f64>> {
    check_dims(compound, weights)?;
    let (outcomes, probabilities) = compound.require_exact()?;
    let mut gradient = vec![0.0; compound.asset_count()];
    for (row, &p) in outcomes.iter().zip(probabilities) {
        let wealth_factor = 1.0 + weights.dot(row);
        if !wealth_factor.is_finite() || wealth_factor <= 0.0 {
            return Err(Error::NonPositiveWealthArgument {
                value: wealth_factor,
            });
        }
        let scale = p / wealth_factor;
        for (g, &x) in gradient.iter_mut().zip(row) {
            *g += scale * x;
        }
    }
    let period = compound.period() as f64;
    for g in &mut gradient {
        *g /= period;
        if !g.is_finite() {
            return Err(Error::NonFiniteObjective);
        }
    }
    Ok(gradient)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::returns_model::JointReturnDistribution;

    fn stock_and_cash() -> JointReturnDistribution {
        JointReturnDistribution::new(vec![vec![0.5], vec![-0.3]], vec![0.5, 0.5])
            .unwrap()
            .with_riskless(0.0)
            .unwrap()
    }

    const G1_STAR: f64 = 0.03226926056878557; // 0.5 ln(4/3) + 0.5 ln(0.8)

    #[test]
    fn log_growth_examples() {
        let k = PortfolioWeights::new(vec![1.0, 0.0]).unwrap();
        let g = log_growth_realized(&k, &[0.5, 0.0]).unwrap();
        assert!((g - 0.4054651081081644).abs() < 1e-15);

        let k = PortfolioWeights::new(vec![0.5, 0.5]).unwrap();
        assert_eq!(log_growth_realized(&k, &[0.2, -0.2]).unwrap(), 0.0);

        let k = PortfolioWeights::new(vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let g = log_growth_realized(&k, &[0.5, 0.0]).unwrap();
        assert!((g - 0.28768207245178085).abs() < 1e-15);
    }

    #[test]
    fn log_growth_rejects_out_of_model_vectors() {
        let k = PortfolioWeights::new(vec![1.0]).unwrap();
        let err = log_growth_realized(&k, &[-1.5]).unwrap_err();
        assert!(matches!(err, Error::NonPositiveWealthArgument { .. }));
        let err = log_growth_realized(&k, &[0.5, 0.5]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn elg_exact_matches_closed_form_at_optimum() {
        let compound = stock_and_cash().compound_exact(1).unwrap();
        let k = PortfolioWeights::new(vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let elg = elg_exact(&compound, &k).unwrap();
        assert!((elg.value - G1_STAR).abs() < 1e-15);
        assert_eq!(elg.stderr, 0.0);
        assert_eq!(elg.mode, ElgMode::Exact);
    }

    #[test]
    fn elg_exact_on_deterministic_asset_is_rate_growth() {
        // All weight on a riskless asset gives log(1+r) for every n.
        let dist =
            JointReturnDistribution::new(vec![vec![0.5, 0.02], vec![-0.3, 0.02]], vec![0.5, 0.5])
                .unwrap();
        let k = PortfolioWeights::vertex(2, 1).unwrap();
        for n in 1..=4 {
            let compound = dist.compound_exact(n).unwrap();
            let elg = elg_exact(&compound, &k).unwrap();
            assert!((elg.value - 1.02f64.ln()).abs() < 1e-12, "n = {n}");
        }
    }

    #[test]
    fn elg_exact_riskless_only_model_is_exact() {
        let dist = JointReturnDistribution::new(vec![vec![0.07]], vec![1.0]).unwrap();
        let compound = dist.compound_exact(1).unwrap();
        let k = PortfolioWeights::new(vec![1.0]).unwrap();
        assert_eq!(elg_exact(&compound, &k).unwrap().value, 1.07f64.ln());
    }

    #[test]
    fn elg_exact_single_asset_is_frequency_invariant() {
        // For one asset the i.i.d. product averages back to the one-step value.
        let dist = JointReturnDistribution::new(vec![vec![0.5], vec![-0.3]], vec![0.5, 0.5])
            .unwrap()
            .with_riskless(0.0)
            .unwrap();
        let k = PortfolioWeights::new(vec![1.0, 0.0]).unwrap();
        let one = elg_exact(&dist.compound_exact(1).unwrap(), &k).unwrap();
        let two = elg_exact(&dist.compound_exact(2).unwrap(), &k).unwrap();
        assert!((one.value - 0.02439508208471597).abs() < 1e-15);
        assert!((two.value - one.value).abs() < 1e-12);
    }

    #[test]
    fn elg_exact_rejects_sampled_mode() {
        let sampled = stock_and_cash().compound_sample(1, 10, 1).unwrap();
        let k = PortfolioWeights::uniform(2).unwrap();
        assert!(matches!(
            elg_exact(&sampled, &k).unwrap_err(),
            Error::ModeMismatch { expected: "exact" }
        ));
        let exact = stock_and_cash().compound_exact(1).unwrap();
        assert!(matches!(
            elg_mc(&exact, &k).unwrap_err(),
            Error::ModeMismatch {
                expected: "sampled"
            }
        ));
    }

    #[test]
    fn elg_mc_zero_variance_on_degenerate_model() {
        let dist = JointReturnDistribution::new(vec![vec![0.1, 0.0]], vec![1.0]).unwrap();
        let sampled = dist.compound_sample(2, 50, 3).unwrap();
        let k = PortfolioWeights::new(vec![0.4, 0.6]).unwrap();
        let elg = elg_mc(&sampled, &k).unwrap();
        let exact = elg_exact(&dist.compound_exact(2).unwrap(), &k).unwrap();
        assert!((elg.value - exact.value).abs() < 1e-14);
        assert!(elg.stderr < 1e-14);
    }

    #[test]
    fn elg_mc_agrees_with_exact_within_standard_error() {
        let dist = stock_and_cash();
        let sampled = dist.compound_sample(1, 100_000, 1).unwrap();
        let k = PortfolioWeights::new(vec![1.0, 0.0]).unwrap();
        let mc = elg_mc(&sampled, &k).unwrap();
        let exact = elg_exact(&dist.compound_exact(1).unwrap(), &k).unwrap();
        assert!(mc.stderr > 0.0);
        assert!(
            (mc.value - exact.value).abs() <= 4.0 * mc.stderr,
            "mc {} vs exact {} (stderr {})",
            mc.value,
            exact.value,
            mc.stderr
        );
    }

    #[test]
    fn elg_mc_needs_two_samples() {
        let sampled = stock_and_cash().compound_sample(1, 1, 1).unwrap();
        let k = PortfolioWeights::uniform(2).unwrap();
        assert!(matches!(
            elg_mc(&sampled, &k).unwrap_err(),
            Error::InsufficientSamples { got: 1, minimum: 2 }
        ));
    }

    #[test]
    fn gradient_is_zero_on_all_cash_model() {
        let dist = JointReturnDistribution::new(vec![vec![0.0, 0.0]], vec![1.0]).unwrap();
        let compound = dist.compound_exact(2).unwrap();
        let k = PortfolioWeights::new(vec![0.3, 0.7]).unwrap();
        assert_eq!(elg_gradient(&compound, &k).unwrap(), vec![0.0, 0.0]);
    }

    #[test]
    fn gradient_components_equal_at_interior_optimum() {
        let compound = stock_and_cash().compound_exact(1).unwrap();
        let k = PortfolioWeights::new(vec![2.0 / 3.0, 1.0 / 3.0]).unwrap();
        let g = elg_gradient(&compound, &k).unwrap();
        assert!((g[0] - g[1]).abs() < 1e-15);
        assert!(g[0].abs() < 1e-15);
    }

    #[test]
    fn gradient_matches_central_differences() {
        // Independent finite-difference oracle over the raw expectation.
        let dist = JointReturnDistribution::new(
            vec![
                vec![0.4, -0.2, 0.1],
                vec![-0.25, 0.3, 0.0],
                vec![0.05, 0.1, -0.15],
            ],
            vec![0.3, 0.4, 0.3],
        )
        .unwrap();
        let compound = dist.compound_exact(2).unwrap();
        let raw_elg = |k: &[f64]| -> f64 {
            let (outcomes, probs) = (compound.outcomes(), compound.probabilities().unwrap());
            let mut acc = 0.0;
            for (row, &p) in outcomes.iter().zip(probs) {
                let dot: f64 = k.iter().zip(row).map(|(&w, &x)| w * x).sum();
                acc += p * (1.0 + dot).ln();
            }
            acc / compound.period() as f64
        };

        let k = PortfolioWeights::new(vec![0.2, 0.5, 0.3]).unwrap();
        let grad = elg_gradient(&compound, &k).unwrap();
        let h = 1e-6;
        for i in 0..3 {
            let mut up = k.as_slice().to_vec();
            let mut down = up.clone();
            up[i] += h;
            down[i] -= h;
            let fd = (raw_elg(&up) - raw_elg(&down)) / (2.0 * h);
            assert!(
                (grad[i] - fd).abs() < 1e-5,
                "component {i}: gradient {} vs fd {fd}",
                grad[i]
            );
        }
    }
}
