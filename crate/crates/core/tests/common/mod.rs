//! Seeded generators shared by the property and acceptance suites.

use kelly_core::returns_model::{JointReturnDistribution, PortfolioWeights};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// The canonical two-asset model: a stock gaining 50% or losing 30% with
/// equal probability, plus cash. The optimum is K* = [2/3, 1/3].
pub fn stock_and_cash() -> JointReturnDistribution {
    JointReturnDistribution::new(vec![vec![0.5], vec![-0.3]], vec![0.5, 0.5])
        .unwrap()
        .with_riskless(0.0)
        .unwrap()
}

/// 0.5 ln(4/3) + 0.5 ln(0.8), the optimal per-step growth of the canonical
/// model.
#[allow(dead_code)] // each test target uses a different slice of this module
pub const G1_STAR: f64 = 0.03226926056878557;

/// A random scenario model with 2..=max_assets assets and 1..=max_scenarios
/// scenarios, returns in (-0.6, 1.0), probabilities bounded away from zero.
pub fn random_model(
    rng: &mut ChaCha8Rng,
    max_assets: usize,
    max_scenarios: usize,
) -> JointReturnDistribution {
    let assets = rng.gen_range(2..=max_assets);
    let scenarios = rng.gen_range(1..=max_scenarios);
    let rows: Vec<Vec<f64>> = (0..scenarios)
        .map(|_| (0..assets).map(|_| rng.gen_range(-0.6..1.0)).collect())
        .collect();
    let raw: Vec<f64> = (0..scenarios).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    let probabilities = raw.iter().map(|p| p / total).collect();
    JointReturnDistribution::new(rows, probabilities).unwrap()
}

/// A uniformly-ish random point of the simplex (normalized exponentials).
pub fn random_weights(rng: &mut ChaCha8Rng, assets: usize) -> PortfolioWeights {
    let raw: Vec<f64> = (0..assets)
        .map(|_| -rng.gen_range(1e-12..1.0f64).ln())
        .collect();
    let total: f64 = raw.iter().sum();
    PortfolioWeights::new(raw.iter().map(|x| x / total).collect()).unwrap()
}

/// Appends an asset that beats every existing one in every scenario by
/// `margin`, making it dominant by construction. Returns the new model and
/// the dominant index.
pub fn with_constructed_dominant(
    base: &JointReturnDistribution,
    margin: f64,
) -> (JointReturnDistribution, usize) {
    let rows: Vec<Vec<f64>> = base
        .scenarios()
        .iter()
        .map(|row| {
            let best = row.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let mut extended = row.clone();
            extended.push(best + margin);
            extended
        })
        .collect();
    let dist = JointReturnDistribution::new(rows, base.probabilities().to_vec()).unwrap();
    (dist, base.asset_count())
}
