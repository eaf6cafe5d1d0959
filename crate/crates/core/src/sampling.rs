//! Seeded random streams shared by the sampling and simulation paths.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// An independent ChaCha stream keyed by `(seed, stream)`.
///
/// Every draw (a Monte Carlo sample, a simulated path) gets its own stream
/// index, so results are bit-reproducible no matter how the work is split
/// across threads.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Inverse-CDF sampler over scenario indices.
pub(crate) struct ScenarioSampler {
    cumulative: Vec<f64>,
}

impl ScenarioSampler {
    pub fn new(probabilities: &[f64]) -> Self {
        let mut cumulative = Vec::with_capacity(probabilities.len());
        let mut acc = 0.0;
        for &p in probabilities {
            acc += p;
            cumulative.push(acc);
        }
        Self { cumulative }
    }

    pub fn draw<R: Rng>(&self, rng: &mut R) -> usize {
        let u: f64 = rng.gen();
        // The final cumulative value can sit a few ulps below 1; route the
        // tail mass to the last scenario.
        self.cumulative
            .iter()
            .position(|&c| u < c)
            .unwrap_or(self.cumulative.len() - 1)
    }
}
