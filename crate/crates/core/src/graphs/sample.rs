use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{chromatic_number, girth, Graph, GraphError};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplerSchedule {
    pub sizes: Vec<usize>,
    pub scales: Vec<f64>,
}

impl Default for SamplerSchedule {
    fn default() -> Self {
        crate::config::section("sampler")
    }
}

impl SamplerSchedule {
    /// Node count and edge probability for attempt `k`.
    pub fn attempt(&self, k: usize) -> (usize, f64) {
        let m = self.sizes[(k / self.scales.len()) % self.sizes.len()];
        let c = self.scales[k % self.scales.len()];
        (m, (c / m as f64).min(1.0))
    }
}

/// Rejection sampling from `G(m, p)` under the default schedule until a graph
/// with girth at least `girth_min` and chromatic number at least `chi_min`
/// appears. Both properties are rechecked exactly.
pub fn sample_high_girth_chromatic(girth_min: usize, chi_min: usize, budget: usize, seed: u64) -> Result<Graph, GraphError> {
    sample_with(&SamplerSchedule::default(), girth_min, chi_min, budget, seed)
}

pub fn sample_with(
    schedule: &SamplerSchedule,
    girth_min: usize,
    chi_min: usize,
    budget: usize,
    seed: u64,
) -> Result<Graph, GraphError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..budget {
        let (m, p) = schedule.attempt(k);
        let mut g = Graph::empty(m);
        for u in 0..m as u32 {
            for v in u + 1..m as u32 {
                if rng.gen_bool(p) {
                    g.add_edge(u, v).expect("in range");
                }
            }
        }
        if girth(&g).map_or(true, |len| len >= girth_min) && chromatic_number(&g).chi >= chi_min {
            return Ok(g);
        }
    }
    Err(GraphError::Exhausted(budget))
}
