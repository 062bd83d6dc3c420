use rand::distr::Open01;
use rand::Rng;
use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc_inv;

use crate::numeric::logistic;
use crate::rng;

/// Item counts `y_i` out of `m` trials, with the generating setup recorded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TwoLevelDataset {
    pub n: usize,
    pub m: u32,
    pub y: Vec<u32>,
    pub theta0: f64,
    pub seed: u64,
}

impl TwoLevelDataset {
    /// `(y, count)` pairs for each observed value of `y`, ascending in `y`.
    pub fn counts(&self) -> Vec<(u32, u64)> {
        let mut hist = vec![0u64; self.m as usize + 1];
        for &y in &self.y {
            hist[y as usize] += 1;
        }
        hist.into_iter()
            .enumerate()
            .filter(|(_, c)| *c > 0)
            .map(|(y, c)| (y as u32, c))
            .collect()
    }
}

fn std_normal_inv(u: f64) -> f64 {
    -std::f64::consts::SQRT_2 * erfc_inv(2.0 * u)
}

/// Simulate `n` items. Item `i` draws from its own stream `(seed, i)`: one
/// uniform inverted to the random effect, then `m` Bernoulli trials.
pub fn simulate_two_level(n: usize, m: u32, theta0: f64, seed: u64) -> TwoLevelDataset {
    let y = (0..n)
        .map(|i| {
            let mut r = rng::stream(seed, i as u64);
            let u: f64 = r.sample(Open01);
            let p = logistic(theta0 * std_normal_inv(u));
            (0..m).filter(|_| r.random::<f64>() < p).count() as u32
        })
        .collect();
    TwoLevelDataset {
        n,
        m,
        y,
        theta0,
        seed,
    }
}
