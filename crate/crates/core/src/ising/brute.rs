use serde::{Deserialize, Serialize};

use rand::Rng;

use super::lattice::{IsingParams, LatticeSpec, SpinConfig};
use crate::error::{Error, Result};
use crate::numeric::log_sum_exp;

pub const BRUTE_MAX_SITES: usize = 24;

/// Number of configurations at each `(v0, v1)`, from a Gray-code sweep over
/// all `2^(rc)` spin configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityOfStates {
    pub lattice: LatticeSpec,
    sites: usize,
    edges: usize,
    counts: Vec<u64>,
}

impl DensityOfStates {
    pub fn enumerate(lattice: &LatticeSpec) -> Result<Self> {
        let n = lattice.sites();
        if n > BRUTE_MAX_SITES {
            return Err(Error::SizeCap {
                rows: lattice.rows,
                cols: lattice.cols,
                method: "brute-force",
            });
        }
        let edge_list = lattice.edges();
        let e = edge_list.len();
        let mut nbrs: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &edge_list {
            if a != b {
                nbrs[a].push(b);
                nbrs[b].push(a);
            }
        }

        let width = 2 * e + 1;
        let mut counts = vec![0u64; (n + 1) * width];
        let mut y = vec![-1i64; n];
        let mut v0 = -(n as i64);
        let mut v1 = e as i64;
        let idx =
            |v0: i64, v1: i64| ((v0 + n as i64) / 2) as usize * width + (v1 + e as i64) as usize;
        counts[idx(v0, v1)] += 1;
        for step in 1u64..(1u64 << n) {
            let s = step.trailing_zeros() as usize;
            let field: i64 = nbrs[s].iter().map(|&t| y[t]).sum();
            v1 -= 2 * y[s] * field;
            v0 -= 2 * y[s];
            y[s] = -y[s];
            counts[idx(v0, v1)] += 1;
        }
        Ok(DensityOfStates {
            lattice: *lattice,
            sites: n,
            edges: e,
            counts,
        })
    }

    /// Nonzero bins as `(v0, v1, count)`, in increasing `(v0, v1)` order.
    pub fn bins(&self) -> impl Iterator<Item = (i64, i64, u64)> + '_ {
        let width = 2 * self.edges + 1;
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(move |(i, &c)| {
                let v0 = 2 * (i / width) as i64 - self.sites as i64;
                let v1 = (i % width) as i64 - self.edges as i64;
                (v0, v1, c)
            })
    }

    pub fn log_z(&self, params: IsingParams) -> f64 {
        let terms: Vec<f64> = self
            .bins()
            .map(|(v0, v1, c)| (c as f64).ln() + params.alpha * v0 as f64 + params.beta * v1 as f64)
            .collect();
        log_sum_exp(&terms)
    }
}

/// Largest lattice for which [`exact_sample`] tabulates every configuration.
pub const SAMPLE_MAX_SITES: usize = 20;

/// Draws one configuration from the exact Ising distribution by inverse-CDF
/// sampling over all `2^(rc)` configurations in binary order.
pub fn exact_sample<R: Rng + ?Sized>(
    lattice: &LatticeSpec,
    params: IsingParams,
    rng: &mut R,
) -> Result<SpinConfig> {
    let n = lattice.sites();
    if n > SAMPLE_MAX_SITES {
        return Err(Error::SizeCap {
            rows: lattice.rows,
            cols: lattice.cols,
            method: "exact sampling",
        });
    }
    let edges = lattice.edges();
    let spins_of = |mask: u64| -> Vec<i8> {
        (0..n)
            .map(|i| if mask >> i & 1 == 1 { 1 } else { -1 })
            .collect()
    };
    let energy = |y: &[i8]| {
        let v0: i64 = y.iter().map(|&s| s as i64).sum();
        let v1: i64 = edges.iter().map(|&(a, b)| (y[a] * y[b]) as i64).sum();
        params.alpha * v0 as f64 + params.beta * v1 as f64
    };
    let log_w: Vec<f64> = (0..1u64 << n).map(|mask| energy(&spins_of(mask))).collect();
    let top = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let mut cdf = Vec::with_capacity(log_w.len());
    let mut acc = 0.0;
    for lw in &log_w {
        acc += (lw - top).exp();
        cdf.push(acc);
    }
    let u: f64 = rng.random::<f64>() * acc;
    let mask = cdf.partition_point(|&c| c <= u).min(cdf.len() - 1) as u64;
    SpinConfig::new(spins_of(mask))
}

pub fn brute_force_log_z(lattice: &LatticeSpec, params: IsingParams) -> Result<f64> {
    Ok(DensityOfStates::enumerate(lattice)?.log_z(params))
}
