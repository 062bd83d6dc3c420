use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kaufman::log_abar;
use super::lattice::{Boundary, IsingParams, LatticeSpec};
use super::rda::{check_level, rda_combine, RDA_MAX_K};
use super::spectral::b_beta;
use super::transfer::transfer_log_z;
use crate::error::{Error, Result};

/// Central-difference step for the score error.
pub const DELTA_STEP: f64 = 1e-5;

/// Source of the exact log-likelihood against which `ell~^(k)` is compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum ExactMethod {
    /// Closed form on the periodic torus at zero field.
    Kaufman,
    /// Transfer matrix on the full `m x m` lattice.
    Transfer { boundary: Boundary },
    /// `ell~^(K)` standing in for the exact log-likelihood.
    Proxy { k_proxy: usize, boundary: Boundary },
}

/// Which parameters the score error differentiates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScoreCoords {
    /// The model with `alpha` pinned: `delta = |d eps / d beta|`.
    Beta,
    /// The full model: `delta = |d eps / d alpha| + |d eps / d beta|`.
    AlphaBeta,
}

impl ExactMethod {
    fn validate(&self, m: usize, ks: &[usize], params: IsingParams) -> Result<()> {
        match *self {
            ExactMethod::Kaufman => {
                if let Some(&k) = ks.iter().find(|&&k| k < 2 || k > m) {
                    return Err(Error::InvalidArgument(format!(
                        "approximation level k={k} must satisfy 2 <= k <= m={m}"
                    )));
                }
                if params.alpha != 0.0 {
                    return Err(Error::InvalidArgument(
                        "closed-form exact path needs alpha = 0".into(),
                    ));
                }
            }
            ExactMethod::Transfer { .. } => {
                for &k in ks {
                    check_level(k, m)?;
                }
            }
            ExactMethod::Proxy { k_proxy, .. } => {
                for &k in ks {
                    check_level(k, m)?;
                }
                if let Some(&k) = ks.iter().find(|&&k| k >= k_proxy) {
                    return Err(Error::InvalidProxy { k, k_proxy });
                }
                if k_proxy > m || k_proxy > RDA_MAX_K {
                    return Err(Error::InvalidArgument(format!(
                        "proxy level K={k_proxy} must satisfy K <= min(m={m}, {RDA_MAX_K})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// `log Z` of the `n x m` strip, up to terms that cancel in every error.
    fn strip(&self, n: usize, m: usize, params: IsingParams) -> Result<f64> {
        match *self {
            ExactMethod::Kaufman => log_abar(n, m, params.beta),
            ExactMethod::Transfer { boundary } | ExactMethod::Proxy { boundary, .. } => {
                transfer_log_z(&LatticeSpec::new(n, m, boundary)?, params)
            }
        }
    }

    fn exact_level(&self, m: usize) -> usize {
        match *self {
            ExactMethod::Proxy { k_proxy, .. } => k_proxy,
            _ => m,
        }
    }
}

/// `eps^(k)_m = log Z_{m,m} - log Ztilde^(k)_{m,m}` for each `k`, sharing strip evaluations.
pub fn epsilon_many(
    m: usize,
    ks: &[usize],
    params: IsingParams,
    method: ExactMethod,
) -> Result<Vec<f64>> {
    method.validate(m, ks, params)?;
    let top = method.exact_level(m);
    let mut heights: Vec<usize> = ks.iter().flat_map(|&k| [k, k - 1]).collect();
    heights.extend([top, top - 1]);
    heights.sort_unstable();
    heights.dedup();
    let values: Vec<f64> = heights
        .par_iter()
        .map(|&n| method.strip(n, m, params))
        .collect::<Result<_>>()?;
    let strip = |n: usize| values[heights.binary_search(&n).expect("height computed")];
    let combine = |k: usize| rda_combine(m, k, strip(k), strip(k - 1));
    let exact = combine(top);
    Ok(ks.iter().map(|&k| exact - combine(k)).collect())
}

pub fn epsilon_k(m: usize, k: usize, params: IsingParams, method: ExactMethod) -> Result<f64> {
    Ok(epsilon_many(m, &[k], params, method)?[0])
}

/// `|d eps / d theta|_1` for each `k`, by central differences at steps `h`
/// and `h / 2` combined by one Richardson step.
pub fn delta_many(
    m: usize,
    ks: &[usize],
    params: IsingParams,
    method: ExactMethod,
    coords: ScoreCoords,
) -> Result<Vec<f64>> {
    let dirs: &[(f64, f64)] = match coords {
        ScoreCoords::Beta => &[(0.0, 1.0)],
        ScoreCoords::AlphaBeta => &[(1.0, 0.0), (0.0, 1.0)],
    };
    let mut total = vec![0.0; ks.len()];
    for &(da, db) in dirs {
        let at = |t: f64| IsingParams::new(params.alpha + t * da, params.beta + t * db);
        let diff = |h: f64| -> Result<Vec<f64>> {
            let up = epsilon_many(m, ks, at(h), method)?;
            let down = epsilon_many(m, ks, at(-h), method)?;
            Ok(up
                .iter()
                .zip(&down)
                .map(|(u, d)| (u - d) / (2.0 * h))
                .collect())
        };
        let coarse = diff(DELTA_STEP)?;
        let fine = diff(DELTA_STEP / 2.0)?;
        for (t, (c, f)) in total.iter_mut().zip(coarse.iter().zip(&fine)) {
            *t += ((4.0 * f - c) / 3.0).abs();
        }
    }
    Ok(total)
}

pub fn delta_k(
    m: usize,
    k: usize,
    params: IsingParams,
    method: ExactMethod,
    coords: ScoreCoords,
) -> Result<f64> {
    Ok(delta_many(m, &[k], params, method, coords)?[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KSchedule {
    pub k: usize,
    /// Set when `c_mult <= 1 / b_beta(beta0)`, too slow a growth for valid inference.
    pub insufficient: bool,
}

/// `k_m = clamp(ceil(c_mult log m), 2, min(m, 16))`.
pub fn k_schedule(m: usize, beta0: f64, c_mult: f64) -> KSchedule {
    let raw = (c_mult * (m as f64).ln()).ceil();
    let hi = m.min(RDA_MAX_K);
    let k = if raw.is_nan() || raw < 2.0 {
        2
    } else {
        (raw as usize).min(hi).max(2)
    };
    let insufficient = b_beta(beta0).map(|b| c_mult <= 1.0 / b).unwrap_or(true);
    KSchedule { k, insufficient }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ContourRow {
    pub m: usize,
    pub k: usize,
    pub alpha: f64,
    pub beta: f64,
    /// `log(delta^(k)_m / m)`.
    pub log_scaled_delta: f64,
}

/// `log(delta^(k)_m / m)` over the `(m, k)` grid with `ell~^(K)` as the exact
/// log-likelihood. Rows are sorted by `(m, k)`.
pub fn delta_contour(
    m_list: &[usize],
    k_list: &[usize],
    params: IsingParams,
    k_proxy: usize,
    boundary: Boundary,
) -> Result<Vec<ContourRow>> {
    if m_list.is_empty() || k_list.is_empty() {
        return Err(Error::InvalidArgument("empty m or k list".into()));
    }
    let method = ExactMethod::Proxy { k_proxy, boundary };
    let per_m: Vec<Vec<ContourRow>> = m_list
        .par_iter()
        .map(|&m| {
            let deltas = delta_many(m, k_list, params, method, ScoreCoords::AlphaBeta)?;
            Ok(k_list
                .iter()
                .zip(deltas)
                .map(|(&k, d)| ContourRow {
                    m,
                    k,
                    alpha: params.alpha,
                    beta: params.beta,
                    log_scaled_delta: (d / m as f64).ln(),
                })
                .collect())
        })
        .collect::<Result<_>>()?;
    let mut rows: Vec<ContourRow> = per_m.into_iter().flatten().collect();
    rows.sort_by_key(|r| (r.m, r.k));
    Ok(rows)
}
