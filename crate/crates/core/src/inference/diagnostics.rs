use serde::{Deserialize, Serialize};

use super::surface::{LikelihoodSurface, ParamPoint};
use crate::error::{Error, Result};

/// Finite set of parameter points standing in for a region `S`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionGrid {
    pub points: Vec<ParamPoint>,
    /// Spacing of a 1-D equally spaced grid, when the grid is one.
    pub spacing: Option<f64>,
}

impl RegionGrid {
    pub fn new(points: Vec<ParamPoint>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidArgument("region grid is empty".into()));
        }
        Ok(RegionGrid {
            points,
            spacing: None,
        })
    }

    /// Equally spaced points `lo, lo + step, ...` up to `hi` (inclusive, within roundoff).
    pub fn interval(lo: f64, hi: f64, step: f64) -> Result<Self> {
        let xs = equally_spaced(lo, hi, step)?;
        Ok(RegionGrid {
            points: xs.into_iter().map(ParamPoint::scalar).collect(),
            spacing: Some(step),
        })
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

pub(crate) fn equally_spaced(lo: f64, hi: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0 && hi >= lo && lo.is_finite() && hi.is_finite()) {
        return Err(Error::InvalidArgument(format!(
            "bad grid [{lo}, {hi}] step {step}"
        )));
    }
    let n = ((hi - lo) / step + 1e-9).floor() as usize + 1;
    Ok((0..n).map(|i| lo + i as f64 * step).collect())
}

/// Pointwise and grid-maximal score and information errors.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErrorDiagnostics {
    pub points: Vec<ParamPoint>,
    pub delta: Vec<f64>,
    pub gamma: Vec<f64>,
    pub sup_delta: f64,
    pub sup_gamma: f64,
    /// Index of the grid point attaining `sup_delta`.
    pub argmax_delta: usize,
}

impl ErrorDiagnostics {
    pub fn argmax_point(&self) -> &ParamPoint {
        &self.points[self.argmax_delta]
    }
}

/// `(delta, gamma)` at `theta`: the L1 norm of the score difference and the
/// maximum column sum of the information difference.
pub fn score_error<E, A>(exact: &E, approx: &A, theta: &ParamPoint) -> Result<(f64, f64)>
where
    E: LikelihoodSurface + ?Sized,
    A: LikelihoodSurface + ?Sized,
{
    let e = exact.eval(theta)?;
    let a = approx.eval(theta)?;
    let delta = e
        .score
        .iter()
        .zip(&a.score)
        .map(|(u, v)| (v - u).abs())
        .sum();
    let diff = a.obs_info - e.obs_info;
    let gamma = diff
        .column_iter()
        .map(|c| c.iter().map(|x| x.abs()).sum::<f64>())
        .fold(0.0, f64::max);
    Ok((delta, gamma))
}

/// Score/information errors over a grid plus their maxima.
pub fn sup_score_error<E, A>(exact: &E, approx: &A, region: &RegionGrid) -> Result<ErrorDiagnostics>
where
    E: LikelihoodSurface + ?Sized,
    A: LikelihoodSurface + ?Sized,
{
    if region.is_empty() {
        return Err(Error::InvalidArgument("region grid is empty".into()));
    }
    let mut delta = Vec::with_capacity(region.len());
    let mut gamma = Vec::with_capacity(region.len());
    for p in &region.points {
        let (d, g) = score_error(exact, approx, p)?;
        delta.push(d);
        gamma.push(g);
    }
    let (argmax_delta, sup_delta) =
        delta
            .iter()
            .copied()
            .enumerate()
            .fold(
                (0, f64::NEG_INFINITY),
                |acc, (i, d)| if d > acc.1 { (i, d) } else { acc },
            );
    let sup_gamma = gamma.iter().copied().fold(0.0, f64::max);
    Ok(ErrorDiagnostics {
        points: region.points.clone(),
        delta,
        gamma,
        sup_delta,
        sup_gamma,
        argmax_delta,
    })
}
