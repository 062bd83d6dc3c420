use serde::{Deserialize, Serialize};

use super::surface::LikelihoodSurface;
use crate::error::{Error, Result};
use crate::numeric::trapezoid;

/// A 1-D posterior tabulated on a grid and normalized by the trapezoid rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PosteriorGrid {
    pub grid: Vec<f64>,
    pub log_density_unnorm: Vec<f64>,
    pub density: Vec<f64>,
}

impl PosteriorGrid {
    pub fn integral(&self) -> f64 {
        trapezoid(&self.grid, &self.density)
    }

    pub fn mean(&self) -> f64 {
        let xd: Vec<f64> = self
            .grid
            .iter()
            .zip(&self.density)
            .map(|(x, d)| x * d)
            .collect();
        trapezoid(&self.grid, &xd)
    }
}

/// Posterior from precomputed log-likelihood values on `grid`.
pub fn posterior_from_loglik(
    grid: &[f64],
    loglik: &[f64],
    log_prior: impl Fn(f64) -> f64,
) -> Result<PosteriorGrid> {
    if grid.len() < 2 || grid.len() != loglik.len() {
        return Err(Error::InvalidArgument(
            "posterior grid needs at least two points and one value per point".into(),
        ));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidArgument(
            "posterior grid must be strictly increasing".into(),
        ));
    }
    let lu: Vec<f64> = grid
        .iter()
        .zip(loglik)
        .map(|(&x, &l)| l + log_prior(x))
        .collect();
    if let Some(i) = lu.iter().position(|v| v.is_nan() || *v == f64::INFINITY) {
        return Err(Error::Evaluation {
            point: vec![grid[i]],
            reason: format!("unnormalized log posterior is {}", lu[i]),
        });
    }
    let max = lu.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY {
        return Err(Error::DegeneratePosterior);
    }
    let raw: Vec<f64> = lu.iter().map(|v| (v - max).exp()).collect();
    let z = trapezoid(grid, &raw);
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::DegeneratePosterior);
    }
    Ok(PosteriorGrid {
        grid: grid.to_vec(),
        log_density_unnorm: lu,
        density: raw.into_iter().map(|r| r / z).collect(),
    })
}

/// Posterior proportional to `exp(loglik) * prior` on a 1-D grid.
pub fn grid_posterior<S: LikelihoodSurface + ?Sized>(
    surface: &S,
    log_prior: impl Fn(f64) -> f64,
    grid: &[f64],
) -> Result<PosteriorGrid> {
    if surface.dim() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: surface.dim(),
        });
    }
    let ll = grid
        .iter()
        .map(|&x| surface.loglik(&[x]))
        .collect::<Result<Vec<_>>>()?;
    posterior_from_loglik(grid, &ll, log_prior)
}

/// Total variation distance `1/2 * int |p - q|` on a shared grid.
pub fn tv_distance(p: &PosteriorGrid, q: &PosteriorGrid) -> Result<f64> {
    if p.grid.len() != q.grid.len() {
        return Err(Error::GridMismatch);
    }
    let scale = p.grid.iter().map(|x| x.abs()).fold(1.0, f64::max);
    if p.grid
        .iter()
        .zip(&q.grid)
        .any(|(a, b)| (a - b).abs() > 1e-12 * scale)
    {
        return Err(Error::GridMismatch);
    }
    let diff: Vec<f64> = p
        .density
        .iter()
        .zip(&q.density)
        .map(|(a, b)| (a - b).abs())
        .collect();
    Ok((0.5 * trapezoid(&p.grid, &diff)).clamp(0.0, 1.0))
}
