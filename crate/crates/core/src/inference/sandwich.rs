use nalgebra::{Cholesky, DMatrix, DVector};

use super::surface::{LikelihoodSurface, ParamPoint};
use crate::error::{Error, Result};

/// Sandwich information `G = Ibar H^{-1} Ibar` from replicate surfaces.
#[derive(Debug, Clone, PartialEq)]
pub struct GodambeMatrices {
    /// Sample covariance of the replicate scores.
    pub h: DMatrix<f64>,
    /// Mean replicate observed information.
    pub ibar: DMatrix<f64>,
    pub g: DMatrix<f64>,
}

pub fn godambe_sandwich<S: LikelihoodSurface>(
    approx_surfaces: &[S],
    theta: &ParamPoint,
) -> Result<GodambeMatrices> {
    if approx_surfaces.len() < 2 {
        return Err(Error::InvalidArgument(
            "sandwich estimate needs at least two replicates".into(),
        ));
    }
    let bundles = approx_surfaces
        .iter()
        .map(|s| s.eval(theta))
        .collect::<Result<Vec<_>>>()?;
    let p = theta.dim();
    let r = bundles.len() as f64;

    let mut mean_u = DVector::zeros(p);
    let mut ibar = DMatrix::zeros(p, p);
    for b in &bundles {
        mean_u += DVector::from_column_slice(&b.score);
        ibar += &b.obs_info;
    }
    mean_u /= r;
    ibar /= r;

    let mut h = DMatrix::zeros(p, p);
    for b in &bundles {
        let d = DVector::from_column_slice(&b.score) - &mean_u;
        h += &d * d.transpose();
    }
    h /= r - 1.0;

    let scale = h.iter().map(|x| x.abs()).fold(0.0, f64::max);
    if scale == 0.0 {
        return Err(Error::SingularVariability);
    }
    let chol = Cholesky::new(h.clone()).ok_or(Error::SingularVariability)?;
    if chol.l().diagonal().iter().any(|d| d * d <= 1e-13 * scale) {
        return Err(Error::SingularVariability);
    }
    let g = &ibar * chol.solve(&ibar);
    let g = (&g + g.transpose()) * 0.5;
    Ok(GodambeMatrices { h, ibar, g })
}
