use nalgebra::{Cholesky, DVector};
use serde::{Deserialize, Serialize};
use statrs::function::gamma::gamma_lr;

use super::surface::{LikelihoodSurface, ParamPoint};
use crate::error::{Error, Result};

/// Roundoff allowance before a negative likelihood ratio counts as an optimizer failure.
const LR_SLACK: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TestStatistics {
    pub lambda: f64,
    pub wald: f64,
    pub score_stat: f64,
    pub dof: usize,
}

/// `2 {l(full) - l(restricted)}`, clamped at zero.
pub fn lr_statistic<S: LikelihoodSurface + ?Sized>(
    surface: &S,
    theta_hat_full: &ParamPoint,
    theta_hat_restricted: &ParamPoint,
) -> Result<f64> {
    let lf = surface.loglik(theta_hat_full)?;
    let lr = surface.loglik(theta_hat_restricted)?;
    clamp_lr(2.0 * (lf - lr))
}

fn clamp_lr(lambda: f64) -> Result<f64> {
    if lambda < -LR_SLACK {
        Err(Error::InconsistentMaximizers { lambda })
    } else {
        Ok(lambda.max(0.0))
    }
}

/// Likelihood ratio, Wald and score statistics for a restriction with `dof`
/// degrees of freedom. The Wald and score forms use the observed information
/// at `info_at`.
pub fn wald_and_score_statistics<S: LikelihoodSurface + ?Sized>(
    surface: &S,
    theta_hat: &ParamPoint,
    theta_restricted: &ParamPoint,
    info_at: &ParamPoint,
    dof: usize,
) -> Result<TestStatistics> {
    let lambda = lr_statistic(surface, theta_hat, theta_restricted)?;
    let info = surface.eval(info_at)?.obs_info;
    let chol = Cholesky::new(info.clone()).ok_or(Error::SingularInformation)?;
    let d = DVector::from_iterator(
        theta_hat.dim(),
        theta_hat
            .iter()
            .zip(theta_restricted.iter())
            .map(|(a, b)| a - b),
    );
    let wald = (d.transpose() * &info * &d)[(0, 0)];
    let u = DVector::from_vec(surface.eval(theta_restricted)?.score);
    let score_stat = u.dot(&chol.solve(&u));
    Ok(TestStatistics {
        lambda,
        wald: wald.max(0.0),
        score_stat: score_stat.max(0.0),
        dof,
    })
}

/// Chi-squared CDF via the regularized lower incomplete gamma function.
pub fn chi2_cdf(dof: usize, q: f64) -> f64 {
    if q <= 0.0 {
        0.0
    } else {
        gamma_lr(dof as f64 / 2.0, q / 2.0)
    }
}

/// Quantile of the chi-squared distribution by bisection on its CDF.
pub fn chi2_quantile(dof: usize, level: f64) -> f64 {
    assert!(dof >= 1, "chi-squared needs at least one degree of freedom");
    if level <= 0.0 {
        return 0.0;
    }
    if level >= 1.0 {
        return f64::INFINITY;
    }
    let mut lo = 0.0;
    let mut hi = (dof as f64).max(1.0);
    while chi2_cdf(dof, hi) < level {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if chi2_cdf(dof, mid) < level {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrInterval {
    pub lo: f64,
    pub hi: f64,
    /// The lower endpoint is the domain edge, not a crossing.
    pub lo_truncated: bool,
    pub hi_truncated: bool,
}

impl LrInterval {
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn truncated(&self) -> bool {
        self.lo_truncated || self.hi_truncated
    }
}

/// Likelihood-ratio confidence interval for a 1-D surface.
///
/// Endpoints solve `2 {l(theta_hat) - l(theta)} = chi2_1(level)` and are found
/// by expanding outward from `theta_hat` and bisecting the bracketed crossing.
pub fn lr_confidence_interval<S: LikelihoodSurface + ?Sized>(
    surface: &S,
    theta_hat: &ParamPoint,
    level: f64,
) -> Result<LrInterval> {
    if surface.dim() != 1 || theta_hat.dim() != 1 {
        return Err(Error::Dimension {
            expected: 1,
            got: surface.dim(),
        });
    }
    let x0 = theta_hat[0];
    let l0 = surface.loglik(&[x0])?;
    let drop = 0.5 * chi2_quantile(1, level);
    let dom = surface.domain();
    if drop == 0.0 {
        return Ok(LrInterval {
            lo: x0,
            hi: x0,
            lo_truncated: false,
            hi_truncated: false,
        });
    }
    let (lo, lo_truncated) = one_side(surface, x0, l0, drop, -1.0, dom.lower[0])?;
    let (hi, hi_truncated) = one_side(surface, x0, l0, drop, 1.0, dom.upper[0])?;
    Ok(LrInterval {
        lo,
        hi,
        lo_truncated,
        hi_truncated,
    })
}

fn one_side<S: LikelihoodSurface + ?Sized>(
    surface: &S,
    x0: f64,
    l0: f64,
    drop: f64,
    dir: f64,
    edge: f64,
) -> Result<(f64, bool)> {
    let tol = 1e-9 * l0.abs().max(1.0);
    let excess = |x: f64| -> Result<f64> {
        let l = surface.loglik(&[x])?;
        if !l.is_finite() {
            return Err(Error::Evaluation {
                point: vec![x],
                reason: "non-finite log-likelihood".into(),
            });
        }
        Ok(l0 - l - drop)
    };
    if x0 == edge {
        return Ok((edge, true));
    }
    let mut step = 1e-3 * x0.abs().max(1.0);
    let mut inner = x0;
    let mut inner_val = -drop;
    let outer;
    loop {
        let mut x = x0 + dir * step;
        let at_edge = if edge.is_finite() && (x - edge) * dir >= 0.0 {
            x = edge;
            true
        } else {
            false
        };
        let v = excess(x)?;
        if v + drop < -tol {
            return Err(Error::IntervalFailure(format!(
                "log-likelihood at {x} exceeds its value at the maximizer {x0}"
            )));
        }
        if v < inner_val - tol {
            return Err(Error::IntervalFailure(format!(
                "log-likelihood is not decreasing away from {x0} near {x}"
            )));
        }
        if v >= 0.0 {
            outer = x;
            break;
        }
        if at_edge {
            return Ok((edge, true));
        }
        if step > 1e12 {
            return Err(Error::IntervalFailure(
                "no crossing found on an unbounded side".into(),
            ));
        }
        inner = x;
        inner_val = v;
        step *= 2.0;
    }

    let (mut a, mut b) = (inner, outer);
    for _ in 0..200 {
        let mid = 0.5 * (a + b);
        if (b - a).abs() <= 1e-13 * mid.abs().max(1.0) {
            break;
        }
        if excess(mid)? >= 0.0 {
            b = mid;
        } else {
            a = mid;
        }
    }
    Ok((0.5 * (a + b), false))
}
