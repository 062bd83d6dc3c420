use serde::{Deserialize, Serialize};

use super::quadrature::QuadratureRule;
use super::surface::ItemMethod;
use crate::error::{Error, Result};
use crate::numeric::{ln_choose, log_sum_exp, logistic, logit, softplus, HALF_LN_2PI};

/// Mode and curvature of `g(b) = -log{binomial pmf(y | logistic(b)) * phi(b; 0, theta)}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LaplaceFit {
    pub b_hat: f64,
    pub g_at_mode: f64,
    pub g2_at_mode: f64,
}

/// `g(b; theta, y)`, including `log C(m, y)` so that `exp(-g)` integrates to the pmf.
#[inline]
pub fn neg_log_integrand(b: f64, y: u32, m: u32, theta: f64, ln_binom: f64) -> f64 {
    let (y, m) = (y as f64, m as f64);
    -ln_binom
        + y * softplus(-b)
        + (m - y) * softplus(b)
        + HALF_LN_2PI
        + theta.ln()
        + 0.5 * b * b / (theta * theta)
}

#[inline]
fn g1(b: f64, y: u32, m: u32, inv_t2: f64) -> f64 {
    -(y as f64) + m as f64 * logistic(b) + b * inv_t2
}

#[inline]
fn g2(b: f64, m: u32, inv_t2: f64) -> f64 {
    let p = logistic(b);
    m as f64 * p * (1.0 - p) + inv_t2
}

/// Newton iteration for the mode of the strictly convex `g`, safeguarded by
/// the bracket `(-(m - y) theta^2, y theta^2)` which always contains it.
pub fn laplace_mode(y: u32, m: u32, theta: f64) -> Result<LaplaceFit> {
    if !(theta > 0.0 && theta.is_finite()) || y > m {
        return Err(Error::Domain(format!(
            "laplace_mode(y={y}, m={m}, theta={theta})"
        )));
    }
    let t2 = theta * theta;
    let inv_t2 = 1.0 / t2;
    let mut lo = -((m - y) as f64) * t2;
    let mut hi = y as f64 * t2;
    let mut b = logit((y as f64 + 0.5) / (m as f64 + 1.0)).clamp(lo, hi);
    if lo == hi {
        b = lo;
    }

    let mut converged = lo == hi;
    for _ in 0..100 {
        if converged {
            break;
        }
        let d1 = g1(b, y, m, inv_t2);
        if d1 == 0.0 {
            break;
        }
        if d1 > 0.0 {
            hi = hi.min(b);
        } else {
            lo = lo.max(b);
        }
        let mut next = b - d1 / g2(b, m, inv_t2);
        if !(next > lo && next < hi) {
            next = 0.5 * (lo + hi);
        }
        let step = (next - b).abs();
        b = next;
        if step <= 1e-15 * b.abs().max(1e-300) || hi - lo <= 1e-15 * b.abs().max(1e-300) {
            converged = true;
        }
    }
    let d1 = g1(b, y, m, inv_t2);
    let scale = (m as f64).max(1.0) + b.abs() * inv_t2;
    if !converged && d1.abs() > 1e-12 * scale {
        return Err(Error::ModeFailure { y, m, theta });
    }
    Ok(LaplaceFit {
        b_hat: b,
        g_at_mode: neg_log_integrand(b, y, m, theta, ln_choose(m, y)),
        g2_at_mode: g2(b, m, inv_t2),
    })
}

/// Laplace approximation to the item log-likelihood.
pub fn item_loglik_laplace(y: u32, m: u32, theta: f64) -> Result<f64> {
    let fit = laplace_mode(y, m, theta)?;
    Ok(-fit.g_at_mode + HALF_LN_2PI - 0.5 * fit.g2_at_mode.ln())
}

/// Adaptive Gauss-Hermite item log-likelihood: nodes recentred at the mode and
/// scaled by `sqrt(2) / sqrt(g''(b_hat))`.
pub fn item_loglik_quadrature(y: u32, m: u32, theta: f64, rule: &QuadratureRule) -> Result<f64> {
    let fit = laplace_mode(y, m, theta)?;
    let ln_binom = ln_choose(m, y);
    let scale = std::f64::consts::SQRT_2 / fit.g2_at_mode.sqrt();
    let terms: Vec<f64> = rule
        .nodes
        .iter()
        .zip(&rule.weights)
        .map(|(&x, &w)| {
            w.ln() - neg_log_integrand(fit.b_hat + scale * x, y, m, theta, ln_binom) + x * x
        })
        .collect();
    Ok(scale.ln() + log_sum_exp(&terms))
}

pub fn item_loglik(y: u32, m: u32, theta: f64, method: &ItemMethod) -> Result<f64> {
    match method {
        ItemMethod::Laplace => item_loglik_laplace(y, m, theta),
        ItemMethod::Quadrature(rule) => item_loglik_quadrature(y, m, theta, rule),
    }
}
