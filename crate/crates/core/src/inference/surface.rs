use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};
use std::ops::Deref;

use crate::error::{Error, Result};

/// A parameter vector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamPoint(pub Vec<f64>);

impl ParamPoint {
    pub fn scalar(x: f64) -> Self {
        ParamPoint(vec![x])
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn is_finite(&self) -> bool {
        self.0.iter().all(|x| x.is_finite())
    }
}

impl Deref for ParamPoint {
    type Target = [f64];
    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl From<f64> for ParamPoint {
    fn from(x: f64) -> Self {
        ParamPoint::scalar(x)
    }
}

impl From<Vec<f64>> for ParamPoint {
    fn from(v: Vec<f64>) -> Self {
        ParamPoint(v)
    }
}

/// Log-likelihood, score and observed information at one point.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalBundle {
    pub loglik: f64,
    pub score: Vec<f64>,
    /// Negative Hessian of the log-likelihood.
    pub obs_info: DMatrix<f64>,
}

impl EvalBundle {
    pub fn dim(&self) -> usize {
        self.score.len()
    }
}

/// Closed box constraints; bounds may be infinite.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Domain {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
}

impl Domain {
    pub fn new(lower: Vec<f64>, upper: Vec<f64>) -> Self {
        assert_eq!(lower.len(), upper.len());
        assert!(lower.iter().zip(&upper).all(|(l, u)| l < u));
        Domain { lower, upper }
    }

    pub fn interval(lo: f64, hi: f64) -> Self {
        Self::new(vec![lo], vec![hi])
    }

    pub fn unbounded(dim: usize) -> Self {
        Self::new(vec![f64::NEG_INFINITY; dim], vec![f64::INFINITY; dim])
    }

    pub fn dim(&self) -> usize {
        self.lower.len()
    }

    pub fn contains(&self, theta: &[f64]) -> bool {
        theta.len() == self.dim()
            && theta
                .iter()
                .zip(self.lower.iter().zip(&self.upper))
                .all(|(x, (l, u))| *x >= *l && *x <= *u)
    }

    pub fn project(&self, theta: &mut [f64]) {
        for (x, (l, u)) in theta.iter_mut().zip(self.lower.iter().zip(&self.upper)) {
            *x = x.clamp(*l, *u);
        }
    }
}

/// Relative central-difference steps for the score and the information.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FdSteps {
    pub score: f64,
    pub info: f64,
}

impl FdSteps {
    pub fn uniform(h_rel: f64) -> Self {
        FdSteps {
            score: h_rel,
            info: h_rel,
        }
    }

    pub fn max(&self) -> f64 {
        self.score.max(self.info)
    }
}

impl Default for FdSteps {
    fn default() -> Self {
        FdSteps {
            score: 1e-6,
            info: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum DerivativeMode {
    Analytic,
    FiniteDifference(FdSteps),
}

/// Evaluation contract shared by exact, proxy-exact and approximate
/// log-likelihoods.
///
/// Implementations must be deterministic for fixed data and safe to evaluate
/// from several threads at once. Surfaces that declare
/// [`DerivativeMode::Analytic`] override [`LikelihoodSurface::eval`].
pub trait LikelihoodSurface: Send + Sync {
    fn domain(&self) -> &Domain;

    fn loglik(&self, theta: &[f64]) -> Result<f64>;

    fn dim(&self) -> usize {
        self.domain().dim()
    }

    fn derivative_mode(&self) -> DerivativeMode {
        DerivativeMode::FiniteDifference(FdSteps::default())
    }

    fn eval(&self, theta: &[f64]) -> Result<EvalBundle> {
        match self.derivative_mode() {
            DerivativeMode::FiniteDifference(steps) => fd_eval(self, theta, steps),
            DerivativeMode::Analytic => Err(Error::InvalidArgument(
                "analytic surface must override eval".into(),
            )),
        }
    }
}

impl<S: LikelihoodSurface + ?Sized> LikelihoodSurface for &S {
    fn domain(&self) -> &Domain {
        (**self).domain()
    }
    fn loglik(&self, theta: &[f64]) -> Result<f64> {
        (**self).loglik(theta)
    }
    fn derivative_mode(&self) -> DerivativeMode {
        (**self).derivative_mode()
    }
    fn eval(&self, theta: &[f64]) -> Result<EvalBundle> {
        (**self).eval(theta)
    }
}

impl<S: LikelihoodSurface + ?Sized> LikelihoodSurface for Box<S> {
    fn domain(&self) -> &Domain {
        (**self).domain()
    }
    fn loglik(&self, theta: &[f64]) -> Result<f64> {
        (**self).loglik(theta)
    }
    fn derivative_mode(&self) -> DerivativeMode {
        (**self).derivative_mode()
    }
    fn eval(&self, theta: &[f64]) -> Result<EvalBundle> {
        (**self).eval(theta)
    }
}

fn checked_loglik<S: LikelihoodSurface + ?Sized>(surface: &S, theta: &[f64]) -> Result<f64> {
    let v = surface.loglik(theta)?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(Error::Evaluation {
            point: theta.to_vec(),
            reason: format!("non-finite log-likelihood {v}"),
        })
    }
}

/// Score and observed information by central differences of `loglik`.
///
/// Steps are relative: `h_abs = h_rel * max(1, |theta_j|)`. The point must sit
/// at least `2 * h_abs` inside the domain in every coordinate.
pub fn fd_eval<S: LikelihoodSurface + ?Sized>(
    surface: &S,
    theta: &[f64],
    steps: FdSteps,
) -> Result<EvalBundle> {
    let dom = surface.domain();
    let p = dom.dim();
    if theta.len() != p {
        return Err(Error::Dimension {
            expected: p,
            got: theta.len(),
        });
    }
    let hs: Vec<f64> = theta
        .iter()
        .map(|x| steps.score * x.abs().max(1.0))
        .collect();
    let hi: Vec<f64> = theta
        .iter()
        .map(|x| steps.info * x.abs().max(1.0))
        .collect();
    for j in 0..p {
        let margin = 2.0 * hs[j].max(hi[j]);
        if !(theta[j] - margin >= dom.lower[j] && theta[j] + margin <= dom.upper[j]) {
            return Err(Error::OutOfDomain {
                point: theta.to_vec(),
                margin,
            });
        }
    }

    let mut x = theta.to_vec();
    let f0 = checked_loglik(surface, &x)?;
    let mut eval_shifted = |shifts: &[(usize, f64)]| -> Result<f64> {
        for &(j, d) in shifts {
            x[j] += d;
        }
        let v = checked_loglik(surface, &x);
        x.copy_from_slice(theta);
        v
    };

    let mut score = vec![0.0; p];
    for j in 0..p {
        let fp = eval_shifted(&[(j, hs[j])])?;
        let fm = eval_shifted(&[(j, -hs[j])])?;
        score[j] = (fp - fm) / (2.0 * hs[j]);
    }

    let mut info = DMatrix::zeros(p, p);
    for j in 0..p {
        let fp = eval_shifted(&[(j, hi[j])])?;
        let fm = eval_shifted(&[(j, -hi[j])])?;
        info[(j, j)] = -(fp - 2.0 * f0 + fm) / (hi[j] * hi[j]);
        for k in 0..j {
            let fpp = eval_shifted(&[(j, hi[j]), (k, hi[k])])?;
            let fpm = eval_shifted(&[(j, hi[j]), (k, -hi[k])])?;
            let fmp = eval_shifted(&[(j, -hi[j]), (k, hi[k])])?;
            let fmm = eval_shifted(&[(j, -hi[j]), (k, -hi[k])])?;
            let v = -(fpp - fpm - fmp + fmm) / (4.0 * hi[j] * hi[k]);
            info[(j, k)] = v;
            info[(k, j)] = v;
        }
    }
    let info = (&info + info.transpose()) * 0.5;

    Ok(EvalBundle {
        loglik: f0,
        score,
        obs_info: info,
    })
}
